#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "certlogic/rational.hpp"

namespace certlogic {

// Agent index, 1-based. Agent 1 is the default for the single-agent fragments.
using AgentId = int;

enum class Kind {
    Prop,
    True,
    False,
    Not,
    And,
    Or,       // sugar, eliminated by desugar
    Implies,  // sugar, eliminated by desugar
    Know,
    Weight,
};

// Relation of a weight atom. Canonical formulas carry Ge only; the rest is
// sugar cleared by desugar (Lt/Gt via negation, Eq as a conjunction, In as
// the conjunction of the two endpoint comparisons).
enum class WRel { Ge, Le, Eq, Lt, Gt, In };

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct WeightTerm {
    Rational coeff;  // integer in canonical formulas
    AgentId agent = 1;
    FormulaPtr arg;
};

// Shared AST for L^P, L^K and L^C. Immutable; nodes are freely shared.
struct Formula {
    Kind kind;
    std::string prop;              // Kind::Prop
    AgentId agent = 1;             // Kind::Know
    FormulaPtr lhs;                // Not/And/Or/Implies/Know child
    FormulaPtr rhs;                // And/Or/Implies right child
    std::vector<WeightTerm> terms; // Kind::Weight, nonempty
    WRel rel = WRel::Ge;
    Rational bound;                // lower endpoint for In
    Rational bound_hi;             // upper endpoint for In
};

// Constructors.
FormulaPtr make_prop(std::string name);
FormulaPtr make_true();
FormulaPtr make_false();
FormulaPtr make_not(FormulaPtr f);
FormulaPtr make_and(FormulaPtr a, FormulaPtr b);
FormulaPtr make_or(FormulaPtr a, FormulaPtr b);
FormulaPtr make_implies(FormulaPtr a, FormulaPtr b);
FormulaPtr make_know(AgentId agent, FormulaPtr f);
FormulaPtr make_weight(std::vector<WeightTerm> terms, WRel rel, Rational bound,
                       Rational bound_hi = Rational(0));

// Cert_i(f), i.e. w_i(f) = 1, stored as the canonical pair
//   w_i(f) >= 1  &  -w_i(f) >= -1.
FormulaPtr make_cert(AgentId agent, FormulaPtr f);

// Recognizes the canonical Cert pair; returns (agent, body) on match.
std::optional<std::pair<AgentId, FormulaPtr>> as_cert(const FormulaPtr& f);

bool equal(const FormulaPtr& a, const FormulaPtr& b);

// Parses the ASCII grammar (see README). Sugar-preserving: Or/Implies and
// non-Ge weight relations survive until desugar. Throws ParseError.
FormulaPtr parse(const std::string& text);

// Inverse of parse on whitespace-normalized strings; Cert pairs and Know
// print as Cert(...)/K(...), agent indices appear as _i when i != 1.
std::string render(const FormulaPtr& f);

// Canonical form: only Prop/True/False/Not/And/Know and Ge weight atoms
// with integer coefficients and bound. Idempotent, semantics-preserving.
FormulaPtr desugar(const FormulaPtr& f);

bool is_canonical(const FormulaPtr& f);

enum class Language { Propositional, LP, LK, LC, Mixed };

// Pre: f desugared. LC iff every weight atom sits inside a recognized Cert
// pair and no K occurs; LK iff no weight atom; LP iff no K.
Language classify(const FormulaPtr& f);

std::string language_name(Language lang);

// Maximum nesting of Know / weight-atom operators.
int modal_depth(const FormulaPtr& f);

// All subformulas including f itself and weight-term arguments, first
// occurrence order, no duplicates. Pre: f desugared.
std::vector<FormulaPtr> subformulas(const FormulaPtr& f);

}  // namespace certlogic
