#pragma once

#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "certlogic/formula.hpp"
#include "certlogic/structures.hpp"

namespace certlogic {

// Extension of a formula in a structure: the set of states satisfying it.
struct Extension {
    FormulaPtr formula;
    std::vector<bool> members;  // indexed by state
    std::vector<std::string> member_ids(const Structure& n) const;
};

// Bottom-up model checker with per-structure memoization of extensions.
// Weight atoms are evaluated as exact rational linear combinations; in
// generalized structures the distribution at the evaluation state is used.
class Evaluator {
  public:
    explicit Evaluator(const Structure& n) : n_(n) {}

    // Desugars the formula if needed. Throws LanguageError when the formula
    // needs a component (relation / distributions) the structure lacks.
    const std::vector<bool>& extension(const FormulaPtr& f);
    bool eval(int state, const FormulaPtr& f);

    const Structure& structure() const { return n_; }

  private:
    const std::vector<bool>& canonical_extension(const FormulaPtr& f);

    const Structure& n_;
    std::vector<FormulaPtr> retained_;
    std::unordered_map<const Formula*, const std::vector<bool>*> by_node_;
    std::map<std::string, std::vector<bool>> memo_;
};

bool eval(const Structure& n, const std::string& state_id, const FormulaPtr& f);
bool eval(const Structure& n, int state, const FormulaPtr& f);
Extension extension(const Structure& n, const FormulaPtr& f);

struct Validity {
    bool valid;
    std::optional<std::string> witness;  // falsifying state when invalid
};

Validity valid_in_structure(const Structure& n, const FormulaPtr& f);

}  // namespace certlogic
