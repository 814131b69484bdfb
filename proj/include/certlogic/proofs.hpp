#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "certlogic/decision.hpp"
#include "certlogic/formula.hpp"

namespace certlogic {

enum class AxiomSchema { K, T, Four, Five, D };

AxiomSchema axiom_schema_from_name(const std::string& name);  // K, T, 4, 5, D
std::string axiom_schema_name(AxiomSchema schema);

struct PropTaut {};
struct AxiomInstance {
    AxiomSchema schema;
    std::map<std::string, FormulaPtr> subst;  // metavariables phi, psi
};
struct ModusPonens {
    int i, j;  // 1-based: line i the antecedent, line j the implication
};
struct Necessitation {
    int i;
};
using Justification = std::variant<PropTaut, AxiomInstance, ModusPonens, Necessitation>;

struct ProofLine {
    FormulaPtr formula;
    Justification just;
};

struct Proof {
    SystemId system;
    Language language = Language::LK;  // LK or LC
    std::vector<ProofLine> lines;
};

struct ProofCheckResult {
    bool ok = false;
    std::optional<int> line;  // 1-based, first failing line
    std::optional<std::string> reason;
};

// Checks every line as an axiom instance or rule application in the stated
// system. In language LC the whole proof is the Cert-translation of an LK
// proof: lines are translated back via translate_C_to_K and checked there.
ProofCheckResult check_proof(const Proof& p);

// Substitution witnessing phi as an instance of the schema, or nullopt.
// Deterministic (leftmost-first binding). Matching is on desugared shapes,
// any single agent index.
std::optional<std::map<std::string, FormulaPtr>> match_axiom(const FormulaPtr& phi,
                                                             AxiomSchema schema);

// Truth-table over the maximal modal/weight subformulas, treated as opaque
// atoms.
bool is_prop_tautology(const FormulaPtr& phi);

// JSON: {"system": name, "language": "LK"|"LC", "lines": [{"formula": str,
//   "just": "taut" | {"axiom": str, "subst": {var: str}} | {"mp": [i,j]}
//          | {"nec": i}}]}
Proof proof_from_json(const nlohmann::json& j);
nlohmann::json proof_to_json(const Proof& p);
Proof load_proof(const std::string& path);

}  // namespace certlogic
