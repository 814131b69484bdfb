#pragma once

#include <string>
#include <vector>

#include "certlogic/formula.hpp"

namespace certlogic {

// Single-step equivalences used by the rewriter. Left/right are schemas over
// the placeholder propositions A and B; every instance is KD45-equivalent.
struct RewriteRule {
    std::string name;
    FormulaPtr left;
    FormulaPtr right;
};

// The bundled rule set: K-and, KK, K-not-K, K-or-K, K-or-not-K.
const std::vector<RewriteRule>& rewrite_rules();

struct TraceEntry {
    std::string rule;
    std::string position;  // dot-separated child path, "" = root
    std::string before;
    std::string after;
};

// One-step application of a named rule at a position. The path selects
// children by index: 0 = operand/left, 1 = right. Throws ValidationError
// when the rule does not match there.
FormulaPtr apply_rule(const FormulaPtr& f, const std::string& rule_name,
                      const std::string& position, TraceEntry* trace = nullptr);

struct NormalizeResult {
    FormulaPtr formula;
    std::vector<TraceEntry> trace;
    long long steps = 0;
};

// KD45-equivalent form with modal_depth <= 1. Accepts L^K, L^C and
// propositional input (LanguageError otherwise); L^C input yields L^C output
// equivalent over all simple probability structures.
NormalizeResult normalize_depth_one(const FormulaPtr& phi);

}  // namespace certlogic
