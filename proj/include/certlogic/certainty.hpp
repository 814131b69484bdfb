#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "certlogic/formula.hpp"
#include "certlogic/structures.hpp"

namespace certlogic {

struct FalseBeliefReport {
    std::vector<std::string> fb;                  // states with a false certain belief
    Rational measure;                             // sum of pr over fb (always 0)
    std::map<std::string, FormulaPtr> witnesses;  // state -> phi with ~phi & Cert(phi)
};

// False-belief set of a simple probability structure, by the assignment-class
// characterization: s is in FB iff the set of states sharing s's truth
// assignment has measure 0. Witnesses are verified with the model checker
// before the report is returned.
FalseBeliefReport false_belief_states(const Structure& n, AgentId agent);

// pr(s) > 0 for every state (the N1 condition).
bool is_positive_structure(const Structure& n, AgentId agent);

nlohmann::json fb_report_to_json(const FalseBeliefReport& r);

}  // namespace certlogic
