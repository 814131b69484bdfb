#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "certlogic/formula.hpp"
#include "certlogic/structures.hpp"

namespace certlogic {

struct Interval {
    Rational lo, hi;
    void validate() const;  // 0 <= lo <= hi <= 1
};

struct MillerInstance {
    FormulaPtr phi;
    Interval interval;
    AgentId w1 = 1, w2 = 1;
    FormulaPtr rendered;  // canonical denominator-cleared conjunction
};

// The instance a*w1(E) <= w1(phi & E) <= b*w1(E) with E = (w2(phi) in [a,b]),
// denominators cleared by desugaring.
MillerInstance miller_instance(const FormulaPtr& phi, const Interval& interval, AgentId w1 = 1,
                               AgentId w2 = 1);

// Gaifman's stronger form: the conditioning event is psi_1 & ... & psi_k &
// (w2(phi) in [a,b]); each psi atom must be a single w2 interval atom.
FormulaPtr stronger_miller_instance(const FormulaPtr& phi,
                                    const std::vector<FormulaPtr>& psi_atoms,
                                    const Interval& interval, AgentId w1 = 1, AgentId w2 = 1);

struct MillerCounterexample {
    Structure structure;  // based on the frame, verified falsifying
    std::string state;
    MillerInstance instance;
};

struct MillerFrameReport {
    bool uniform = false;
    bool all_valid = false;
    std::optional<MillerCounterexample> counterexample;
};

// Frame validity of the battery, checked over every truth assignment of the
// given props; when the frame is not uniform a countermodel is synthesized
// and verified even if the battery itself never fails. A non-uniform frame
// with no counterexample at all (see find_miller_countermodel) is reported
// as uniform=false, all_valid=true, counterexample empty.
MillerFrameReport check_miller_theorem(const Frame& frame,
                                       const std::vector<MillerInstance>& battery,
                                       const std::vector<std::string>& props);

// Complete deterministic search for a falsified point-interval instance:
// every instance reduces to an event A (one prop true exactly on A) and a
// point interval at one of the finitely many values PR(u)(A), so an empty
// result means every Miller instance is valid in the frame. That can happen
// on a non-uniform frame: when the distributions disagree only at states
// carrying probability zero under every distribution, no weight formula can
// observe the difference.
std::optional<MillerCounterexample> find_miller_countermodel(const Frame& frame, AgentId agent);

// As find_miller_countermodel, but throws ValidationError on a uniform frame
// and when no countermodel exists.
MillerCounterexample nonuniform_countermodel(const Frame& frame, AgentId agent);

// States where the expert assigns probability 1 to the equivalence class of
// states sharing the expert's distribution.
std::vector<std::string> s_good(const Structure& n, AgentId expert);

// pr_agent(S_good) = 1; requires the agent's distribution to be
// state-independent.
bool equivalence_class_constraint(const Structure& n, AgentId expert, AgentId agent);

// Battery file: JSON list of {"phi": str, "interval": ["a","b"],
// "agents": [i, j]} (agents optional, default [1,1]).
std::vector<MillerInstance> battery_from_json(const nlohmann::json& j);
nlohmann::json battery_to_json(const std::vector<MillerInstance>& battery);
std::vector<MillerInstance> load_battery(const std::string& path);

}  // namespace certlogic
