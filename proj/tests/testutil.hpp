#pragma once

#include <random>
#include <string>
#include <vector>

#include "certlogic/decision.hpp"
#include "certlogic/formula.hpp"
#include "certlogic/semantics.hpp"
#include "certlogic/structures.hpp"

namespace certlogic::testutil {

// Seeded random modal formula. Kind of the modal operator is Know for L^K
// and Cert for L^C; agent is always 1.
inline FormulaPtr random_modal_formula(std::mt19937_64& rng, int size, int max_modal_depth,
                                       const std::vector<std::string>& props, bool cert) {
    auto pick = [&](int n) { return static_cast<int>(rng() % n); };
    if (size <= 0) {
        int p = pick(static_cast<int>(props.size()) + 2);
        if (p < static_cast<int>(props.size())) return make_prop(props[p]);
        return p == static_cast<int>(props.size()) ? make_true() : make_false();
    }
    int choice = pick(max_modal_depth > 0 ? 6 : 4);
    auto sub = [&](int sz, int md) { return random_modal_formula(rng, sz, md, props, cert); };
    switch (choice) {
        case 0: return make_not(sub(size - 1, max_modal_depth));
        case 1: return make_and(sub(size / 2, max_modal_depth), sub(size / 2, max_modal_depth));
        case 2: return make_or(sub(size / 2, max_modal_depth), sub(size / 2, max_modal_depth));
        case 3:
            return make_implies(sub(size / 2, max_modal_depth), sub(size / 2, max_modal_depth));
        default: {
            FormulaPtr body = sub(size - 1, max_modal_depth - 1);
            return cert ? make_cert(1, body) : make_know(1, body);
        }
    }
}

// Bounded-enumeration validity oracle over knowledge structures with
// 1..max_states states (Thm 3.2 finite model property at desk scale).
// Returns false iff a countermodel in the system's class was found.
inline bool oracle_valid(const FormulaPtr& phi, const SystemId& sys, int max_states,
                         const std::vector<std::string>& props) {
    FormulaPtr d = desugar(phi);
    bool counterexample = false;
    for (int n = 1; n <= max_states && !counterexample; ++n) {
        enumerate_knowledge_structures(n, props, sys.frame_constraints(), 100'000'000,
                                       [&](const Structure& m) {
                                           if (!valid_in_structure(m, d).valid) {
                                               counterexample = true;
                                               return false;
                                           }
                                           return true;
                                       });
    }
    return !counterexample;
}

}  // namespace certlogic::testutil
