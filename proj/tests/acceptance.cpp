#include <chrono>
#include <filesystem>
#include <iostream>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "certlogic/certainty.hpp"
#include "certlogic/decision.hpp"
#include "certlogic/miller.hpp"
#include "certlogic/proofs.hpp"
#include "certlogic/rewrite.hpp"
#include "certlogic/semantics.hpp"
#include "fb_oracle.hpp"
#include "testutil.hpp"

#ifndef DATA_DIR
#define DATA_DIR "data"
#endif

using namespace certlogic;

namespace {

std::string fail_reason;

void note(const std::string& reason) {
    if (fail_reason.empty()) fail_reason = reason;
}

// Axiom instances of a system over a pool of bodies, Know or Cert form.
std::vector<FormulaPtr> axiom_instances(const SystemId& sys, bool cert) {
    auto box = [&](const FormulaPtr& f) { return cert ? make_cert(1, f) : make_know(1, f); };
    std::vector<FormulaPtr> bodies = {parse("p"), parse("q"), parse("p & q"), parse("p -> q"),
                                      parse("~p")};
    bodies.push_back(box(parse("q")));
    std::vector<FormulaPtr> out;
    out.push_back(parse("p | ~p"));
    for (const FormulaPtr& a : bodies) {
        for (const FormulaPtr& b : bodies)
            out.push_back(make_implies(make_and(box(a), box(make_implies(a, b))), box(b)));
        if (sys.t) out.push_back(make_implies(box(a), a));
        if (sys.four) out.push_back(make_implies(box(a), box(box(a))));
        if (sys.five) out.push_back(make_implies(make_not(box(a)), box(make_not(box(a)))));
    }
    if (sys.d) out.push_back(make_not(box(make_false())));
    return out;
}

std::vector<Structure> structure_pool(const SystemId& sys, int max_states,
                                      const std::vector<std::string>& props) {
    std::vector<Structure> pool;
    for (int n = 1; n <= max_states; ++n)
        enumerate_knowledge_structures(n, props, sys.frame_constraints(), 100'000'000,
                                       [&](const Structure& m) {
                                           pool.push_back(m);
                                           return true;
                                       });
    return pool;
}

Structure simple_with_optional_zero(unsigned long seed) {
    Structure n = random_generalized_structure(3, {"p", "q"}, 5, seed, RandomShape::PositiveSimple);
    if (seed % 2 == 0) {
        n.pr[0][0] += n.pr[0][2];
        n.pr[0][2] = 0;
        n.validate();
    }
    return n;
}

const std::vector<std::string> kSystems = {"K", "T", "S4", "KD45", "S5"};

bool criterion1() {
    auto start = std::chrono::steady_clock::now();
    for (const std::string& name : kSystems) {
        SystemId sys = SystemId::from_name(name);
        std::vector<FormulaPtr> axioms = axiom_instances(sys, false);
        for (FormulaPtr& a : axioms) a = desugar(a);
        bool ok = true;
        for (int n = 1; n <= 3 && ok; ++n)
            enumerate_knowledge_structures(n, {"p", "q"}, sys.frame_constraints(), 100'000'000,
                                           [&](const Structure& m) {
                                               Evaluator ev(m);
                                               for (const FormulaPtr& a : axioms)
                                                   for (int s = 0; s < m.n_states(); ++s)
                                                       if (!ev.eval(s, a)) {
                                                           note(name + " axiom fails: " + render(a));
                                                           ok = false;
                                                           return false;
                                                       }
                                               return true;
                                           });
        if (!ok) return false;
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs >= 120) {
        note("runtime " + std::to_string(secs) + "s exceeds 2 min");
        return false;
    }
    return true;
}

bool criterion2() {
    for (const std::string& name : kSystems) {
        SystemId sys = SystemId::from_name(name);
        std::vector<Structure> pool = structure_pool(sys, 3, {"p", "q"});
        std::mt19937_64 rng(20260825);
        for (int i = 0; i < 500; ++i) {
            FormulaPtr f = testutil::random_modal_formula(rng, 6, 2, {"p", "q"}, false);
            DecisionResult r = decide(f, sys);
            FormulaPtr d = desugar(f);
            bool oracle = true;
            for (const Structure& m : pool)
                if (!valid_in_structure(m, d).valid) {
                    oracle = false;
                    break;
                }
            if (!oracle && r.valid) {
                note(name + ": decide says valid, oracle refutes " + render(f));
                return false;
            }
            if (!r.valid) {
                const Structure& m = *r.countermodel;
                for (int a = 1; a <= m.n_agents(); ++a)
                    if (!frame_properties(m.K[a - 1], m.n_states())
                             .satisfies(sys.frame_constraints())) {
                        note(name + ": countermodel frame class violation for " + render(f));
                        return false;
                    }
                if (eval(m, *r.counterstate, f)) {
                    note(name + ": countermodel does not refute " + render(f));
                    return false;
                }
            }
        }
    }
    return true;
}

bool criterion3() {
    std::mt19937_64 rng(733);
    for (int i = 0; i < 500; ++i) {
        FormulaPtr f = testutil::random_modal_formula(rng, 6, 2, {"p", "q"}, false);
        if (!check_s5_kd45_bridge(f).agree) {
            note("bridge disagreement on " + render(f));
            return false;
        }
    }
    return true;
}

bool criterion4() {
    std::mt19937_64 rng(441);
    for (int i = 0; i < 300; ++i) {
        FormulaPtr f = testutil::random_modal_formula(rng, 6, 3, {"p", "q"}, true);
        if (decide_certainty(f, CertaintyClass::N0).valid !=
            decide_certainty(f, CertaintyClass::NUnif).valid) {
            note("N0 / N_unif disagreement on " + render(f));
            return false;
        }
    }
    std::vector<FormulaPtr> axioms = axiom_instances(SystemId::from_name("KD45"), true);
    for (FormulaPtr& a : axioms) a = desugar(a);
    for (unsigned long seed = 1; seed <= 1000; ++seed) {
        Structure n = simple_with_optional_zero(seed);
        Evaluator ev(n);
        for (const FormulaPtr& a : axioms)
            for (int s = 0; s < n.n_states(); ++s)
                if (!ev.eval(s, a)) {
                    note("KD45^C axiom fails in structure seed " + std::to_string(seed) + ": " +
                         render(a));
                    return false;
                }
    }
    return true;
}

bool criterion5() {
    FormulaPtr f = parse("Cert(p) -> p");
    CertaintyDecisionResult n0 = decide_certainty(f, CertaintyClass::N0);
    if (n0.valid) {
        note("Cert(p) -> p reported N0-valid");
        return false;
    }
    const Structure& m = *n0.countermodel;
    bool has_zero = false;
    for (const Rational& w : m.pr[0]) has_zero |= w == 0;
    if (!has_zero || eval(m, *n0.counterstate, f)) {
        note("N0 countermodel lacks a measure-0 state or does not refute");
        return false;
    }
    if (!decide_certainty(f, CertaintyClass::N1).valid) {
        note("Cert(p) -> p reported N1-invalid");
        return false;
    }
    for (unsigned long seed = 1; seed <= 1000; ++seed) {
        Structure n =
            random_generalized_structure(3, {"p"}, 5, seed, RandomShape::PositiveSimple);
        if (!valid_in_structure(n, f).valid) {
            note("Cert(p) -> p fails in positive structure seed " + std::to_string(seed));
            return false;
        }
    }
    bool ok = true;
    for (int n = 1; n <= 3 && ok; ++n)
        enumerate_simple_structures(n, {"p"}, 4, true, [&](const Structure& m2) {
            if (!valid_in_structure(m2, f).valid) {
                note("Cert(p) -> p fails on the exhaustive positive grid");
                ok = false;
                return false;
            }
            return true;
        });
    return ok;
}

bool criterion6() {
    bool ok = true;
    for (int n = 1; n <= 3 && ok; ++n)
        enumerate_simple_structures(n, {"p"}, 4, false, [&](const Structure& m) {
            FalseBeliefReport r = false_belief_states(m, 1);
            if (r.measure != 0) {
                note("nonzero FB measure on the exhaustive grid");
                ok = false;
                return false;
            }
            std::set<int> got;
            for (const std::string& s : r.fb) got.insert(m.state_index(s));
            if (got != testutil::fb_oracle(m, 1, 6)) {
                note("FB characterization disagrees with the formula oracle");
                ok = false;
                return false;
            }
            return true;
        });
    if (!ok) return false;
    for (unsigned long seed = 1; seed <= 1000; ++seed) {
        Structure n = simple_with_optional_zero(seed);
        if (false_belief_states(n, 1).measure != 0) {
            note("nonzero FB measure at seed " + std::to_string(seed));
            return false;
        }
    }
    return true;
}

bool criterion7() {
    std::vector<Structure> structures;
    for (unsigned long seed = 1; seed <= 50; ++seed)
        structures.push_back(
            random_generalized_structure(3, {"p", "q"}, 4, seed, RandomShape::PositiveSimple));
    std::mt19937_64 rng(777);
    for (int i = 0; i < 500; ++i) {
        FormulaPtr f = testutil::random_modal_formula(rng, 6, 3, {"p", "q"}, true);
        FormulaPtr g = normalize_depth_one(f).formula;
        if (modal_depth(desugar(g)) > 1) {
            note("normalized depth above 1 for " + render(f));
            return false;
        }
        for (const Structure& n : structures)
            for (int s = 0; s < n.n_states(); ++s)
                if (eval(n, s, f) != eval(n, s, g)) {
                    note("normalization changed the meaning of " + render(f));
                    return false;
                }
    }
    return true;
}

bool criterion8() {
    auto start = std::chrono::steady_clock::now();
    struct Entry {
        FormulaPtr f;
        int depth;
    };
    std::vector<std::vector<Entry>> by_cost(5);
    std::set<std::string> seen;
    auto add = [&](FormulaPtr f, int depth, int cost) {
        if (depth > 2) return;
        if (seen.insert(render(desugar(f))).second) by_cost[cost].push_back({std::move(f), depth});
    };
    add(make_prop("p"), 0, 0);
    add(make_true(), 0, 0);
    add(make_false(), 0, 0);
    for (int c = 1; c <= 4; ++c) {
        for (const Entry& e : by_cost[c - 1]) {
            add(make_not(e.f), e.depth, c);
            add(make_cert(1, e.f), e.depth + 1, c);
        }
        for (int c1 = 0; c1 < c; ++c1)
            for (const Entry& a : by_cost[c1])
                for (const Entry& b : by_cost[c - 1 - c1])
                    add(make_and(a.f, b.f), std::max(a.depth, b.depth), c);
    }
    std::vector<std::pair<FormulaPtr, FormulaPtr>> formulas;  // (phi, phi^K)
    for (const auto& tier : by_cost)
        for (const Entry& e : tier) formulas.emplace_back(e.f, translate_C_to_K(e.f));

    bool ok = true;
    for (int n = 1; n <= 2 && ok; ++n)
        enumerate_generalized_structures(n, {"p"}, 3, [&](const Structure& N) {
            Structure M = to_knowledge_structure(N);
            Evaluator evN(N), evM(M);
            for (const auto& [phi, phiK] : formulas)
                for (int s = 0; s < N.n_states(); ++s)
                    if (evN.eval(s, phi) != evM.eval(s, phiK)) {
                        note("reduction mismatch for " + render(phi));
                        ok = false;
                        return false;
                    }
            return true;
        });
    if (!ok) return false;
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs >= 300) {
        note("runtime " + std::to_string(secs) + "s exceeds 5 min");
        return false;
    }
    return true;
}

bool criterion9() {
    std::mt19937_64 rng(951);
    std::vector<Rational> endpoints = {Rational(0), make_rational(1, 4), make_rational(1, 3),
                                       make_rational(1, 2), make_rational(3, 4), Rational(1)};
    std::vector<MillerInstance> battery;
    while (battery.size() < 50) {
        FormulaPtr phi = testutil::random_modal_formula(rng, 3, 1, {"p"}, true);
        Rational a = endpoints[rng() % endpoints.size()];
        Rational b = endpoints[rng() % endpoints.size()];
        if (a > b) std::swap(a, b);
        battery.push_back(miller_instance(phi, {a, b}));
    }
    bool ok = true;
    for (int n = 1; n <= 3 && ok; ++n)
        enumerate_frames(n, 4, [&](const Frame& f) {
            if (is_uniform(f, 1)) {
                MillerFrameReport r = check_miller_theorem(f, battery, {"p"});
                if (!r.all_valid) {
                    note("battery instance fails on a uniform frame");
                    ok = false;
                    return false;
                }
            } else {
                std::optional<MillerCounterexample> c = find_miller_countermodel(f, 1);
                if (!c) {
                    std::string rows;
                    for (int s = 0; s < f.n_states(); ++s) {
                        rows += s ? "; " : "";
                        for (int t = 0; t < f.n_states(); ++t)
                            rows += (t ? " " : "") + rational_to_string(f.PR[0][s][t]);
                    }
                    note("non-uniform frame [" + rows +
                         "] validates every Miller instance; no countermodel exists");
                    ok = false;
                    return false;
                }
                if (eval(c->structure, c->state, c->instance.rendered)) {
                    note("synthesized countermodel does not refute its instance");
                    ok = false;
                    return false;
                }
            }
            return true;
        });
    return ok;
}

bool criterion10() {
    namespace fs = std::filesystem;
    int count = 0;
    for (const auto& entry : fs::directory_iterator(fs::path(DATA_DIR) / "proofs")) {
        if (entry.path().extension() != ".json") continue;
        Proof p = load_proof(entry.path().string());
        ProofCheckResult r = check_proof(p);
        if (!r.ok) {
            note(entry.path().filename().string() + " line " + std::to_string(*r.line) + ": " +
                 *r.reason);
            return false;
        }
        FormulaPtr conclusion = p.lines.back().formula;
        if (p.language == Language::LC) conclusion = translate_C_to_K(conclusion);
        if (!decide(conclusion, p.system).valid) {
            note(entry.path().filename().string() + ": conclusion not valid in " +
                 p.system.name());
            return false;
        }
        ++count;
    }
    if (count < 10) {
        note("proof corpus has only " + std::to_string(count) + " proofs");
        return false;
    }
    return true;
}

}  // namespace

int main() {
    std::vector<bool (*)()> criteria = {criterion1, criterion2, criterion3, criterion4,
                                        criterion5, criterion6, criterion7, criterion8,
                                        criterion9, criterion10};
    bool all = true;
    for (size_t i = 0; i < criteria.size(); ++i) {
        fail_reason.clear();
        bool ok = false;
        std::string error;
        auto start = std::chrono::steady_clock::now();
        try {
            ok = criteria[i]();
        } catch (const std::exception& e) {
            error = e.what();
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::cout << "ACCEPTANCE " << (i + 1) << ": " << (ok ? "PASS" : "FAIL");
        if (!ok) {
            if (!error.empty())
                std::cout << " (exception: " << error << ")";
            else if (!fail_reason.empty())
                std::cout << " (" << fail_reason << ")";
        }
        std::cout << " [" << static_cast<long>(secs * 1000) << " ms]" << std::endl;
        all = all && ok;
    }
    return all ? 0 : 1;
}
