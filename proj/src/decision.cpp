#include "certlogic/decision.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <memory>
#include <set>
#include <vector>

#include "certlogic/errors.hpp"

namespace certlogic {

// ---------------------------------------------------------------------------
// SystemId

SystemId SystemId::from_name(const std::string& name) {
    if (name == "K") return {};
    if (name == "T" || name == "KT") return {.t = true};
    if (name == "D" || name == "KD") return {.d = true};
    if (name == "K4") return {.four = true};
    if (name == "S4" || name == "KT4") return {.t = true, .four = true};
    if (name == "K45") return {.four = true, .five = true};
    if (name == "KD45") return {.four = true, .five = true, .d = true};
    if (name == "S5" || name == "KT45") return {.t = true, .four = true, .five = true};
    throw ValidationError("unknown system '" + name + "'");
}

std::string SystemId::name() const {
    if (t && four && five) return "S5";
    if (d && four && five) return "KD45";
    if (four && five) return "K45";
    if (t && four) return "S4";
    if (four) return "K4";
    if (t) return "T";
    if (d) return "D";
    if (five) return "K5";
    return "K";
}

FrameProperties SystemId::frame_constraints() const {
    FrameProperties p;
    p.reflexive = t;
    p.transitive = four;
    p.euclidean = five;
    p.serial = d;
    return p;
}

// ---------------------------------------------------------------------------
// Negation normal form

namespace {

struct NNF;
using NNFPtr = std::shared_ptr<const NNF>;

struct NNF {
    enum class T { Top, Bot, Lit, And, Or, Box, Dia };
    T t;
    std::string prop;  // Lit
    bool neg = false;  // Lit
    AgentId agent = 1; // Box/Dia
    NNFPtr a, b;
    std::string key;
};

NNFPtr nnf_top() {
    auto n = std::make_shared<NNF>();
    n->t = NNF::T::Top;
    n->key = "#t";
    return n;
}

NNFPtr nnf_bot() {
    auto n = std::make_shared<NNF>();
    n->t = NNF::T::Bot;
    n->key = "#f";
    return n;
}

NNFPtr nnf_lit(std::string prop, bool neg) {
    auto n = std::make_shared<NNF>();
    n->t = NNF::T::Lit;
    n->prop = std::move(prop);
    n->neg = neg;
    n->key = (neg ? "!" : "") + n->prop;
    return n;
}

NNFPtr nnf_bin(NNF::T t, NNFPtr a, NNFPtr b) {
    auto n = std::make_shared<NNF>();
    n->t = t;
    n->key = std::string(t == NNF::T::And ? "(&" : "(|") + a->key + " " + b->key + ")";
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

NNFPtr nnf_modal(NNF::T t, AgentId agent, NNFPtr a) {
    auto n = std::make_shared<NNF>();
    n->t = t;
    n->agent = agent;
    n->key = (t == NNF::T::Box ? "([" : "(<") + std::to_string(agent) +
             (t == NNF::T::Box ? "]" : ">") + a->key + ")";
    n->a = std::move(a);
    return n;
}

NNFPtr to_nnf(const FormulaPtr& f, bool pos) {
    switch (f->kind) {
        case Kind::Prop: return nnf_lit(f->prop, !pos);
        case Kind::True: return pos ? nnf_top() : nnf_bot();
        case Kind::False: return pos ? nnf_bot() : nnf_top();
        case Kind::Not: return to_nnf(f->lhs, !pos);
        case Kind::And:
            return nnf_bin(pos ? NNF::T::And : NNF::T::Or, to_nnf(f->lhs, pos),
                           to_nnf(f->rhs, pos));
        case Kind::Know:
            return nnf_modal(pos ? NNF::T::Box : NNF::T::Dia, f->agent, to_nnf(f->lhs, pos));
        default:
            throw LanguageError("decision procedure requires an L^K formula");
    }
}

int max_agent_of(const FormulaPtr& f) {
    int m = 1;
    for (const FormulaPtr& g : subformulas(f))
        if (g->kind == Kind::Know) m = std::max(m, g->agent);
    return m;
}

// ---------------------------------------------------------------------------
// Countermodel assembly

struct ModelBuilder {
    int n_agents = 1;
    std::vector<std::map<std::string, bool>> worlds;
    std::vector<std::tuple<AgentId, int, int>> edges;

    struct Mark {
        size_t w, e;
    };
    Mark mark() const { return {worlds.size(), edges.size()}; }
    void rollback(Mark m) {
        worlds.resize(m.w);
        edges.resize(m.e);
    }
    int add_world() {
        worlds.emplace_back();
        return static_cast<int>(worlds.size()) - 1;
    }
};

Structure finish_model(const ModelBuilder& mb, const SystemId& sys,
                       const std::vector<std::string>& props, bool close_frame) {
    Structure m;
    m.kind = StructureKind::Knowledge;
    for (int a = 1; a <= mb.n_agents; ++a) m.agents.push_back(std::to_string(a));
    m.props = props;
    const int n = static_cast<int>(mb.worlds.size());
    for (int w = 0; w < n; ++w) {
        m.states.push_back("w" + std::to_string(w));
        std::vector<bool> row;
        for (const std::string& p : props) {
            auto it = mb.worlds[w].find(p);
            row.push_back(it != mb.worlds[w].end() && it->second);
        }
        m.assign.push_back(row);
    }
    m.K.resize(mb.n_agents);
    for (auto [a, s, t] : mb.edges) m.K[a - 1].insert({s, t});

    if (close_frame) {
        for (Relation& rel : m.K) {
            if (sys.t)
                for (int w = 0; w < n; ++w) rel.insert({w, w});
            auto close_transitive = [&] {
                if (!sys.four) return;
                bool changed = true;
                while (changed) {
                    changed = false;
                    for (auto [s, t] : Relation(rel))
                        for (auto [u, v] : Relation(rel))
                            if (u == t && rel.insert({s, v}).second) changed = true;
                }
            };
            close_transitive();
            if (sys.d) {
                // Worlds left successor-free carry no box obligations, so a
                // self-loop is harmless and restores seriality.
                for (int w = 0; w < n; ++w) {
                    bool has = false;
                    for (int v = 0; v < n; ++v)
                        if (rel.count({w, v})) { has = true; break; }
                    if (!has) rel.insert({w, w});
                }
                close_transitive();
            }
        }
    }
    m.validate();
    return m;
}

// ---------------------------------------------------------------------------
// Tree tableau for systems without axiom 5 (K, KT, KD, K4, S4, KD4, ...).
// Transitional rule: the witness world for <i>psi starts from
//   {psi} u {chi : [i]chi} u (4 ? {[i]chi} : {}),
// with T applied statically and D demanding one successor per boxed agent.
// For 4-systems, a proposal equal to the creation set of a world on the
// current path is blocked by an edge back to that world.

struct TreeSolver {
    SystemId sys;
    long long budget;
    long long nodes = 0;
    ModelBuilder mb;

    void tick() {
        if (++nodes > budget) throw ResourceLimitError("tableau node budget exceeded");
    }

    struct WorldState {
        std::set<std::string> seen;
        std::map<std::string, bool> lits;
        std::map<AgentId, std::vector<NNFPtr>> boxes;  // box nodes
        std::map<AgentId, std::vector<NNFPtr>> dias;   // dia nodes
    };

    static std::string proposal_key(const std::vector<NNFPtr>& proposal) {
        std::vector<std::string> keys;
        for (const NNFPtr& f : proposal) keys.push_back(f->key);
        std::sort(keys.begin(), keys.end());
        keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
        std::string out;
        for (const std::string& k : keys) out += k + ";";
        return out;
    }

    // Creates a world for the proposal; returns its index, or -1 if no
    // consistent saturation exists.
    int world(const std::vector<NNFPtr>& proposal, std::map<std::string, int> history) {
        auto m = mb.mark();
        int idx = mb.add_world();
        tick();
        if (sys.four) history[proposal_key(proposal)] = idx;
        WorldState st;
        std::vector<NNFPtr> todo = proposal;
        if (saturate(std::move(todo), std::move(st), idx, history)) return idx;
        mb.rollback(m);
        return -1;
    }

    bool saturate(std::vector<NNFPtr> todo, WorldState st, int idx,
                  const std::map<std::string, int>& history) {
        while (!todo.empty()) {
            NNFPtr f = todo.back();
            todo.pop_back();
            if (!st.seen.insert(f->key).second) continue;
            tick();
            switch (f->t) {
                case NNF::T::Top: break;
                case NNF::T::Bot: return false;
                case NNF::T::Lit: {
                    auto it = st.lits.find(f->prop);
                    bool value = !f->neg;
                    if (it != st.lits.end() && it->second != value) return false;
                    st.lits[f->prop] = value;
                    break;
                }
                case NNF::T::And:
                    todo.push_back(f->a);
                    todo.push_back(f->b);
                    break;
                case NNF::T::Or: {
                    auto m = mb.mark();
                    std::vector<NNFPtr> todo2 = todo;
                    todo2.push_back(f->a);
                    if (saturate(std::move(todo2), st, idx, history)) return true;
                    mb.rollback(m);
                    todo.push_back(f->b);
                    break;
                }
                case NNF::T::Box:
                    st.boxes[f->agent].push_back(f);
                    if (sys.t) todo.push_back(f->a);
                    break;
                case NNF::T::Dia:
                    st.dias[f->agent].push_back(f);
                    break;
            }
        }
        return finish(st, idx, history);
    }

    bool finish(const WorldState& st, int idx, const std::map<std::string, int>& history) {
        mb.worlds[idx] = st.lits;
        auto spawn = [&](AgentId agent, const std::vector<NNFPtr>& proposal) {
            if (sys.four) {
                auto it = history.find(proposal_key(proposal));
                if (it != history.end()) {
                    mb.edges.emplace_back(agent, idx, it->second);
                    return true;
                }
            }
            int child = world(proposal, history);
            if (child < 0) return false;
            mb.edges.emplace_back(agent, idx, child);
            return true;
        };
        std::set<AgentId> agents;
        for (const auto& [a, _] : st.boxes) agents.insert(a);
        for (const auto& [a, _] : st.dias) agents.insert(a);
        for (AgentId a : agents) {
            std::vector<NNFPtr> base;
            if (auto it = st.boxes.find(a); it != st.boxes.end()) {
                for (const NNFPtr& box : it->second) {
                    base.push_back(box->a);
                    if (sys.four) base.push_back(box);
                }
            }
            auto dit = st.dias.find(a);
            if (dit != st.dias.end()) {
                for (const NNFPtr& dia : dit->second) {
                    std::vector<NNFPtr> proposal = base;
                    proposal.push_back(dia->a);
                    if (!spawn(a, proposal)) return false;
                }
            } else if (sys.d && !base.empty()) {
                if (!spawn(a, base)) return false;
            }
        }
        return true;
    }
};

// ---------------------------------------------------------------------------
// Flat tableau for the euclidean-transitive family (K45, KD45, S5).
// Generated models have a fixed shape: a root plus one final cluster that
// every world sees (the root belongs to the cluster exactly when T holds).
// So boxes act globally on the cluster and each diamond body needs one
// cluster witness. Single-agent only.

struct FlatSolver {
    SystemId sys;
    long long budget;
    long long nodes = 0;

    void tick() {
        if (++nodes > budget) throw ResourceLimitError("tableau node budget exceeded");
    }

    struct State {
        std::vector<std::set<std::string>> seen;        // per world
        std::vector<std::map<std::string, bool>> lits;  // per world
        std::vector<int> cluster;
        std::deque<std::pair<int, NNFPtr>> todo;
        std::vector<NNFPtr> global_boxes;  // box bodies
        std::set<std::string> witnessed;   // diamond body keys
        bool failed = false;

        void add(int w, const NNFPtr& f) {
            if (seen[w].insert(f->key).second) todo.push_back({w, f});
        }
        int new_cluster_world() {
            seen.emplace_back();
            lits.emplace_back();
            int w = static_cast<int>(seen.size()) - 1;
            cluster.push_back(w);
            return w;
        }
    };

    bool run(State st, State& out) {
        while (true) {
            while (!st.todo.empty()) {
                auto [w, f] = st.todo.front();
                st.todo.pop_front();
                tick();
                switch (f->t) {
                    case NNF::T::Top: break;
                    case NNF::T::Bot: return false;
                    case NNF::T::Lit: {
                        auto it = st.lits[w].find(f->prop);
                        bool value = !f->neg;
                        if (it != st.lits[w].end() && it->second != value) return false;
                        st.lits[w][f->prop] = value;
                        break;
                    }
                    case NNF::T::And:
                        st.add(w, f->a);
                        st.add(w, f->b);
                        break;
                    case NNF::T::Or: {
                        State branch = st;
                        branch.add(w, f->a);
                        if (run(std::move(branch), out)) return true;
                        st.add(w, f->b);
                        break;
                    }
                    case NNF::T::Box: {
                        st.global_boxes.push_back(f->a);
                        for (int c : st.cluster) st.add(c, f->a);
                        break;
                    }
                    case NNF::T::Dia: {
                        if (st.witnessed.insert(f->a->key).second) {
                            int c = st.new_cluster_world();
                            tick();
                            st.add(c, f->a);
                            for (const NNFPtr& b : st.global_boxes) st.add(c, b);
                        }
                        break;
                    }
                }
            }
            if (sys.d && st.cluster.empty()) {
                int c = st.new_cluster_world();
                tick();
                for (const NNFPtr& b : st.global_boxes) st.add(c, b);
                continue;  // drain the new obligations
            }
            break;
        }
        out = std::move(st);
        return true;
    }
};

std::vector<std::string> props_of(const FormulaPtr& f) {
    std::set<std::string> seen;
    std::vector<std::string> out;
    for (const FormulaPtr& g : subformulas(f))
        if (g->kind == Kind::Prop && seen.insert(g->prop).second) out.push_back(g->prop);
    return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// decide

DecisionResult decide(const FormulaPtr& phi, const SystemId& sys, const DecisionOptions& opts) {
    if (sys.five && !sys.four)
        throw ValidationError("system " + sys.name() + " is not supported (5 without 4)");
    FormulaPtr f = desugar(phi);
    Language lang = classify(f);
    if (lang != Language::LK && lang != Language::Propositional)
        throw LanguageError("decide requires an L^K or propositional formula, got " +
                            language_name(lang));
    const int n_agents = max_agent_of(f);
    NNFPtr neg = to_nnf(f, false);

    DecisionResult result;
    std::optional<Structure> model;
    if (sys.five) {
        if (n_agents > 1)
            throw LanguageError("euclidean systems support single-agent formulas only");
        FlatSolver solver{sys, opts.node_budget};
        FlatSolver::State init, out;
        init.seen.emplace_back();
        init.lits.emplace_back();
        if (sys.t) init.cluster.push_back(0);
        init.add(0, neg);
        bool sat = solver.run(std::move(init), out);
        result.nodes = solver.nodes;
        if (!sat) {
            result.valid = true;
            return result;
        }
        ModelBuilder mb;
        mb.n_agents = 1;
        for (size_t w = 0; w < out.seen.size(); ++w) {
            mb.add_world();
            mb.worlds[w] = out.lits[w];
        }
        for (size_t w = 0; w < out.seen.size(); ++w)
            for (int c : out.cluster) mb.edges.emplace_back(1, static_cast<int>(w), c);
        model = finish_model(mb, sys, props_of(f), /*close_frame=*/false);
    } else {
        TreeSolver solver{sys, opts.node_budget};
        solver.mb.n_agents = n_agents;
        int root = solver.world({neg}, {});
        result.nodes = solver.nodes;
        if (root < 0) {
            result.valid = true;
            return result;
        }
        model = finish_model(solver.mb, sys, props_of(f), /*close_frame=*/true);
    }

    // Countermodels are audited before being returned: the frame must lie in
    // the system's class and the model checker must refute phi at the root.
    const FrameProperties required = sys.frame_constraints();
    for (const Relation& rel : model->K)
        if (!frame_properties(rel, model->n_states()).satisfies(required))
            throw Error("internal: countermodel frame outside class for " + sys.name());
    if (eval(*model, 0, f))
        throw Error("internal: countermodel fails to refute formula in " + sys.name());

    result.valid = false;
    result.countermodel = std::move(model);
    result.counterstate = "w0";
    return result;
}

// ---------------------------------------------------------------------------
// Certainty reductions

CertaintyClass certainty_class_from_name(const std::string& name) {
    if (name == "N0") return CertaintyClass::N0;
    if (name == "N1") return CertaintyClass::N1;
    if (name == "Nunif" || name == "NUnif" || name == "N_unif") return CertaintyClass::NUnif;
    if (name == "NA" || name == "N^A") return CertaintyClass::NA;
    throw ValidationError("unknown certainty class '" + name + "'");
}

std::string certainty_class_name(CertaintyClass cls) {
    switch (cls) {
        case CertaintyClass::N0: return "N0";
        case CertaintyClass::N1: return "N1";
        case CertaintyClass::NUnif: return "Nunif";
        case CertaintyClass::NA: return "NA";
    }
    return "?";
}

namespace {

std::vector<Rational> uniform_over(const std::vector<int>& members, int n) {
    std::vector<Rational> dist(n, Rational(0));
    for (int m : members) dist[m] = make_rational(1, static_cast<long>(members.size()));
    return dist;
}

}  // namespace

CertaintyDecisionResult decide_certainty(const FormulaPtr& phi, CertaintyClass cls,
                                         const SystemId& sys_for_na,
                                         const DecisionOptions& opts) {
    FormulaPtr f = desugar(phi);
    Language lang = classify(f);
    if (lang != Language::LC && lang != Language::Propositional)
        throw LanguageError("decide_certainty requires an L^C formula, got " +
                            language_name(lang));
    SystemId sys;
    switch (cls) {
        case CertaintyClass::N0:
        case CertaintyClass::NUnif: sys = SystemId::from_name("KD45"); break;
        case CertaintyClass::N1: sys = SystemId::from_name("S5"); break;
        case CertaintyClass::NA:
            sys = sys_for_na;
            if (!sys.t && !sys.d)
                throw ValidationError("class N^A requires a system containing T or D");
            break;
    }
    FormulaPtr fk = translate_C_to_K(f);
    DecisionResult r = decide(fk, sys, opts);
    CertaintyDecisionResult out;
    out.nodes = r.nodes;
    if (r.valid) {
        out.valid = true;
        return out;
    }

    // Realize the knowledge countermodel as a probability structure: the
    // uniform distribution over each successor set has exactly the model's
    // relation as its support.
    const Structure& m = *r.countermodel;
    const int n = m.n_states();
    Structure pm;
    pm.agents = m.agents;
    pm.props = m.props;
    pm.states = m.states;
    pm.assign = m.assign;
    if (cls == CertaintyClass::N0 || cls == CertaintyClass::NUnif ||
        cls == CertaintyClass::N1) {
        // KD45/S5 models are flat (root + final cluster), so one global
        // distribution over the root's successor set realizes the relation.
        std::vector<int> cluster;
        for (int t = 0; t < n; ++t)
            if (m.K[0].count({0, t})) cluster.push_back(t);
        pm.kind = StructureKind::Simple;
        pm.pr.push_back(uniform_over(cluster, n));
        if (cls == CertaintyClass::NUnif) pm = embed_simple(pm);
    } else {
        pm.kind = StructureKind::Generalized;
        pm.PR.resize(m.agents.size());
        for (size_t a = 0; a < m.agents.size(); ++a) {
            for (int s = 0; s < n; ++s) {
                std::vector<int> succ;
                for (int t = 0; t < n; ++t)
                    if (m.K[a].count({s, t})) succ.push_back(t);
                pm.PR[a].push_back(uniform_over(succ, n));
            }
        }
    }
    pm.validate();
    if (cls == CertaintyClass::N1)
        for (const Rational& q : pm.pr[0])
            if (!(q > 0)) throw Error("internal: N1 countermodel has a zero-measure state");
    if (cls == CertaintyClass::NUnif && !is_uniform(pm, 1))
        throw Error("internal: Nunif countermodel is not uniform");
    if (eval(pm, *r.counterstate, f))
        throw Error("internal: certainty countermodel fails to refute formula");

    out.valid = false;
    out.countermodel = std::move(pm);
    out.counterstate = r.counterstate;
    return out;
}

BridgeResult check_s5_kd45_bridge(const FormulaPtr& phi, const DecisionOptions& opts) {
    BridgeResult r;
    r.s5_valid = decide(phi, SystemId::from_name("S5"), opts).valid;
    r.kd45_k_valid = decide(make_know(1, phi), SystemId::from_name("KD45"), opts).valid;
    r.agree = r.s5_valid == r.kd45_k_valid;
    return r;
}

CertTranslationResult cert_of_translation(const FormulaPtr& phi, const DecisionOptions& opts) {
    CertTranslationResult r;
    r.s5_provable = decide(phi, SystemId::from_name("S5"), opts).valid;
    FormulaPtr cert = make_cert(1, translate_K_to_C(desugar(phi)));
    r.n0_certain = decide_certainty(cert, CertaintyClass::N0, {}, opts).valid;
    r.agree = r.s5_provable == r.n0_certain;
    return r;
}

FormulaPtr translate_K_to_C(const FormulaPtr& phi) {
    switch (phi->kind) {
        case Kind::Prop:
        case Kind::True:
        case Kind::False: return phi;
        case Kind::Not: return make_not(translate_K_to_C(phi->lhs));
        case Kind::And: return make_and(translate_K_to_C(phi->lhs), translate_K_to_C(phi->rhs));
        case Kind::Or: return make_or(translate_K_to_C(phi->lhs), translate_K_to_C(phi->rhs));
        case Kind::Implies:
            return make_implies(translate_K_to_C(phi->lhs), translate_K_to_C(phi->rhs));
        case Kind::Know: return make_cert(phi->agent, translate_K_to_C(phi->lhs));
        case Kind::Weight:
            throw LanguageError("translate_K_to_C requires an L^K formula");
    }
    throw Error("unreachable");
}

FormulaPtr translate_C_to_K(const FormulaPtr& phi) {
    if (auto cert = as_cert(phi)) return make_know(cert->first, translate_C_to_K(cert->second));
    switch (phi->kind) {
        case Kind::Prop:
        case Kind::True:
        case Kind::False: return phi;
        case Kind::Not: return make_not(translate_C_to_K(phi->lhs));
        case Kind::And: return make_and(translate_C_to_K(phi->lhs), translate_C_to_K(phi->rhs));
        case Kind::Or: return make_or(translate_C_to_K(phi->lhs), translate_C_to_K(phi->rhs));
        case Kind::Implies:
            return make_implies(translate_C_to_K(phi->lhs), translate_C_to_K(phi->rhs));
        case Kind::Know:
            throw LanguageError("translate_C_to_K requires an L^C formula");
        case Kind::Weight:
            throw LanguageError("translate_C_to_K: weight atom outside a Cert pair");
    }
    throw Error("unreachable");
}

}  // namespace certlogic
