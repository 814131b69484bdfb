#include "certlogic/rewrite.hpp"

#include <map>
#include <set>

#include "certlogic/decision.hpp"
#include "certlogic/errors.hpp"

namespace certlogic {

const std::vector<RewriteRule>& rewrite_rules() {
    static const std::vector<RewriteRule> rules = [] {
        FormulaPtr A = make_prop("A"), B = make_prop("B");
        auto K = [](FormulaPtr f) { return make_know(1, std::move(f)); };
        std::vector<RewriteRule> r;
        r.push_back({"K-and", K(make_and(A, B)), make_and(K(A), K(B))});
        r.push_back({"KK", K(K(A)), K(A)});
        r.push_back({"K-not-K", K(make_not(K(A))), make_not(K(A))});
        r.push_back({"K-or-K", K(make_or(A, K(B))), make_or(K(A), K(B))});
        r.push_back({"K-or-not-K", K(make_or(A, make_not(K(B)))),
                     make_or(K(A), make_not(K(B)))});
        return r;
    }();
    return rules;
}

namespace {

// Knowledge operator in either surface form: K_a(...) or Cert_a(...).
struct Modal {
    AgentId agent;
    FormulaPtr body;
    bool cert;
};

std::optional<Modal> as_modal(const FormulaPtr& f) {
    if (f->kind == Kind::Know) return Modal{f->agent, f->lhs, false};
    if (auto c = as_cert(f)) return Modal{c->first, c->second, true};
    return std::nullopt;
}

FormulaPtr mk_modal(const Modal& shape, FormulaPtr body) {
    return shape.cert ? make_cert(shape.agent, std::move(body))
                      : make_know(shape.agent, std::move(body));
}

FormulaPtr apply_here(const FormulaPtr& f, const std::string& rule) {
    auto outer = as_modal(f);
    if (!outer) return nullptr;
    const FormulaPtr& b = outer->body;
    auto same = [&](const FormulaPtr& g) {
        auto m = as_modal(g);
        return m.has_value() && m->agent == outer->agent;
    };
    if (rule == "K-and" && b->kind == Kind::And)
        return make_and(mk_modal(*outer, b->lhs), mk_modal(*outer, b->rhs));
    if (rule == "KK")
        if (same(b)) return b;
    if (rule == "K-not-K" && b->kind == Kind::Not)
        if (same(b->lhs)) return b;
    if (rule == "K-or-K" && b->kind == Kind::Or)
        if (same(b->rhs)) return make_or(mk_modal(*outer, b->lhs), b->rhs);
    if (rule == "K-or-not-K" && b->kind == Kind::Or && b->rhs->kind == Kind::Not)
        if (same(b->rhs->lhs)) return make_or(mk_modal(*outer, b->lhs), b->rhs);
    return nullptr;
}

FormulaPtr rebuild(const FormulaPtr& f, const std::string& rule, const std::string& pos,
                   size_t at) {
    if (at >= pos.size()) {
        FormulaPtr out = apply_here(f, rule);
        if (!out) throw ValidationError("rule " + rule + " does not match at the position");
        return out;
    }
    size_t dot = pos.find('.', at);
    std::string step = pos.substr(at, dot == std::string::npos ? std::string::npos : dot - at);
    size_t next = dot == std::string::npos ? pos.size() : dot + 1;
    if (step != "0" && step != "1") throw ValidationError("bad position component '" + step + "'");
    const bool right = step == "1";
    switch (f->kind) {
        case Kind::Not:
        case Kind::Know:
            if (right) throw ValidationError("position leaves the formula");
            if (f->kind == Kind::Not) return make_not(rebuild(f->lhs, rule, pos, next));
            return make_know(f->agent, rebuild(f->lhs, rule, pos, next));
        case Kind::And:
        case Kind::Or:
        case Kind::Implies: {
            FormulaPtr l = right ? f->lhs : rebuild(f->lhs, rule, pos, next);
            FormulaPtr r = right ? rebuild(f->rhs, rule, pos, next) : f->rhs;
            if (f->kind == Kind::And) return make_and(l, r);
            if (f->kind == Kind::Or) return make_or(l, r);
            return make_implies(l, r);
        }
        default: throw ValidationError("position leaves the formula");
    }
}

bool known_rule(const std::string& name) {
    for (const RewriteRule& r : rewrite_rules())
        if (r.name == name) return true;
    return false;
}

void collect_modal_atoms(const FormulaPtr& f, std::map<std::string, FormulaPtr>& atoms) {
    if (f->kind == Kind::Know) {
        atoms.emplace(render(desugar(f)), f);
        return;
    }
    switch (f->kind) {
        case Kind::Not: collect_modal_atoms(f->lhs, atoms); break;
        case Kind::And:
        case Kind::Or:
        case Kind::Implies:
            collect_modal_atoms(f->lhs, atoms);
            collect_modal_atoms(f->rhs, atoms);
            break;
        default: break;
    }
}

FormulaPtr substitute_atoms(const FormulaPtr& f, const std::map<std::string, bool>& v) {
    if (f->kind == Kind::Know) {
        bool val = v.at(render(desugar(f)));
        return val ? make_true() : make_false();
    }
    switch (f->kind) {
        case Kind::Not: return make_not(substitute_atoms(f->lhs, v));
        case Kind::And: return make_and(substitute_atoms(f->lhs, v), substitute_atoms(f->rhs, v));
        case Kind::Or: return make_or(substitute_atoms(f->lhs, v), substitute_atoms(f->rhs, v));
        case Kind::Implies:
            return make_implies(substitute_atoms(f->lhs, v), substitute_atoms(f->rhs, v));
        default: return f;
    }
}

FormulaPtr simplify_constants(const FormulaPtr& f) {
    switch (f->kind) {
        case Kind::Not: {
            FormulaPtr a = simplify_constants(f->lhs);
            if (a->kind == Kind::True) return make_false();
            if (a->kind == Kind::False) return make_true();
            return make_not(a);
        }
        case Kind::And: {
            FormulaPtr a = simplify_constants(f->lhs), b = simplify_constants(f->rhs);
            if (a->kind == Kind::False || b->kind == Kind::False) return make_false();
            if (a->kind == Kind::True) return b;
            if (b->kind == Kind::True) return a;
            return make_and(a, b);
        }
        case Kind::Or: {
            FormulaPtr a = simplify_constants(f->lhs), b = simplify_constants(f->rhs);
            if (a->kind == Kind::True || b->kind == Kind::True) return make_true();
            if (a->kind == Kind::False) return b;
            if (b->kind == Kind::False) return a;
            return make_or(a, b);
        }
        case Kind::Implies: {
            FormulaPtr a = simplify_constants(f->lhs), b = simplify_constants(f->rhs);
            if (a->kind == Kind::False || b->kind == Kind::True) return make_true();
            if (a->kind == Kind::True) return b;
            if (b->kind == Kind::False) return make_not(a);
            return make_implies(a, b);
        }
        default: return f;
    }
}

struct Normalizer {
    std::vector<TraceEntry>* trace;
    long long steps = 0;

    // Flattens K over a depth-<=1 body by case-splitting on its modal atoms:
    // under 4 and 5 the atoms keep their truth value across the agent's
    // accessible states, and D discharges K(false) to false.
    FormulaPtr flatten(AgentId agent, const FormulaPtr& body) {
        std::map<std::string, FormulaPtr> atoms;
        collect_modal_atoms(body, atoms);
        if (atoms.empty()) return make_know(agent, body);
        if (atoms.size() > 12) throw ResourceLimitError("too many modal atoms to flatten");
        const size_t r = atoms.size();
        FormulaPtr result;
        for (unsigned long mask = 0; mask < (1ul << r); ++mask) {
            std::map<std::string, bool> v;
            FormulaPtr guard;
            size_t i = 0;
            for (const auto& [key, atom] : atoms) {
                bool val = (mask >> i++) & 1;
                v[key] = val;
                FormulaPtr lit = val ? atom : make_not(atom);
                guard = guard ? make_and(guard, lit) : lit;
            }
            FormulaPtr inner = simplify_constants(substitute_atoms(body, v));
            FormulaPtr kpart;
            if (inner->kind == Kind::True)
                kpart = make_true();
            else if (inner->kind == Kind::False)
                kpart = make_false();
            else
                kpart = make_know(agent, inner);
            if (kpart->kind == Kind::False) continue;
            FormulaPtr disjunct = kpart->kind == Kind::True ? guard : make_and(guard, kpart);
            result = result ? make_or(result, disjunct) : disjunct;
        }
        if (!result) result = make_false();
        ++steps;
        if (trace) {
            TraceEntry e;
            e.rule = "depth-one";
            e.before = render(make_know(agent, body));
            e.after = render(result);
            trace->push_back(e);
        }
        return result;
    }

    FormulaPtr norm(const FormulaPtr& f) {
        switch (f->kind) {
            case Kind::Prop:
            case Kind::True:
            case Kind::False: return f;
            case Kind::Not: return make_not(norm(f->lhs));
            case Kind::And: return make_and(norm(f->lhs), norm(f->rhs));
            case Kind::Or: return make_or(norm(f->lhs), norm(f->rhs));
            case Kind::Implies: return make_implies(norm(f->lhs), norm(f->rhs));
            case Kind::Know: return flatten(f->agent, norm(f->lhs));
            case Kind::Weight:
                throw Error("internal: weight atom survived K-translation");
        }
        throw Error("unreachable");
    }
};

}  // namespace

FormulaPtr apply_rule(const FormulaPtr& f, const std::string& rule_name,
                      const std::string& position, TraceEntry* trace) {
    if (!known_rule(rule_name)) throw ValidationError("unknown rule '" + rule_name + "'");
    FormulaPtr out = rebuild(f, rule_name, position, 0);
    if (trace) *trace = {rule_name, position, render(f), render(out)};
    return out;
}

NormalizeResult normalize_depth_one(const FormulaPtr& phi) {
    Language lang = classify(desugar(phi));
    if (lang != Language::LK && lang != Language::LC && lang != Language::Propositional)
        throw LanguageError("normalization requires an L^K or L^C formula, got " +
                            language_name(lang));
    FormulaPtr g = lang == Language::LC ? translate_C_to_K(phi) : phi;

    std::set<AgentId> agents;
    for (const FormulaPtr& sub : subformulas(desugar(g)))
        if (sub->kind == Kind::Know) agents.insert(sub->agent);
    if (agents.size() > 1)
        throw LanguageError("depth-one normalization supports a single agent");

    NormalizeResult res;
    Normalizer n{&res.trace};
    FormulaPtr out = n.norm(g);
    if (lang == Language::LC) out = translate_K_to_C(out);
    res.formula = out;
    res.steps = n.steps;
    return res;
}

}  // namespace certlogic
