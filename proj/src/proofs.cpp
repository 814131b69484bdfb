#include "certlogic/proofs.hpp"

#include <fstream>

#include "certlogic/errors.hpp"

namespace certlogic {

AxiomSchema axiom_schema_from_name(const std::string& name) {
    if (name == "K") return AxiomSchema::K;
    if (name == "T") return AxiomSchema::T;
    if (name == "4") return AxiomSchema::Four;
    if (name == "5") return AxiomSchema::Five;
    if (name == "D") return AxiomSchema::D;
    throw ValidationError("unknown axiom schema '" + name + "'");
}

std::string axiom_schema_name(AxiomSchema schema) {
    switch (schema) {
        case AxiomSchema::K: return "K";
        case AxiomSchema::T: return "T";
        case AxiomSchema::Four: return "4";
        case AxiomSchema::Five: return "5";
        case AxiomSchema::D: return "D";
    }
    return "?";
}

namespace {

// Schema templates use Prop nodes named "?phi"/"?psi" as metavariables and
// agent index -1 as an agent variable ('?' cannot start a parsed identifier).
FormulaPtr meta(const char* name) { return make_prop(name); }

FormulaPtr schema_template(AxiomSchema schema) {
    const AgentId any = -1;
    FormulaPtr phi = meta("?phi"), psi = meta("?psi");
    switch (schema) {
        case AxiomSchema::K:
            return make_implies(make_and(make_know(any, phi), make_know(any, make_implies(phi, psi))),
                                make_know(any, psi));
        case AxiomSchema::T: return make_implies(make_know(any, phi), phi);
        case AxiomSchema::Four:
            return make_implies(make_know(any, phi), make_know(any, make_know(any, phi)));
        case AxiomSchema::Five:
            return make_implies(make_not(make_know(any, phi)),
                                make_know(any, make_not(make_know(any, phi))));
        case AxiomSchema::D: return make_not(make_know(any, make_false()));
    }
    throw Error("unreachable");
}

struct MatchState {
    std::map<std::string, FormulaPtr> bind;
    AgentId agent = 0;  // 0 = not yet bound
};

bool match(const FormulaPtr& pat, const FormulaPtr& f, MatchState& st) {
    if (pat->kind == Kind::Prop && !pat->prop.empty() && pat->prop[0] == '?') {
        auto it = st.bind.find(pat->prop);
        if (it != st.bind.end()) return equal(it->second, f);
        st.bind.emplace(pat->prop, f);
        return true;
    }
    if (pat->kind != f->kind) return false;
    switch (pat->kind) {
        case Kind::Prop: return pat->prop == f->prop;
        case Kind::True:
        case Kind::False: return true;
        case Kind::Not: return match(pat->lhs, f->lhs, st);
        case Kind::And:
            return match(pat->lhs, f->lhs, st) && match(pat->rhs, f->rhs, st);
        case Kind::Know:
            if (pat->agent == -1) {
                if (st.agent == 0)
                    st.agent = f->agent;
                else if (st.agent != f->agent)
                    return false;
            } else if (pat->agent != f->agent) {
                return false;
            }
            return match(pat->lhs, f->lhs, st);
        default: return false;  // no Or/Implies/Weight in desugared templates
    }
}

bool schema_allowed(AxiomSchema schema, const SystemId& sys) {
    switch (schema) {
        case AxiomSchema::K: return true;
        case AxiomSchema::T: return sys.t;
        case AxiomSchema::Four: return sys.four;
        case AxiomSchema::Five: return sys.five;
        case AxiomSchema::D: return sys.d;
    }
    return false;
}

// Desugared implication shape: ~(a & ~b).
bool split_implication(const FormulaPtr& f, FormulaPtr& a, FormulaPtr& b) {
    if (f->kind != Kind::Not || f->lhs->kind != Kind::And) return false;
    if (f->lhs->rhs->kind != Kind::Not) return false;
    a = f->lhs->lhs;
    b = f->lhs->rhs->lhs;
    return true;
}

void collect_atoms(const FormulaPtr& f, std::map<std::string, FormulaPtr>& atoms) {
    switch (f->kind) {
        case Kind::Prop:
        case Kind::Know:
        case Kind::Weight: atoms.emplace(render(f), f); break;
        case Kind::True:
        case Kind::False: break;
        case Kind::Not: collect_atoms(f->lhs, atoms); break;
        case Kind::And:
        case Kind::Or:
        case Kind::Implies:
            collect_atoms(f->lhs, atoms);
            collect_atoms(f->rhs, atoms);
            break;
    }
}

bool eval_bool(const FormulaPtr& f, const std::map<std::string, bool>& v) {
    switch (f->kind) {
        case Kind::True: return true;
        case Kind::False: return false;
        case Kind::Not: return !eval_bool(f->lhs, v);
        case Kind::And: return eval_bool(f->lhs, v) && eval_bool(f->rhs, v);
        case Kind::Or: return eval_bool(f->lhs, v) || eval_bool(f->rhs, v);
        case Kind::Implies: return !eval_bool(f->lhs, v) || eval_bool(f->rhs, v);
        default: return v.at(render(f));
    }
}

}  // namespace

std::optional<std::map<std::string, FormulaPtr>> match_axiom(const FormulaPtr& phi,
                                                             AxiomSchema schema) {
    FormulaPtr pat = desugar(schema_template(schema));
    MatchState st;
    if (!match(pat, desugar(phi), st)) return std::nullopt;
    std::map<std::string, FormulaPtr> out;
    for (const auto& [k, v] : st.bind) out.emplace(k.substr(1), v);
    return out;
}

bool is_prop_tautology(const FormulaPtr& phi) {
    std::map<std::string, FormulaPtr> atoms;
    collect_atoms(phi, atoms);
    if (atoms.size() > 20) throw ResourceLimitError("too many atoms for truth-table check");
    const size_t n = atoms.size();
    for (unsigned long mask = 0; mask < (1ul << n); ++mask) {
        std::map<std::string, bool> v;
        size_t i = 0;
        for (const auto& [key, _] : atoms) v[key] = (mask >> i++) & 1;
        if (!eval_bool(phi, v)) return false;
    }
    return true;
}

ProofCheckResult check_proof(const Proof& p) {
    if (p.language != Language::LK && p.language != Language::LC)
        throw ValidationError("proof language must be LK or LC");
    auto fail = [](int line, std::string reason) {
        return ProofCheckResult{false, line, std::move(reason)};
    };
    std::vector<FormulaPtr> lk;  // desugared LK form of each checked line
    for (size_t idx = 0; idx < p.lines.size(); ++idx) {
        const int lineno = static_cast<int>(idx) + 1;
        const ProofLine& line = p.lines[idx];
        FormulaPtr f = line.formula;
        try {
            if (p.language == Language::LC) f = translate_C_to_K(f);
        } catch (const LanguageError& e) {
            return fail(lineno, std::string("line not in L^C: ") + e.what());
        }
        FormulaPtr d = desugar(f);
        Language lang = classify(d);
        if (lang != Language::LK && lang != Language::Propositional)
            return fail(lineno, "line not in the proof's language");

        ProofCheckResult bad{true};
        bool ok = std::visit(
            [&](const auto& just) -> bool {
                using J = std::decay_t<decltype(just)>;
                if constexpr (std::is_same_v<J, PropTaut>) {
                    if (!is_prop_tautology(d)) {
                        bad = fail(lineno, "not a propositional tautology");
                        return false;
                    }
                    return true;
                } else if constexpr (std::is_same_v<J, AxiomInstance>) {
                    if (!schema_allowed(just.schema, p.system)) {
                        bad = fail(lineno, "schema " + axiom_schema_name(just.schema) +
                                               " not in system " + p.system.name());
                        return false;
                    }
                    auto m = match_axiom(d, just.schema);
                    if (!m) {
                        bad = fail(lineno,
                                   "not an instance of schema " + axiom_schema_name(just.schema));
                        return false;
                    }
                    for (const auto& [var, val] : just.subst) {
                        FormulaPtr v = val;
                        if (p.language == Language::LC) v = translate_C_to_K(v);
                        auto it = m->find(var);
                        if (it != m->end() && !equal(desugar(v), desugar(it->second))) {
                            bad = fail(lineno, "bad substitution for " + var);
                            return false;
                        }
                    }
                    return true;
                } else if constexpr (std::is_same_v<J, ModusPonens>) {
                    if (just.i < 1 || just.j < 1 || just.i > static_cast<int>(idx) ||
                        just.j > static_cast<int>(idx)) {
                        bad = fail(lineno, "MP reference out of range");
                        return false;
                    }
                    auto fits = [&](const FormulaPtr& ante, const FormulaPtr& impl) {
                        FormulaPtr a, b;
                        return split_implication(impl, a, b) && equal(a, ante) && equal(b, d);
                    };
                    if (fits(lk[just.i - 1], lk[just.j - 1]) ||
                        fits(lk[just.j - 1], lk[just.i - 1]))
                        return true;
                    bad = fail(lineno, "MP antecedent mismatch");
                    return false;
                } else {
                    static_assert(std::is_same_v<J, Necessitation>);
                    if (just.i < 1 || just.i > static_cast<int>(idx)) {
                        bad = fail(lineno, "necessitation reference out of range");
                        return false;
                    }
                    if (d->kind != Kind::Know || !equal(d->lhs, lk[just.i - 1])) {
                        bad = fail(lineno, "not the necessitation of the cited line");
                        return false;
                    }
                    return true;
                }
            },
            line.just);
        if (!ok) return bad;
        lk.push_back(d);
    }
    return {true, std::nullopt, std::nullopt};
}

Proof proof_from_json(const nlohmann::json& j) {
    Proof p;
    p.system = SystemId::from_name(j.at("system").get<std::string>());
    const std::string lang = j.at("language").get<std::string>();
    if (lang == "LK")
        p.language = Language::LK;
    else if (lang == "LC")
        p.language = Language::LC;
    else
        throw ValidationError("proof language must be \"LK\" or \"LC\"");
    for (const auto& lj : j.at("lines")) {
        ProofLine line;
        line.formula = parse(lj.at("formula").get<std::string>());
        const auto& just = lj.at("just");
        if (just.is_string() && just.get<std::string>() == "taut") {
            line.just = PropTaut{};
        } else if (just.is_object() && just.contains("axiom")) {
            AxiomInstance ai;
            ai.schema = axiom_schema_from_name(just.at("axiom").get<std::string>());
            if (just.contains("subst"))
                for (const auto& [var, text] : just.at("subst").items())
                    ai.subst.emplace(var, parse(text.get<std::string>()));
            line.just = ai;
        } else if (just.is_object() && just.contains("mp")) {
            const auto& refs = just.at("mp");
            if (!refs.is_array() || refs.size() != 2)
                throw ValidationError("\"mp\" takes two line numbers");
            line.just = ModusPonens{refs[0].get<int>(), refs[1].get<int>()};
        } else if (just.is_object() && just.contains("nec")) {
            line.just = Necessitation{just.at("nec").get<int>()};
        } else {
            throw ValidationError("unrecognized justification");
        }
        p.lines.push_back(std::move(line));
    }
    return p;
}

nlohmann::json proof_to_json(const Proof& p) {
    nlohmann::json j;
    j["system"] = p.system.name();
    j["language"] = p.language == Language::LC ? "LC" : "LK";
    j["lines"] = nlohmann::json::array();
    for (const ProofLine& line : p.lines) {
        nlohmann::json lj;
        lj["formula"] = render(line.formula);
        std::visit(
            [&](const auto& just) {
                using J = std::decay_t<decltype(just)>;
                if constexpr (std::is_same_v<J, PropTaut>) {
                    lj["just"] = "taut";
                } else if constexpr (std::is_same_v<J, AxiomInstance>) {
                    nlohmann::json sj = nlohmann::json::object();
                    for (const auto& [var, val] : just.subst) sj[var] = render(val);
                    lj["just"] = {{"axiom", axiom_schema_name(just.schema)}, {"subst", sj}};
                } else if constexpr (std::is_same_v<J, ModusPonens>) {
                    lj["just"] = {{"mp", {just.i, just.j}}};
                } else {
                    lj["just"] = {{"nec", just.i}};
                }
            },
            line.just);
        j["lines"].push_back(lj);
    }
    return j;
}

Proof load_proof(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open " + path);
    nlohmann::json j;
    in >> j;
    return proof_from_json(j);
}

}  // namespace certlogic
