#include "certlogic/semantics.hpp"

#include "certlogic/errors.hpp"

namespace certlogic {

std::vector<std::string> Extension::member_ids(const Structure& n) const {
    std::vector<std::string> out;
    for (int s = 0; s < n.n_states(); ++s)
        if (members[s]) out.push_back(n.states[s]);
    return out;
}

const std::vector<bool>& Evaluator::extension(const FormulaPtr& f) {
    FormulaPtr canonical = is_canonical(f) ? f : desugar(f);
    // Pin the tree so node-address caching stays valid for the life of the
    // evaluator.
    retained_.push_back(canonical);
    return canonical_extension(canonical);
}

const std::vector<bool>& Evaluator::canonical_extension(const FormulaPtr& f) {
    if (auto it = by_node_.find(f.get()); it != by_node_.end()) return *it->second;
    const std::string key = render(f);
    auto it = memo_.find(key);
    if (it == memo_.end()) {
        const int ns = n_.n_states();
        std::vector<bool> ext(ns, false);
        switch (f->kind) {
            case Kind::Prop: {
                int p = n_.prop_index(f->prop);
                for (int s = 0; s < ns; ++s) ext[s] = n_.assign[s][p];
                break;
            }
            case Kind::True: ext.assign(ns, true); break;
            case Kind::False: break;
            case Kind::Not: {
                const std::vector<bool>& sub = canonical_extension(f->lhs);
                for (int s = 0; s < ns; ++s) ext[s] = !sub[s];
                break;
            }
            case Kind::And: {
                const std::vector<bool> a = canonical_extension(f->lhs);
                const std::vector<bool>& b = canonical_extension(f->rhs);
                for (int s = 0; s < ns; ++s) ext[s] = a[s] && b[s];
                break;
            }
            case Kind::Know: {
                if (n_.kind != StructureKind::Knowledge)
                    throw LanguageError("K formula requires a knowledge structure");
                n_.check_agent(f->agent);
                const std::vector<bool> body = canonical_extension(f->lhs);
                const Relation& rel = n_.K[f->agent - 1];
                ext.assign(ns, true);
                for (auto [s, t] : rel)
                    if (!body[t]) ext[s] = false;
                break;
            }
            case Kind::Weight: {
                if (n_.kind == StructureKind::Knowledge)
                    throw LanguageError("weight formula requires a probability structure");
                // Cache each term's extension, then take the linear
                // combination with the evaluation state's distribution.
                std::vector<std::vector<bool>> args;
                for (const WeightTerm& t : f->terms) {
                    n_.check_agent(t.agent);
                    args.push_back(canonical_extension(t.arg));
                }
                for (int s = 0; s < ns; ++s) {
                    Rational sum(0);
                    for (size_t k = 0; k < f->terms.size(); ++k) {
                        const std::vector<Rational>& dist = n_.distribution(f->terms[k].agent, s);
                        Rational mass(0);
                        for (int t = 0; t < ns; ++t)
                            if (args[k][t]) mass += dist[t];
                        sum += f->terms[k].coeff * mass;
                    }
                    ext[s] = sum >= f->bound;
                }
                break;
            }
            case Kind::Or:
            case Kind::Implies:
                throw Error("internal: sugar node reached the evaluator");
        }
        it = memo_.emplace(key, std::move(ext)).first;
    }
    by_node_.emplace(f.get(), &it->second);
    return it->second;
}

bool Evaluator::eval(int state, const FormulaPtr& f) {
    if (state < 0 || state >= n_.n_states())
        throw ValidationError("state index out of range");
    return extension(f)[state];
}

bool eval(const Structure& n, const std::string& state_id, const FormulaPtr& f) {
    return eval(n, n.state_index(state_id), f);
}

bool eval(const Structure& n, int state, const FormulaPtr& f) {
    Evaluator ev(n);
    return ev.eval(state, f);
}

Extension extension(const Structure& n, const FormulaPtr& f) {
    Evaluator ev(n);
    return {f, ev.extension(f)};
}

Validity valid_in_structure(const Structure& n, const FormulaPtr& f) {
    Evaluator ev(n);
    const std::vector<bool>& ext = ev.extension(f);
    for (int s = 0; s < n.n_states(); ++s)
        if (!ext[s]) return {false, n.states[s]};
    return {true, std::nullopt};
}

}  // namespace certlogic
