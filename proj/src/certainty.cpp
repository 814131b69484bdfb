#include "certlogic/certainty.hpp"

#include "certlogic/errors.hpp"
#include "certlogic/semantics.hpp"

namespace certlogic {

namespace {

// Conjunction of literals pinning down the truth assignment of state s.
FormulaPtr characteristic_conjunction(const Structure& n, int s) {
    FormulaPtr out;
    for (size_t p = 0; p < n.props.size(); ++p) {
        FormulaPtr lit = make_prop(n.props[p]);
        if (!n.assign[s][p]) lit = make_not(lit);
        out = out ? make_and(out, lit) : lit;
    }
    return out ? out : make_true();
}

}  // namespace

FalseBeliefReport false_belief_states(const Structure& n, AgentId agent) {
    if (n.kind != StructureKind::Simple)
        throw ValidationError("false-belief analysis requires a simple probability structure");
    n.check_agent(agent);
    const std::vector<Rational>& pr = n.pr[agent - 1];
    const int ns = n.n_states();

    // Group states by truth assignment and total the measure of each class.
    std::map<std::vector<bool>, Rational> class_measure;
    for (int s = 0; s < ns; ++s) class_measure[n.assign[s]] += pr[s];

    // Disjunction of the characteristic conjunctions of the positive-measure
    // classes: certain (its extension has measure 1) and false exactly on the
    // measure-0 classes.
    FormulaPtr witness;
    for (int s = 0; s < ns; ++s) {
        if (!(class_measure[n.assign[s]] > 0)) continue;
        auto key = n.assign[s];
        bool first_of_class = true;
        for (int t = 0; t < s; ++t)
            if (n.assign[t] == key) { first_of_class = false; break; }
        if (!first_of_class) continue;
        FormulaPtr cc = characteristic_conjunction(n, s);
        witness = witness ? make_or(witness, cc) : cc;
    }

    FalseBeliefReport report;
    report.measure = Rational(0);
    Evaluator ev(n);
    for (int s = 0; s < ns; ++s) {
        if (class_measure[n.assign[s]] > 0) continue;
        report.fb.push_back(n.states[s]);
        report.measure += pr[s];
        if (!witness) throw Error("internal: no positive-measure class exists");
        FormulaPtr claim = make_and(make_not(witness), make_cert(agent, witness));
        if (!ev.eval(s, claim))
            throw Error("internal: false-belief witness failed verification at " + n.states[s]);
        report.witnesses.emplace(n.states[s], witness);
    }
    return report;
}

bool is_positive_structure(const Structure& n, AgentId agent) {
    if (n.kind != StructureKind::Simple)
        throw ValidationError("positivity check requires a simple probability structure");
    n.check_agent(agent);
    for (const Rational& q : n.pr[agent - 1])
        if (!(q > 0)) return false;
    return true;
}

nlohmann::json fb_report_to_json(const FalseBeliefReport& r) {
    nlohmann::json j;
    j["fb"] = r.fb;
    j["measure"] = rational_to_string(r.measure);
    nlohmann::json w = nlohmann::json::object();
    for (const auto& [state, phi] : r.witnesses) w[state] = render(phi);
    j["witnesses"] = w;
    return j;
}

}  // namespace certlogic
