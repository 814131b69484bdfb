#include "certlogic/miller.hpp"

#include <algorithm>
#include <fstream>

#include "certlogic/errors.hpp"
#include "certlogic/semantics.hpp"

namespace certlogic {

void Interval::validate() const {
    if (lo < 0 || hi < lo || hi > 1)
        throw ValidationError("interval endpoints must satisfy 0 <= lo <= hi <= 1");
}

namespace {

// a*w1(event) <= w1(phi & event) <= b*w1(event), as a canonical conjunction.
FormulaPtr cleared_pair(const FormulaPtr& phi, const FormulaPtr& event, const Interval& iv,
                        AgentId w1) {
    FormulaPtr both = make_and(phi, event);
    FormulaPtr lower =
        make_weight({{Rational(1), w1, both}, {-iv.lo, w1, event}}, WRel::Ge, Rational(0));
    FormulaPtr upper =
        make_weight({{iv.hi, w1, event}, {Rational(-1), w1, both}}, WRel::Ge, Rational(0));
    return desugar(make_and(lower, upper));
}

FormulaPtr interval_atom(const FormulaPtr& phi, const Interval& iv, AgentId w2) {
    return make_weight({{Rational(1), w2, phi}}, WRel::In, iv.lo, iv.hi);
}

Rational event_prob(const Frame& f, AgentId agent, int s, const std::vector<bool>& event) {
    Rational sum(0);
    for (int t = 0; t < f.n_states(); ++t)
        if (event[t]) sum += f.PR[agent - 1][s][t];
    return sum;
}

}  // namespace

MillerInstance miller_instance(const FormulaPtr& phi, const Interval& interval, AgentId w1,
                               AgentId w2) {
    interval.validate();
    MillerInstance mi;
    mi.phi = phi;
    mi.interval = interval;
    mi.w1 = w1;
    mi.w2 = w2;
    mi.rendered = cleared_pair(phi, interval_atom(phi, interval, w2), interval, w1);
    return mi;
}

FormulaPtr stronger_miller_instance(const FormulaPtr& phi,
                                    const std::vector<FormulaPtr>& psi_atoms,
                                    const Interval& interval, AgentId w1, AgentId w2) {
    interval.validate();
    FormulaPtr event = interval_atom(phi, interval, w2);
    for (auto it = psi_atoms.rbegin(); it != psi_atoms.rend(); ++it) {
        const FormulaPtr& atom = *it;
        bool shaped = atom->kind == Kind::Weight &&
                      (atom->rel == WRel::In || atom->rel == WRel::Eq) &&
                      atom->terms.size() == 1 && atom->terms[0].coeff == 1 &&
                      atom->terms[0].agent == w2;
        if (!shaped)
            throw ValidationError("conditioning atom must have the form w_" +
                                  std::to_string(w2) + "(chi) in [a,b]");
        event = make_and(atom, event);
    }
    return cleared_pair(phi, event, interval, w1);
}

MillerFrameReport check_miller_theorem(const Frame& frame,
                                       const std::vector<MillerInstance>& battery,
                                       const std::vector<std::string>& props) {
    if (battery.empty()) throw ValidationError("instance battery is empty");
    MillerFrameReport report;
    report.uniform = true;
    AgentId bad_agent = 0;
    for (AgentId a = 1; a <= static_cast<AgentId>(frame.agents.size()); ++a) {
        if (!is_uniform(frame, a)) {
            report.uniform = false;
            if (bad_agent == 0) bad_agent = a;
        }
    }

    const int n = frame.n_states();
    const size_t bits = static_cast<size_t>(n) * props.size();
    if (bits > 20) throw ResourceLimitError("assignment grid too large");
    report.all_valid = true;
    for (unsigned long mask = 0; mask < (1ul << bits) && report.all_valid; ++mask) {
        std::vector<std::vector<bool>> assign(n, std::vector<bool>(props.size()));
        for (int s = 0; s < n; ++s)
            for (size_t p = 0; p < props.size(); ++p)
                assign[s][p] = (mask >> (s * props.size() + p)) & 1;
        Structure m = structure_from_frame(frame, props, assign);
        for (const MillerInstance& mi : battery) {
            Validity v = valid_in_structure(m, mi.rendered);
            if (!v.valid) {
                report.all_valid = false;
                report.counterexample = MillerCounterexample{m, *v.witness, mi};
                break;
            }
        }
    }

    if (!report.uniform && !report.counterexample)
        report.counterexample = find_miller_countermodel(frame, bad_agent);
    return report;
}

std::optional<MillerCounterexample> find_miller_countermodel(const Frame& frame, AgentId agent) {
    if (agent < 1 || agent > static_cast<AgentId>(frame.agents.size()))
        throw ValidationError("agent index out of range");
    const int n = frame.n_states();

    // Candidate events: singletons first, then every nonempty proper subset.
    std::vector<std::vector<bool>> events;
    for (int u = 0; u < n; ++u) {
        std::vector<bool> e(n, false);
        e[u] = true;
        events.push_back(e);
    }
    for (unsigned long mask = 1; mask + 1 < (1ul << n); ++mask) {
        std::vector<bool> e(n);
        int count = 0;
        for (int t = 0; t < n; ++t) count += e[t] = (mask >> t) & 1;
        if (count > 1) events.push_back(e);
    }

    for (const std::vector<bool>& event : events) {
        std::vector<Rational> levels;
        for (int u = 0; u < n; ++u) {
            Rational c = event_prob(frame, agent, u, event);
            if (std::find(levels.begin(), levels.end(), c) == levels.end()) levels.push_back(c);
        }
        std::sort(levels.begin(), levels.end());
        for (const Rational& c : levels) {
            MillerInstance mi = miller_instance(make_prop("p"), {c, c}, agent, agent);
            std::vector<std::vector<bool>> assign;
            for (int u = 0; u < n; ++u) assign.push_back({event[u]});
            Structure m = structure_from_frame(frame, {"p"}, assign);
            Validity v = valid_in_structure(m, mi.rendered);
            if (!v.valid) return MillerCounterexample{m, *v.witness, mi};
        }
    }
    return std::nullopt;
}

MillerCounterexample nonuniform_countermodel(const Frame& frame, AgentId agent) {
    if (agent >= 1 && agent <= static_cast<AgentId>(frame.agents.size()) &&
        is_uniform(frame, agent))
        throw ValidationError("frame is uniform; no countermodel exists");
    std::optional<MillerCounterexample> c = find_miller_countermodel(frame, agent);
    if (!c)
        throw ValidationError(
            "frame is not uniform, yet every instance of Miller's principle is valid in it; "
            "no countermodel exists");
    return *c;
}

std::vector<std::string> s_good(const Structure& n, AgentId expert) {
    n.check_agent(expert);
    if (n.kind == StructureKind::Knowledge)
        throw ValidationError("s_good requires a probability structure");
    const int ns = n.n_states();
    std::vector<std::string> out;
    for (int s = 0; s < ns; ++s) {
        const std::vector<Rational>& ds = n.distribution(expert, s);
        Rational mass(0);
        for (int t = 0; t < ns; ++t)
            if (n.distribution(expert, t) == ds) mass += ds[t];
        if (mass == 1) out.push_back(n.states[s]);
    }
    return out;
}

bool equivalence_class_constraint(const Structure& n, AgentId expert, AgentId agent) {
    n.check_agent(expert);
    n.check_agent(agent);
    if (n.kind == StructureKind::Knowledge)
        throw ValidationError("equivalence class constraint requires a probability structure");
    const int ns = n.n_states();
    const std::vector<Rational>& pr = n.distribution(agent, 0);
    for (int s = 1; s < ns; ++s)
        if (n.distribution(agent, s) != pr)
            throw ValidationError("the agent's distribution must be state-independent");
    std::vector<std::string> good = s_good(n, expert);
    Rational mass(0);
    for (int s = 0; s < ns; ++s)
        if (std::find(good.begin(), good.end(), n.states[s]) != good.end()) mass += pr[s];
    return mass == 1;
}

std::vector<MillerInstance> battery_from_json(const nlohmann::json& j) {
    if (!j.is_array()) throw ValidationError("battery file must be a JSON array");
    std::vector<MillerInstance> out;
    for (const auto& e : j) {
        FormulaPtr phi = parse(e.at("phi").get<std::string>());
        const auto& iv = e.at("interval");
        if (!iv.is_array() || iv.size() != 2)
            throw ValidationError("\"interval\" must be [lo, hi]");
        Interval interval{parse_rational(iv[0].get<std::string>()),
                          parse_rational(iv[1].get<std::string>())};
        AgentId w1 = 1, w2 = 1;
        if (e.contains("agents")) {
            const auto& ag = e.at("agents");
            if (!ag.is_array() || ag.size() != 2)
                throw ValidationError("\"agents\" must be [w1, w2]");
            w1 = ag[0].get<int>();
            w2 = ag[1].get<int>();
        }
        out.push_back(miller_instance(phi, interval, w1, w2));
    }
    return out;
}

nlohmann::json battery_to_json(const std::vector<MillerInstance>& battery) {
    nlohmann::json j = nlohmann::json::array();
    for (const MillerInstance& mi : battery)
        j.push_back({{"phi", render(mi.phi)},
                     {"interval", {rational_to_string(mi.interval.lo),
                                   rational_to_string(mi.interval.hi)}},
                     {"agents", {mi.w1, mi.w2}}});
    return j;
}

std::vector<MillerInstance> load_battery(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open " + path);
    nlohmann::json j;
    in >> j;
    return battery_from_json(j);
}

}  // namespace certlogic
