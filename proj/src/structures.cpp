#include "certlogic/structures.hpp"

#include <algorithm>
#include <fstream>
#include <random>

#include "certlogic/errors.hpp"

namespace certlogic {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Structure basics

int Structure::state_index(const std::string& id) const {
    for (int i = 0; i < n_states(); ++i)
        if (states[i] == id) return i;
    throw ValidationError("undeclared state '" + id + "'");
}

int Structure::prop_index(const std::string& name) const {
    for (int i = 0; i < static_cast<int>(props.size()); ++i)
        if (props[i] == name) return i;
    throw ValidationError("undeclared proposition '" + name + "'");
}

void Structure::check_agent(AgentId agent) const {
    if (agent < 1 || agent > n_agents())
        throw ValidationError("undeclared agent index " + std::to_string(agent));
}

const std::vector<Rational>& Structure::distribution(AgentId agent, int s) const {
    check_agent(agent);
    if (kind == StructureKind::Simple) return pr[agent - 1];
    if (kind == StructureKind::Generalized) return PR[agent - 1][s];
    throw LanguageError("knowledge structure has no probability distributions");
}

namespace {

void check_distribution(const std::vector<Rational>& dist, const std::string& what) {
    Rational sum(0);
    for (const Rational& q : dist) {
        if (q < 0) throw ValidationError(what + ": negative probability");
        sum += q;
    }
    if (sum != 1)
        throw ValidationError(what + ": distribution sums to " + rational_to_string(sum) +
                              ", expected 1");
}

}  // namespace

void Structure::validate() const {
    if (states.empty()) throw ValidationError("empty state set");
    if (agents.empty()) throw ValidationError("empty agent set");
    if (assign.size() != states.size()) throw ValidationError("assign/state size mismatch");
    for (const auto& row : assign)
        if (row.size() != props.size()) throw ValidationError("assign/prop size mismatch");
    const size_t na = agents.size();
    const int ns = n_states();
    switch (kind) {
        case StructureKind::Knowledge: {
            if (K.size() != na) throw ValidationError("K relation missing for some agent");
            for (const Relation& rel : K)
                for (auto [s, t] : rel)
                    if (s < 0 || s >= ns || t < 0 || t >= ns)
                        throw ValidationError("relation mentions undeclared state");
            break;
        }
        case StructureKind::Simple: {
            if (pr.size() != na) throw ValidationError("pr missing for some agent");
            for (size_t a = 0; a < na; ++a) {
                if (static_cast<int>(pr[a].size()) != ns)
                    throw ValidationError("pr/state size mismatch");
                check_distribution(pr[a], "pr(" + agents[a] + ")");
            }
            break;
        }
        case StructureKind::Generalized: {
            if (PR.size() != na) throw ValidationError("PR missing for some agent");
            for (size_t a = 0; a < na; ++a) {
                if (static_cast<int>(PR[a].size()) != ns)
                    throw ValidationError("PR/state size mismatch");
                for (int s = 0; s < ns; ++s) {
                    if (static_cast<int>(PR[a][s].size()) != ns)
                        throw ValidationError("PR row size mismatch");
                    check_distribution(PR[a][s], "PR(" + agents[a] + ")(" + states[s] + ")");
                }
            }
            break;
        }
    }
}

void Frame::validate() const {
    if (states.empty()) throw ValidationError("empty state set");
    if (agents.empty()) throw ValidationError("empty agent set");
    if (PR.size() != agents.size()) throw ValidationError("PR missing for some agent");
    const int ns = n_states();
    for (size_t a = 0; a < agents.size(); ++a) {
        if (static_cast<int>(PR[a].size()) != ns) throw ValidationError("PR/state size mismatch");
        for (int s = 0; s < ns; ++s) {
            if (static_cast<int>(PR[a][s].size()) != ns)
                throw ValidationError("PR row size mismatch");
            check_distribution(PR[a][s], "PR(" + agents[a] + ")(" + states[s] + ")");
        }
    }
}

// ---------------------------------------------------------------------------
// JSON

namespace {

int index_of(const std::vector<std::string>& xs, const std::string& x, const std::string& what) {
    auto it = std::find(xs.begin(), xs.end(), x);
    if (it == xs.end()) throw ValidationError("undeclared " + what + " '" + x + "'");
    return static_cast<int>(it - xs.begin());
}

std::vector<Rational> dist_from_json(const json& j, const std::vector<std::string>& states) {
    std::vector<Rational> dist(states.size(), Rational(0));
    for (auto it = j.begin(); it != j.end(); ++it) {
        int s = index_of(states, it.key(), "state");
        dist[s] = parse_rational(it.value().get<std::string>());
    }
    return dist;
}

json dist_to_json(const std::vector<Rational>& dist, const std::vector<std::string>& states) {
    json out = json::object();
    for (size_t s = 0; s < dist.size(); ++s)
        if (dist[s] != 0) out[states[s]] = rational_to_string(dist[s]);
    return out;
}

}  // namespace

Structure structure_from_json(const json& j) {
    Structure s;
    const std::string type = j.at("type").get<std::string>();
    if (type == "knowledge") s.kind = StructureKind::Knowledge;
    else if (type == "simple") s.kind = StructureKind::Simple;
    else if (type == "generalized") s.kind = StructureKind::Generalized;
    else throw ValidationError("unknown structure type '" + type + "'");

    s.agents = j.value("agents", std::vector<std::string>{"1"});
    s.props = j.value("props", std::vector<std::string>{});
    for (const json& st : j.at("states")) {
        s.states.push_back(st.at("id").get<std::string>());
        std::vector<bool> row(s.props.size(), false);
        if (st.contains("assign")) {
            for (auto it = st["assign"].begin(); it != st["assign"].end(); ++it)
                row[index_of(s.props, it.key(), "proposition")] = it.value().get<bool>();
        }
        s.assign.push_back(std::move(row));
    }

    switch (s.kind) {
        case StructureKind::Knowledge: {
            const json& k = j.at("K");
            s.K.resize(s.agents.size());
            for (auto it = k.begin(); it != k.end(); ++it) {
                int a = index_of(s.agents, it.key(), "agent");
                for (const json& pair : it.value())
                    s.K[a].insert({s.state_index(pair.at(0).get<std::string>()),
                                   s.state_index(pair.at(1).get<std::string>())});
            }
            break;
        }
        case StructureKind::Simple: {
            const json& p = j.at("pr");
            s.pr.assign(s.agents.size(), std::vector<Rational>(s.states.size(), Rational(0)));
            for (auto it = p.begin(); it != p.end(); ++it)
                s.pr[index_of(s.agents, it.key(), "agent")] = dist_from_json(it.value(), s.states);
            break;
        }
        case StructureKind::Generalized: {
            const json& p = j.at("PR");
            s.PR.assign(s.agents.size(),
                        std::vector<std::vector<Rational>>(
                            s.states.size(), std::vector<Rational>(s.states.size(), Rational(0))));
            for (auto it = p.begin(); it != p.end(); ++it) {
                int a = index_of(s.agents, it.key(), "agent");
                for (auto st = it.value().begin(); st != it.value().end(); ++st)
                    s.PR[a][s.state_index(st.key())] = dist_from_json(st.value(), s.states);
            }
            break;
        }
    }
    s.validate();
    return s;
}

json structure_to_json(const Structure& s) {
    json j;
    switch (s.kind) {
        case StructureKind::Knowledge: j["type"] = "knowledge"; break;
        case StructureKind::Simple: j["type"] = "simple"; break;
        case StructureKind::Generalized: j["type"] = "generalized"; break;
    }
    j["agents"] = s.agents;
    j["props"] = s.props;
    j["states"] = json::array();
    for (int i = 0; i < s.n_states(); ++i) {
        json assign = json::object();
        for (size_t p = 0; p < s.props.size(); ++p) assign[s.props[p]] = (bool)s.assign[i][p];
        j["states"].push_back({{"id", s.states[i]}, {"assign", assign}});
    }
    if (s.kind == StructureKind::Knowledge) {
        json k = json::object();
        for (size_t a = 0; a < s.agents.size(); ++a) {
            json pairs = json::array();
            for (auto [x, y] : s.K[a]) pairs.push_back({s.states[x], s.states[y]});
            k[s.agents[a]] = pairs;
        }
        j["K"] = k;
    } else if (s.kind == StructureKind::Simple) {
        json p = json::object();
        for (size_t a = 0; a < s.agents.size(); ++a) p[s.agents[a]] = dist_to_json(s.pr[a], s.states);
        j["pr"] = p;
    } else {
        json p = json::object();
        for (size_t a = 0; a < s.agents.size(); ++a) {
            json rows = json::object();
            for (int st = 0; st < s.n_states(); ++st)
                rows[s.states[st]] = dist_to_json(s.PR[a][st], s.states);
            p[s.agents[a]] = rows;
        }
        j["PR"] = p;
    }
    return j;
}

Structure load_structure(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ValidationError("invalid JSON in '" + path + "': " + e.what());
    }
    return structure_from_json(j);
}

void save_structure(const Structure& s, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    out << structure_to_json(s).dump(2) << "\n";
}

Frame frame_from_json(const json& j) {
    Frame f;
    f.agents = j.value("agents", std::vector<std::string>{"1"});
    for (const json& st : j.at("states")) f.states.push_back(st.get<std::string>());
    const json& p = j.at("PR");
    f.PR.assign(f.agents.size(),
                std::vector<std::vector<Rational>>(f.states.size(),
                                                   std::vector<Rational>(f.states.size(), Rational(0))));
    auto state_idx = [&](const std::string& id) { return index_of(f.states, id, "state"); };
    for (auto it = p.begin(); it != p.end(); ++it) {
        int a = index_of(f.agents, it.key(), "agent");
        for (auto st = it.value().begin(); st != it.value().end(); ++st)
            f.PR[a][state_idx(st.key())] = dist_from_json(st.value(), f.states);
    }
    f.validate();
    return f;
}

json frame_to_json(const Frame& f) {
    json j;
    j["type"] = "frame";
    j["agents"] = f.agents;
    j["states"] = f.states;
    json p = json::object();
    for (size_t a = 0; a < f.agents.size(); ++a) {
        json rows = json::object();
        for (int st = 0; st < f.n_states(); ++st)
            rows[f.states[st]] = dist_to_json(f.PR[a][st], f.states);
        p[f.agents[a]] = rows;
    }
    j["PR"] = p;
    return j;
}

Frame load_frame(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ValidationError("invalid JSON in '" + path + "': " + e.what());
    }
    return frame_from_json(j);
}

// ---------------------------------------------------------------------------
// Support, frame properties, uniformity

namespace {

Relation support_of(const std::vector<std::vector<Rational>>& rows) {
    Relation rel;
    for (size_t s = 0; s < rows.size(); ++s)
        for (size_t t = 0; t < rows[s].size(); ++t)
            if (rows[s][t] > 0) rel.insert({static_cast<int>(s), static_cast<int>(t)});
    return rel;
}

}  // namespace

Relation support_relation(const Structure& n, AgentId agent) {
    n.check_agent(agent);
    if (n.kind == StructureKind::Knowledge)
        throw LanguageError("support relation requires a probability structure");
    Relation rel;
    for (int s = 0; s < n.n_states(); ++s) {
        const std::vector<Rational>& dist = n.distribution(agent, s);
        for (int t = 0; t < n.n_states(); ++t)
            if (dist[t] > 0) rel.insert({s, t});
    }
    return rel;
}

Relation support_relation(const Frame& f, AgentId agent) {
    if (agent < 1 || agent > static_cast<int>(f.agents.size()))
        throw ValidationError("undeclared agent index " + std::to_string(agent));
    return support_of(f.PR[agent - 1]);
}

FrameProperties frame_properties(const Relation& rel, int n_states) {
    FrameProperties p;
    auto has = [&](int s, int t) { return rel.count({s, t}) > 0; };
    p.reflexive = true;
    p.serial = true;
    for (int s = 0; s < n_states; ++s) {
        if (!has(s, s)) p.reflexive = false;
        bool succ = false;
        for (int t = 0; t < n_states; ++t)
            if (has(s, t)) { succ = true; break; }
        if (!succ) p.serial = false;
    }
    p.transitive = true;
    p.symmetric = true;
    p.euclidean = true;
    for (auto [s, t] : rel) {
        if (!has(t, s)) p.symmetric = false;
        for (auto [u, v] : rel) {
            if (u == t && !has(s, v)) p.transitive = false;
            if (u == s && !has(t, v)) p.euclidean = false;
        }
    }
    return p;
}

namespace {

bool uniform_over(const std::vector<std::vector<Rational>>& rows) {
    for (size_t s = 0; s < rows.size(); ++s)
        for (size_t t = 0; t < rows.size(); ++t)
            if (rows[s][t] > 0 && rows[s] != rows[t]) return false;
    return true;
}

}  // namespace

bool is_uniform(const Structure& n, AgentId agent) {
    n.check_agent(agent);
    if (n.kind == StructureKind::Simple) return true;
    if (n.kind == StructureKind::Knowledge)
        throw LanguageError("uniformity requires a probability structure");
    return uniform_over(n.PR[agent - 1]);
}

bool is_uniform(const Frame& f, AgentId agent) {
    if (agent < 1 || agent > static_cast<int>(f.agents.size()))
        throw ValidationError("undeclared agent index " + std::to_string(agent));
    return uniform_over(f.PR[agent - 1]);
}

// ---------------------------------------------------------------------------
// Conversions

Structure to_knowledge_structure(const Structure& n) {
    Structure m;
    m.kind = StructureKind::Knowledge;
    m.agents = n.agents;
    m.props = n.props;
    m.states = n.states;
    m.assign = n.assign;
    m.K.resize(n.agents.size());
    for (int a = 1; a <= n.n_agents(); ++a) m.K[a - 1] = support_relation(n, a);
    return m;
}

Structure embed_simple(const Structure& n) {
    if (n.kind != StructureKind::Simple)
        throw LanguageError("embed_simple requires a simple probability structure");
    Structure g = n;
    g.kind = StructureKind::Generalized;
    g.pr.clear();
    g.PR.resize(n.agents.size());
    for (size_t a = 0; a < n.agents.size(); ++a)
        g.PR[a].assign(n.states.size(), n.pr[a]);
    return g;
}

Structure structure_from_frame(const Frame& f, const std::vector<std::string>& props,
                               const std::vector<std::vector<bool>>& assign) {
    Structure s;
    s.kind = StructureKind::Generalized;
    s.agents = f.agents;
    s.states = f.states;
    s.props = props;
    s.assign = assign;
    s.PR = f.PR;
    s.validate();
    return s;
}

Frame frame_of(const Structure& n) {
    Frame f;
    f.agents = n.agents;
    f.states = n.states;
    if (n.kind == StructureKind::Generalized) {
        f.PR = n.PR;
    } else if (n.kind == StructureKind::Simple) {
        f.PR.resize(n.agents.size());
        for (size_t a = 0; a < n.agents.size(); ++a) f.PR[a].assign(n.states.size(), n.pr[a]);
    } else {
        throw LanguageError("frame_of requires a probability structure");
    }
    return f;
}

// ---------------------------------------------------------------------------
// Enumeration

namespace {

std::vector<std::string> default_states(int n) {
    std::vector<std::string> out;
    for (int i = 1; i <= n; ++i) out.push_back("s" + std::to_string(i));
    return out;
}

}  // namespace

void enumerate_knowledge_structures(int n_states, const std::vector<std::string>& props,
                                    const FrameProperties& required, long long limit,
                                    const std::function<bool(const Structure&)>& fn) {
    if (n_states < 1) throw ValidationError("n_states must be >= 1");
    const int rel_bits = n_states * n_states;
    const int asg_bits = n_states * static_cast<int>(props.size());
    if (rel_bits + asg_bits >= 62 || (1LL << (rel_bits + asg_bits)) > limit)
        throw ResourceLimitError("enumeration of " + std::to_string(n_states) + "-state structures over " +
                                 std::to_string(props.size()) + " props exceeds limit");

    Structure base;
    base.kind = StructureKind::Knowledge;
    base.agents = {"1"};
    base.props = props;
    base.states = default_states(n_states);
    base.K.resize(1);
    base.assign.assign(n_states, std::vector<bool>(props.size(), false));

    for (long long rel_mask = 0; rel_mask < (1LL << rel_bits); ++rel_mask) {
        Relation rel;
        for (int b = 0; b < rel_bits; ++b)
            if (rel_mask & (1LL << b)) rel.insert({b / n_states, b % n_states});
        if (!frame_properties(rel, n_states).satisfies(required)) continue;
        base.K[0] = rel;
        for (long long asg_mask = 0; asg_mask < (1LL << asg_bits); ++asg_mask) {
            for (int b = 0; b < asg_bits; ++b)
                base.assign[b / static_cast<int>(props.size())][b % props.size()] =
                    (asg_mask & (1LL << b)) != 0;
            if (asg_bits == 0) base.assign.assign(n_states, {});
            if (!fn(base)) return;
        }
    }
}

std::vector<std::vector<Rational>> enumerate_distributions(int n, int max_den, bool positive_only) {
    std::set<std::vector<Rational>> seen;
    std::vector<std::vector<Rational>> out;
    std::vector<int> nums(n);
    for (int d = 1; d <= max_den; ++d) {
        // All numerator tuples summing to d.
        std::function<void(int, int)> rec = [&](int i, int left) {
            if (i == n - 1) {
                nums[i] = left;
                if (positive_only && left == 0) return;
                std::vector<Rational> dist;
                for (int v : nums) dist.push_back(make_rational(v, d));
                if (seen.insert(dist).second) out.push_back(dist);
                return;
            }
            for (int v = positive_only ? 1 : 0; v <= left - (positive_only ? (n - 1 - i) : 0); ++v) {
                nums[i] = v;
                rec(i + 1, left - v);
            }
        };
        if (!positive_only || d >= n) rec(0, d);
    }
    return out;
}

namespace {

// Iterates all truth assignments for the given state count and prop count.
void for_each_assignment(int n_states, int n_props,
                         const std::function<bool(const std::vector<std::vector<bool>>&)>& fn) {
    const int bits = n_states * n_props;
    std::vector<std::vector<bool>> assign(n_states, std::vector<bool>(n_props, false));
    for (long long mask = 0; mask < (1LL << bits); ++mask) {
        if (n_props > 0)
            for (int b = 0; b < bits; ++b)
                assign[b / n_props][b % n_props] = (mask & (1LL << b)) != 0;
        if (!fn(assign)) return;
    }
}

}  // namespace

void enumerate_simple_structures(int n_states, const std::vector<std::string>& props, int max_den,
                                 bool positive_only,
                                 const std::function<bool(const Structure&)>& fn) {
    auto dists = enumerate_distributions(n_states, max_den, positive_only);
    Structure base;
    base.kind = StructureKind::Simple;
    base.agents = {"1"};
    base.props = props;
    base.states = default_states(n_states);
    base.pr.resize(1);
    bool go = true;
    for (const auto& dist : dists) {
        if (!go) break;
        base.pr[0] = dist;
        for_each_assignment(n_states, static_cast<int>(props.size()),
                            [&](const std::vector<std::vector<bool>>& assign) {
                                base.assign = assign;
                                go = fn(base);
                                return go;
                            });
    }
}

void enumerate_generalized_structures(int n_states, const std::vector<std::string>& props,
                                      int max_den,
                                      const std::function<bool(const Structure&)>& fn) {
    Structure base;
    base.kind = StructureKind::Generalized;
    base.agents = {"1"};
    base.props = props;
    base.states = default_states(n_states);
    base.PR.resize(1);
    bool go = true;
    enumerate_frames(n_states, max_den, [&](const Frame& f) {
        base.PR[0] = f.PR[0];
        for_each_assignment(n_states, static_cast<int>(props.size()),
                            [&](const std::vector<std::vector<bool>>& assign) {
                                base.assign = assign;
                                go = fn(base);
                                return go;
                            });
        return go;
    });
}

void enumerate_frames(int n_states, int max_den, const std::function<bool(const Frame&)>& fn) {
    auto dists = enumerate_distributions(n_states, max_den, false);
    Frame f;
    f.agents = {"1"};
    f.states = default_states(n_states);
    f.PR.resize(1);
    f.PR[0].assign(n_states, dists[0]);
    std::vector<size_t> pick(n_states, 0);
    while (true) {
        for (int s = 0; s < n_states; ++s) f.PR[0][s] = dists[pick[s]];
        if (!fn(f)) return;
        int i = 0;
        while (i < n_states && ++pick[i] == dists.size()) pick[i++] = 0;
        if (i == n_states) return;
    }
}

// ---------------------------------------------------------------------------
// Random generation

namespace {

std::vector<Rational> random_distribution(std::mt19937_64& rng, int n, int denom_bound,
                                          bool positive) {
    int d;
    if (positive) {
        d = denom_bound >= n
                ? std::uniform_int_distribution<int>(n, denom_bound)(rng)
                : n;
    } else {
        d = std::uniform_int_distribution<int>(1, denom_bound)(rng);
    }
    std::vector<int> units(n, 0);
    int remaining = d;
    if (positive) {
        for (int i = 0; i < n; ++i) units[i] = 1;
        remaining -= n;
    }
    std::uniform_int_distribution<int> pick(0, n - 1);
    for (int u = 0; u < remaining; ++u) units[pick(rng)] += 1;
    std::vector<Rational> dist;
    for (int v : units) dist.push_back(make_rational(v, d));
    return dist;
}

}  // namespace

Structure random_generalized_structure(int n_states, const std::vector<std::string>& props,
                                       int denominator_bound, unsigned long seed,
                                       RandomShape shape) {
    if (denominator_bound < 1) throw ValidationError("denominator_bound must be >= 1");
    std::mt19937_64 rng(seed);
    Structure s;
    s.agents = {"1"};
    s.props = props;
    s.states = default_states(n_states);
    s.assign.resize(n_states);
    for (int i = 0; i < n_states; ++i) {
        s.assign[i].resize(props.size());
        for (size_t p = 0; p < props.size(); ++p)
            s.assign[i][p] = std::uniform_int_distribution<int>(0, 1)(rng) != 0;
    }
    switch (shape) {
        case RandomShape::PositiveSimple: {
            s.kind = StructureKind::Simple;
            s.pr.push_back(random_distribution(rng, n_states, denominator_bound, true));
            break;
        }
        case RandomShape::Any: {
            s.kind = StructureKind::Generalized;
            s.PR.resize(1);
            for (int i = 0; i < n_states; ++i)
                s.PR[0].push_back(random_distribution(rng, n_states, denominator_bound, false));
            break;
        }
        case RandomShape::Uniform: {
            // Partition the states into blocks; each block shares one
            // distribution supported inside the block, so support-linked
            // states always agree.
            s.kind = StructureKind::Generalized;
            std::vector<int> order(n_states);
            for (int i = 0; i < n_states; ++i) order[i] = i;
            std::shuffle(order.begin(), order.end(), rng);
            s.PR.assign(1, std::vector<std::vector<Rational>>(
                               n_states, std::vector<Rational>(n_states, Rational(0))));
            int start = 0;
            while (start < n_states) {
                int size = std::uniform_int_distribution<int>(1, n_states - start)(rng);
                std::vector<Rational> block_dist =
                    random_distribution(rng, size, denominator_bound, false);
                for (int i = 0; i < size; ++i) {
                    int st = order[start + i];
                    for (int j = 0; j < size; ++j) s.PR[0][st][order[start + j]] = block_dist[j];
                }
                start += size;
            }
            break;
        }
    }
    s.validate();
    return s;
}

}  // namespace certlogic
