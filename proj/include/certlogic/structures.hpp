#pragma once

#include <functional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "certlogic/formula.hpp"
#include "certlogic/rational.hpp"

namespace certlogic {

// Binary relation on state indices.
using Relation = std::set<std::pair<int, int>>;

struct FrameProperties {
    bool reflexive = false;
    bool transitive = false;
    bool symmetric = false;
    bool euclidean = false;
    bool serial = false;

    bool operator==(const FrameProperties&) const = default;

    // True when every property set in `required` holds here.
    bool satisfies(const FrameProperties& required) const {
        return (!required.reflexive || reflexive) && (!required.transitive || transitive) &&
               (!required.symmetric || symmetric) && (!required.euclidean || euclidean) &&
               (!required.serial || serial);
    }
};

enum class StructureKind { Knowledge, Simple, Generalized };

// One state-carrier for all three structure kinds. Which of K / pr / PR is
// populated depends on `kind`. Immutable by convention after validate().
struct Structure {
    StructureKind kind = StructureKind::Knowledge;
    std::vector<std::string> agents;  // agent i (1-based) is agents[i-1]
    std::vector<std::string> props;
    std::vector<std::string> states;
    std::vector<std::vector<bool>> assign;  // [state][prop]

    std::vector<Relation> K;                             // [agent], Knowledge
    std::vector<std::vector<Rational>> pr;               // [agent][state], Simple
    std::vector<std::vector<std::vector<Rational>>> PR;  // [agent][state][state], Generalized

    int n_states() const { return static_cast<int>(states.size()); }
    int n_agents() const { return static_cast<int>(agents.size()); }
    int state_index(const std::string& id) const;  // throws ValidationError
    int prop_index(const std::string& name) const;
    void check_agent(AgentId agent) const;

    // Distribution used for agent's weight atoms evaluated at state s.
    const std::vector<Rational>& distribution(AgentId agent, int s) const;

    void validate() const;
};

// A generalized probability structure minus the truth assignment.
struct Frame {
    std::vector<std::string> agents;
    std::vector<std::string> states;
    std::vector<std::vector<std::vector<Rational>>> PR;  // [agent][state][state]

    int n_states() const { return static_cast<int>(states.size()); }
    void validate() const;
};

// JSON (de)serialization; see README for the schema.
Structure structure_from_json(const nlohmann::json& j);
nlohmann::json structure_to_json(const Structure& s);
Structure load_structure(const std::string& path);
void save_structure(const Structure& s, const std::string& path);

Frame frame_from_json(const nlohmann::json& j);
nlohmann::json frame_to_json(const Frame& f);
Frame load_frame(const std::string& path);

// {(s,t) : PR(agent)(s)(t) > 0}. Simple structures are treated as constant-PR.
Relation support_relation(const Structure& n, AgentId agent);
Relation support_relation(const Frame& f, AgentId agent);

FrameProperties frame_properties(const Relation& rel, int n_states);

// Support-linked states share the same distribution.
bool is_uniform(const Structure& n, AgentId agent);
bool is_uniform(const Frame& f, AgentId agent);

// Same states/props/assign; K(agent) = support relation of agent.
Structure to_knowledge_structure(const Structure& n);

// Simple -> Generalized with constant PR.
Structure embed_simple(const Structure& n);

// Attaches a truth assignment to a frame.
Structure structure_from_frame(const Frame& f, const std::vector<std::string>& props,
                               const std::vector<std::vector<bool>>& assign);
Frame frame_of(const Structure& n);

// All single-agent knowledge structures with exactly n_states states over the
// given props whose relation satisfies the required frame properties, in a
// deterministic order. The callback may return false to stop early.
// Throws ResourceLimitError when the raw count 2^(n^2 + n*|props|) exceeds
// `limit`.
void enumerate_knowledge_structures(int n_states, const std::vector<std::string>& props,
                                    const FrameProperties& required, long long limit,
                                    const std::function<bool(const Structure&)>& fn);

// All probability distributions over n states whose values, in lowest terms,
// have a common denominator <= max_den.
std::vector<std::vector<Rational>> enumerate_distributions(int n, int max_den,
                                                           bool positive_only = false);

// Single-agent exhaustive grids used by the theorem-checking suites.
void enumerate_simple_structures(int n_states, const std::vector<std::string>& props, int max_den,
                                 bool positive_only,
                                 const std::function<bool(const Structure&)>& fn);
void enumerate_generalized_structures(int n_states, const std::vector<std::string>& props,
                                      int max_den,
                                      const std::function<bool(const Structure&)>& fn);
void enumerate_frames(int n_states, int max_den, const std::function<bool(const Frame&)>& fn);

enum class RandomShape { Any, Uniform, PositiveSimple };

// Seed-deterministic random structure. Shape Uniform satisfies is_uniform;
// PositiveSimple yields a simple structure with every state weight > 0.
Structure random_generalized_structure(int n_states, const std::vector<std::string>& props,
                                       int denominator_bound, unsigned long seed,
                                       RandomShape shape);

}  // namespace certlogic
