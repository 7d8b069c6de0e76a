#pragma once

#include "sagv/compose.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace sagv
{

/// Stochastic concurrent game structure with imperfect information.
struct Icgs
{
    std::vector< std::string > agents;
    std::vector< std::string > states;
    std::vector< std::string > propositions;
    std::vector< std::vector< std::string > > props;              // state -> true propositions
    std::vector< std::vector< std::vector< std::string > > > legal; // [state][agent] -> actions
    std::vector< std::map< std::vector< int >, Dist< int > > > trans; // [state][move as action indices]
    std::vector< std::vector< int > > obs;                          // [agent][state] -> class id
    int init = 0;

    [[nodiscard]] int agent_index( const std::string& name ) const; // UnknownAgent if absent
    [[nodiscard]] int state_index( const std::string& name ) const; // -1 if absent
    [[nodiscard]] Valuation label( int q ) const;
};

/// Uniformity, non-empty legal sets, total transitions, well-formed observations.
void validate( const Icgs& g );

enum class Layer
{
    Modules,
    Icgs,
};

/// One concrete step of a game. Module layer: a composite transition, with
/// `env` the index of its input valuation. iCGS layer: one joint move.
struct GameEdge
{
    int src = 0;
    int env = 0;
    Dist< int > succ;
    // Per agent: choice indices (at the agent's observation of src) under
    // which this edge may fire.
    std::vector< std::uint64_t > allow;
    // Per agent: whether the agent changes its local state (fairness).
    std::vector< bool > moving;
    std::string label;
    bool stutter = false;  // restored idle step, not a transition of the model
    int origin = -1;       // index in the unrestricted game (set by restriction)
};

struct GameAgent
{
    std::string id;                    // "1", "2", ...
    std::string name;                  // module name or iCGS agent name
    std::vector< int > obs;            // state -> observation class
    std::vector< int > num_choices;    // per class
    std::vector< std::vector< std::string > > choice_names; // per class
    std::vector< std::string > class_names;
};

struct Game
{
    Layer layer = Layer::Modules;
    std::vector< std::string > states;
    std::vector< Valuation > label;
    int init = 0;
    std::vector< GameAgent > agents;
    std::vector< GameEdge > edges;
    std::vector< std::vector< int > > out;  // state -> edge indices
    int num_envs = 1;
    std::vector< std::string > env_names;
    std::vector< bool > accepting;          // empty: every state accepting
    std::vector< bool > fair;               // per agent: fairness constraint active

    [[nodiscard]] std::size_t num_states() const { return states.size(); }
    [[nodiscard]] int agent_index( const std::string& id ) const; // id or name; UnknownAgent
    [[nodiscard]] std::vector< int > agent_indices( const std::vector< std::string >& ids ) const;
    [[nodiscard]] bool perfect_information() const;
    [[nodiscard]] bool has_acceptance() const { return !accepting.empty(); }
    void rebuild_index();
};

struct AgentSpec
{
    int component = 0;
    std::string id;
    const Repertoire* repertoire = nullptr;
};

/// Game of a composed module. Agents are the listed components; all other
/// components act as environment. Transitions outside every repertoire
/// choice are removed, and (state, input) pairs left without a step get an
/// idle step.
Game module_game( const Module& m, const std::vector< AgentSpec >& agents, std::vector< bool > accepting = {} );

/// Global game of a MAS (agents "1".."n", fairness for every agent).
Game mas_game( const Mas& mas );

Game icgs_game( const Icgs& g );

/// Support projection: one point-distribution edge per successor.
Game project_qualitative( const Game& g );

} // namespace sagv
