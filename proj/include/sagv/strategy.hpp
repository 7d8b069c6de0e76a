#pragma once

#include "sagv/game.hpp"

#include <functional>
#include <set>
#include <string>
#include <vector>

namespace sagv
{

/// Joint memoryless uniform strategy of a coalition. A choice is fixed per
/// observation class, so uniformity holds by construction.
struct Strategy
{
    std::vector< int > agents;                 // game agent indices, sorted
    std::vector< std::vector< int > > choice;  // per member: class -> choice index

    /// Position of `agent` among the members, or -1.
    [[nodiscard]] int member( int agent ) const;
    [[nodiscard]] int choice_at( const Game& g, int agent, int state ) const;
    friend bool operator==( const Strategy&, const Strategy& ) = default;
};

void validate( const Game& g, const Strategy& s );

/// The strategy that restricts nobody (empty coalition).
Strategy empty_strategy();

/// Number of memoryless strategies of the coalition, saturating at `cap + 1`.
std::size_t strategy_count( const Game& g, const std::vector< int >& agents, std::size_t cap );

/// Visits every uniform memoryless joint strategy once, in lexicographic
/// order of the choice tables. Stops early when `visit` returns false.
/// Returns the number of strategies visited.
std::size_t enumerate_ir( const Game& g, const std::vector< int >& agents,
                          const std::function< bool( const Strategy& ) >& visit );

bool complies( const GameEdge& e, const Game& g, const Strategy& s );
std::vector< bool > compliant_edges( const Game& g, const Strategy& s );

/// Keeps the edges compatible with `s`. A (state, input) pair where some
/// full choice profile extending `s` admits no kept edge receives an idle
/// step, so the result stays total.
Game apply( const Game& g, const Strategy& s );

/// Merges two strategies of disjoint coalitions.
Strategy combine( const Strategy& a, const Strategy& b );

enum class Level
{
    Trace,
    Path,
};

/// Part of the restricted game reachable from q.
struct Outcome
{
    std::vector< bool > states;
    std::set< std::pair< int, int > > steps;  // (src, dst) pairs
    std::set< int > transitions;              // edges of the unrestricted game, idle steps excluded
    bool idles = false;                       // some reachable state needs an idle step
    Level level = Level::Trace;
};

Outcome outcome( const Game& g, int q, const Strategy& s, Level level );

/// Text table "agent class choice" (one line per member and class);
/// parse_strategy accepts the names as well as plain indices.
std::string to_text( const Game& g, const Strategy& s );
Strategy parse_strategy( const Game& g, const std::string& text );

/// Bounded recall: memory states 0..size-1 per member, starting at 0 and
/// updated only when the member's observation changes, so repeated
/// observations leave the memory untouched.
struct Memory
{
    int size = 1;
    std::vector< int > agents;
    std::vector< std::vector< std::vector< int > > > update;  // per member: [memory][class] -> memory
};

struct RecallGame
{
    Game game;
    std::vector< int > base_state;             // product state -> game state
    std::vector< std::vector< int > > memory;  // product state -> memory per member
    std::vector< int > start_nodes;            // product states of the requested starts
};

/// Product of the game with the memory updates. On the product, memoryless
/// strategies of the members read (class, memory), so they are exactly the
/// bounded-recall strategies with these updates.
/// The product is explored from `starts` (the initial state when empty).
RecallGame recall_product( const Game& g, const Memory& m, const std::vector< int >& starts = {} );

/// Every update table family for the coalition with the given memory size.
std::size_t enumerate_memory( const Game& g, const std::vector< int >& agents, int size,
                              const std::function< bool( const Memory& ) >& visit );

} // namespace sagv
