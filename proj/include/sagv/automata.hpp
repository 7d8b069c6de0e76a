#pragma once

#include "sagv/emptiness.hpp"
#include "sagv/formula.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace sagv
{

/// Generalized Büchi automaton produced by the tableau. Letters are bit sets
/// over `atoms` (atomic or strategic state formulas). A transition reads the
/// letter of the position where its source state is active.
struct Gba
{
    struct Trans
    {
        int src = 0;
        int dst = 0;
        std::uint64_t pos = 0;   // atoms required true
        std::uint64_t neg = 0;   // atoms required false
        std::uint32_t acc = 0;   // acceptance sets this transition belongs to
    };

    std::vector< Formula > atoms;
    int num_states = 0;
    std::vector< int > init;
    std::vector< Trans > trans;
    int num_acc = 0;
    std::vector< std::string > state_names;

    [[nodiscard]] bool matches( const Trans& t, std::uint64_t letter ) const
    {
        return ( letter & t.pos ) == t.pos && ( letter & t.neg ) == 0;
    }
    [[nodiscard]] std::vector< std::vector< int > > by_source() const;
};

/// Tableau translation; X is allowed. Strategic subformulas become atoms.
Gba ltl_to_nba( const Formula& f );

/// Intersection. Atoms are merged by their printed form.
Gba product( const Gba& a, const Gba& b );

/// A word over atom bit sets accepted by the automaton, if any.
std::optional< Lasso< std::uint64_t > > find_word( const Gba& a );
bool accepts( const Gba& a, const Lasso< std::uint64_t >& w );

/// Letter of a labelled position: bit i set iff atoms[i] holds. Only plain
/// atoms can be evaluated this way.
std::uint64_t letter_of( const std::vector< Formula >& atoms, const Valuation& label );

/// A system seen as a graph with per-state letters and edge marks.
struct SystemGraph
{
    int num_states = 0;
    std::vector< int > init;
    std::vector< std::uint64_t > letter;
    std::vector< MarkedEdge > edges;
    int num_buchi = 0;
    int num_pairs = 0;
};

struct ProductGraph
{
    MarkedGraph graph;
    std::vector< std::pair< int, int > > node;  // (system state, automaton state)
    std::vector< int > sys_edge;                // product edge -> system edge
};

/// Product of a system with a tableau automaton; Büchi sets of the system
/// come first, then those of the automaton.
ProductGraph intersect_system( const SystemGraph& sys, const Gba& a );

/// Büchi automaton over an explicit finite alphabet 0..alphabet-1.
struct ExplicitNba
{
    int alphabet = 0;
    int num_states = 0;
    std::vector< int > init;
    std::vector< std::vector< std::vector< int > > > delta;  // [state][letter] -> successors
    std::vector< bool > accepting;

    [[nodiscard]] bool deterministic() const;
};

void validate( const ExplicitNba& a );
bool accepts( const ExplicitNba& a, const Lasso< int >& w );
std::optional< Lasso< int > > find_word( const ExplicitNba& a );
ExplicitNba intersect( const ExplicitNba& a, const ExplicitNba& b );

/// Complement. Deterministic automata are complemented directly; otherwise
/// the rank-based construction is explored from the initial state and
/// BudgetExceeded is thrown once more than `state_budget` states appear or
/// the successor enumeration exceeds 64 candidates per budgeted state.
ExplicitNba complement( const ExplicitNba& a, std::size_t state_budget = 100000 );

/// Deterministic monitor for boolean combinations of basic objectives
/// (state formula now, X s, s1 U s2) over state formulas. Every basic
/// objective is pending, satisfied or violated; runs settle eventually, so
/// acceptance is decided by the state the run settles in.
class DetMonitor
{
public:
    struct Basic
    {
        enum Kind
        {
            Now,
            Next,
            Until,
        } kind;
        int a = -1;  // atom index (Until: left operand, -1 for true)
        int b = -1;  // atom index of the right operand (Until)
    };

    DetMonitor( std::vector< Formula > atoms, std::vector< Basic > basics, Formula combination );

    [[nodiscard]] const std::vector< Formula >& atoms() const { return _atoms; }
    [[nodiscard]] const std::vector< Basic >& basics() const { return _basics; }
    [[nodiscard]] int init() const { return _init; }
    [[nodiscard]] int step( int state, std::uint64_t letter ) const;
    [[nodiscard]] bool accepting( int state ) const;
    [[nodiscard]] int num_states() const;
    /// States reachable from the initial one over all letters.
    [[nodiscard]] int reachable_states() const;

private:
    std::vector< Formula > _atoms;
    std::vector< Basic > _basics;
    Formula _combination;  // over propositions "b0", "b1", ...
    int _init = 0;
};

/// Monitor for a path formula of the probabilistic fragment; throws
/// UnsupportedFormula outside the fragment.
DetMonitor monitor_for( const Formula& f );

std::string to_dot( const Gba& a );
std::string to_dot( const ExplicitNba& a );

} // namespace sagv
