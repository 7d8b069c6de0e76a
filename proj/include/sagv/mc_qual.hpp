#pragma once

#include "sagv/automata.hpp"
#include "sagv/strategy.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace sagv
{

enum class View
{
    Objective,
    Subjective,
};

/// Truth of state subformulas per state, keyed by their printed form.
using Labeling = std::map< std::string, std::vector< bool > >;

struct QualOptions
{
    View view = View::Objective;
    int memory = 1;               // 1: memoryless (ir); m > 1: recall bounded by m memory states
    std::size_t cap = 1000000;    // strategy candidates before BoundExceeded
    const Labeling* labels = nullptr;
};

struct QualResult
{
    bool holds = false;
    std::optional< Strategy > witness;   // on the game, or on the recall product when memory > 1
    std::optional< Memory > memory;      // update tables of a bounded-recall witness
    std::size_t candidates = 0;
};

/// Start states for the requested view: q, or every state that some
/// coalition member cannot tell apart from q.
std::vector< int > view_starts( const Game& g, int q, const std::vector< int >& coalition, View view );

/// Letter of every state over the atoms of an automaton. Strategic atoms
/// are looked up in `labels`.
std::vector< std::uint64_t > state_letters( const Game& g, const std::vector< Formula >& atoms, const Labeling* labels );

/// Whether every fair (and, with an acceptance set, accepted) run of `g`
/// from `starts` satisfies ψ.
bool all_runs_satisfy( const Game& g, const std::vector< int >& starts, const Formula& psi, const Labeling* labels );

/// ⟨⟨Γ⟩⟩ψ at q by strategy enumeration. Coalition members are game agent
/// indices. Strategic subformulas of ψ are labelled first (qualitative
/// flavours only) unless provided in the options.
QualResult check_coop( const Game& g, int q, const std::vector< int >& coalition, const Formula& psi,
                       const QualOptions& opts = {} );

/// Direct evaluation of one fixed joint strategy.
bool check_fixed( const Game& g, int q, const Strategy& s, const Formula& psi, const QualOptions& opts = {} );

/// ⟨⟨Γ⟩⟩ψ over the accepted words of an assumption-extended module.
QualResult check_coop_under_assumption( const Assumption& ext, const std::vector< AgentSpec >& agents,
                                        const std::vector< std::string >& coalition, const Formula& psi,
                                        const QualOptions& opts = {} );

/// ⟪Γ⟫ψ: some strategy whose outcome contains every ψ-trace from q.
QualResult check_only( const Game& g, int q, const std::vector< int >& coalition, const Formula& psi,
                       const QualOptions& opts = {} );
bool check_only_fixed( const Game& g, int q, const Strategy& s, const Formula& psi, const QualOptions& opts = {} );

/// Witness strategy or nullopt (⊥).
std::optional< Strategy > synth( const Game& g, int q, const std::vector< int >& coalition, const Formula& psi,
                                 Flavor flavor, const QualOptions& opts = {} );

/// Fixpoint algorithm for nested ⟪Γ⟫ X/U/R formulas on perfect-information
/// games without acceptance sets.
bool check_only_fixpoint( const Game& g, int q, const Formula& phi );
std::vector< bool > only_fixpoint_states( const Game& g, const Formula& phi );

/// Truth at every state of a state formula built from atoms and
/// qualitative strategic modalities.
std::vector< bool > evaluate_states( const Game& g, const Formula& phi, const QualOptions& opts = {} );

/// Adds the truth of every strategic subformula of f (innermost first).
void label_strategic( const Game& g, const Formula& f, Labeling& labels, const QualOptions& opts = {} );

} // namespace sagv
