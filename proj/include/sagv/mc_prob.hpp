#pragma once

#include "sagv/mc_qual.hpp"

#include <optional>
#include <string>
#include <vector>

namespace sagv
{

struct MarkovChain
{
    std::vector< std::string > states;
    std::vector< Valuation > label;
    std::vector< Dist< int > > next;
    int init = 0;
};

void validate( const MarkovChain& mc );

struct Mdp
{
    struct Action
    {
        Dist< int > succ;
        std::string name;
        std::vector< int > choices;  // per game agent: the choice it exposes (-1: none)
        int edge = -1;               // game edge, -1 for an idle step
    };

    std::vector< std::string > states;
    std::vector< Valuation > label;
    std::vector< std::vector< Action > > actions;
    int init = 0;
};

void validate( const Mdp& m );

/// Every edge of the game is an action.
Mdp game_mdp( const Game& g );

/// MDP of a probabilistic MAS: an action is a profile of repertoire choices
/// together with one composed transition it admits, or an idle step when
/// the profile admits none. Only reachable global states are kept.
Mdp compile_mdp( const Mas& mas );

/// Chain induced by a profile covering every agent, restricted to the part
/// reachable from q.
MarkovChain induce_mc( const Game& g, const Strategy& profile, int q );

/// Exact probability of ψ (monitor fragment) from the initial state.
Rational mc_probability( const MarkovChain& mc, const Formula& psi, const Labeling* labels = nullptr );

enum class Opt
{
    Min,
    Max,
};

struct MdpOptions
{
    std::size_t state_bound = 200000;  // product states before BoundExceeded
    const Labeling* labels = nullptr;   // strategic subformulas, indexed by MDP state
};

/// Exact optimum of Pr(ψ) over the MDP's policies, from each start.
std::vector< Rational > mdp_values( const Mdp& m, const std::vector< int >& starts, const Formula& psi, Opt opt,
                                    const MdpOptions& opts = {} );
Rational mdp_probability( const Mdp& m, const Formula& psi, Opt opt, const MdpOptions& opts = {} );

struct ApproxValue
{
    double value = 0;
    double residual = 0;  // last change of value iteration
    int iterations = 0;
};

/// Value iteration on the same product, stopping once a sweep changes no
/// value by more than `tolerance`.
ApproxValue mdp_probability_vi( const Mdp& m, const Formula& psi, Opt opt, double tolerance = 1e-9,
                                const MdpOptions& opts = {} );

struct PatlResult
{
    bool holds = false;
    std::optional< Strategy > witness;
    Rational value = 0;           // witness value, or the best value seen when false
    std::size_t candidates = 0;
};

struct PatlOptions
{
    View view = View::Objective;
    std::size_t cap = 1000000;
    const Labeling* labels = nullptr;
};

/// ⟨⟨Γ⟩⟩^{⋈d}ψ (or P^{⋈d}ψ) at q. Every coalition strategy is evaluated
/// against the worst opponent and scheduler resolution.
PatlResult check_patl( const Game& g, int q, const Formula& coop, const PatlOptions& opts = {} );

/// Worst-case value of one fixed coalition strategy over the view's starts.
Rational strategy_value( const Game& g, int q, const Strategy& s, const Formula& psi, const Bound& bound,
                         const PatlOptions& opts = {} );

/// P^{⋈d}ψ at q directly on the game's MDP.
bool check_probability( const Game& g, int q, const Bound& bound, const Formula& psi, const Labeling* labels = nullptr );

/// Labels every strategic subformula of f, probabilistic ones included.
void label_all( const Game& g, const Formula& f, Labeling& labels, View view = View::Objective );

/// Truth at every state of an arbitrary nested state formula.
std::vector< bool > evaluate_all( const Game& g, const Formula& phi, View view = View::Objective );

} // namespace sagv
