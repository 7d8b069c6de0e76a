#pragma once

#include "sagv/mc_prob.hpp"

#include <cstdint>
#include <optional>
#include <vector>

// Brute-force reference implementations. They share only the data types
// and the automaton translation with the engines they cross-check.
namespace sagv::oracle
{

struct Options
{
    View view = View::Objective;
    std::size_t cap = 1000000;  // coalition strategies before CapExceeded
};

struct AtlResult
{
    bool holds = false;
    std::optional< Strategy > witness;
    std::size_t strategies = 0;
};

/// ⟨⟨Γ⟩⟩ψ at q for a strategy-free ψ: every memoryless uniform joint
/// strategy is tried on the game restricted by hand.
AtlResult brute_force_atl( const Game& g, int q, const std::vector< int >& coalition, const Formula& psi,
                           const Options& opts = {} );

struct PatlResult
{
    bool holds = false;
    Rational optimum = 0;  // best worst-case value over the coalition's strategies
    std::optional< Strategy > witness;
    std::size_t strategies = 0;
};

/// ⟨⟨Γ⟩⟩^{⋈d}ψ at q with ψ a boolean combination of state formulas,
/// X s, s1 U s2 and s1 R s2.
PatlResult brute_force_patl( const Game& g, int q, const std::vector< int >& coalition, const Bound& bound,
                             const Formula& psi, const Options& opts = {} );

struct SampleEstimate
{
    double estimate = 0;
    double stderror = 0;
    std::size_t samples = 0;
    std::size_t undecided = 0;
};

/// Empirical frequency of ψ over simulated runs. A run is decided once the
/// formula's value is fixed by the prefix, or once it sits in a bottom
/// component that can never change a pending objective.
SampleEstimate monte_carlo( const MarkovChain& mc, const Formula& psi, std::size_t samples, std::size_t horizon,
                            std::uint64_t seed = 1 );

} // namespace sagv::oracle
