#pragma once

#include "sagv/model.hpp"

#include <optional>
#include <string>
#include <vector>

namespace sagv
{

/// A multi-agent system: pairwise asynchronous modules with one repertoire
/// each. Agent i (1-based) is modules[i-1].
struct Mas
{
    std::vector< Module > modules;
    std::vector< Repertoire > repertoires;

    [[nodiscard]] std::size_t size() const { return modules.size(); }
    /// Resolves "2" or a module name to a 0-based index; UnknownAgent otherwise.
    [[nodiscard]] int agent_index( const std::string& name ) const;
};

void validate( const Mas& mas );

Module compose2( const Module& m1, const Module& m2 );
Module compose_all( const std::vector< Module >& ms );
Assumption compose_with_assumption( const Module& m, const Assumption& a );

/// Matches the states of two compositions of the same components through the
/// component names; the mapping is then checked against labels, initial
/// states and transitions. Returns a -> b state map when isomorphic.
std::optional< std::vector< int > > find_isomorphism( const Module& a, const Module& b );

/// Agents reachable from `seed` in at most k neighbourhood steps, minus the
/// seed itself. Agents are 0-based.
std::vector< int > neighborhood( const Mas& mas, const std::vector< int >& seed, int k );

/// Composition of the listed agents' modules (unit module when empty).
Module compose_agents( const Mas& mas, const std::vector< int >& agents );

std::string to_text( const Module& m );
std::string to_dot( const Module& m );

} // namespace sagv
