#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace sagv
{

struct MarkedEdge
{
    int src = 0;
    int dst = 0;
    std::uint32_t buchi = 0;    // generalized Büchi sets this edge belongs to
    std::uint32_t enabled = 0;  // Streett pairs whose request this edge carries
    std::uint32_t moved = 0;    // Streett pairs whose response this edge carries
};

/// Finite graph with edge-based generalized Büchi acceptance and Streett
/// (strong fairness) pairs: an infinite path is accepted if it uses edges of
/// every Büchi set infinitely often, and for every pair j, infinitely many
/// `enabled` edges imply infinitely many `moved` edges.
struct MarkedGraph
{
    int num_nodes = 0;
    std::vector< int > init;
    std::vector< MarkedEdge > edges;
    int num_buchi = 0;
    int num_pairs = 0;
};

struct EdgeLasso
{
    int start = 0;
    std::vector< int > prefix;  // edge indices from `start`
    std::vector< int > cycle;   // edge indices, closed
};

/// Accepting lasso, or nullopt if the language of the graph is empty.
std::optional< EdgeLasso > find_accepting_lasso( const MarkedGraph& g );

/// Replays a lasso through the graph and its acceptance condition.
bool is_accepting_lasso( const MarkedGraph& g, const EdgeLasso& l );

/// Strongly connected components (Tarjan). Returns the component id of every
/// node and sets `count`; ids are in reverse topological order.
std::vector< int > scc_decomposition( int num_nodes, const std::vector< std::pair< int, int > >& edges, int& count );

} // namespace sagv
