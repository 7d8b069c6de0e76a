#include "sagv/emptiness.hpp"

#include <algorithm>
#include <deque>

namespace sagv
{

std::vector< int > scc_decomposition( int num_nodes, const std::vector< std::pair< int, int > >& edges, int& count )
{
    std::vector< std::vector< int > > adj( static_cast< std::size_t >( num_nodes ) );
    for ( const auto& [ a, b ] : edges )
        adj[ a ].push_back( b );
    std::vector< int > index( num_nodes, -1 ), low( num_nodes, 0 ), comp( num_nodes, -1 );
    std::vector< bool > on_stack( num_nodes, false );
    std::vector< int > stack;
    int next = 0;
    count = 0;
    struct Frame
    {
        int v;
        std::size_t i;
    };
    for ( int root = 0; root < num_nodes; ++root )
    {
        if ( index[ root ] != -1 )
            continue;
        std::vector< Frame > call{ { root, 0 } };
        index[ root ] = low[ root ] = next++;
        stack.push_back( root );
        on_stack[ root ] = true;
        while ( !call.empty() )
        {
            auto& f = call.back();
            if ( f.i < adj[ f.v ].size() )
            {
                int w = adj[ f.v ][ f.i++ ];
                if ( index[ w ] == -1 )
                {
                    index[ w ] = low[ w ] = next++;
                    stack.push_back( w );
                    on_stack[ w ] = true;
                    call.push_back( { w, 0 } );
                }
                else if ( on_stack[ w ] )
                    low[ f.v ] = std::min( low[ f.v ], index[ w ] );
                continue;
            }
            int v = f.v;
            call.pop_back();
            if ( !call.empty() )
                low[ call.back().v ] = std::min( low[ call.back().v ], low[ v ] );
            if ( low[ v ] == index[ v ] )
            {
                int w;
                do
                {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[ w ] = false;
                    comp[ w ] = count;
                } while ( w != v );
                ++count;
            }
        }
    }
    return comp;
}

namespace
{

// Shortest path (edge indices) from any node with from[v] to a node with
// to[v], using only edges in `allowed`.
std::vector< int > bfs_path( const MarkedGraph& g, const std::vector< int >& allowed, const std::vector< bool >& from,
                             const std::vector< bool >& to, int& reached_from )
{
    std::vector< std::vector< int > > adj( g.num_nodes );
    for ( int e : allowed )
        adj[ g.edges[ e ].src ].push_back( e );
    std::vector< int > via( g.num_nodes, -2 );
    std::deque< int > queue;
    for ( int v = 0; v < g.num_nodes; ++v )
        if ( from[ v ] )
        {
            via[ v ] = -1;
            queue.push_back( v );
        }
    while ( !queue.empty() )
    {
        int v = queue.front();
        queue.pop_front();
        if ( to[ v ] )
        {
            std::vector< int > path;
            int cur = v;
            while ( via[ cur ] != -1 )
            {
                path.push_back( via[ cur ] );
                cur = g.edges[ via[ cur ] ].src;
            }
            reached_from = cur;
            std::reverse( path.begin(), path.end() );
            return path;
        }
        for ( int e : adj[ v ] )
        {
            int w = g.edges[ e ].dst;
            if ( via[ w ] == -2 )
            {
                via[ w ] = e;
                queue.push_back( w );
            }
        }
    }
    reached_from = -1;
    return {};
}

std::vector< int > path_between( const MarkedGraph& g, const std::vector< int >& allowed, int a, int b )
{
    if ( a == b )
        return {};
    std::vector< bool > from( g.num_nodes, false ), to( g.num_nodes, false );
    from[ a ] = true;
    to[ b ] = true;
    int r;
    return bfs_path( g, allowed, from, to, r );
}

std::uint32_t full_mask( int n )
{
    return n >= 32 ? ~std::uint32_t{ 0 } : ( ( std::uint32_t{ 1 } << n ) - 1 );
}

} // namespace

std::optional< EdgeLasso > find_accepting_lasso( const MarkedGraph& g )
{
    if ( g.num_nodes == 0 || g.init.empty() )
        return std::nullopt;
    std::vector< bool > reach( g.num_nodes, false );
    {
        std::vector< std::vector< int > > adj( g.num_nodes );
        for ( const auto& e : g.edges )
            adj[ e.src ].push_back( e.dst );
        std::vector< int > stack;
        for ( int v : g.init )
            if ( !reach[ v ] )
            {
                reach[ v ] = true;
                stack.push_back( v );
            }
        while ( !stack.empty() )
        {
            int v = stack.back();
            stack.pop_back();
            for ( int w : adj[ v ] )
                if ( !reach[ w ] )
                {
                    reach[ w ] = true;
                    stack.push_back( w );
                }
        }
    }
    std::vector< int > reachable_edges;
    for ( std::size_t e = 0; e < g.edges.size(); ++e )
        if ( reach[ g.edges[ e ].src ] )
            reachable_edges.push_back( static_cast< int >( e ) );

    std::uint32_t need = full_mask( g.num_buchi );
    std::vector< std::vector< int > > work{ reachable_edges };
    while ( !work.empty() )
    {
        auto subset = std::move( work.back() );
        work.pop_back();
        std::vector< std::pair< int, int > > pairs;
        for ( int e : subset )
            pairs.emplace_back( g.edges[ e ].src, g.edges[ e ].dst );
        int count = 0;
        auto comp = scc_decomposition( g.num_nodes, pairs, count );
        std::vector< std::vector< int > > inner( count );
        for ( int e : subset )
            if ( comp[ g.edges[ e ].src ] == comp[ g.edges[ e ].dst ] )
                inner[ comp[ g.edges[ e ].src ] ].push_back( e );
        for ( auto& s : inner )
        {
            if ( s.empty() )
                continue;
            std::uint32_t marks = 0, enabled = 0, moved = 0;
            for ( int e : s )
            {
                marks |= g.edges[ e ].buchi;
                enabled |= g.edges[ e ].enabled;
                moved |= g.edges[ e ].moved;
            }
            if ( ( marks & need ) != need )
                continue;
            std::uint32_t bad = enabled & ~moved & full_mask( g.num_pairs );
            if ( bad )
            {
                std::vector< int > rest;
                for ( int e : s )
                    if ( !( g.edges[ e ].enabled & bad ) )
                        rest.push_back( e );
                if ( !rest.empty() )
                    work.push_back( std::move( rest ) );
                continue;
            }
            // Accepting component: build the witness.
            EdgeLasso l;
            std::vector< bool > from( g.num_nodes, false ), to( g.num_nodes, false );
            for ( int v : g.init )
                from[ v ] = true;
            for ( int e : s )
                to[ g.edges[ e ].src ] = true;
            l.prefix = bfs_path( g, reachable_edges, from, to, l.start );
            int anchor = l.prefix.empty() ? l.start : g.edges[ l.prefix.back() ].dst;
            int cur = anchor;
            for ( int e : s )
            {
                auto p = path_between( g, s, cur, g.edges[ e ].src );
                l.cycle.insert( l.cycle.end(), p.begin(), p.end() );
                l.cycle.push_back( e );
                cur = g.edges[ e ].dst;
            }
            auto back = path_between( g, s, cur, anchor );
            l.cycle.insert( l.cycle.end(), back.begin(), back.end() );
            return l;
        }
    }
    return std::nullopt;
}

bool is_accepting_lasso( const MarkedGraph& g, const EdgeLasso& l )
{
    if ( l.cycle.empty() || std::find( g.init.begin(), g.init.end(), l.start ) == g.init.end() )
        return false;
    int cur = l.start;
    for ( int e : l.prefix )
    {
        if ( g.edges[ e ].src != cur )
            return false;
        cur = g.edges[ e ].dst;
    }
    int anchor = cur;
    std::uint32_t marks = 0, enabled = 0, moved = 0;
    for ( int e : l.cycle )
    {
        if ( g.edges[ e ].src != cur )
            return false;
        cur = g.edges[ e ].dst;
        marks |= g.edges[ e ].buchi;
        enabled |= g.edges[ e ].enabled;
        moved |= g.edges[ e ].moved;
    }
    if ( cur != anchor )
        return false;
    std::uint32_t need = full_mask( g.num_buchi );
    return ( marks & need ) == need && ( enabled & ~moved & full_mask( g.num_pairs ) ) == 0;
}

} // namespace sagv
