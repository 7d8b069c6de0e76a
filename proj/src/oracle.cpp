#include "sagv/oracle.hpp"

#include "sagv/linear.hpp"

#include <cmath>
#include <map>
#include <random>
#include <set>

namespace sagv::oracle
{

namespace
{

// ---------------------------------------------------------------------------
// strategies and restriction, written out naively

struct Slot
{
    int member;
    int cls;
    int choices;
};

std::vector< Slot > slots_of( const Game& g, const std::vector< int >& coalition )
{
    std::vector< Slot > slots;
    for ( std::size_t m = 0; m < coalition.size(); ++m )
    {
        const auto& ag = g.agents.at( coalition[ m ] );
        for ( std::size_t c = 0; c < ag.num_choices.size(); ++c )
            slots.push_back( { static_cast< int >( m ), static_cast< int >( c ), ag.num_choices[ c ] } );
    }
    return slots;
}

std::size_t count_strategies( const std::vector< Slot >& slots, std::size_t cap )
{
    std::size_t n = 1;
    for ( const auto& s : slots )
    {
        if ( s.choices == 0 )
            return 0;
        if ( n > cap / static_cast< std::size_t >( s.choices ) )
            throw Error( ErrorKind::CapExceeded, "more than " + std::to_string( cap ) + " strategies" );
        n *= static_cast< std::size_t >( s.choices );
    }
    if ( n > cap )
        throw Error( ErrorKind::CapExceeded, "more than " + std::to_string( cap ) + " strategies" );
    return n;
}

Strategy strategy_number( const Game& g, const std::vector< int >& coalition, const std::vector< Slot >& slots,
                          std::size_t index )
{
    Strategy s;
    s.agents = coalition;
    for ( int a : coalition )
        s.choice.emplace_back( g.agents[ a ].num_choices.size(), 0 );
    for ( const auto& slot : slots )
    {
        s.choice[ slot.member ][ slot.cls ] = static_cast< int >( index % slot.choices );
        index /= slot.choices;
    }
    return s;
}

struct Step
{
    int env = 0;
    Dist< int > succ;
    std::vector< bool > moving;
};

bool allowed( const GameEdge& e, int agent, int choice ) { return ( e.allow[ agent ] >> choice ) & 1; }

// Whether the non-members can pick choices at q under which none of `edges` fires.
bool blockable( const Game& g, int q, const std::vector< int >& others, std::size_t k, const std::vector< int >& edges,
                std::vector< int >& pick )
{
    if ( k == others.size() )
    {
        for ( int e : edges )
        {
            bool ok = true;
            for ( std::size_t j = 0; j < others.size(); ++j )
                ok = ok && allowed( g.edges[ e ], others[ j ], pick[ j ] );
            if ( ok )
                return false;
        }
        return true;
    }
    const auto& ag = g.agents[ others[ k ] ];
    for ( int c = 0; c < ag.num_choices[ ag.obs[ q ] ]; ++c )
    {
        pick[ k ] = c;
        if ( blockable( g, q, others, k + 1, edges, pick ) )
            return true;
    }
    return false;
}

std::vector< std::vector< Step > > restrict_game( const Game& g, const Strategy& s )
{
    std::vector< int > others;
    for ( std::size_t a = 0; a < g.agents.size(); ++a )
        if ( std::find( s.agents.begin(), s.agents.end(), static_cast< int >( a ) ) == s.agents.end() )
            others.push_back( static_cast< int >( a ) );

    std::vector< std::vector< Step > > steps( g.num_states() );
    for ( std::size_t q = 0; q < g.num_states(); ++q )
    {
        std::map< int, std::vector< int > > by_env;
        std::set< int > envs;
        for ( std::size_t e = 0; e < g.edges.size(); ++e )
        {
            const auto& edge = g.edges[ e ];
            if ( edge.src != static_cast< int >( q ) )
                continue;
            envs.insert( edge.env );
            bool ok = true;
            for ( std::size_t m = 0; m < s.agents.size(); ++m )
            {
                int a = s.agents[ m ];
                ok = ok && allowed( edge, a, s.choice[ m ][ g.agents[ a ].obs[ q ] ] );
            }
            if ( !ok )
                continue;
            by_env[ edge.env ].push_back( static_cast< int >( e ) );
            steps[ q ].push_back( { edge.env, edge.succ, edge.moving } );
        }
        for ( int env : envs )
        {
            std::vector< int > pick( others.size() );
            if ( blockable( g, static_cast< int >( q ), others, 0, by_env[ env ], pick ) )
                steps[ q ].push_back( { env, Dist< int >::point( static_cast< int >( q ) ),
                                        std::vector< bool >( g.agents.size(), false ) } );
        }
    }
    return steps;
}

std::vector< int > starts_of( const Game& g, int q, const std::vector< int >& coalition, View view )
{
    if ( view == View::Objective || coalition.empty() )
        return { q };
    std::vector< int > out;
    for ( std::size_t r = 0; r < g.num_states(); ++r )
        for ( int a : coalition )
            if ( g.agents[ a ].obs[ r ] == g.agents[ a ].obs[ q ] )
            {
                out.push_back( static_cast< int >( r ) );
                break;
            }
    return out;
}

// ---------------------------------------------------------------------------
// fair emptiness by repeated component refinement

struct Arc
{
    int src, dst;
    std::uint32_t buchi, enabled, moved;
};

std::vector< std::vector< int > > components( const std::vector< Arc >& arcs, const std::vector< int >& ids )
{
    // Kosaraju over the nodes touched by the arcs
    std::map< int, std::vector< int > > fwd, bwd;
    std::set< int > nodes;
    for ( int i : ids )
    {
        fwd[ arcs[ i ].src ].push_back( arcs[ i ].dst );
        bwd[ arcs[ i ].dst ].push_back( arcs[ i ].src );
        nodes.insert( arcs[ i ].src );
        nodes.insert( arcs[ i ].dst );
    }
    std::vector< int > order;
    std::set< int > seen;
    for ( int root : nodes )
    {
        if ( seen.count( root ) )
            continue;
        std::vector< std::pair< int, std::size_t > > stack{ { root, 0 } };
        seen.insert( root );
        while ( !stack.empty() )
        {
            auto& [ v, i ] = stack.back();
            auto& next = fwd[ v ];
            if ( i < next.size() )
            {
                int w = next[ i++ ];
                if ( seen.insert( w ).second )
                    stack.emplace_back( w, 0 );
            }
            else
            {
                order.push_back( v );
                stack.pop_back();
            }
        }
    }
    std::map< int, int > comp;
    int count = 0;
    for ( auto it = order.rbegin(); it != order.rend(); ++it )
    {
        if ( comp.count( *it ) )
            continue;
        std::vector< int > stack{ *it };
        comp[ *it ] = count;
        while ( !stack.empty() )
        {
            int v = stack.back();
            stack.pop_back();
            for ( int w : bwd[ v ] )
                if ( !comp.count( w ) )
                {
                    comp[ w ] = count;
                    stack.push_back( w );
                }
        }
        ++count;
    }
    std::vector< std::vector< int > > inner( count );
    for ( int i : ids )
        if ( comp[ arcs[ i ].src ] == comp[ arcs[ i ].dst ] )
            inner[ comp[ arcs[ i ].src ] ].push_back( i );
    return inner;
}

bool fair_cycle_exists( const std::vector< Arc >& arcs, const std::vector< int >& init, int buchi_sets, int pairs )
{
    std::map< int, std::vector< int > > out;
    for ( std::size_t i = 0; i < arcs.size(); ++i )
        out[ arcs[ i ].src ].push_back( static_cast< int >( i ) );
    std::set< int > reach( init.begin(), init.end() );
    std::vector< int > stack( init.begin(), init.end() );
    while ( !stack.empty() )
    {
        int v = stack.back();
        stack.pop_back();
        for ( int i : out[ v ] )
            if ( reach.insert( arcs[ i ].dst ).second )
                stack.push_back( arcs[ i ].dst );
    }
    std::vector< int > live;
    for ( std::size_t i = 0; i < arcs.size(); ++i )
        if ( reach.count( arcs[ i ].src ) )
            live.push_back( static_cast< int >( i ) );

    std::uint32_t all_sets = buchi_sets >= 32 ? ~0u : ( ( 1u << buchi_sets ) - 1 );
    std::vector< std::vector< int > > work{ live };
    while ( !work.empty() )
    {
        auto ids = std::move( work.back() );
        work.pop_back();
        for ( auto& inner : components( arcs, ids ) )
        {
            if ( inner.empty() )
                continue;
            std::uint32_t sets = 0, enabled = 0, moved = 0;
            for ( int i : inner )
            {
                sets |= arcs[ i ].buchi;
                enabled |= arcs[ i ].enabled;
                moved |= arcs[ i ].moved;
            }
            std::uint32_t starving = enabled & ~moved;
            if ( pairs == 0 )
                starving = 0;
            if ( starving == 0 )
            {
                if ( ( sets & all_sets ) == all_sets )
                    return true;
                continue;
            }
            std::vector< int > kept;
            for ( int i : inner )
                if ( ( arcs[ i ].enabled & starving ) == 0 )
                    kept.push_back( i );
            if ( !kept.empty() )
                work.push_back( std::move( kept ) );
        }
    }
    return false;
}

bool violates( const Game& g, const std::vector< std::vector< Step > >& steps, const std::vector< int >& starts,
               const Gba& neg )
{
    std::vector< std::uint64_t > letter( g.num_states() );
    for ( std::size_t q = 0; q < g.num_states(); ++q )
        letter[ q ] = letter_of( neg.atoms, g.label[ q ] );
    std::vector< int > fair;
    for ( std::size_t a = 0; a < g.agents.size(); ++a )
        if ( a < g.fair.size() && g.fair[ a ] )
            fair.push_back( static_cast< int >( a ) );
    int sys_sets = g.has_acceptance() ? 1 : 0;
    int na = neg.num_states;
    auto node = [ & ]( int q, int a ) { return q * na + a; };

    std::vector< Arc > arcs;
    for ( std::size_t q = 0; q < g.num_states(); ++q )
    {
        std::map< int, std::uint32_t > requests;
        for ( const auto& st : steps[ q ] )
            for ( std::size_t j = 0; j < fair.size(); ++j )
                if ( st.moving[ fair[ j ] ] )
                    requests[ st.env ] |= 1u << j;
        for ( const auto& st : steps[ q ] )
        {
            std::uint32_t moved = 0;
            for ( std::size_t j = 0; j < fair.size(); ++j )
                if ( st.moving[ fair[ j ] ] )
                    moved |= 1u << j;
            std::uint32_t sys = g.has_acceptance() && g.accepting[ q ] ? 1u : 0u;
            for ( const auto& t : neg.trans )
            {
                if ( !neg.matches( t, letter[ q ] ) )
                    continue;
                for ( const auto& [ x, w ] : st.succ.support() )
                    arcs.push_back( { node( static_cast< int >( q ), t.src ), node( x, t.dst ),
                                      sys | ( t.acc << sys_sets ), requests[ st.env ], moved } );
            }
        }
    }
    std::vector< int > init;
    for ( int q : starts )
        for ( int a : neg.init )
            init.push_back( node( q, a ) );
    return fair_cycle_exists( arcs, init, sys_sets + neg.num_acc, static_cast< int >( fair.size() ) );
}

// ---------------------------------------------------------------------------
// objectives of the probabilistic fragment

bool temporal_free( const Formula& f )
{
    if ( !f )
        return true;
    if ( f->op == Op::Next || f->op == Op::Until || f->op == Op::Release || f->op == Op::Coop )
        return false;
    return temporal_free( f->lhs ) && temporal_free( f->rhs );
}

bool holds_at( const Formula& f, const Valuation& label )
{
    switch ( f->op )
    {
    case Op::True: return true;
    case Op::False: return false;
    case Op::Atom: return satisfies( label, f->atom );
    case Op::Not: return !holds_at( f->lhs, label );
    case Op::And: return holds_at( f->lhs, label ) && holds_at( f->rhs, label );
    case Op::Or: return holds_at( f->lhs, label ) || holds_at( f->rhs, label );
    default: throw Error( ErrorKind::UnsupportedFormula, "temporal operator in a state position" );
    }
}

enum Status : std::uint8_t
{
    Fresh,
    Pending,
    Yes,
    No,
};

struct Objective
{
    struct Basic
    {
        Op kind;  // Atom for a state formula, Next, Until
        Formula g, h;
    };
    struct Expr
    {
        Op kind;  // True, False, Atom (a basic), Not, And, Or
        int basic = -1;
        int l = -1, r = -1;
    };
    std::vector< Basic > basics;
    std::vector< Expr > exprs;
    int root = -1;

    int add( Expr e )
    {
        exprs.push_back( e );
        return static_cast< int >( exprs.size() ) - 1;
    }

    int basic( Op kind, Formula g, Formula h )
    {
        basics.push_back( { kind, std::move( g ), std::move( h ) } );
        return add( { Op::Atom, static_cast< int >( basics.size() ) - 1 } );
    }

    int build( const Formula& f )
    {
        if ( temporal_free( f ) )
            return basic( Op::Atom, f, nullptr );
        switch ( f->op )
        {
        case Op::Not: return add( { Op::Not, -1, build( f->lhs ) } );
        case Op::And:
        case Op::Or: {
            int l = build( f->lhs );
            int r = build( f->rhs );
            return add( { f->op, -1, l, r } );
        }
        case Op::Next:
            if ( temporal_free( f->lhs ) )
                return basic( Op::Next, f->lhs, nullptr );
            break;
        case Op::Until:
            if ( temporal_free( f->lhs ) && temporal_free( f->rhs ) )
                return basic( Op::Until, f->lhs, f->rhs );
            break;
        case Op::Release:
            if ( temporal_free( f->lhs ) && temporal_free( f->rhs ) )
                return add( { Op::Not, -1, basic( Op::Until, mk_not( f->lhs ), mk_not( f->rhs ) ) } );
            break;
        default: break;
        }
        throw Error( ErrorKind::UnsupportedFormula, "outside the probabilistic fragment: " + to_string( f ) );
    }

    explicit Objective( const Formula& f ) { root = build( f ); }

    [[nodiscard]] std::vector< std::uint8_t > step( std::vector< std::uint8_t > st, const Valuation& label ) const
    {
        for ( std::size_t i = 0; i < basics.size(); ++i )
        {
            const auto& b = basics[ i ];
            if ( st[ i ] == Yes || st[ i ] == No )
                continue;
            if ( b.kind == Op::Atom )
                st[ i ] = holds_at( b.g, label ) ? Yes : No;
            else if ( b.kind == Op::Next )
                st[ i ] = st[ i ] == Fresh ? Pending : ( holds_at( b.g, label ) ? Yes : No );
            else if ( holds_at( b.h, label ) )
                st[ i ] = Yes;
            else
                st[ i ] = holds_at( b.g, label ) ? Pending : No;
        }
        return st;
    }

    // 1 true, 0 false, -1 open; `settle` reads open basics as false
    [[nodiscard]] int value( const std::vector< std::uint8_t >& st, int e, bool settle ) const
    {
        const Expr& x = exprs[ e ];
        switch ( x.kind )
        {
        case Op::True: return 1;
        case Op::False: return 0;
        case Op::Atom:
            if ( st[ x.basic ] == Yes )
                return 1;
            if ( st[ x.basic ] == No )
                return 0;
            return settle ? 0 : -1;
        case Op::Not: {
            int v = value( st, x.l, settle );
            return v < 0 ? v : 1 - v;
        }
        case Op::And: {
            int a = value( st, x.l, settle ), b = value( st, x.r, settle );
            if ( a == 0 || b == 0 )
                return 0;
            return a == 1 && b == 1 ? 1 : -1;
        }
        case Op::Or: {
            int a = value( st, x.l, settle ), b = value( st, x.r, settle );
            if ( a == 1 || b == 1 )
                return 1;
            return a == 0 && b == 0 ? 0 : -1;
        }
        default: return -1;
        }
    }
};

// ---------------------------------------------------------------------------
// exact optimal reachability

struct PMdp
{
    std::vector< std::vector< Dist< int > > > actions;
};

double expect( const Dist< int >& d, const std::vector< double >& v )
{
    double s = 0;
    for ( const auto& [ x, w ] : d.support() )
        s += w.get_d() * v[ x ];
    return s;
}

Rational expect( const Dist< int >& d, const std::vector< Rational >& v )
{
    Rational s = 0;
    for ( const auto& [ x, w ] : d.support() )
        s += w * v[ x ];
    return s;
}

std::vector< Rational > max_reach( const PMdp& m, const std::vector< bool >& target )
{
    int n = static_cast< int >( m.actions.size() );
    // warm start from floating-point value iteration
    std::vector< double > approx( n, 0.0 );
    for ( int s = 0; s < n; ++s )
        approx[ s ] = target[ s ] ? 1.0 : 0.0;
    for ( int sweep = 0; sweep < 5000; ++sweep )
    {
        double change = 0;
        for ( int s = 0; s < n; ++s )
        {
            if ( target[ s ] )
                continue;
            double best = 0;
            for ( const auto& a : m.actions[ s ] )
                best = std::max( best, expect( a, approx ) );
            change = std::max( change, best - approx[ s ] );
            approx[ s ] = best;
        }
        if ( change < 1e-14 )
            break;
    }
    std::vector< int > policy( n, 0 );
    for ( int s = 0; s < n; ++s )
        for ( std::size_t a = 0; a < m.actions[ s ].size(); ++a )
            if ( expect( m.actions[ s ][ a ], approx ) > expect( m.actions[ s ][ policy[ s ] ], approx ) )
                policy[ s ] = static_cast< int >( a );

    std::vector< Rational > v( n );
    while ( true )
    {
        // states that reach the target under the policy
        std::vector< std::vector< int > > pred( n );
        for ( int s = 0; s < n; ++s )
            if ( !target[ s ] && !m.actions[ s ].empty() )
                for ( const auto& [ x, w ] : m.actions[ s ][ policy[ s ] ].support() )
                    pred[ x ].push_back( s );
        std::vector< bool > good( target );
        std::vector< int > stack;
        for ( int s = 0; s < n; ++s )
            if ( target[ s ] )
                stack.push_back( s );
        while ( !stack.empty() )
        {
            int x = stack.back();
            stack.pop_back();
            for ( int s : pred[ x ] )
                if ( !good[ s ] )
                {
                    good[ s ] = true;
                    stack.push_back( s );
                }
        }
        std::vector< int > var( n, -1 );
        int k = 0;
        for ( int s = 0; s < n; ++s )
            if ( good[ s ] && !target[ s ] )
                var[ s ] = k++;
        Matrix a( k, std::vector< Rational >( k, 0 ) );
        std::vector< Rational > b( k, 0 );
        for ( int s = 0; s < n; ++s )
        {
            if ( var[ s ] < 0 )
                continue;
            a[ var[ s ] ][ var[ s ] ] += 1;
            for ( const auto& [ x, w ] : m.actions[ s ][ policy[ s ] ].support() )
            {
                if ( target[ x ] )
                    b[ var[ s ] ] += w;
                else if ( var[ x ] >= 0 )
                    a[ var[ s ] ][ var[ x ] ] -= w;
            }
        }
        auto sol = solve_linear( a, b );
        for ( int s = 0; s < n; ++s )
            v[ s ] = target[ s ] ? Rational( 1 ) : ( var[ s ] >= 0 ? sol[ var[ s ] ] : Rational( 0 ) );

        bool improved = false;
        for ( int s = 0; s < n; ++s )
        {
            if ( target[ s ] )
                continue;
            for ( std::size_t act = 0; act < m.actions[ s ].size(); ++act )
            {
                Rational val = expect( m.actions[ s ][ act ], v );
                if ( val > expect( m.actions[ s ][ policy[ s ] ], v ) && val > v[ s ] )
                {
                    policy[ s ] = static_cast< int >( act );
                    improved = true;
                }
            }
        }
        if ( !improved )
            return v;
    }
}

// States of end components that stay inside `allowed`.
std::vector< bool > end_components( const PMdp& m, const std::vector< bool >& allowed )
{
    int n = static_cast< int >( m.actions.size() );
    std::vector< bool > in( allowed );
    std::vector< std::vector< bool > > act( n );
    for ( int s = 0; s < n; ++s )
        act[ s ].assign( m.actions[ s ].size(), true );
    bool changed = true;
    while ( changed )
    {
        changed = false;
        std::vector< std::pair< int, int > > edges;
        for ( int s = 0; s < n; ++s )
        {
            if ( !in[ s ] )
                continue;
            bool any = false;
            for ( std::size_t a = 0; a < act[ s ].size(); ++a )
            {
                if ( !act[ s ][ a ] )
                    continue;
                bool inside = true;
                for ( const auto& [ x, w ] : m.actions[ s ][ a ].support() )
                    inside = inside && in[ x ];
                if ( !inside )
                {
                    act[ s ][ a ] = false;
                    changed = true;
                    continue;
                }
                any = true;
                for ( const auto& [ x, w ] : m.actions[ s ][ a ].support() )
                    edges.emplace_back( s, x );
            }
            if ( !any )
            {
                in[ s ] = false;
                changed = true;
            }
        }
        if ( changed )
            continue;
        std::vector< Arc > arcs;
        std::vector< int > ids;
        for ( auto [ s, x ] : edges )
        {
            ids.push_back( static_cast< int >( arcs.size() ) );
            arcs.push_back( { s, x, 0, 0, 0 } );
        }
        std::vector< int > comp( n, -1 );
        int c = 0;
        for ( const auto& inner : components( arcs, ids ) )
        {
            for ( int i : inner )
                comp[ arcs[ i ].src ] = comp[ arcs[ i ].dst ] = c;
            ++c;
        }
        for ( int s = 0; s < n; ++s )
        {
            if ( !in[ s ] )
                continue;
            if ( comp[ s ] < 0 )
            {
                in[ s ] = false;
                changed = true;
                continue;
            }
            for ( std::size_t a = 0; a < act[ s ].size(); ++a )
            {
                if ( !act[ s ][ a ] )
                    continue;
                for ( const auto& [ x, w ] : m.actions[ s ][ a ].support() )
                    if ( comp[ x ] != comp[ s ] )
                    {
                        act[ s ][ a ] = false;
                        changed = true;
                        break;
                    }
            }
        }
    }
    return in;
}

// Worst-case (lower bound) or best-case (upper bound) probability of the
// objective under a fixed coalition strategy, over the starts.
Rational strategy_probability( const Game& g, const std::vector< std::vector< Step > >& steps,
                               const std::vector< int >& starts, const Objective& obj, bool lower )
{
    std::map< std::pair< int, std::vector< std::uint8_t > >, int > id;
    std::vector< std::pair< int, std::vector< std::uint8_t > > > nodes;
    PMdp m;
    auto node = [ & ]( int q, std::vector< std::uint8_t > st ) {
        auto key = std::make_pair( q, std::move( st ) );
        auto it = id.find( key );
        if ( it != id.end() )
            return it->second;
        int k = static_cast< int >( nodes.size() );
        id.emplace( key, k );
        nodes.push_back( key );
        return k;
    };
    std::vector< int > start_nodes;
    std::vector< std::uint8_t > fresh( obj.basics.size(), Fresh );
    for ( int q : starts )
        start_nodes.push_back( node( q, obj.step( fresh, g.label[ q ] ) ) );
    for ( std::size_t k = 0; k < nodes.size(); ++k )
    {
        auto [ q, st ] = nodes[ k ];
        std::vector< Dist< int > > acts;
        for ( const auto& s : steps[ q ] )
            acts.push_back( s.succ.map( [ & ]( int x ) { return node( x, obj.step( st, g.label[ x ] ) ); } ) );
        m.actions.push_back( std::move( acts ) );
    }
    std::vector< bool > good( nodes.size() );
    for ( std::size_t k = 0; k < nodes.size(); ++k )
        good[ k ] = obj.value( nodes[ k ].second, obj.root, true ) == 1;

    // the objective holds iff the run settles in a good end component
    std::vector< Rational > v;
    if ( lower )
    {
        std::vector< bool > bad( good.size() );
        for ( std::size_t k = 0; k < good.size(); ++k )
            bad[ k ] = !good[ k ];
        v = max_reach( m, end_components( m, bad ) );
        for ( auto& x : v )
            x = 1 - x;
    }
    else
        v = max_reach( m, end_components( m, good ) );

    Rational out = v[ start_nodes[ 0 ] ];
    for ( int s : start_nodes )
        out = lower ? std::min( out, v[ s ] ) : std::max( out, v[ s ] );
    return out;
}

} // namespace

// ---------------------------------------------------------------------------

AtlResult brute_force_atl( const Game& g, int q, const std::vector< int >& coalition, const Formula& psi,
                           const Options& opts )
{
    if ( contains_coop( psi ) )
        throw Error( ErrorKind::UnsupportedFormula, "the oracle takes strategy-free objectives" );
    Gba neg = ltl_to_nba( mk_not( psi ) );
    auto slots = slots_of( g, coalition );
    std::size_t total = count_strategies( slots, opts.cap );
    auto starts = starts_of( g, q, coalition, opts.view );
    AtlResult res;
    for ( std::size_t i = 0; i < total; ++i )
    {
        Strategy s = strategy_number( g, coalition, slots, i );
        ++res.strategies;
        if ( !violates( g, restrict_game( g, s ), starts, neg ) )
        {
            res.holds = true;
            res.witness = s;
            break;
        }
    }
    return res;
}

PatlResult brute_force_patl( const Game& g, int q, const std::vector< int >& coalition, const Bound& bound,
                             const Formula& psi, const Options& opts )
{
    Objective obj( psi );
    auto slots = slots_of( g, coalition );
    std::size_t total = count_strategies( slots, opts.cap );
    auto starts = starts_of( g, q, coalition, opts.view );
    bool lower = bound.is_lower();
    PatlResult res;
    for ( std::size_t i = 0; i < total; ++i )
    {
        Strategy s = strategy_number( g, coalition, slots, i );
        ++res.strategies;
        Rational v = strategy_probability( g, restrict_game( g, s ), starts, obj, lower );
        if ( !res.witness || ( lower ? v > res.optimum : v < res.optimum ) )
        {
            res.optimum = v;
            res.witness = s;
        }
    }
    res.holds = res.witness && bound.holds( res.optimum );
    return res;
}

SampleEstimate monte_carlo( const MarkovChain& mc, const Formula& psi, std::size_t samples, std::size_t horizon,
                            std::uint64_t seed )
{
    Objective obj( psi );
    int n = static_cast< int >( mc.states.size() );

    // bottom components, and per Until basic whether it stays pending there forever
    std::vector< Arc > arcs;
    std::vector< int > ids;
    for ( int s = 0; s < n; ++s )
        for ( const auto& [ x, w ] : mc.next[ s ].support() )
        {
            ids.push_back( static_cast< int >( arcs.size() ) );
            arcs.push_back( { s, x, 0, 0, 0 } );
        }
    std::vector< int > comp( n, -1 );
    int c = 0;
    for ( const auto& inner : components( arcs, ids ) )
    {
        for ( int i : inner )
            comp[ arcs[ i ].src ] = comp[ arcs[ i ].dst ] = c;
        ++c;
    }
    std::vector< bool > bottom( c, true );
    for ( const auto& a : arcs )
        if ( comp[ a.src ] != comp[ a.dst ] && comp[ a.src ] >= 0 )
            bottom[ comp[ a.src ] ] = false;
    std::vector< std::vector< bool > > stuck( c, std::vector< bool >( obj.basics.size(), true ) );
    for ( int s = 0; s < n; ++s )
        if ( comp[ s ] >= 0 )
            for ( std::size_t b = 0; b < obj.basics.size(); ++b )
            {
                const auto& basic = obj.basics[ b ];
                if ( basic.kind != Op::Until || holds_at( basic.h, mc.label[ s ] ) || !holds_at( basic.g, mc.label[ s ] ) )
                    stuck[ comp[ s ] ][ b ] = false;
            }

    std::mt19937_64 rng( seed );
    std::uniform_real_distribution< double > unit( 0.0, 1.0 );
    SampleEstimate est;
    std::size_t hits = 0;
    for ( std::size_t i = 0; i < samples; ++i )
    {
        int s = mc.init;
        auto st = obj.step( std::vector< std::uint8_t >( obj.basics.size(), Fresh ), mc.label[ s ] );
        int verdict = -1;
        for ( std::size_t t = 0; t <= horizon; ++t )
        {
            if ( comp[ s ] >= 0 && bottom[ comp[ s ] ] )
                for ( std::size_t b = 0; b < obj.basics.size(); ++b )
                    if ( st[ b ] == Pending && stuck[ comp[ s ] ][ b ] )
                        st[ b ] = No;
            verdict = obj.value( st, obj.root, false );
            if ( verdict >= 0 || t == horizon )
                break;
            double r = unit( rng ), acc = 0;
            int next = mc.next[ s ].support().back().first;
            for ( const auto& [ x, w ] : mc.next[ s ].support() )
            {
                acc += w.get_d();
                if ( r < acc )
                {
                    next = x;
                    break;
                }
            }
            s = next;
            st = obj.step( st, mc.label[ s ] );
        }
        if ( verdict < 0 )
            ++est.undecided;
        else if ( verdict == 1 )
            ++hits;
    }
    est.samples = samples;
    if ( samples > 0 && est.undecided * 100 > samples )
        throw Error( ErrorKind::HorizonInsufficient, std::to_string( est.undecided ) + " of " + std::to_string( samples )
                                                         + " runs undecided after " + std::to_string( horizon ) + " steps" );
    std::size_t decided = samples - est.undecided;
    if ( decided > 0 )
    {
        est.estimate = static_cast< double >( hits ) / static_cast< double >( decided );
        est.stderror = std::sqrt( est.estimate * ( 1 - est.estimate ) / static_cast< double >( decided ) );
    }
    return est;
}

} // namespace sagv::oracle
