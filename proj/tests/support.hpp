#pragma once

// Random systems, formulas and chains shared by the property tests and the
// acceptance runner.

#include "sagv/agv.hpp"
#include "sagv/mc_prob.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace sagv::test
{

using Rng = std::mt19937_64;

inline int uniform( Rng& rng, int lo, int hi )
{
    return std::uniform_int_distribution< int >( lo, hi )( rng );
}

inline bool coin( Rng& rng, double p = 0.5 )
{
    return std::bernoulli_distribution( p )( rng );
}

template < typename T >
const T& pick( Rng& rng, const std::vector< T >& xs )
{
    return xs[ uniform( rng, 0, static_cast< int >( xs.size() ) - 1 ) ];
}

// Distribution over `targets` with a common denominator of at most max_den.
inline std::vector< std::pair< int, Rational > > random_weights( Rng& rng, std::vector< int > targets, int max_den )
{
    std::sort( targets.begin(), targets.end() );
    targets.erase( std::unique( targets.begin(), targets.end() ), targets.end() );
    int k = static_cast< int >( targets.size() );
    int den = uniform( rng, std::max( k, 2 ), std::max( k, max_den ) );
    std::vector< int > parts( k, 1 );
    for ( int left = den - k; left > 0; --left )
        ++parts[ uniform( rng, 0, k - 1 ) ];
    std::vector< std::pair< int, Rational > > out;
    for ( int i = 0; i < k; ++i )
    {
        Rational w( parts[ i ], den );
        w.canonicalize();
        out.emplace_back( targets[ i ], w );
    }
    return out;
}

struct MasParams
{
    int min_agents = 2;
    int max_agents = 3;
    int max_states = 4;
    int max_choices = 2;
    bool probabilistic = false;
    int max_den = 8;
};

inline std::string var_of( int agent ) { return "v" + std::to_string( agent + 1 ); }

/// Pairwise asynchronous modules over {0,1}; module i owns v<i+1> and reads
/// a random subset of the other variables.
inline Mas random_mas( Rng& rng, const MasParams& p = {} )
{
    Domain dom( { "0", "1" } );
    int n = uniform( rng, p.min_agents, p.max_agents );
    Mas mas;
    for ( int i = 0; i < n; ++i )
    {
        std::vector< std::string > inputs;
        for ( int j = 0; j < n; ++j )
            if ( j != i && coin( rng ) )
                inputs.push_back( var_of( j ) );
        ModuleBuilder b( "M" + std::to_string( i + 1 ), dom, { var_of( i ) }, inputs );
        int ns = uniform( rng, 2, p.max_states );
        for ( int s = 0; s < ns; ++s )
            b.add_state( "s" + std::to_string( s ), { { var_of( i ), s == 0 ? "0" : ( coin( rng ) ? "1" : "0" ) } } );
        b.set_init( 0 );
        int t = 0;
        for ( int s = 0; s < ns; ++s )
        {
            int count = uniform( rng, s == 0 ? 1 : 0, 2 );
            for ( int c = 0; c < count; ++c )
            {
                Valuation guard;
                if ( !inputs.empty() && coin( rng ) )
                    guard[ pick( rng, inputs ) ] = coin( rng ) ? "1" : "0";
                std::string name = "t" + std::to_string( ++t );
                int dst = uniform( rng, 0, ns - 2 );
                if ( dst >= s )
                    ++dst;
                if ( p.probabilistic && coin( rng ) )
                    b.add_prob_transition( name, s, guard, random_weights( rng, { dst, uniform( rng, 0, ns - 1 ) }, p.max_den ) );
                else
                    b.add_transition( name, s, guard, dst );
            }
        }
        Module m = b.build();
        Repertoire r = default_repertoire( m );
        for ( int s = 0; s < ns; ++s )
        {
            std::map< std::string, std::vector< int > > groups;
            for ( int e : m.transitions_from( s ) )
                groups[ m.trans[ e ].name ].push_back( e );
            if ( groups.size() < 2 || p.max_choices < 2 || coin( rng ) )
                continue;
            std::vector< std::vector< int > > choices;
            int nc = uniform( rng, 1, p.max_choices );
            std::set< std::vector< int > > seen;
            for ( int c = 0; c < nc * 2 && static_cast< int >( choices.size() ) < nc; ++c )
            {
                std::vector< int > ch;
                for ( const auto& [ name, es ] : groups )
                    if ( coin( rng ) )
                        ch.insert( ch.end(), es.begin(), es.end() );
                if ( ch.empty() )
                    continue;
                std::sort( ch.begin(), ch.end() );
                if ( seen.insert( ch ).second )
                    choices.push_back( ch );
            }
            if ( !choices.empty() )
                r.choices[ s ] = choices;
        }
        mas.modules.push_back( std::move( m ) );
        mas.repertoires.push_back( std::move( r ) );
    }
    validate( mas );
    return mas;
}

struct IcgsParams
{
    int min_agents = 1;
    int max_agents = 2;
    int min_states = 2;
    int max_states = 4;
    int max_actions = 2;
    bool probabilistic = true;
    bool perfect_information = false;
    int max_den = 8;
};

/// Uniform iCGS over propositions p and q.
inline Icgs random_icgs( Rng& rng, const IcgsParams& p = {} )
{
    Icgs g;
    int n = uniform( rng, p.min_agents, p.max_agents );
    int ns = uniform( rng, p.min_states, p.max_states );
    for ( int a = 0; a < n; ++a )
        g.agents.push_back( std::to_string( a + 1 ) );
    g.propositions = { "p", "q" };
    for ( int s = 0; s < ns; ++s )
    {
        g.states.push_back( "s" + std::to_string( s ) );
        std::vector< std::string > props;
        for ( const auto& x : g.propositions )
            if ( coin( rng ) )
                props.push_back( x );
        g.props.push_back( props );
    }
    g.obs.assign( n, std::vector< int >( ns ) );
    g.legal.assign( ns, std::vector< std::vector< std::string > >( n ) );
    const std::vector< std::string > actions = { "a", "b", "c" };
    for ( int a = 0; a < n; ++a )
    {
        std::vector< int > legal_of_class( ns );
        for ( int s = 0; s < ns; ++s )
        {
            g.obs[ a ][ s ] = p.perfect_information ? s : uniform( rng, 0, s );
            legal_of_class[ s ] = uniform( rng, 1, p.max_actions );
        }
        // renumber the class labels densely
        std::map< int, int > dense;
        for ( int s = 0; s < ns; ++s )
        {
            int cls = g.obs[ a ][ s ];
            if ( !dense.count( cls ) )
                dense[ cls ] = static_cast< int >( dense.size() );
            int k = legal_of_class[ cls ];
            g.legal[ s ][ a ].assign( actions.begin(), actions.begin() + k );
            g.obs[ a ][ s ] = dense[ cls ];
        }
    }
    g.trans.resize( ns );
    for ( int s = 0; s < ns; ++s )
    {
        std::vector< int > move( n, 0 );
        std::function< void( int ) > fill = [ & ]( int a ) {
            if ( a == n )
            {
                int t1 = uniform( rng, 0, ns - 1 );
                if ( p.probabilistic && coin( rng ) )
                    g.trans[ s ][ move ] = Dist< int >::from( random_weights( rng, { t1, uniform( rng, 0, ns - 1 ) }, p.max_den ) );
                else
                    g.trans[ s ][ move ] = Dist< int >::point( t1 );
                return;
            }
            for ( int i = 0; i < static_cast< int >( g.legal[ s ][ a ].size() ); ++i )
            {
                move[ a ] = i;
                fill( a + 1 );
            }
        };
        fill( 0 );
    }
    validate( g );
    return g;
}

/// Boolean combination of atoms, depth at most `depth`.
inline Formula random_state( Rng& rng, const std::vector< Formula >& atoms, int depth = 1 )
{
    int k = depth <= 0 ? 0 : uniform( rng, 0, 3 );
    switch ( k )
    {
    case 1:
        return mk_not( random_state( rng, atoms, depth - 1 ) );
    case 2:
        return mk_and( random_state( rng, atoms, depth - 1 ), random_state( rng, atoms, depth - 1 ) );
    case 3:
        return mk_or( random_state( rng, atoms, depth - 1 ), random_state( rng, atoms, depth - 1 ) );
    default:
        return pick( rng, atoms );
    }
}

/// One temporal operator over boolean state formulas, possibly combined
/// with a second one. `next` allows X.
inline Formula random_path( Rng& rng, const std::vector< Formula >& atoms, bool next, bool combine = true )
{
    auto basic = [ & ] {
        int k = uniform( rng, next ? 0 : 1, 4 );
        Formula a = random_state( rng, atoms ), b = random_state( rng, atoms );
        switch ( k )
        {
        case 0:
            return mk_next( a );
        case 1:
            return mk_eventually( a );
        case 2:
            return mk_always( a );
        case 3:
            return mk_until( a, b );
        default:
            return mk_release( a, b );
        }
    };
    Formula f = basic();
    if ( combine && coin( rng, 0.3 ) )
        f = coin( rng ) ? mk_and( f, basic() ) : mk_or( f, basic() );
    return f;
}

inline std::vector< Formula > icgs_atoms()
{
    return { mk_prop( "p" ), mk_prop( "q" ), mk_true() };
}

inline std::vector< Formula > mas_atoms( const Mas& mas )
{
    std::vector< Formula > out;
    for ( std::size_t i = 0; i < mas.size(); ++i )
        for ( const char* v : { "0", "1" } )
            out.push_back( mk_atom( { { var_of( static_cast< int >( i ) ), v } } ) );
    return out;
}

inline MarkovChain random_chain( Rng& rng, int max_states = 6, int max_den = 8 )
{
    MarkovChain mc;
    int n = uniform( rng, 2, max_states );
    for ( int s = 0; s < n; ++s )
    {
        mc.states.push_back( "c" + std::to_string( s ) );
        Valuation v{ { "p", coin( rng ) ? "true" : "false" }, { "q", coin( rng ) ? "true" : "false" } };
        mc.label.push_back( v );
        std::vector< int > targets;
        int k = uniform( rng, 1, 3 );
        for ( int i = 0; i < k; ++i )
            targets.push_back( uniform( rng, 0, n - 1 ) );
        mc.next.push_back( Dist< int >::from( random_weights( rng, targets, max_den ) ) );
    }
    validate( mc );
    return mc;
}

/// Every nonempty sorted subset of {0..n-1}.
inline std::vector< std::vector< int > > subsets( int n, bool with_empty = false )
{
    std::vector< std::vector< int > > out;
    for ( int m = with_empty ? 0 : 1; m < ( 1 << n ); ++m )
    {
        std::vector< int > s;
        for ( int i = 0; i < n; ++i )
            if ( m >> i & 1 )
                s.push_back( i );
        out.push_back( s );
    }
    return out;
}

inline std::vector< std::string > ids_of( const std::vector< int >& agents )
{
    std::vector< std::string > out;
    for ( int a : agents )
        out.push_back( std::to_string( a + 1 ) );
    return out;
}


/// Random assumption over the given variables: 2-3 states, random moves,
/// nonempty accepting set.
inline Assumption random_assumption( Rng& rng, const std::vector< std::string >& vars )
{
    Domain dom( { "0", "1" } );
    ModuleBuilder b( "A", dom, vars, {} );
    int ns = uniform( rng, 2, 3 );
    for ( int s = 0; s < ns; ++s )
    {
        Valuation v;
        for ( const auto& x : vars )
            v[ x ] = s == 0 ? "0" : ( coin( rng ) ? "1" : "0" );
        b.add_state( "a" + std::to_string( s ), v );
    }
    b.set_init( 0 );
    for ( int s = 0; s < ns; ++s )
        if ( coin( rng, 0.7 ) )
        {
            int dst = uniform( rng, 0, ns - 2 );
            b.add_transition( "m" + std::to_string( s ), s, {}, dst >= s ? dst + 1 : dst );
        }
    Assumption a{ b.build(), std::vector< bool >( ns, false ) };
    for ( int s = 0; s < ns; ++s )
        a.accepting[ s ] = coin( rng );
    a.accepting[ uniform( rng, 0, ns - 1 ) ] = true;
    validate( a );
    return a;
}

inline bool is_probabilistic( Rule r ) { return r != Rule::Rk && r != Rule::Part; }
inline bool is_partition( Rule r ) { return r == Rule::Part || r == Rule::PPart; }

/// Random well-formed configuration of `rule` for `mas`.
inline AgConfig random_config( Rng& rng, const Mas& mas, Rule rule )
{
    AgConfig cfg;
    cfg.rule = rule;
    cfg.parallel = false;
    cfg.budget = 5000;
    int n = static_cast< int >( mas.size() );
    auto all = subsets( n );
    cfg.coalition = pick( rng, all );

    std::vector< std::vector< int > > groups;
    if ( is_partition( rule ) )
    {
        for ( int a : cfg.coalition )
            if ( groups.empty() || coin( rng ) )
                groups.push_back( { a } );
            else
                groups[ uniform( rng, 0, static_cast< int >( groups.size() ) - 1 ) ].push_back( a );
        for ( auto& gr : groups )
            std::sort( gr.begin(), gr.end() );
    }
    else
        for ( int a : cfg.coalition )
            groups.push_back( { a } );

    for ( const auto& gr : groups )
    {
        Unit u;
        u.agents = gr;
        u.k = coin( rng, 0.75 ) ? 1 : 2;
        std::vector< Formula > atoms = { mk_true() };
        for ( int a : gr )
            for ( const char* v : { "0", "1" } )
                atoms.push_back( mk_atom( { { var_of( a ), v } } ) );
        u.local = random_path( rng, atoms, false );
        int kind = uniform( rng, 0, 2 );
        if ( kind == 1 )
        {
            u.assumption = universal_assumption( mas.modules[ 0 ].domain );
            u.assumption_name = "universal";
        }
        else if ( kind == 2 )
        {
            std::vector< std::string > vars;
            for ( int b : neighborhood( mas, gr, u.k ) )
                if ( !std::count( gr.begin(), gr.end(), b ) )
                    vars.push_back( var_of( b ) );
            if ( vars.empty() )
            {
                u.assumption = universal_assumption( mas.modules[ 0 ].domain );
                u.assumption_name = "universal";
            }
            else
            {
                u.assumption = random_assumption( rng, vars );
                u.assumption_name = "random";
            }
        }
        cfg.units.push_back( std::move( u ) );
    }

    if ( is_probabilistic( rule ) )
    {
        cfg.global = random_path( rng, mas_atoms( mas ), false );
        static const std::vector< Rational > levels = { Rational( 0 ), Rational( 1, 4 ), Rational( 1, 3 ), Rational( 1, 2 ),
                                                        Rational( 2, 3 ), Rational( 3, 4 ), Rational( 1 ) };
        cfg.p = pick( rng, levels );
        cfg.p1 = pick( rng, levels );
        cfg.p2 = coin( rng ) ? Rational( 1 ) : pick( rng, levels );
        if ( cfg.p2 == 0 )
            cfg.p2 = 1;
        if ( cfg.p1 > cfg.p2 )
            std::swap( cfg.p1, cfg.p2 );
    }
    validate( mas, cfg );
    return cfg;
}

} // namespace sagv::test
