#include "sagv/compose.hpp"

#include <map>
#include <set>
#include <sstream>
#include <tuple>

namespace sagv
{

int Mas::agent_index( const std::string& name ) const
{
    if ( !name.empty() && std::all_of( name.begin(), name.end(), []( char c ) { return c >= '0' && c <= '9'; } ) )
    {
        int i = std::stoi( name );
        if ( i >= 1 && i <= static_cast< int >( modules.size() ) )
            return i - 1;
    }
    for ( std::size_t i = 0; i < modules.size(); ++i )
        if ( modules[ i ].name == name )
            return static_cast< int >( i );
    throw Error( ErrorKind::UnknownAgent, "no agent '" + name + "'" );
}

void validate( const Mas& mas )
{
    if ( mas.modules.empty() )
        throw Error( ErrorKind::EmptyList, "system without modules" );
    if ( mas.repertoires.size() != mas.modules.size() )
        throw Error( ErrorKind::InvalidModel, "one repertoire per module is required" );
    for ( std::size_t i = 0; i < mas.modules.size(); ++i )
    {
        validate( mas.modules[ i ] );
        validate( mas.repertoires[ i ], mas.modules[ i ] );
        for ( std::size_t j = i + 1; j < mas.modules.size(); ++j )
        {
            if ( !var_intersection( mas.modules[ i ].state_vars, mas.modules[ j ].state_vars ).empty() )
                throw Error( ErrorKind::NotAsynchronous,
                             mas.modules[ i ].name + " and " + mas.modules[ j ].name + " share state variables" );
            if ( !( mas.modules[ i ].domain == mas.modules[ j ].domain ) )
                throw Error( ErrorKind::InvalidModel, "modules use different domains" );
        }
    }
}

namespace
{

std::string state_name( const std::vector< Component >& comps, int q )
{
    if ( comps.size() == 1 )
        return comps[ 0 ].local_names[ comps[ 0 ].local[ q ] ];
    std::string s = "(";
    for ( std::size_t c = 0; c < comps.size(); ++c )
    {
        if ( c )
            s += ",";
        s += comps[ c ].local_names[ comps[ c ].local[ q ] ];
    }
    return s + ")";
}

using EdgeKey = std::tuple< int, Valuation, Dist< int >, std::vector< std::pair< int, int > > >;

EdgeKey key_of( const Transition& t )
{
    std::vector< std::pair< int, int > > movers;
    for ( std::size_t c = 0; c < t.moving.size(); ++c )
        if ( t.moving[ c ] )
            movers.emplace_back( static_cast< int >( c ), t.actors[ c ] );
    return { t.src, t.input, t.succ, movers };
}

} // namespace

Module compose2( const Module& m1, const Module& m2 )
{
    if ( !var_intersection( m1.state_vars, m2.state_vars ).empty() )
        throw Error( ErrorKind::NotAsynchronous, m1.name + " and " + m2.name + " share state variables" );
    if ( !( m1.domain == m2.domain ) )
        throw Error( ErrorKind::InvalidModel, m1.name + " and " + m2.name + " use different domains" );

    Module m;
    m.name = m1.name + "|" + m2.name;
    m.domain = m1.domain;
    m.state_vars = var_union( m1.state_vars, m2.state_vars );
    m.input_vars = var_difference( var_union( m1.input_vars, m2.input_vars ), m.state_vars );

    int n1 = static_cast< int >( m1.num_states() );
    int n2 = static_cast< int >( m2.num_states() );
    auto idx = [ n2 ]( int a, int b ) { return a * n2 + b; };

    m.components = m1.components;
    m.components.insert( m.components.end(), m2.components.begin(), m2.components.end() );
    for ( auto& c : m.components )
        c.local.assign( static_cast< std::size_t >( n1 * n2 ), 0 );
    std::size_t c1 = m1.components.size();
    for ( int a = 0; a < n1; ++a )
        for ( int b = 0; b < n2; ++b )
        {
            for ( std::size_t c = 0; c < c1; ++c )
                m.components[ c ].local[ idx( a, b ) ] = m1.components[ c ].local[ a ];
            for ( std::size_t c = 0; c < m2.components.size(); ++c )
                m.components[ c1 + c ].local[ idx( a, b ) ] = m2.components[ c ].local[ b ];
        }
    m.base_trans = m1.base_trans;
    m.base_trans.insert( m.base_trans.end(), m2.base_trans.begin(), m2.base_trans.end() );

    for ( int a = 0; a < n1; ++a )
        for ( int b = 0; b < n2; ++b )
        {
            m.label.push_back( merge( m1.label[ a ], m2.label[ b ] ) );
            m.states.push_back( state_name( m.components, idx( a, b ) ) );
        }
    m.init = idx( m1.init, m2.init );

    std::vector< std::vector< int > > from1( n1 ), from2( n2 );
    for ( std::size_t i = 0; i < m1.trans.size(); ++i )
        from1[ m1.trans[ i ].src ].push_back( static_cast< int >( i ) );
    for ( std::size_t i = 0; i < m2.trans.size(); ++i )
        from2[ m2.trans[ i ].src ].push_back( static_cast< int >( i ) );

    std::set< EdgeKey > seen;
    std::vector< Transition > raw;
    auto emit = [ & ]( Transition t ) {
        if ( seen.insert( key_of( t ) ).second )
            raw.push_back( std::move( t ) );
    };
    std::size_t comps = m.components.size();
    for ( int a = 0; a < n1; ++a )
        for ( int b = 0; b < n2; ++b )
            for ( int i1 : from1[ a ] )
                for ( int i2 : from2[ b ] )
                {
                    const auto& t1 = m1.trans[ i1 ];
                    const auto& t2 = m2.trans[ i2 ];
                    if ( !compatible( t1.input, t2.input ) || !compatible( m1.label[ a ], t2.input )
                         || !compatible( m2.label[ b ], t1.input ) )
                        continue;
                    Valuation alpha = restrict_to( merge( t1.input, t2.input ), m.input_vars );

                    Transition base;
                    base.src = idx( a, b );
                    base.input = alpha;
                    base.actors.assign( comps, -1 );
                    base.moving.assign( comps, false );

                    Transition left = base;
                    left.tag = RuleTag::AsynL;
                    left.name = t1.name;
                    left.succ = t1.succ.map( [ & ]( int x ) { return idx( x, b ); } );
                    std::copy( t1.actors.begin(), t1.actors.end(), left.actors.begin() );
                    std::copy( t1.moving.begin(), t1.moving.end(), left.moving.begin() );
                    emit( left );

                    Transition right = base;
                    right.tag = RuleTag::AsynR;
                    right.name = t2.name;
                    right.succ = t2.succ.map( [ & ]( int y ) { return idx( a, y ); } );
                    std::copy( t2.actors.begin(), t2.actors.end(), right.actors.begin() + static_cast< long >( c1 ) );
                    std::copy( t2.moving.begin(), t2.moving.end(), right.moving.begin() + static_cast< long >( c1 ) );
                    emit( right );

                    Transition syn = base;
                    syn.tag = RuleTag::Syn;
                    syn.name = t1.name + "+" + t2.name;
                    syn.succ = product_dist( { t1.succ, t2.succ } ).map(
                        [ & ]( const std::vector< int >& xy ) { return idx( xy[ 0 ], xy[ 1 ] ); } );
                    std::copy( t1.actors.begin(), t1.actors.end(), syn.actors.begin() );
                    std::copy( t1.moving.begin(), t1.moving.end(), syn.moving.begin() );
                    std::copy( t2.actors.begin(), t2.actors.end(), syn.actors.begin() + static_cast< long >( c1 ) );
                    std::copy( t2.moving.begin(), t2.moving.end(), syn.moving.begin() + static_cast< long >( c1 ) );
                    emit( syn );
                }

    // Drop self-loops next to a real move for the same state and input.
    std::set< std::pair< int, Valuation > > moves;
    for ( const auto& t : raw )
        if ( !t.is_self_loop() )
            moves.emplace( t.src, t.input );
    std::set< std::pair< int, Valuation > > covered;
    for ( auto& t : raw )
    {
        if ( t.is_self_loop() && moves.count( { t.src, t.input } ) )
            continue;
        covered.emplace( t.src, t.input );
        m.trans.push_back( std::move( t ) );
    }
    auto inputs = all_valuations( m.input_vars, m.domain );
    for ( int q = 0; q < n1 * n2; ++q )
        for ( const auto& alpha : inputs )
            if ( !covered.count( { q, alpha } ) )
            {
                Transition t;
                t.src = q;
                t.input = alpha;
                t.succ = Dist< int >::point( q );
                t.tag = RuleTag::Implicit;
                t.name = "implicit";
                t.actors.assign( comps, -1 );
                t.moving.assign( comps, false );
                m.trans.push_back( std::move( t ) );
            }
    validate( m );
    return m;
}

Module compose_all( const std::vector< Module >& ms )
{
    if ( ms.empty() )
        throw Error( ErrorKind::EmptyList, "nothing to compose" );
    Module m = ms.front();
    for ( std::size_t i = 1; i < ms.size(); ++i )
        m = compose2( m, ms[ i ] );
    return m;
}

Assumption compose_with_assumption( const Module& m, const Assumption& a )
{
    Module env = a.module;
    for ( auto& c : env.components )
        c.environment = true;
    Assumption out;
    out.module = compose2( m, env );
    int n2 = static_cast< int >( env.num_states() );
    out.accepting.resize( out.module.num_states() );
    for ( std::size_t q = 0; q < out.module.num_states(); ++q )
        out.accepting[ q ] = a.accepting[ static_cast< int >( q ) % n2 ];
    return out;
}

namespace
{

using StateKey = std::vector< std::pair< std::string, std::string > >;

StateKey state_key( const Module& m, int q )
{
    StateKey k;
    for ( const auto& c : m.components )
        if ( c.local_names.size() > 1 )
            k.emplace_back( c.name, c.local_names[ c.local[ q ] ] );
    std::sort( k.begin(), k.end() );
    return k;
}

using TransKey = std::tuple< int, Valuation, Dist< int >, std::vector< std::pair< std::string, int > > >;

std::vector< TransKey > transition_keys( const Module& m, const std::vector< int >& map )
{
    std::vector< TransKey > out;
    for ( const auto& t : m.trans )
    {
        std::vector< std::pair< std::string, int > > movers;
        for ( std::size_t c = 0; c < t.moving.size(); ++c )
            if ( t.moving[ c ] )
                movers.emplace_back( m.components[ c ].name, t.actors[ c ] );
        std::sort( movers.begin(), movers.end() );
        out.emplace_back( map[ t.src ], t.input, t.succ.map( [ & ]( int x ) { return map[ x ]; } ), movers );
    }
    std::sort( out.begin(), out.end() );
    return out;
}

} // namespace

std::optional< std::vector< int > > find_isomorphism( const Module& a, const Module& b )
{
    if ( a.num_states() != b.num_states() || a.state_vars != b.state_vars || a.input_vars != b.input_vars )
        return std::nullopt;
    std::map< StateKey, int > in_b;
    for ( std::size_t q = 0; q < b.num_states(); ++q )
        if ( !in_b.emplace( state_key( b, static_cast< int >( q ) ), static_cast< int >( q ) ).second )
            return std::nullopt;
    std::vector< int > map( a.num_states() );
    for ( std::size_t q = 0; q < a.num_states(); ++q )
    {
        auto it = in_b.find( state_key( a, static_cast< int >( q ) ) );
        if ( it == in_b.end() )
            return std::nullopt;
        map[ q ] = it->second;
        if ( a.label[ q ] != b.label[ it->second ] )
            return std::nullopt;
    }
    if ( map[ a.init ] != b.init )
        return std::nullopt;
    std::vector< int > identity( b.num_states() );
    std::iota( identity.begin(), identity.end(), 0 );
    if ( transition_keys( a, map ) != transition_keys( b, identity ) )
        return std::nullopt;
    return map;
}

namespace
{

bool linked( const Module& a, const Module& b )
{
    return !var_intersection( a.input_vars, b.state_vars ).empty()
           || !var_intersection( b.input_vars, a.state_vars ).empty();
}

} // namespace

std::vector< int > neighborhood( const Mas& mas, const std::vector< int >& seed, int k )
{
    if ( k < 1 )
        throw Error( ErrorKind::InvalidConfig, "neighbourhood radius must be at least 1" );
    if ( seed.empty() )
        throw Error( ErrorKind::EmptyList, "empty neighbourhood seed" );
    int n = static_cast< int >( mas.size() );
    for ( int s : seed )
        if ( s < 0 || s >= n )
            throw Error( ErrorKind::UnknownAgent, "agent " + std::to_string( s + 1 ) + " does not exist" );
    std::set< int > in_seed( seed.begin(), seed.end() );
    std::set< int > frontier = in_seed;
    std::set< int > result;
    for ( int step = 0; step < k; ++step )
    {
        std::set< int > next;
        for ( int i : frontier )
            for ( int j = 0; j < n; ++j )
                if ( j != i && !in_seed.count( j ) && !result.count( j ) && linked( mas.modules[ i ], mas.modules[ j ] ) )
                    next.insert( j );
        if ( next.empty() )
            break;
        result.insert( next.begin(), next.end() );
        frontier = next;
    }
    return { result.begin(), result.end() };
}

Module compose_agents( const Mas& mas, const std::vector< int >& agents )
{
    if ( agents.empty() )
        return unit_module( mas.modules.at( 0 ).domain );
    std::vector< Module > ms;
    for ( int a : agents )
        ms.push_back( mas.modules.at( a ) );
    return compose_all( ms );
}

namespace
{

std::string dist_text( const Module& m, const Dist< int >& d )
{
    if ( d.is_point() )
        return m.states[ d.support().front().first ];
    std::string s = "{ ";
    bool first = true;
    for ( const auto& [ x, w ] : d.support() )
    {
        if ( !first )
            s += ", ";
        first = false;
        s += to_string( w ) + ": " + m.states[ x ];
    }
    return s + " }";
}

std::string escape( const std::string& s )
{
    std::string out;
    for ( char c : s )
    {
        if ( c == '"' || c == '\\' )
            out += '\\';
        out += c;
    }
    return out;
}

} // namespace

std::string to_text( const Module& m )
{
    std::ostringstream os;
    os << "module " << m.name << "\n";
    os << "  statevars {";
    for ( std::size_t i = 0; i < m.state_vars.size(); ++i )
        os << ( i ? ", " : " " ) << m.state_vars[ i ];
    os << " }\n  inputvars {";
    for ( std::size_t i = 0; i < m.input_vars.size(); ++i )
        os << ( i ? ", " : " " ) << m.input_vars[ i ];
    os << " }\n";
    for ( std::size_t q = 0; q < m.num_states(); ++q )
        os << "  state " << m.states[ q ] << " " << to_string( m.label[ q ] )
           << ( static_cast< int >( q ) == m.init ? " init" : "" ) << "\n";
    for ( const auto& t : m.trans )
        os << "  " << m.states[ t.src ] << " -" << to_string( t.input ) << "-> " << dist_text( m, t.succ ) << "  ("
           << rule_tag_name( t.tag ) << ")\n";
    return os.str();
}

std::string to_dot( const Module& m )
{
    std::ostringstream os;
    os << "digraph \"" << escape( m.name ) << "\" {\n";
    os << "  __init [shape=point];\n";
    for ( std::size_t q = 0; q < m.num_states(); ++q )
        os << "  s" << q << " [label=\"" << escape( m.states[ q ] + "\\n" + to_string( m.label[ q ] ) ) << "\"];\n";
    os << "  __init -> s" << m.init << ";\n";
    for ( const auto& t : m.trans )
    {
        for ( const auto& [ x, w ] : t.succ.support() )
        {
            std::string lab = to_string( t.input ) + " " + rule_tag_name( t.tag );
            if ( !t.succ.is_point() )
                lab += " " + to_string( w );
            os << "  s" << t.src << " -> s" << x << " [label=\"" << escape( lab ) << "\""
               << ( t.tag == RuleTag::Implicit ? ", style=dashed" : "" ) << "];\n";
        }
    }
    os << "}\n";
    return os.str();
}

} // namespace sagv
