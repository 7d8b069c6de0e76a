#include "sagv/strategy.hpp"

#include <deque>
#include <map>
#include <sstream>

namespace sagv
{

int Strategy::member( int agent ) const
{
    auto it = std::lower_bound( agents.begin(), agents.end(), agent );
    if ( it == agents.end() || *it != agent )
        return -1;
    return static_cast< int >( it - agents.begin() );
}

int Strategy::choice_at( const Game& g, int agent, int state ) const
{
    int k = member( agent );
    if ( k < 0 )
        return -1;
    return choice[ k ][ g.agents[ agent ].obs[ state ] ];
}

void validate( const Game& g, const Strategy& s )
{
    if ( s.agents.size() != s.choice.size() || !std::is_sorted( s.agents.begin(), s.agents.end() )
         || std::adjacent_find( s.agents.begin(), s.agents.end() ) != s.agents.end() )
        throw Error( ErrorKind::InvalidConfig, "malformed joint strategy" );
    for ( std::size_t k = 0; k < s.agents.size(); ++k )
    {
        int a = s.agents[ k ];
        if ( a < 0 || a >= static_cast< int >( g.agents.size() ) )
            throw Error( ErrorKind::UnknownAgent, "strategy for agent " + std::to_string( a ) );
        const auto& ag = g.agents[ a ];
        if ( s.choice[ k ].size() != ag.num_choices.size() )
            throw Error( ErrorKind::InvalidConfig, "strategy of agent " + ag.id + " misses classes" );
        for ( std::size_t c = 0; c < ag.num_choices.size(); ++c )
            if ( s.choice[ k ][ c ] < 0 || s.choice[ k ][ c ] >= ag.num_choices[ c ] )
                throw Error( ErrorKind::IllegalAction, "choice out of range for agent " + ag.id );
    }
}

Strategy empty_strategy()
{
    return {};
}

std::size_t strategy_count( const Game& g, const std::vector< int >& agents, std::size_t cap )
{
    std::size_t n = 1;
    for ( int a : agents )
        for ( int c : g.agents[ a ].num_choices )
        {
            if ( n > ( cap + 1 ) / static_cast< std::size_t >( c ) )
                return cap + 1;
            n *= static_cast< std::size_t >( c );
        }
    return std::min( n, cap + 1 );
}

std::size_t enumerate_ir( const Game& g, const std::vector< int >& agents,
                          const std::function< bool( const Strategy& ) >& visit )
{
    Strategy s;
    s.agents = agents;
    std::sort( s.agents.begin(), s.agents.end() );
    s.agents.erase( std::unique( s.agents.begin(), s.agents.end() ), s.agents.end() );
    std::vector< std::pair< int, int > > slots;
    for ( std::size_t k = 0; k < s.agents.size(); ++k )
    {
        const auto& ag = g.agents.at( s.agents[ k ] );
        s.choice.emplace_back( ag.num_choices.size(), 0 );
        for ( std::size_t c = 0; c < ag.num_choices.size(); ++c )
            slots.emplace_back( static_cast< int >( k ), static_cast< int >( c ) );
    }
    std::size_t visited = 0;
    while ( true )
    {
        ++visited;
        if ( !visit( s ) )
            return visited;
        std::size_t i = slots.size();
        while ( i > 0 )
        {
            auto [ k, c ] = slots[ i - 1 ];
            if ( ++s.choice[ k ][ c ] < g.agents[ s.agents[ k ] ].num_choices[ c ] )
                break;
            s.choice[ k ][ c ] = 0;
            --i;
        }
        if ( i == 0 )
            return visited;
    }
}

bool complies( const GameEdge& e, const Game& g, const Strategy& s )
{
    for ( std::size_t k = 0; k < s.agents.size(); ++k )
    {
        int a = s.agents[ k ];
        int c = s.choice[ k ][ g.agents[ a ].obs[ e.src ] ];
        if ( !( e.allow[ a ] >> c & 1 ) )
            return false;
    }
    return true;
}

std::vector< bool > compliant_edges( const Game& g, const Strategy& s )
{
    std::vector< bool > out( g.edges.size() );
    for ( std::size_t i = 0; i < g.edges.size(); ++i )
        out[ i ] = complies( g.edges[ i ], g, s );
    return out;
}

namespace
{

std::uint64_t all_bits( int n )
{
    return n >= 64 ? ~std::uint64_t{ 0 } : ( ( std::uint64_t{ 1 } << n ) - 1 );
}

// Whether some choice profile of the non-members at q admits none of the
// given edges.
bool some_profile_blocked( const Game& g, int q, const std::vector< int >& kept, const Strategy& s )
{
    std::vector< int > others;
    for ( std::size_t a = 0; a < g.agents.size(); ++a )
        if ( s.member( static_cast< int >( a ) ) < 0 )
            others.push_back( static_cast< int >( a ) );
    if ( kept.empty() )
        return true;
    std::vector< int > pick( others.size(), 0 );
    while ( true )
    {
        bool served = false;
        for ( int e : kept )
        {
            bool ok = true;
            for ( std::size_t j = 0; j < others.size() && ok; ++j )
                ok = g.edges[ e ].allow[ others[ j ] ] >> pick[ j ] & 1;
            if ( ok )
            {
                served = true;
                break;
            }
        }
        if ( !served )
            return true;
        std::size_t j = others.size();
        while ( j > 0 )
        {
            const auto& ag = g.agents[ others[ j - 1 ] ];
            if ( ++pick[ j - 1 ] < ag.num_choices[ ag.obs[ q ] ] )
                break;
            pick[ j - 1 ] = 0;
            --j;
        }
        if ( j == 0 )
            return false;
    }
}

} // namespace

Game apply( const Game& g, const Strategy& s )
{
    validate( g, s );
    Game r = g;
    r.edges.clear();
    for ( std::size_t q = 0; q < g.states.size(); ++q )
    {
        std::map< int, std::vector< int > > kept;
        std::set< int > envs;
        for ( int e : g.out[ q ] )
        {
            envs.insert( g.edges[ e ].env );
            if ( complies( g.edges[ e ], g, s ) )
                kept[ g.edges[ e ].env ].push_back( e );
        }
        for ( int e : g.out[ q ] )
            if ( complies( g.edges[ e ], g, s ) )
            {
                GameEdge f = g.edges[ e ];
                f.origin = e;
                r.edges.push_back( std::move( f ) );
            }
        for ( int env : envs )
            if ( some_profile_blocked( g, static_cast< int >( q ), kept[ env ], s ) )
            {
                GameEdge f;
                f.src = static_cast< int >( q );
                f.env = env;
                f.succ = Dist< int >::point( f.src );
                f.label = ( env < static_cast< int >( g.env_names.size() ) ? g.env_names[ env ] : "" ) + " idle";
                f.stutter = true;
                f.origin = -1;
                for ( const auto& a : g.agents )
                {
                    f.allow.push_back( all_bits( a.num_choices[ a.obs[ q ] ] ) );
                    f.moving.push_back( false );
                }
                r.edges.push_back( std::move( f ) );
            }
    }
    r.rebuild_index();
    return r;
}

Strategy combine( const Strategy& a, const Strategy& b )
{
    std::map< int, std::vector< int > > parts;
    for ( std::size_t k = 0; k < a.agents.size(); ++k )
        parts[ a.agents[ k ] ] = a.choice[ k ];
    for ( std::size_t k = 0; k < b.agents.size(); ++k )
        if ( !parts.emplace( b.agents[ k ], b.choice[ k ] ).second )
            throw Error( ErrorKind::InvalidConfig, "strategies overlap on agent " + std::to_string( b.agents[ k ] ) );
    Strategy s;
    for ( auto& [ agent, choice ] : parts )
    {
        s.agents.push_back( agent );
        s.choice.push_back( choice );
    }
    return s;
}

Outcome outcome( const Game& g, int q, const Strategy& s, Level level )
{
    Game r = apply( g, s );
    Outcome o;
    o.level = level;
    o.states.assign( g.states.size(), false );
    std::vector< int > stack{ q };
    o.states[ q ] = true;
    while ( !stack.empty() )
    {
        int v = stack.back();
        stack.pop_back();
        for ( int e : r.out[ v ] )
        {
            const auto& edge = r.edges[ e ];
            if ( edge.origin < 0 || edge.stutter )
                o.idles = true;
            else
                o.transitions.insert( edge.origin );
            for ( const auto& [ x, w ] : edge.succ.support() )
            {
                o.steps.emplace( v, x );
                if ( !o.states[ x ] )
                {
                    o.states[ x ] = true;
                    stack.push_back( x );
                }
            }
        }
    }
    return o;
}

std::string to_text( const Game& g, const Strategy& s )
{
    std::ostringstream os;
    for ( std::size_t k = 0; k < s.agents.size(); ++k )
    {
        const auto& ag = g.agents[ s.agents[ k ] ];
        for ( std::size_t c = 0; c < s.choice[ k ].size(); ++c )
            os << ag.id << ' ' << ag.class_names[ c ] << ' ' << ag.choice_names[ c ][ s.choice[ k ][ c ] ] << '\n';
    }
    return os.str();
}

namespace
{

int resolve( const std::vector< std::string >& names, const std::string& token, const std::string& what )
{
    for ( std::size_t i = 0; i < names.size(); ++i )
        if ( names[ i ] == token )
            return static_cast< int >( i );
    if ( !token.empty() && std::all_of( token.begin(), token.end(), []( char ch ) { return std::isdigit( static_cast< unsigned char >( ch ) ); } ) )
    {
        int i = std::stoi( token );
        if ( i < static_cast< int >( names.size() ) )
            return i;
    }
    throw Error( ErrorKind::SyntaxError, "unknown " + what + " '" + token + "'" );
}

} // namespace

Strategy parse_strategy( const Game& g, const std::string& text )
{
    std::map< int, std::vector< int > > table;
    std::istringstream in( text );
    std::string line;
    int lineno = 0;
    while ( std::getline( in, line ) )
    {
        ++lineno;
        auto hash = line.find( '#' );
        if ( hash != std::string::npos )
            line.erase( hash );
        std::istringstream ls( line );
        std::string id, cls, choice, extra;
        if ( !( ls >> id ) )
            continue;
        if ( !( ls >> cls >> choice ) || ( ls >> extra ) )
            throw Error( ErrorKind::SyntaxError, "line " + std::to_string( lineno ) + ": expected 'agent class choice'" );
        int a = g.agent_index( id );
        const auto& ag = g.agents[ a ];
        auto& row = table.try_emplace( a, std::vector< int >( ag.num_choices.size(), -1 ) ).first->second;
        int c = resolve( ag.class_names, cls, "class" );
        row[ c ] = resolve( ag.choice_names[ c ], choice, "choice" );
    }
    Strategy s;
    for ( auto& [ a, row ] : table )
    {
        for ( std::size_t c = 0; c < row.size(); ++c )
            if ( row[ c ] < 0 )
                throw Error( ErrorKind::SyntaxError, "no choice for agent " + g.agents[ a ].id + " at " + g.agents[ a ].class_names[ c ] );
        s.agents.push_back( a );
        s.choice.push_back( row );
    }
    validate( g, s );
    return s;
}

RecallGame recall_product( const Game& g, const Memory& m, const std::vector< int >& starts )
{
    if ( m.size < 1 || m.update.size() != m.agents.size() )
        throw Error( ErrorKind::InvalidConfig, "malformed memory" );
    RecallGame rg;
    Game& p = rg.game;
    p.layer = g.layer;
    p.num_envs = g.num_envs;
    p.env_names = g.env_names;
    p.fair = g.fair;
    p.agents = g.agents;
    std::vector< int > member( g.agents.size(), -1 );
    for ( std::size_t k = 0; k < m.agents.size(); ++k )
    {
        int a = m.agents[ k ];
        member[ a ] = static_cast< int >( k );
        auto& ag = p.agents[ a ];
        ag.obs.clear();
        ag.num_choices.clear();
        ag.choice_names.clear();
        ag.class_names.clear();
        for ( std::size_t c = 0; c < g.agents[ a ].num_choices.size(); ++c )
            for ( int mem = 0; mem < m.size; ++mem )
            {
                ag.num_choices.push_back( g.agents[ a ].num_choices[ c ] );
                ag.choice_names.push_back( g.agents[ a ].choice_names[ c ] );
                ag.class_names.push_back( g.agents[ a ].class_names[ c ] + "/" + std::to_string( mem ) );
            }
    }
    for ( auto& ag : p.agents )
        ag.obs.clear();

    std::map< std::pair< int, std::vector< int > >, int > index;
    std::deque< int > queue;
    auto node = [ & ]( int q, const std::vector< int >& mv ) {
        auto [ it, fresh ] = index.emplace( std::make_pair( q, mv ), static_cast< int >( rg.base_state.size() ) );
        if ( fresh )
        {
            rg.base_state.push_back( q );
            rg.memory.push_back( mv );
            std::string name = g.states[ q ] + "/";
            for ( std::size_t k = 0; k < mv.size(); ++k )
                name += ( k ? "." : "" ) + std::to_string( mv[ k ] );
            p.states.push_back( name );
            p.label.push_back( g.label[ q ] );
            if ( g.has_acceptance() )
                p.accepting.push_back( g.accepting[ q ] );
            for ( std::size_t a = 0; a < g.agents.size(); ++a )
            {
                int cls = g.agents[ a ].obs[ q ];
                p.agents[ a ].obs.push_back( member[ a ] < 0 ? cls : cls * m.size + mv[ member[ a ] ] );
            }
            queue.push_back( it->second );
        }
        return it->second;
    };
    for ( int q : starts.empty() ? std::vector< int >{ g.init } : starts )
        rg.start_nodes.push_back( node( q, std::vector< int >( m.agents.size(), 0 ) ) );
    p.init = rg.start_nodes.front();
    while ( !queue.empty() )
    {
        int v = queue.front();
        queue.pop_front();
        int q = rg.base_state[ v ];
        std::vector< int > mv = rg.memory[ v ];
        for ( int e : g.out[ q ] )
        {
            GameEdge f = g.edges[ e ];
            f.src = v;
            f.origin = e;
            f.succ = g.edges[ e ].succ.map( [ & ]( int x ) {
                std::vector< int > next = mv;
                for ( std::size_t k = 0; k < m.agents.size(); ++k )
                {
                    const auto& obs = g.agents[ m.agents[ k ] ].obs;
                    if ( obs[ x ] != obs[ q ] )
                        next[ k ] = m.update[ k ][ mv[ k ] ][ obs[ x ] ];
                }
                return node( x, next );
            } );
            p.edges.push_back( std::move( f ) );
        }
    }
    p.rebuild_index();
    return rg;
}

std::size_t enumerate_memory( const Game& g, const std::vector< int >& agents, int size,
                              const std::function< bool( const Memory& ) >& visit )
{
    Memory m;
    m.size = size;
    m.agents = agents;
    std::vector< std::tuple< int, int, int > > slots;
    for ( std::size_t k = 0; k < agents.size(); ++k )
    {
        int classes = static_cast< int >( g.agents[ agents[ k ] ].num_choices.size() );
        m.update.emplace_back( size, std::vector< int >( classes, 0 ) );
        for ( int mem = 0; mem < size; ++mem )
            for ( int c = 0; c < classes; ++c )
                slots.emplace_back( static_cast< int >( k ), mem, c );
    }
    std::size_t visited = 0;
    while ( true )
    {
        ++visited;
        if ( !visit( m ) )
            return visited;
        std::size_t i = slots.size();
        while ( i > 0 )
        {
            auto [ k, mem, c ] = slots[ i - 1 ];
            if ( ++m.update[ k ][ mem ][ c ] < size )
                break;
            m.update[ k ][ mem ][ c ] = 0;
            --i;
        }
        if ( i == 0 )
            return visited;
    }
}

} // namespace sagv
