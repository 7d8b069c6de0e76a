#include "sagv/game.hpp"

#include <set>

namespace sagv
{

int Icgs::agent_index( const std::string& name ) const
{
    for ( std::size_t i = 0; i < agents.size(); ++i )
        if ( agents[ i ] == name )
            return static_cast< int >( i );
    throw Error( ErrorKind::UnknownAgent, "no agent '" + name + "'" );
}

int Icgs::state_index( const std::string& name ) const
{
    for ( std::size_t i = 0; i < states.size(); ++i )
        if ( states[ i ] == name )
            return static_cast< int >( i );
    return -1;
}

Valuation Icgs::label( int q ) const
{
    Valuation v;
    for ( const auto& p : propositions )
        v[ p ] = "false";
    for ( const auto& p : props[ q ] )
        v[ p ] = "true";
    return v;
}

void validate( const Icgs& g )
{
    std::size_t n = g.states.size();
    std::size_t k = g.agents.size();
    if ( n == 0 || k == 0 )
        throw Error( ErrorKind::InvalidModel, "iCGS needs states and agents" );
    if ( g.init < 0 || g.init >= static_cast< int >( n ) )
        throw Error( ErrorKind::InvalidModel, "iCGS initial state missing" );
    if ( g.legal.size() != n || g.trans.size() != n || g.props.size() != n || g.obs.size() != k )
        throw Error( ErrorKind::InvalidModel, "iCGS tables have the wrong size" );
    for ( std::size_t a = 0; a < k; ++a )
        if ( g.obs[ a ].size() != n )
            throw Error( ErrorKind::InvalidModel, "observation of agent " + g.agents[ a ] + " not total" );
    for ( std::size_t q = 0; q < n; ++q )
    {
        if ( g.legal[ q ].size() != k )
            throw Error( ErrorKind::InvalidModel, "legal actions missing at " + g.states[ q ] );
        std::size_t moves = 1;
        for ( std::size_t a = 0; a < k; ++a )
        {
            if ( g.legal[ q ][ a ].empty() )
                throw Error( ErrorKind::InvalidModel,
                             "agent " + g.agents[ a ] + " has no legal action at " + g.states[ q ] );
            moves *= g.legal[ q ][ a ].size();
            for ( std::size_t r = 0; r < n; ++r )
                if ( g.obs[ a ][ q ] == g.obs[ a ][ r ] && g.legal[ q ][ a ] != g.legal[ r ][ a ] )
                    throw Error( ErrorKind::InvalidModel, "agent " + g.agents[ a ] + " distinguishes " + g.states[ q ]
                                                              + " and " + g.states[ r ] + " by its actions" );
        }
        if ( g.trans[ q ].size() != moves )
            throw Error( ErrorKind::InvalidModel, "transition function not total at " + g.states[ q ] );
        for ( const auto& [ move, d ] : g.trans[ q ] )
        {
            if ( move.size() != k )
                throw Error( ErrorKind::InvalidModel, "malformed move at " + g.states[ q ] );
            for ( std::size_t a = 0; a < k; ++a )
                if ( move[ a ] < 0 || move[ a ] >= static_cast< int >( g.legal[ q ][ a ].size() ) )
                    throw Error( ErrorKind::IllegalAction, "illegal action at " + g.states[ q ] );
            if ( !d.is_valid() )
                throw Error( ErrorKind::InvalidModel, "improper distribution at " + g.states[ q ] );
            for ( const auto& [ x, w ] : d.support() )
                if ( x < 0 || x >= static_cast< int >( n ) )
                    throw Error( ErrorKind::InvalidModel, "successor out of range at " + g.states[ q ] );
        }
    }
}

int Game::agent_index( const std::string& id ) const
{
    for ( std::size_t i = 0; i < agents.size(); ++i )
        if ( agents[ i ].id == id )
            return static_cast< int >( i );
    for ( std::size_t i = 0; i < agents.size(); ++i )
        if ( agents[ i ].name == id )
            return static_cast< int >( i );
    throw Error( ErrorKind::UnknownAgent, "no agent '" + id + "'" );
}

std::vector< int > Game::agent_indices( const std::vector< std::string >& ids ) const
{
    std::vector< int > out;
    for ( const auto& id : ids )
        out.push_back( agent_index( id ) );
    std::sort( out.begin(), out.end() );
    out.erase( std::unique( out.begin(), out.end() ), out.end() );
    return out;
}

bool Game::perfect_information() const
{
    for ( const auto& a : agents )
    {
        std::set< int > classes( a.obs.begin(), a.obs.end() );
        if ( classes.size() != states.size() )
            return false;
    }
    return true;
}

void Game::rebuild_index()
{
    out.assign( states.size(), {} );
    for ( std::size_t e = 0; e < edges.size(); ++e )
        out[ edges[ e ].src ].push_back( static_cast< int >( e ) );
}

namespace
{

std::uint64_t all_bits( int n )
{
    return n >= 64 ? ~std::uint64_t{ 0 } : ( ( std::uint64_t{ 1 } << n ) - 1 );
}

} // namespace

Game module_game( const Module& m, const std::vector< AgentSpec >& specs, std::vector< bool > accepting )
{
    Game g;
    g.layer = Layer::Modules;
    g.states = m.states;
    g.label = m.label;
    g.init = m.init;
    g.accepting = std::move( accepting );

    auto inputs = all_valuations( m.input_vars, m.domain );
    std::map< Valuation, int > env_of;
    for ( std::size_t i = 0; i < inputs.size(); ++i )
    {
        env_of[ inputs[ i ] ] = static_cast< int >( i );
        g.env_names.push_back( to_string( inputs[ i ] ) );
    }
    g.num_envs = static_cast< int >( inputs.size() );

    for ( const auto& spec : specs )
    {
        const auto& comp = m.components.at( spec.component );
        const auto& rep = *spec.repertoire;
        GameAgent a;
        a.id = spec.id;
        a.name = comp.name;
        a.obs = comp.local;
        a.class_names = comp.local_names;
        for ( std::size_t l = 0; l < comp.local_names.size(); ++l )
        {
            if ( rep.choices.at( l ).size() > 64 )
                throw Error( ErrorKind::InvalidModel, "more than 64 choices at " + comp.local_names[ l ] );
            a.num_choices.push_back( static_cast< int >( rep.choices[ l ].size() ) );
            std::vector< std::string > names;
            for ( const auto& choice : rep.choices[ l ] )
            {
                std::string s = "{";
                for ( std::size_t i = 0; i < choice.size(); ++i )
                    s += ( i ? "," : "" ) + m.base_trans[ spec.component ][ choice[ i ] ].name;
                names.push_back( s + "}" );
            }
            a.choice_names.push_back( std::move( names ) );
        }
        g.agents.push_back( std::move( a ) );
    }
    g.fair.assign( g.agents.size(), true );

    std::set< std::pair< int, int > > covered;
    for ( const auto& t : m.trans )
    {
        GameEdge e;
        e.src = t.src;
        e.env = env_of.at( t.input );
        e.succ = t.succ;
        e.label = to_string( t.input ) + " " + rule_tag_name( t.tag ) + " " + t.name;
        bool possible = true;
        for ( std::size_t k = 0; k < specs.size(); ++k )
        {
            int c = specs[ k ].component;
            const auto& rep = *specs[ k ].repertoire;
            int local = m.components[ c ].local[ t.src ];
            const auto& choices = rep.choices[ local ];
            bool moving = t.moving[ c ];
            std::uint64_t mask = 0;
            if ( !moving )
                mask = all_bits( static_cast< int >( choices.size() ) );
            else
                for ( std::size_t i = 0; i < choices.size(); ++i )
                    if ( std::binary_search( choices[ i ].begin(), choices[ i ].end(), t.actors[ c ] ) )
                        mask |= std::uint64_t{ 1 } << i;
            if ( mask == 0 )
                possible = false;
            e.allow.push_back( mask );
            e.moving.push_back( moving );
        }
        if ( !possible )
            continue;
        covered.emplace( e.src, e.env );
        g.edges.push_back( std::move( e ) );
    }
    for ( std::size_t q = 0; q < g.states.size(); ++q )
        for ( int env = 0; env < g.num_envs; ++env )
            if ( !covered.count( { static_cast< int >( q ), env } ) )
            {
                GameEdge e;
                e.src = static_cast< int >( q );
                e.env = env;
                e.succ = Dist< int >::point( e.src );
                e.label = g.env_names[ env ] + " idle";
                e.stutter = true;
                for ( const auto& a : g.agents )
                {
                    e.allow.push_back( all_bits( a.num_choices[ a.obs[ q ] ] ) );
                    e.moving.push_back( false );
                }
                g.edges.push_back( std::move( e ) );
            }
    for ( std::size_t i = 0; i < g.edges.size(); ++i )
        g.edges[ i ].origin = static_cast< int >( i );
    g.rebuild_index();
    return g;
}

Game mas_game( const Mas& mas )
{
    validate( mas );
    Module m = compose_all( mas.modules );
    std::vector< AgentSpec > specs;
    for ( std::size_t i = 0; i < mas.size(); ++i )
        specs.push_back( { static_cast< int >( i ), std::to_string( i + 1 ), &mas.repertoires[ i ] } );
    return module_game( m, specs );
}

Game icgs_game( const Icgs& ic )
{
    validate( ic );
    Game g;
    g.layer = Layer::Icgs;
    g.states = ic.states;
    for ( std::size_t q = 0; q < ic.states.size(); ++q )
        g.label.push_back( ic.label( static_cast< int >( q ) ) );
    g.init = ic.init;
    g.env_names = { "" };
    for ( std::size_t a = 0; a < ic.agents.size(); ++a )
    {
        GameAgent ga;
        ga.id = ic.agents[ a ];
        ga.name = ic.agents[ a ];
        // Renumber classes densely in order of first appearance.
        std::map< int, int > dense;
        for ( std::size_t q = 0; q < ic.states.size(); ++q )
        {
            auto [ it, fresh ] = dense.emplace( ic.obs[ a ][ q ], static_cast< int >( dense.size() ) );
            ga.obs.push_back( it->second );
            if ( fresh )
            {
                ga.num_choices.push_back( static_cast< int >( ic.legal[ q ][ a ].size() ) );
                ga.choice_names.push_back( ic.legal[ q ][ a ] );
                ga.class_names.push_back( ic.states[ q ] );
            }
            else
                ga.class_names[ it->second ] += "~" + ic.states[ q ];
        }
        g.agents.push_back( std::move( ga ) );
    }
    g.fair.assign( g.agents.size(), false );
    for ( std::size_t q = 0; q < ic.states.size(); ++q )
        for ( const auto& [ move, d ] : ic.trans[ q ] )
        {
            GameEdge e;
            e.src = static_cast< int >( q );
            e.succ = d;
            std::string lab = "(";
            for ( std::size_t a = 0; a < move.size(); ++a )
            {
                if ( move[ a ] >= 64 )
                    throw Error( ErrorKind::InvalidModel, "more than 64 actions" );
                e.allow.push_back( std::uint64_t{ 1 } << move[ a ] );
                e.moving.push_back( false );
                lab += ( a ? "," : "" ) + ic.legal[ q ][ a ][ move[ a ] ];
            }
            e.label = lab + ")";
            e.origin = static_cast< int >( g.edges.size() );
            g.edges.push_back( std::move( e ) );
        }
    g.rebuild_index();
    return g;
}

Game project_qualitative( const Game& g )
{
    Game out = g;
    out.edges.clear();
    for ( std::size_t i = 0; i < g.edges.size(); ++i )
        for ( const auto& [ x, w ] : g.edges[ i ].succ.support() )
        {
            GameEdge f = g.edges[ i ];
            f.succ = Dist< int >::point( x );
            f.origin = static_cast< int >( i );
            out.edges.push_back( std::move( f ) );
        }
    out.rebuild_index();
    return out;
}

} // namespace sagv
