#include "helpers.hpp"

#include <set>

using namespace sagv;
using namespace sagv::test;

namespace
{

Icgs two_state_game()
{
    return parse_icgs( R"(
icgs {
  agents {1};
  actions {l, r};
  states { u [], v [p] };
  legal u 1 {l, r};
  legal v 1 {l, r};
  trans u (l) -> u;  trans u (r) -> v;
  trans v (l) -> u;  trans v (r) -> v;
}
)" );
}

Strategy fixed_choice( const Game& g, int agent, int choice )
{
    Strategy s;
    s.agents = { agent };
    s.choice = { std::vector< int >( g.agents[ agent ].num_choices.size(), choice ) };
    return s;
}

std::vector< std::string > edge_keys( const Game& g )
{
    std::vector< std::string > out;
    for ( const auto& e : g.edges )
    {
        std::string k = g.states[ e.src ] + "|" + e.label + "|";
        for ( const auto& [ d, w ] : e.succ.support() )
            k += g.states[ d ] + ":" + to_string( w ) + ",";
        if ( e.stutter )
            k += "idle";
        out.push_back( k );
    }
    std::sort( out.begin(), out.end() );
    return out;
}

} // namespace

TEST_CASE( "strategy enumeration counts" )
{
    SUBCASE( "three rows at the initial state" )
    {
        Game g = fixture_game( "only_m.icgs" );
        int a = g.agent_index( "1" );
        std::size_t n = enumerate_ir( g, { a }, []( const Strategy& ) { return true; } );
        CHECK( n == 3 );
        CHECK( strategy_count( g, { a }, 100 ) == 3 );
    }
    SUBCASE( "singleton repertoires" )
    {
        Game g = fixture_game( "coin.icgs" );
        CHECK( enumerate_ir( g, { 0 }, []( const Strategy& ) { return true; } ) == 1 );
    }
    SUBCASE( "two states with two choices" )
    {
        Game g = icgs_game( two_state_game() );
        CHECK( enumerate_ir( g, { 0 }, []( const Strategy& ) { return true; } ) == 4 );
    }
}

TEST_CASE( "enumeration is exhaustive and duplicate-free" )
{
    Rng rng( 51 );
    for ( int i = 0; i < 60; ++i )
    {
        Game g = icgs_game( random_icgs( rng ) );
        for ( const auto& coalition : subsets( static_cast< int >( g.agents.size() ) ) )
        {
            std::size_t expected = 1;
            for ( int a : coalition )
                for ( int c : g.agents[ a ].num_choices )
                    expected *= static_cast< std::size_t >( c );
            std::set< std::vector< std::vector< int > > > seen;
            std::size_t n = enumerate_ir( g, coalition, [ & ]( const Strategy& s ) {
                validate( g, s );
                seen.insert( s.choice );
                // uniform by construction: equal observations get equal choices
                for ( int a : coalition )
                    for ( std::size_t q = 0; q < g.num_states(); ++q )
                        for ( std::size_t r = 0; r < g.num_states(); ++r )
                            if ( g.agents[ a ].obs[ q ] == g.agents[ a ].obs[ r ] )
                                CHECK( s.choice_at( g, a, static_cast< int >( q ) ) ==
                                       s.choice_at( g, a, static_cast< int >( r ) ) );
                return true;
            } );
            CHECK( n == expected );
            CHECK( seen.size() == expected );
            CHECK( strategy_count( g, coalition, 1000000 ) == expected );
        }
    }
}

TEST_CASE( "applying strategies" )
{
    SUBCASE( "singleton choices change nothing" )
    {
        Game g = fixture_game( "coin.icgs" );
        CHECK( edge_keys( apply( g, fixed_choice( g, 0, 0 ) ) ) == edge_keys( g ) );
    }
    SUBCASE( "row a at the initial state" )
    {
        Game g = fixture_game( "only_m.icgs" );
        int a = g.agent_index( "1" );
        Game r = apply( g, fixed_choice( g, a, 0 ) );
        std::size_t from_init = 0;
        for ( const auto& e : r.edges )
            if ( e.src == r.init )
            {
                ++from_init;
                CHECK( r.states[ e.succ.support().front().first ] == "s1" );
                CHECK( e.label.find( 'a' ) != std::string::npos );
            }
        CHECK( from_init == 2 );
    }
    SUBCASE( "module layer keeps the chosen transitions" )
    {
        Mas mas = parse_mas( R"(
domain {0, 1, 2}
module M { statevars {x}; states { q0 [x=0], q1 [x=1], q2 [x=2] };
  trans one: q0 -> q1;
  trans two: q0 -> q2;
  repertoire q0 { {one}, {two} }; }
)",
                             "inline" );
        Game g = mas_game( mas );
        Strategy s = fixed_choice( g, 0, 0 );
        s.choice[ 0 ][ g.agents[ 0 ].obs[ g.init ] ] = 1;
        Game r = apply( g, s );
        std::size_t from_init = 0;
        for ( const auto& e : r.edges )
            if ( e.src == r.init )
            {
                ++from_init;
                CHECK( r.label[ e.succ.support().front().first ].at( "x" ) == "2" );
            }
        CHECK( from_init == 1 );
    }
}

TEST_CASE( "apply is idempotent" )
{
    Rng rng( 52 );
    for ( int i = 0; i < 80; ++i )
    {
        Game g = coin( rng ) ? icgs_game( random_icgs( rng ) ) : mas_game( random_mas( rng ) );
        auto coalitions = subsets( static_cast< int >( g.agents.size() ) );
        auto coalition = pick( rng, coalitions );
        std::vector< Strategy > all;
        enumerate_ir( g, coalition, [ & ]( const Strategy& s ) {
            all.push_back( s );
            return all.size() < 50;
        } );
        const Strategy& s = pick( rng, all );
        Game once = apply( g, s );
        Game twice = apply( once, s );
        CHECK( edge_keys( once ) == edge_keys( twice ) );
    }
}

TEST_CASE( "outcomes" )
{
    SUBCASE( "row a on the only fixture" )
    {
        Game g = fixture_game( "only_m.icgs" );
        int a = g.agent_index( "1" );
        Outcome o = outcome( g, g.init, fixed_choice( g, a, 0 ), Level::Trace );
        int s1 = -1;
        for ( std::size_t q = 0; q < g.num_states(); ++q )
            if ( g.states[ q ] == "s1" )
                s1 = static_cast< int >( q );
        std::set< std::pair< int, int > > steps = { { g.init, s1 }, { s1, s1 } };
        CHECK( o.steps == steps );
        // (a,a) and (a,b) from init, the loop at s1
        CHECK( o.transitions.size() == 3 );
        CHECK_FALSE( o.idles );
    }
    SUBCASE( "empty coalition reaches everything" )
    {
        Game g = fixture_game( "only_m.icgs" );
        Outcome o = outcome( g, g.init, empty_strategy(), Level::Trace );
        CHECK( std::count( o.states.begin(), o.states.end(), true ) == 3 );
        CHECK( o.transitions.size() == g.edges.size() );
    }
    SUBCASE( "a full deterministic profile is a single lasso" )
    {
        Rng rng( 53 );
        for ( int i = 0; i < 30; ++i )
        {
            IcgsParams p;
            p.probabilistic = false;
            Game g = icgs_game( random_icgs( rng, p ) );
            std::vector< int > everyone( g.agents.size() );
            std::iota( everyone.begin(), everyone.end(), 0 );
            Strategy s;
            enumerate_ir( g, everyone, [ & ]( const Strategy& x ) {
                s = x;
                return false;
            } );
            Outcome o = outcome( g, g.init, s, Level::Path );
            std::map< int, int > succ_count;
            for ( const auto& [ a, b ] : o.steps )
                ++succ_count[ a ];
            for ( const auto& [ q, n ] : succ_count )
                CHECK( n == 1 );
        }
    }
}

TEST_CASE( "strategy tables round-trip" )
{
    Rng rng( 54 );
    for ( int i = 0; i < 50; ++i )
    {
        Game g = icgs_game( random_icgs( rng ) );
        std::vector< Strategy > all;
        enumerate_ir( g, { 0 }, [ & ]( const Strategy& s ) {
            all.push_back( s );
            return all.size() < 20;
        } );
        const Strategy& s = pick( rng, all );
        CHECK( parse_strategy( g, to_text( g, s ) ) == s );
    }
}

TEST_CASE( "bounded recall ignores repeated observations" )
{
    Game g = icgs_game( two_state_game() );
    std::size_t families = enumerate_memory( g, { 0 }, 2, [ & ]( const Memory& m ) {
        RecallGame rg = recall_product( g, m );
        // a step that keeps the observation keeps the memory
        for ( const auto& e : rg.game.edges )
            for ( const auto& [ d, w ] : e.succ.support() )
                if ( g.agents[ 0 ].obs[ rg.base_state[ e.src ] ] == g.agents[ 0 ].obs[ rg.base_state[ d ] ] )
                    CHECK( rg.memory[ e.src ] == rg.memory[ d ] );
        return true;
    } );
    // two memory states, two classes: 2^(2*2) update tables
    CHECK( families == 16 );
}
