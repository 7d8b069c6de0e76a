#include "helpers.hpp"
#include "sagv/oracle.hpp"

#include <cmath>

using namespace sagv;
using namespace sagv::test;

namespace
{

MarkovChain chain_of( const std::vector< std::vector< std::string > >& props,
                      const std::vector< std::vector< std::pair< int, Rational > > >& next )
{
    MarkovChain mc;
    for ( std::size_t s = 0; s < props.size(); ++s )
    {
        mc.states.push_back( "c" + std::to_string( s ) );
        Valuation v;
        for ( const char* p : { "goal", "a" } )
            v[ p ] = "false";
        for ( const auto& p : props[ s ] )
            v[ p ] = "true";
        mc.label.push_back( v );
        mc.next.push_back( Dist< int >::from( next[ s ] ) );
    }
    validate( mc );
    return mc;
}

Strategy profile_of( const Game& g, const std::vector< std::string >& actions_at_init )
{
    Strategy s;
    for ( std::size_t a = 0; a < g.agents.size(); ++a )
    {
        s.agents.push_back( static_cast< int >( a ) );
        const auto& ag = g.agents[ a ];
        std::vector< int > table( ag.num_choices.size(), 0 );
        int c = ag.obs[ g.init ];
        const auto& names = ag.choice_names[ c ];
        table[ c ] = static_cast< int >( std::find( names.begin(), names.end(), actions_at_init[ a ] ) - names.begin() );
        s.choice.push_back( table );
    }
    return s;
}

int state( const Game& g, const std::string& name )
{
    return static_cast< int >( std::find( g.states.begin(), g.states.end(), name ) - g.states.begin() );
}

std::vector< int > everyone( const Game& g )
{
    std::vector< int > out( g.agents.size() );
    std::iota( out.begin(), out.end(), 0 );
    return out;
}

Game random_prob_game( Rng& rng, bool perfect = false )
{
    IcgsParams p;
    p.perfect_information = perfect;
    return icgs_game( random_icgs( rng, p ) );
}

} // namespace

TEST_CASE( "induced chains" )
{
    SUBCASE( "coin" )
    {
        Game g = fixture_game( "coin.icgs" );
        MarkovChain mc = induce_mc( g, profile_of( g, { "toss" } ), g.init );
        REQUIRE( mc.states.size() == 3 );
        const auto& d = mc.next[ mc.init ];
        CHECK( d.size() == 2 );
        for ( const auto& [ s, w ] : d.support() )
        {
            CHECK( w == frac( 1, 2 ) );
            CHECK( mc.next[ s ].is_point_at( s ) );
        }
    }
    SUBCASE( "deterministic game" )
    {
        Game g = fixture_game( "crossed.icgs" );
        MarkovChain mc = induce_mc( g, profile_of( g, { "a", "b" } ), g.init );
        for ( const auto& d : mc.next )
            CHECK( d.is_point() );
    }
    SUBCASE( "two agents, hand table" )
    {
        Game g = fixture_game( "split_goals.icgs" );
        MarkovChain mc = induce_mc( g, profile_of( g, { "go", "go" } ), g.init );
        std::map< std::string, Rational > row;
        for ( const auto& [ s, w ] : mc.next[ mc.init ].support() )
            row[ mc.states[ s ] ] = w;
        std::map< std::string, Rational > expected = { { "g1", frac( 9, 20 ) }, { "g2", frac( 9, 20 ) },
                                                       { "lost", frac( 1, 10 ) } };
        CHECK( row == expected );
    }
    SUBCASE( "profiles must cover every agent" )
    {
        Game g = fixture_game( "split_goals.icgs" );
        Strategy half = profile_of( g, { "go", "go" } );
        half.agents.pop_back();
        half.choice.pop_back();
        CHECK( kind_of( [ & ] { induce_mc( g, half, g.init ); } ) == ErrorKind::InvalidConfig );
        Strategy wrong = profile_of( g, { "go", "go" } );
        wrong.choice[ 0 ][ g.agents[ 0 ].obs[ g.init ] ] = 5;
        CHECK( kind_of( [ & ] { induce_mc( g, wrong, g.init ); } ) == ErrorKind::IllegalAction );
    }
}

TEST_CASE( "induced chain weights follow the moves" )
{
    Rng rng( 71 );
    for ( int i = 0; i < 60; ++i )
    {
        Game g = random_prob_game( rng );
        Strategy s;
        enumerate_ir( g, everyone( g ), [ & ]( const Strategy& x ) {
            s = x;
            return coin( rng, 0.7 );
        } );
        MarkovChain mc = induce_mc( g, s, g.init );
        for ( std::size_t c = 0; c < mc.states.size(); ++c )
        {
            int q = state( g, mc.states[ c ] );
            REQUIRE( q < static_cast< int >( g.num_states() ) );
            // the edge chosen by the profile at q
            const GameEdge* chosen = nullptr;
            for ( int e : g.out[ q ] )
                if ( complies( g.edges[ e ], g, s ) )
                    chosen = &g.edges[ e ];
            REQUIRE( chosen );
            for ( const auto& [ d, w ] : mc.next[ c ].support() )
                CHECK( chosen->succ.weight( state( g, mc.states[ d ] ) ) == w );
        }
    }
}

TEST_CASE( "chain probabilities" )
{
    SUBCASE( "coin" )
    {
        Game g = fixture_game( "coin.icgs" );
        MarkovChain mc = induce_mc( g, profile_of( g, { "toss" } ), g.init );
        CHECK( mc_probability( mc, parse_formula( "F heads" ) ) == frac( 1, 2 ) );
    }
    SUBCASE( "two halves" )
    {
        MarkovChain mc = chain_of( { {}, {}, { "goal" }, {} },
                                   { { { 1, frac( 1, 2 ) }, { 3, frac( 1, 2 ) } },
                                     { { 2, frac( 1, 2 ) }, { 3, frac( 1, 2 ) } },
                                     { { 2, 1 } },
                                     { { 3, 1 } } } );
        CHECK( mc_probability( mc, parse_formula( "F goal" ) ) == frac( 1, 4 ) );
    }
    SUBCASE( "outside the fragment" )
    {
        MarkovChain mc = chain_of( { {} }, { { { 0, 1 } } } );
        CHECK( kind_of( [ & ] { mc_probability( mc, parse_formula( "G F a" ) ); } ) == ErrorKind::UnsupportedFormula );
    }
}

TEST_CASE( "eventually and its complement sum to one" )
{
    Rng rng( 72 );
    for ( int i = 0; i < 100; ++i )
    {
        MarkovChain mc = random_chain( rng );
        Rational f = mc_probability( mc, parse_formula( "F p" ) );
        Rational g = mc_probability( mc, parse_formula( "G !p" ) );
        CHECK( f + g == 1 );
        Rational u = mc_probability( mc, parse_formula( "p U q" ) );
        Rational r = mc_probability( mc, parse_formula( "!p R !q" ) );
        CHECK( u + r == 1 );
    }
}

TEST_CASE( "chain probabilities match sampling" )
{
    Rng rng( 73 );
    int within = 0, total = 0;
    for ( int i = 0; i < 20; ++i )
    {
        MarkovChain mc = random_chain( rng );
        Formula psi = random_path( rng, icgs_atoms(), true );
        double exact = mc_probability( mc, psi ).get_d();
        auto est = oracle::monte_carlo( mc, psi, 20000, 2000, 100 + i );
        ++total;
        within += std::abs( est.estimate - exact ) <= 3 * est.stderror + 1e-12 ? 1 : 0;
    }
    CHECK( within >= total - 1 );
}

TEST_CASE( "sampling a coin" )
{
    Game g = fixture_game( "coin.icgs" );
    MarkovChain mc = induce_mc( g, profile_of( g, { "toss" } ), g.init );
    auto est = oracle::monte_carlo( mc, parse_formula( "F heads" ), 100000, 100, 7 );
    CHECK( std::abs( est.estimate - 0.5 ) <= 3 * est.stderror );
}

TEST_CASE( "MDP optima" )
{
    SUBCASE( "single action is a chain" )
    {
        Rng rng( 74 );
        for ( int i = 0; i < 30; ++i )
        {
            MarkovChain mc = random_chain( rng );
            Mdp m;
            m.states = mc.states;
            m.label = mc.label;
            m.init = mc.init;
            for ( const auto& d : mc.next )
                m.actions.push_back( { { d, "only", {}, -1 } } );
            Formula psi = parse_formula( "p U q" );
            Rational v = mc_probability( mc, psi );
            CHECK( mdp_probability( m, psi, Opt::Min ) == v );
            CHECK( mdp_probability( m, psi, Opt::Max ) == v );
        }
    }
    SUBCASE( "sure and never" )
    {
        Mdp m;
        m.states = { "s", "goal", "sink" };
        m.label = { { { "goal", "false" } }, { { "goal", "true" } }, { { "goal", "false" } } };
        m.actions = { { { Dist< int >::point( 1 ), "win", {}, -1 }, { Dist< int >::point( 2 ), "lose", {}, -1 } },
                      { { Dist< int >::point( 1 ), "stay", {}, -1 } },
                      { { Dist< int >::point( 2 ), "stay", {}, -1 } } };
        validate( m );
        Formula psi = parse_formula( "F goal" );
        CHECK( mdp_probability( m, psi, Opt::Max ) == 1 );
        CHECK( mdp_probability( m, psi, Opt::Min ) == 0 );
    }
}

TEST_CASE( "exact optima match value iteration" )
{
    Rng rng( 75 );
    for ( int i = 0; i < 60; ++i )
    {
        IcgsParams p;
        p.max_states = 5;
        Mdp m = game_mdp( icgs_game( random_icgs( rng, p ) ) );
        Formula psi = random_path( rng, icgs_atoms(), true );
        for ( Opt opt : { Opt::Min, Opt::Max } )
        {
            double exact = mdp_probability( m, psi, opt ).get_d();
            auto vi = mdp_probability_vi( m, psi, opt, 1e-12 );
            CHECK( std::abs( exact - vi.value ) <= 1e-6 );
        }
    }
}

TEST_CASE( "PATL examples" )
{
    Game coin_game = fixture_game( "coin.icgs" );
    CHECK( check_patl( coin_game, coin_game.init, parse_formula( "<<1>>[>=1/2] F heads" ) ).holds );
    CHECK_FALSE( check_patl( coin_game, coin_game.init, parse_formula( "<<1>>[>1/2] F heads" ) ).holds );

    Game g = fixture_game( "split_goals.icgs" );
    auto one = check_patl( g, g.init, parse_formula( "<<1>>[>=9/20] F p1" ) );
    CHECK( one.holds );
    CHECK( one.value == frac( 9, 20 ) );
    CHECK_FALSE( check_patl( g, g.init, parse_formula( "<<1>>[>=9/10] F p1" ) ).holds );
    CHECK_FALSE( check_patl( g, g.init, parse_formula( "<<1,2>>[>0] (F p1 & F p2)" ) ).holds );
    auto joint = oracle::brute_force_patl( g, g.init, { 0, 1 }, { Cmp::Gt, 0 }, parse_formula( "F p1 & F p2" ) );
    CHECK( joint.optimum == 0 );
    CHECK_FALSE( joint.holds );
}

TEST_CASE( "empty coalition is the P operator" )
{
    Rng rng( 76 );
    for ( int i = 0; i < 80; ++i )
    {
        Game g = random_prob_game( rng );
        Formula psi = random_path( rng, icgs_atoms(), true );
        Bound b{ static_cast< Cmp >( uniform( rng, 0, 3 ) ), frac( uniform( rng, 0, 8 ), 8 ) };
        Formula coop = mk_coop( {}, psi, Flavor::Standard, b );
        Formula prob = mk_coop( {}, psi, Flavor::Prob, b );
        auto a = evaluate_all( g, coop ), c = evaluate_all( g, prob );
        CHECK( a == c );
        CHECK( a[ g.init ] == check_probability( g, g.init, b, psi ) );
    }
}

TEST_CASE( "PATL agrees with the oracle" )
{
    Rng rng( 77 );
    for ( int i = 0; i < 100; ++i )
    {
        Game g = random_prob_game( rng );
        auto coalitions = subsets( static_cast< int >( g.agents.size() ) );
        auto coalition = pick( rng, coalitions );
        Formula psi = random_path( rng, icgs_atoms(), true );
        Bound b{ static_cast< Cmp >( uniform( rng, 0, 3 ) ), frac( uniform( rng, 0, 8 ), 8 ) };
        View view = coin( rng ) ? View::Objective : View::Subjective;
        PatlOptions po;
        po.view = view;
        oracle::Options oo;
        oo.view = view;
        auto r = check_patl( g, g.init, mk_coop( ids_of( coalition ), psi, Flavor::Standard, b ), po );
        auto o = oracle::brute_force_patl( g, g.init, coalition, b, psi, oo );
        CHECK_MESSAGE( r.holds == o.holds, to_string( psi ) );
        if ( r.holds && r.witness )
            CHECK( b.holds( strategy_value( g, g.init, *r.witness, psi, b, po ) ) );
    }
}

TEST_CASE( "bounds are monotone and views coincide under perfect information" )
{
    Rng rng( 78 );
    for ( int i = 0; i < 60; ++i )
    {
        Game g = random_prob_game( rng, true );
        Formula psi = random_path( rng, icgs_atoms(), true );
        auto coalition = pick( rng, subsets( static_cast< int >( g.agents.size() ) ) );
        Rational d = frac( uniform( rng, 0, 8 ), 8 );
        Formula hi = mk_coop( ids_of( coalition ), psi, Flavor::Standard, Bound{ Cmp::Ge, d } );
        bool holds = check_patl( g, g.init, hi ).holds;
        if ( holds )
            for ( int k = 0; k * 8 <= d * 64; ++k )
                CHECK( check_patl( g, g.init, mk_coop( ids_of( coalition ), psi, Flavor::Standard,
                                                       Bound{ Cmp::Ge, frac( k, 64 ) } ) )
                           .holds );
        PatlOptions sub;
        sub.view = View::Subjective;
        CHECK( check_patl( g, g.init, hi, sub ).holds == holds );
    }
}

TEST_CASE( "qualitative projection" )
{
    SUBCASE( "point distributions keep the graph" )
    {
        Game g = fixture_game( "crossed.icgs" );
        CHECK( project_qualitative( g ).edges.size() == g.edges.size() );
    }
    SUBCASE( "the coin branches" )
    {
        Game g = project_qualitative( fixture_game( "coin.icgs" ) );
        std::set< int > targets;
        for ( int e : g.out[ g.init ] )
        {
            CHECK( g.edges[ e ].succ.is_point() );
            targets.insert( g.edges[ e ].succ.support().front().first );
        }
        CHECK( targets.size() == 2 );
    }
    SUBCASE( "sure safety is almost-sure safety" )
    {
        Rng rng( 79 );
        int sure = 0;
        for ( int i = 0; i < 100; ++i )
        {
            Game g = random_prob_game( rng );
            auto coalition = pick( rng, subsets( static_cast< int >( g.agents.size() ), true ) );
            Formula psi = mk_always( random_state( rng, icgs_atoms() ) );
            if ( !check_coop( project_qualitative( g ), g.init, coalition, psi ).holds )
                continue;
            ++sure;
            CHECK( check_patl( g, g.init, mk_coop( ids_of( coalition ), psi, Flavor::Standard, Bound{ Cmp::Ge, 1 } ) )
                       .holds );
        }
        CHECK( sure > 5 );
    }
}
