#include "helpers.hpp"

using namespace sagv;
using namespace sagv::test;

namespace
{

Module one_bit( const std::string& name, const std::string& var, const std::vector< std::string >& inputs = {} )
{
    ModuleBuilder b( name, Domain( { "0", "1" } ), { var }, inputs );
    int q0 = b.add_state( "q0", { { var, "0" } } );
    int q1 = b.add_state( "q1", { { var, "1" } } );
    b.set_init( q0 );
    b.add_transition( "up", q0, {}, q1 );
    b.add_transition( "down", q1, {}, q0 );
    return b.build();
}

Word word_of( std::vector< std::string > prefix, std::vector< std::string > cycle )
{
    Word w;
    for ( auto& v : prefix )
        w.prefix.push_back( { { "x", v } } );
    for ( auto& v : cycle )
        w.cycle.push_back( { { "x", v } } );
    return w;
}

} // namespace

TEST_CASE( "compatible valuations" )
{
    CHECK( compatible( { { "x", "1" } }, { { "y", "0" } } ) );
    CHECK( compatible( { { "x", "1" }, { "y", "0" } }, { { "y", "0" } } ) );
    CHECK_FALSE( compatible( { { "x", "1" }, { "y", "0" } }, { { "y", "1" } } ) );
}

TEST_CASE( "merge valuations" )
{
    Valuation xy = { { "x", "1" }, { "y", "0" } };
    CHECK( merge( { { "x", "1" } }, { { "y", "0" } } ) == xy );
    CHECK( merge( xy, { { "y", "0" } } ) == xy );
    CHECK( kind_of( [ & ] { merge( xy, { { "y", "1" } } ); } ) == ErrorKind::IncompatibleValuations );
}

TEST_CASE( "merge restricts back to its arguments" )
{
    Rng rng( 11 );
    std::vector< std::string > vars = { "a", "b", "c", "d" };
    for ( int i = 0; i < 300; ++i )
    {
        Valuation r1, r2;
        for ( auto& v : vars )
        {
            if ( coin( rng ) )
                r1[ v ] = coin( rng ) ? "1" : "0";
            if ( coin( rng ) )
                r2[ v ] = coin( rng ) ? "1" : "0";
        }
        bool agree = true;
        for ( auto& [ k, v ] : r1 )
            if ( r2.count( k ) && r2.at( k ) != v )
                agree = false;
        REQUIRE( compatible( r1, r2 ) == agree );
        if ( !agree )
            continue;
        Valuation m = merge( r1, r2 );
        CHECK( restrict_to( m, vars_of( r1 ) ) == r1 );
        CHECK( restrict_to( m, vars_of( r2 ) ) == r2 );
    }
}

TEST_CASE( "module validation" )
{
    SUBCASE( "single state with implicit loops" )
    {
        ModuleBuilder b( "U", Domain( { "0", "1" } ), { "x" }, { "y" } );
        b.set_init( b.add_state( "q", { { "x", "0" } } ) );
        Module m = b.build();
        CHECK( m.trans.size() == 2 );
        for ( const auto& t : m.trans )
            CHECK( t.is_self_loop() );
    }
    SUBCASE( "missing successor" )
    {
        Module m = one_bit( "M", "x" );
        m.trans.erase( m.trans.begin() );
        CHECK( kind_of( [ & ] { validate( m ); } ) == ErrorKind::MissingTransition );
    }
    SUBCASE( "self-loop beside a proper move" )
    {
        Module m = one_bit( "M", "x" );
        Transition loop = m.trans.front();
        loop.succ = Dist< int >::point( loop.src );
        loop.tag = RuleTag::Implicit;
        m.trans.push_back( loop );
        CHECK( kind_of( [ & ] { validate( m ); } ) == ErrorKind::ForbiddenSelfLoop );
    }
}

TEST_CASE( "curtailment" )
{
    SUBCASE( "stutter compression" )
    {
        auto c = curtail( word_of( { "0", "0", "1", "1" }, { "0" } ), { "x" } );
        CHECK( same_word( c.word, word_of( { "0", "1" }, { "0" } ) ) );
        CHECK( c.changes.at( 0 ) == 0 );
        CHECK( c.changes.at( 1 ) == 2 );
        CHECK( c.changes.at( 2 ) == 4 );
    }
    SUBCASE( "already stutter-free" )
    {
        Word w = word_of( { "0" }, { "1", "0" } );
        auto c = curtail( w, { "x" } );
        CHECK( same_word( c.word, w ) );
        for ( std::size_t i = 0; i < 6; ++i )
            CHECK( c.changes.at( i ) == i );
    }
    SUBCASE( "constant word" )
    {
        auto c = curtail( word_of( { "1", "1" }, { "1" } ), { "x" } );
        CHECK( c.word.horizon() == 1 );
        CHECK( c.changes.at( 0 ) == 0 );
    }
}

TEST_CASE( "curtailment is idempotent and keeps the blocks" )
{
    Rng rng( 12 );
    for ( int i = 0; i < 300; ++i )
    {
        Word w;
        int np = uniform( rng, 0, 4 ), nc = uniform( rng, 1, 4 );
        auto letter = [ & ] {
            return Valuation{ { "x", coin( rng ) ? "1" : "0" }, { "y", coin( rng ) ? "1" : "0" } };
        };
        for ( int k = 0; k < np; ++k )
            w.prefix.push_back( letter() );
        for ( int k = 0; k < nc; ++k )
            w.cycle.push_back( letter() );
        VarSet y = coin( rng ) ? VarSet{ "x" } : VarSet{ "x", "y" };
        auto c = curtail( w, y );
        auto again = curtail( c.word, y );
        CHECK( same_word( again.word, c.word ) );
        // every block of the source word matches its letter
        for ( std::size_t b = 0; b < 8; ++b )
            for ( std::size_t k = c.changes.at( b ); k < c.changes.at( b + 1 ); ++k )
                CHECK( restrict_to( w.at( k ), y ) == c.word.at( b ) );
    }
}

TEST_CASE( "derived and admitted words" )
{
    SUBCASE( "one state" )
    {
        ModuleBuilder b( "U", Domain( { "0", "1" } ), { "x" }, {} );
        b.set_init( b.add_state( "q", { { "x", "1" } } ) );
        Module m = b.build();
        Trace t;
        t.cycle = { { 0, {} } };
        check_trace( m, t );
        CHECK( same_word( derived_word( m, t ), Word{ {}, { { { "x", "1" } } } } ) );
    }
    SUBCASE( "alternating" )
    {
        Module m = one_bit( "M", "x" );
        Trace t;
        t.cycle = { { 0, {} }, { 1, {} } };
        check_trace( m, t );
        CHECK( same_word( derived_word( m, t ), word_of( {}, { "0", "1" } ) ) );
    }
    SUBCASE( "not a trace" )
    {
        Module m = one_bit( "M", "x" );
        Trace t;
        t.cycle = { { 0, {} } };
        CHECK( kind_of( [ & ] { check_trace( m, t ); } ) == ErrorKind::NotATrace );
    }
    SUBCASE( "composed two-bit system" )
    {
        Mas mas = fixture_mas( "two_bit.mas" );
        Module c = compose_all( mas.modules );
        int s00 = -1, s01 = -1, s11 = -1;
        for ( std::size_t q = 0; q < c.num_states(); ++q )
        {
            auto l = c.label[ q ];
            if ( l[ "x" ] == "0" && l[ "y" ] == "0" )
                s00 = static_cast< int >( q );
            if ( l[ "x" ] == "0" && l[ "y" ] == "1" )
                s01 = static_cast< int >( q );
            if ( l[ "x" ] == "1" && l[ "y" ] == "1" )
                s11 = static_cast< int >( q );
        }
        REQUIRE( ( s00 >= 0 && s01 >= 0 && s11 >= 0 ) );
        Trace t;
        t.prefix = { { s00, {} }, { s01, {} } };
        t.cycle = { { s11, {} } };
        check_trace( c, t );
        Word d = derived_word( c, t );
        CHECK( d.at( 0 ) == Valuation{ { "x", "0" }, { "y", "0" } } );
        CHECK( d.at( 1 ) == Valuation{ { "x", "0" }, { "y", "1" } } );
        CHECK( d.at( 5 ) == Valuation{ { "x", "1" }, { "y", "1" } } );
        CHECK( admitted_word( c, t ).at( 0 ).empty() );
    }
}

TEST_CASE( "derived words follow the labels on random traces" )
{
    Rng rng( 13 );
    for ( int i = 0; i < 50; ++i )
    {
        Mas mas = random_mas( rng );
        Module c = compose_all( mas.modules );
        // walk a random lasso
        std::vector< TraceStep > steps;
        std::map< int, std::size_t > seen;
        int q = c.init;
        Valuation in;
        while ( true )
        {
            auto ts = c.transitions_from( q );
            const auto& t = c.trans[ pick( rng, ts ) ];
            if ( seen.count( q ) && coin( rng, 0.5 ) )
                break;
            seen[ q ] = steps.size();
            steps.push_back( { q, t.input } );
            q = t.succ.support().front().first;
            if ( steps.size() > 12 )
                break;
        }
        if ( !seen.count( q ) )
            continue;
        // close the lasso only through a real transition into q
        Trace t;
        t.prefix.assign( steps.begin(), steps.begin() + seen[ q ] );
        t.cycle.assign( steps.begin() + seen[ q ], steps.end() );
        bool ok = true;
        try
        {
            check_trace( c, t );
        }
        catch ( const Error& )
        {
            ok = false;
        }
        if ( !ok )
            continue;
        Word d = derived_word( c, t );
        for ( std::size_t k = 0; k < t.horizon() + 3; ++k )
            CHECK( d.at( k ) == c.label[ t.at( k ).state ] );
    }
}

TEST_CASE( "probabilistic transitions" )
{
    ModuleBuilder b( "P", Domain( { "0", "1" } ), { "x" }, {} );
    int q0 = b.add_state( "q0", { { "x", "0" } } );
    int q1 = b.add_state( "q1", { { "x", "1" } } );
    b.set_init( q0 );
    b.add_prob_transition( "flip", q0, {}, { { q0, Rational( 1, 2 ) }, { q1, Rational( 1, 2 ) } } );
    Module m = b.build();
    bool found = false;
    for ( const auto& t : m.trans )
        if ( t.src == q0 && t.succ.size() == 2 )
        {
            found = true;
            CHECK( t.succ.is_valid() );
            CHECK( t.succ.weight( q1 ) == Rational( 1, 2 ) );
        }
    CHECK( found );
}

TEST_CASE( "distribution products" )
{
    auto a = Dist< int >::from( { { 0, Rational( 1, 2 ) }, { 1, Rational( 1, 2 ) } } );
    auto b = Dist< int >::from( { { 2, Rational( 1, 2 ) }, { 3, Rational( 1, 2 ) } } );
    auto p = product_dist( { a, b } );
    CHECK( p.size() == 4 );
    for ( const auto& [ x, w ] : p.support() )
        CHECK( w == Rational( 1, 4 ) );
    CHECK( p.total() == 1 );
    auto pp = product_dist( { Dist< int >::point( 4 ), Dist< int >::point( 5 ) } );
    CHECK( pp.is_point_at( { 4, 5 } ) );
    CHECK( kind_of( [] { product_dist( {} ); } ) == ErrorKind::EmptyList );
}

TEST_CASE( "rationals parse exactly" )
{
    CHECK( parse_rational( "3/4" ) == Rational( 3, 4 ) );
    CHECK( parse_rational( "0.75" ) == Rational( 3, 4 ) );
    CHECK( parse_rational( "1" ) == 1 );
    CHECK( to_string( parse_rational( "6/8" ) ) == "3/4" );
}
