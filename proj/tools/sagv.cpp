// Command-line front end. Exit status: 0 verdict true / Concluded,
// 1 false / Inapplicable, 2 usage or model errors.

#include "sagv/io.hpp"
#include "sagv/oracle.hpp"
#include "sagv/report.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

using namespace sagv;

namespace
{

struct Common
{
    bool json = false;
    bool oracle = false;
    std::string view = "objective";
    int jobs = 0;
};

View view_of( const std::string& v )
{
    if ( v == "objective" )
        return View::Objective;
    if ( v == "subjective" )
        return View::Subjective;
    throw Error( ErrorKind::InvalidConfig, "view is objective or subjective" );
}

void emit( const Common& c, const Json& j, const std::string& text )
{
    if ( c.json )
        std::cout << j.dump( 2 ) << "\n";
    else
        std::cout << text;
}

// Oracle cross-check of a single flat modality; nullopt when it does not apply.
std::optional< bool > oracle_verdict( const Game& g, const Formula& f, View view )
{
    if ( f->op != Op::Coop || contains_coop( f->lhs ) || f->flavor == Flavor::Only )
        return std::nullopt;
    oracle::Options o;
    o.view = view;
    auto coalition = g.agent_indices( f->coalition );
    if ( f->bound )
        return oracle::brute_force_patl( g, g.init, coalition, *f->bound, f->lhs, o ).holds;
    return oracle::brute_force_atl( g, g.init, coalition, f->lhs, o ).holds;
}

int run_parse( const std::string& text, bool ast )
{
    Formula f = parse_formula( text );
    std::cout << to_string( f ) << "\n" << "fragment: " << fragment_name( classify( f ) ) << "\n";
    if ( ast )
        std::cout << dump_ast( f );
    return 0;
}

int run_compose( const std::string& file, const std::string& out )
{
    System s = load_system( file );
    const Mas* mas = std::get_if< Mas >( &s );
    if ( !mas )
        throw Error( ErrorKind::InvalidConfig, "compose takes a module file" );
    validate( *mas );
    Module m = compose_all( mas->modules );
    if ( out == "dot" )
        std::cout << to_dot( m );
    else if ( out == "text" )
        std::cout << to_text( m );
    else
        throw Error( ErrorKind::InvalidConfig, "--out is dot or text" );
    return 0;
}

int run_check( const Common& c, const std::string& file, const std::string& text, int memory,
               const std::string& witness_file, bool synthesize )
{
    System s = load_system( file );
    Game g = system_game( s );
    Formula f = parse_formula( text );
    View view = view_of( c.view );
    Json j = { { "formula", to_string( f ) }, { "fragment", fragment_name( classify( f ) ) } };
    std::ostringstream os;
    bool holds = false;
    std::optional< Strategy > witness;

    bool flat = f->op == Op::Coop && !contains_coop( f->lhs );
    if ( flat && !f->bound && f->flavor != Flavor::Prob )
    {
        QualOptions o;
        o.view = view;
        o.memory = memory;
        auto coalition = g.agent_indices( f->coalition );
        QualResult r = f->flavor == Flavor::Only ? check_only( g, g.init, coalition, f->lhs, o )
                                                 : check_coop( g, g.init, coalition, f->lhs, o );
        holds = r.holds;
        j[ "candidates" ] = r.candidates;
        if ( r.holds && !r.memory )
            witness = r.witness;
        if ( r.memory )
            j[ "memory" ] = r.memory->size;
    }
    else if ( flat && f->bound )
    {
        PatlOptions o;
        o.view = view;
        PatlResult r = check_patl( g, g.init, f, o );
        holds = r.holds;
        j[ "value" ] = to_string( r.value );
        j[ "candidates" ] = r.candidates;
        os << "value: " << to_string( r.value ) << "\n";
        witness = r.witness;
    }
    else
    {
        NestedResult r = verify_nested( g, f, view );
        holds = r.holds;
        j[ "nested" ] = nested_json( r, g );
    }

    j[ "holds" ] = holds;
    os << ( holds ? "true" : "false" ) << "\n";
    if ( witness )
    {
        j[ "witness" ] = strategy_json( g, *witness );
        if ( synthesize || !witness_file.empty() )
            os << to_text( g, *witness );
        if ( !witness_file.empty() )
        {
            std::ofstream out( witness_file );
            out << to_text( g, *witness );
        }
    }
    else if ( synthesize )
        os << "no strategy\n";
    if ( c.oracle )
    {
        auto o = oracle_verdict( g, f, view );
        if ( o )
        {
            j[ "oracle" ] = *o;
            os << "oracle: " << ( *o ? "true" : "false" ) << ( *o == holds ? " (agrees)" : " (DISAGREES)" ) << "\n";
            if ( *o != holds )
            {
                emit( c, j, os.str() );
                return 2;
            }
        }
    }
    emit( c, j, os.str() );
    return holds ? 0 : 1;
}

int run_prob( const Common& c, const std::string& file, const std::string& text, const std::string& opt )
{
    System s = load_system( file );
    Game g = system_game( s );
    Formula f = parse_formula( text );
    Json j = { { "formula", to_string( f ) } };
    std::ostringstream os;
    if ( f->op == Op::Coop && f->bound )
    {
        PatlOptions o;
        o.view = view_of( c.view );
        PatlResult r = check_patl( g, g.init, f, o );
        j[ "holds" ] = r.holds;
        j[ "value" ] = to_string( r.value );
        os << ( r.holds ? "true" : "false" ) << "\nvalue: " << to_string( r.value ) << "\n";
        if ( c.oracle )
        {
            oracle::Options oo;
            oo.view = o.view;
            auto orc = oracle::brute_force_patl( g, g.init, g.agent_indices( f->coalition ), *f->bound, f->lhs, oo );
            j[ "oracle_value" ] = to_string( orc.optimum );
            os << "oracle value: " << to_string( orc.optimum ) << "\n";
            if ( orc.holds != r.holds )
            {
                emit( c, j, os.str() );
                return 2;
            }
        }
        emit( c, j, os.str() );
        return r.holds ? 0 : 1;
    }
    Opt o = opt == "max" ? Opt::Max : Opt::Min;
    if ( opt != "min" && opt != "max" )
        throw Error( ErrorKind::InvalidConfig, "--opt is min or max" );
    Rational v = mdp_probability( game_mdp( g ), f, o );
    j[ opt ] = to_string( v );
    os << opt << " Pr = " << to_string( v ) << "\n";
    emit( c, j, os.str() );
    return 0;
}

int run_agv( const Common& c, const std::string& file, const std::string& config )
{
    System s = load_system( file );
    const Mas* mas = std::get_if< Mas >( &s );
    if ( !mas )
        throw Error( ErrorKind::InvalidConfig, "assume-guarantee rules take a module file" );
    AgConfig cfg = load_agv( config, *mas );
    if ( c.jobs == 1 )
        cfg.parallel = false;
    Verdict v = apply_rule( *mas, cfg );
    Game global = mas_game( *mas );
    Json j = verdict_json( v, global );
    std::string text = verdict_text( v );
    int code = v.concluded() ? 0 : 1;
    if ( c.oracle )
    {
        oracle::Options o;
        o.view = cfg.view;
        const Formula& k = v.conclusion;
        auto coalition = global.agent_indices( k->coalition );
        bool agrees;
        if ( k->bound )
        {
            auto r = oracle::brute_force_patl( global, global.init, coalition, *k->bound, k->lhs, o );
            j[ "oracle" ] = { { "holds", r.holds }, { "optimum", to_string( r.optimum ) } };
            text += "oracle: " + std::string( r.holds ? "true" : "false" ) + ", optimum " + to_string( r.optimum ) + "\n";
            agrees = r.holds || !v.concluded();
        }
        else
        {
            auto r = oracle::brute_force_atl( global, global.init, coalition, k->lhs, o );
            j[ "oracle" ] = { { "holds", r.holds } };
            text += "oracle: " + std::string( r.holds ? "true" : "false" ) + "\n";
            agrees = r.holds || !v.concluded();
        }
        if ( !agrees )
        {
            text += "oracle refutes the conclusion\n";
            code = 2;
        }
    }
    emit( c, j, text );
    return code;
}

// Manifest lines: COMMAND FILE EXPECT 'ARG' ...; paths relative to the manifest.
int run_fixtures( const Common& c, const std::string& manifest )
{
    std::ifstream in( manifest );
    if ( !in )
        throw Error( ErrorKind::InvalidConfig, "cannot read " + manifest );
    auto dir = std::filesystem::path( manifest ).parent_path();
    Json j = Json::array();
    int failures = 0;
    std::string line;
    std::ostringstream os;
    while ( std::getline( in, line ) )
    {
        if ( line.empty() || line[ 0 ] == '#' )
            continue;
        std::istringstream ls( line );
        std::string cmd, file, expect;
        ls >> cmd >> file >> expect;
        std::string arg;
        std::getline( ls, arg );
        auto l = arg.find( '\'' ), r = arg.rfind( '\'' );
        if ( l != std::string::npos && r > l )
            arg = arg.substr( l + 1, r - l - 1 );
        std::string path = ( dir / file ).string();
        std::string got;
        try
        {
            System s = load_system( path );
            if ( cmd == "check" )
            {
                Game g = system_game( s );
                got = evaluate_all( g, parse_formula( arg ) )[ g.init ] ? "true" : "false";
            }
            else if ( cmd == "agv" )
            {
                const Mas& mas = std::get< Mas >( s );
                got = apply_rule( mas, load_agv( ( dir / arg ).string(), mas ) ).concluded() ? "Concluded" : "Inapplicable";
            }
            else if ( cmd == "optimum" )
            {
                Game g = system_game( s );
                Formula f = parse_formula( arg );
                got = to_string( oracle::brute_force_patl( g, g.init, g.agent_indices( f->coalition ), *f->bound, f->lhs ).optimum );
            }
            else
                got = "unknown-command";
        }
        catch ( const Error& e )
        {
            got = std::string( "error:" ) + error_kind_name( e.kind() );
        }
        bool ok = got == expect;
        failures += ok ? 0 : 1;
        j.push_back( { { "command", cmd }, { "file", file }, { "arg", arg }, { "expected", expect }, { "got", got }, { "pass", ok } } );
        os << ( ok ? "PASS " : "FAIL " ) << cmd << " " << file << " '" << arg << "' expected " << expect << " got " << got << "\n";
    }
    emit( c, j, os.str() );
    return failures == 0 ? 0 : 1;
}

} // namespace

int main( int argc, char** argv )
{
    CLI::App app{ "sagv: strategic abilities of agents in composed stochastic systems" };
    app.require_subcommand( 1 );
    Common common;
    app.add_flag( "--json", common.json, "machine-readable output" );
    app.add_option( "--jobs", common.jobs, "1 disables parallel premise checking" );

    std::string formula, file, config, out = "text", opt = "min", witness_file, sem = "ir";
    bool ast = false;
    int memory = 1;

    auto* parse = app.add_subcommand( "parse", "parse a formula" );
    parse->add_option( "formula", formula )->required();
    parse->add_flag( "--dump-ast", ast );

    auto* compose = app.add_subcommand( "compose", "compose the modules of a system" );
    compose->add_option( "file", file )->required();
    compose->add_option( "--out", out, "dot or text" );

    auto add_check_options = [ & ]( CLI::App* sub ) {
        sub->add_option( "file", file )->required();
        sub->add_option( "--formula", formula )->required();
        sub->add_option( "--view", common.view, "objective or subjective" );
        sub->add_option( "--sem", sem, "ir (memoryless) or iR (bounded recall)" );
        sub->add_option( "--memory", memory, "memory states for iR" );
        sub->add_option( "--witness", witness_file, "write the witness strategy here" );
        sub->add_flag( "--oracle", common.oracle, "cross-check with the brute-force oracle" );
        sub->add_flag( "--json", common.json, "machine-readable output" );
    };
    auto* check = app.add_subcommand( "check", "model check a formula at the initial state" );
    add_check_options( check );
    auto* synth = app.add_subcommand( "synth", "synthesize a witness strategy" );
    add_check_options( synth );

    auto* prob = app.add_subcommand( "prob", "probabilities on the system's MDP" );
    prob->add_option( "file", file )->required();
    prob->add_option( "--formula", formula )->required();
    prob->add_option( "--opt", opt, "min or max for a path formula" );
    prob->add_option( "--view", common.view );
    prob->add_flag( "--oracle", common.oracle );
    prob->add_flag( "--json", common.json );

    auto* agv = app.add_subcommand( "agv", "apply an assume-guarantee rule" );
    agv->add_option( "system", file )->required();
    agv->add_option( "config", config )->required();
    agv->add_flag( "--oracle", common.oracle );
    agv->add_flag( "--json", common.json );

    auto* orc = app.add_subcommand( "oracle", "brute-force evaluation of a single modality" );
    orc->add_option( "file", file )->required();
    orc->add_option( "--formula", formula )->required();
    orc->add_option( "--view", common.view );
    orc->add_flag( "--json", common.json );

    auto* fixtures = app.add_subcommand( "fixtures", "run an expected-verdict manifest" );
    fixtures->add_option( "manifest", file )->required();
    fixtures->add_flag( "--json", common.json );

    try
    {
        app.parse( argc, argv );
    }
    catch ( const CLI::ParseError& e )
    {
        int code = app.exit( e );
        return code == 0 ? 0 : 2;
    }

    try
    {
        if ( *parse )
            return run_parse( formula, ast );
        if ( *compose )
            return run_compose( file, out );
        if ( *check || *synth )
        {
            if ( sem == "iR" && memory < 2 )
                memory = 2;
            else if ( sem != "ir" && sem != "iR" )
                throw Error( ErrorKind::InvalidConfig, "--sem is ir or iR" );
            return run_check( common, file, formula, memory, witness_file, synth->parsed() );
        }
        if ( *prob )
            return run_prob( common, file, formula, opt );
        if ( *agv )
            return run_agv( common, file, config );
        if ( *orc )
        {
            Game g = system_game( load_system( file ) );
            Formula f = parse_formula( formula );
            auto o = oracle_verdict( g, f, view_of( common.view ) );
            if ( !o )
                throw Error( ErrorKind::UnsupportedFormula, "the oracle takes one standard or bounded modality" );
            emit( common, { { "formula", to_string( f ) }, { "holds", *o } }, std::string( *o ? "true" : "false" ) + "\n" );
            return *o ? 0 : 1;
        }
        if ( *fixtures )
            return run_fixtures( common, file );
    }
    catch ( const Error& e )
    {
        std::cerr << "sagv: " << e.what() << "\n";
        return 2;
    }
    catch ( const std::exception& e )
    {
        std::cerr << "sagv: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
