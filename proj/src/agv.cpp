#include "sagv/agv.hpp"

#include <future>
#include <map>
#include <sstream>

namespace sagv
{

// ---------------------------------------------------------------------------
// guarantee M ⊨ A

namespace
{

std::map< Valuation, int > index_of( const std::vector< Valuation >& vs )
{
    std::map< Valuation, int > idx;
    for ( std::size_t i = 0; i < vs.size(); ++i )
        idx[ vs[ i ] ] = static_cast< int >( i );
    return idx;
}

// One choice per local state with every explicit base transition.
std::vector< Repertoire > full_repertoires( const Module& m )
{
    std::vector< Repertoire > reps;
    for ( std::size_t c = 0; c < m.components.size(); ++c )
    {
        Repertoire r;
        r.choices.resize( m.components[ c ].local_names.size() );
        const auto& base = m.base_trans[ c ];
        for ( std::size_t l = 0; l < r.choices.size(); ++l )
        {
            std::vector< int > explicit_ts, all;
            for ( std::size_t i = 0; i < base.size(); ++i )
                if ( base[ i ].src == static_cast< int >( l ) )
                {
                    all.push_back( static_cast< int >( i ) );
                    if ( base[ i ].tag != RuleTag::Implicit )
                        explicit_ts.push_back( static_cast< int >( i ) );
                }
            r.choices[ l ].push_back( explicit_ts.empty() ? all : explicit_ts );
        }
        reps.push_back( std::move( r ) );
    }
    return reps;
}

Lasso< std::string > lasso_names( const MarkedGraph& g, const EdgeLasso& l, const std::vector< std::string >& names )
{
    Lasso< std::string > out;
    int node = l.start;
    for ( int e : l.prefix )
    {
        out.prefix.push_back( names[ node ] );
        node = g.edges[ e ].dst;
    }
    for ( int e : l.cycle )
    {
        out.cycle.push_back( names[ node ] );
        node = g.edges[ e ].dst;
    }
    return out;
}

} // namespace

StutterAutomaton stutter_automaton( const Assumption& a )
{
    validate( a );
    const Module& am = a.module;
    StutterAutomaton s;
    s.state_letters = all_valuations( am.state_vars, am.domain );
    s.input_letters = all_valuations( am.input_vars, am.domain );
    auto xi = index_of( s.state_letters );
    auto ii = index_of( s.input_letters );
    int n = static_cast< int >( am.num_states() );
    int nx = static_cast< int >( s.state_letters.size() );
    int ni = static_cast< int >( s.input_letters.size() );
    std::vector< int > lab( n );
    for ( int p = 0; p < n; ++p )
        lab[ p ] = xi.at( restrict_to( am.label[ p ], am.state_vars ) );

    // state 0 is the initial one; (p, moved) is 1 + 2p + moved
    ExplicitNba& nba = s.nba;
    nba.alphabet = nx * ( ni + 1 );
    nba.num_states = 1 + 2 * n;
    nba.init = { 0 };
    nba.delta.assign( nba.num_states, std::vector< std::vector< int > >( nba.alphabet ) );
    nba.accepting.assign( nba.num_states, false );
    nba.delta[ 0 ][ s.letter( lab[ am.init ], ni ) ] = { 1 + 2 * am.init };
    for ( int p = 0; p < n; ++p )
    {
        nba.accepting[ 2 + 2 * p ] = a.accepting[ p ];
        for ( int v = 0; v < nx; ++v )
            for ( int b = 0; b < ni; ++b )
            {
                std::vector< int > succ;
                for ( const auto& t : am.trans )
                {
                    if ( t.src != p || ii.at( restrict_to( t.input, am.input_vars ) ) != b )
                        continue;
                    for ( const auto& [ x, w ] : t.succ.support() )
                        if ( lab[ x ] == v )
                            succ.push_back( 2 + 2 * x );
                }
                std::sort( succ.begin(), succ.end() );
                succ.erase( std::unique( succ.begin(), succ.end() ), succ.end() );
                // idling is dominated by a move that stays at p
                if ( lab[ p ] == v && !std::binary_search( succ.begin(), succ.end(), 2 + 2 * p ) )
                    succ.insert( std::lower_bound( succ.begin(), succ.end(), 1 + 2 * p ), 1 + 2 * p );
                for ( int st : { 1 + 2 * p, 2 + 2 * p } )
                    nba.delta[ st ][ s.letter( v, b ) ] = succ;
            }
    }
    return s;
}

GuaranteeResult check_guarantee( const Module& m, const Assumption& a, const std::vector< AgentSpec >& agents,
                                 std::size_t budget )
{
    const Module& am = a.module;
    if ( !( am.domain == m.domain ) )
        throw Error( ErrorKind::InvalidModel, "assumption and module use different domains" );
    for ( const auto& x : am.state_vars )
        if ( !std::binary_search( m.state_vars.begin(), m.state_vars.end(), x ) )
            throw Error( ErrorKind::VariableNotInScope, "assumption variable " + x + " is not a state variable of " + m.name );
    VarSet visible = var_union( m.state_vars, m.input_vars );
    for ( const auto& x : am.input_vars )
        if ( !std::binary_search( visible.begin(), visible.end(), x ) )
            throw Error( ErrorKind::VariableNotInScope, "assumption input " + x + " is not visible in " + m.name );

    std::vector< Repertoire > reps;
    std::vector< AgentSpec > specs = agents;
    if ( specs.empty() )
    {
        reps = full_repertoires( m );
        for ( std::size_t c = 0; c < m.components.size(); ++c )
            specs.push_back( { static_cast< int >( c ), std::to_string( c + 1 ), &reps[ c ] } );
    }
    Game g = module_game( m, specs );

    StutterAutomaton hat = stutter_automaton( a );
    ExplicitNba comp = complement( hat.nba, budget );
    auto xi = index_of( hat.state_letters );
    auto ii = index_of( hat.input_letters );
    int none = static_cast< int >( hat.input_letters.size() );
    auto inputs = all_valuations( m.input_vars, m.domain );

    std::vector< int > xlab( g.num_states() );
    for ( std::size_t q = 0; q < g.num_states(); ++q )
        xlab[ q ] = xi.at( restrict_to( m.label[ q ], am.state_vars ) );

    MarkedGraph prod;
    prod.num_buchi = 1;
    prod.num_pairs = static_cast< int >( specs.size() );
    if ( prod.num_pairs > 32 )
        throw Error( ErrorKind::InvalidModel, "more than 32 fair agents" );
    std::map< std::pair< int, int >, int > id;
    std::vector< std::pair< int, int > > nodes;
    std::vector< int > work;
    auto node_of = [ & ]( int q, int s ) {
        auto [ it, fresh ] = id.emplace( std::make_pair( q, s ), static_cast< int >( nodes.size() ) );
        if ( fresh )
        {
            nodes.emplace_back( q, s );
            work.push_back( it->second );
        }
        return it->second;
    };
    for ( int s0 : comp.init )
        for ( int s1 : comp.delta[ s0 ][ hat.letter( xlab[ g.init ], none ) ] )
            prod.init.push_back( node_of( g.init, s1 ) );

    while ( !work.empty() )
    {
        int n = work.back();
        work.pop_back();
        auto [ q, s ] = nodes[ n ];
        std::map< int, std::uint32_t > movers;
        for ( int e : g.out[ q ] )
            for ( std::size_t p = 0; p < specs.size(); ++p )
                if ( g.edges[ e ].moving[ p ] )
                    movers[ g.edges[ e ].env ] |= 1u << p;
        std::uint32_t buchi = comp.accepting[ s ] ? 1u : 0u;
        for ( int e : g.out[ q ] )
        {
            const auto& edge = g.edges[ e ];
            std::uint32_t moved = 0;
            for ( std::size_t p = 0; p < specs.size(); ++p )
                if ( edge.moving[ p ] )
                    moved |= 1u << p;
            std::uint32_t enabled = movers.count( edge.env ) ? movers[ edge.env ] : 0;
            Valuation seen = merge( inputs[ edge.env ], m.label[ q ] );
            int b = ii.at( restrict_to( seen, am.input_vars ) );
            for ( const auto& [ x, w ] : edge.succ.support() )
                for ( int s2 : comp.delta[ s ][ hat.letter( xlab[ x ], b ) ] )
                {
                    int dst = node_of( x, s2 );
                    prod.edges.push_back( { n, dst, buchi, enabled, moved } );
                }
        }
    }
    prod.num_nodes = static_cast< int >( nodes.size() );

    GuaranteeResult res;
    auto lasso = find_accepting_lasso( prod );
    res.holds = !lasso;
    if ( lasso )
    {
        std::vector< std::string > names;
        for ( auto [ q, s ] : nodes )
            names.push_back( g.states[ q ] );
        res.counterexample = lasso_names( prod, *lasso, names );
    }
    return res;
}

// ---------------------------------------------------------------------------
// configurations

const char* rule_name( Rule r )
{
    switch ( r )
    {
    case Rule::Rk: return "Rk";
    case Rule::Part: return "Part";
    case Rule::PRk: return "PRk";
    case Rule::PRsynt: return "PRsynt";
    case Rule::PPart: return "PPart";
    case Rule::PRonly: return "PRonly";
    case Rule::PRso: return "PRso";
    }
    return "?";
}

Rule parse_rule( const std::string& name )
{
    for ( Rule r : { Rule::Rk, Rule::Part, Rule::PRk, Rule::PRsynt, Rule::PPart, Rule::PRonly, Rule::PRso } )
        if ( name == rule_name( r ) )
            return r;
    throw Error( ErrorKind::InvalidConfig, "unknown rule '" + name + "'" );
}

const char* premise_status_name( PremiseStatus s )
{
    switch ( s )
    {
    case PremiseStatus::Holds: return "holds";
    case PremiseStatus::Fails: return "fails";
    case PremiseStatus::Error: return "error";
    }
    return "?";
}

namespace
{

bool partition_rule( Rule r ) { return r == Rule::Part || r == Rule::PPart; }
bool probabilistic_rule( Rule r ) { return r != Rule::Rk && r != Rule::Part; }
bool only_rule( Rule r ) { return r == Rule::PRonly || r == Rule::PRso; }
bool restricting_rule( Rule r ) { return r == Rule::PRsynt || r == Rule::PPart || r == Rule::PRso; }

std::vector< std::string > agent_ids( const std::vector< int >& agents )
{
    std::vector< std::string > ids;
    for ( int a : agents )
        ids.push_back( std::to_string( a + 1 ) );
    return ids;
}

std::string unit_text( const Unit& u )
{
    std::string s;
    for ( int a : u.agents )
        s += ( s.empty() ? "" : "," ) + std::to_string( a + 1 );
    return "{" + s + "}";
}

void check_probability_value( const Rational& p, const char* what )
{
    if ( p < 0 || p > 1 )
        throw Error( ErrorKind::BoundOutOfRange, std::string( what ) + " must lie in [0,1]" );
}

} // namespace

void validate( const Mas& mas, const AgConfig& cfg )
{
    if ( cfg.coalition.empty() )
        throw Error( ErrorKind::InvalidConfig, "empty coalition" );
    if ( !std::is_sorted( cfg.coalition.begin(), cfg.coalition.end() )
         || std::adjacent_find( cfg.coalition.begin(), cfg.coalition.end() ) != cfg.coalition.end() )
        throw Error( ErrorKind::InvalidConfig, "coalition must be sorted and duplicate-free" );
    for ( int a : cfg.coalition )
        if ( a < 0 || a >= static_cast< int >( mas.size() ) )
            throw Error( ErrorKind::UnknownAgent, "no agent " + std::to_string( a + 1 ) );
    if ( cfg.units.empty() )
        throw Error( ErrorKind::InvalidConfig, "no units" );

    std::vector< int > covered;
    for ( const auto& u : cfg.units )
    {
        if ( u.agents.empty() )
            throw Error( ErrorKind::InvalidConfig, "unit without agents" );
        if ( !partition_rule( cfg.rule ) && u.agents.size() != 1 )
            throw Error( ErrorKind::InvalidConfig, std::string( rule_name( cfg.rule ) ) + " takes one agent per unit" );
        if ( !std::is_sorted( u.agents.begin(), u.agents.end() ) )
            throw Error( ErrorKind::InvalidConfig, "unit agents must be sorted" );
        if ( u.k < 1 )
            throw Error( ErrorKind::InvalidConfig, "radius must be at least 1" );
        if ( !u.local )
            throw Error( ErrorKind::InvalidConfig, "unit " + unit_text( u ) + " has no local formula" );
        covered.insert( covered.end(), u.agents.begin(), u.agents.end() );
        if ( !local_to( u.local, compose_agents( mas, u.agents ) ) )
            throw Error( ErrorKind::InvalidConfig, "local formula of unit " + unit_text( u ) + " is not local to it" );
    }
    std::sort( covered.begin(), covered.end() );
    if ( std::adjacent_find( covered.begin(), covered.end() ) != covered.end() )
        throw Error( ErrorKind::InvalidConfig, "units overlap" );
    if ( covered != cfg.coalition )
        throw Error( ErrorKind::InvalidConfig, "units do not cover the coalition exactly" );

    if ( probabilistic_rule( cfg.rule ) && !cfg.global )
        throw Error( ErrorKind::InvalidConfig, "the rule needs a global formula" );
    if ( cfg.rule == Rule::PRk )
    {
        check_probability_value( cfg.p1, "p1" );
        check_probability_value( cfg.p2, "p2" );
        if ( cfg.p2 == 0 )
            throw Error( ErrorKind::ZeroDenominator, "p2 = 0" );
        if ( cfg.p1 > cfg.p2 )
            throw Error( ErrorKind::InconsistentBounds, "p1 > p2" );
    }
    else if ( probabilistic_rule( cfg.rule ) )
        check_probability_value( cfg.p, "p" );
}

Formula rule_conclusion( const Mas& mas, const AgConfig& cfg )
{
    validate( mas, cfg );
    auto ids = agent_ids( cfg.coalition );
    if ( !probabilistic_rule( cfg.rule ) )
    {
        std::vector< Formula > locals;
        for ( const auto& u : cfg.units )
            locals.push_back( u.local );
        return mk_coop( ids, conjunction( locals ) );
    }
    Rational d = cfg.p;
    if ( cfg.rule == Rule::PRk )
    {
        d = cfg.p1 / cfg.p2;
        if ( d > 1 )
            d = 1;
    }
    return mk_coop( ids, cfg.global, Flavor::Standard, Bound{ Cmp::Ge, d } );
}

// ---------------------------------------------------------------------------
// rule application

namespace
{

PremiseReport guarded( const std::string& name, const std::function< PremiseReport() >& body )
{
    try
    {
        PremiseReport r = body();
        r.name = name;
        return r;
    }
    catch ( const std::exception& e )
    {
        PremiseReport r;
        r.name = name;
        r.status = PremiseStatus::Error;
        r.detail = e.what();
        return r;
    }
}

std::vector< PremiseReport > run_all( const std::vector< std::pair< std::string, std::function< PremiseReport() > > >& tasks,
                                      bool parallel )
{
    std::vector< PremiseReport > out;
    if ( !parallel || tasks.size() < 2 )
    {
        for ( const auto& [ name, body ] : tasks )
            out.push_back( guarded( name, body ) );
        return out;
    }
    std::vector< std::future< PremiseReport > > futures;
    for ( const auto& task : tasks )
        futures.push_back( std::async( std::launch::async, [ &task ] { return guarded( task.first, task.second ); } ) );
    for ( auto& f : futures )
        out.push_back( f.get() );
    return out;
}

PremiseReport decided( bool holds, std::string detail )
{
    PremiseReport r;
    r.status = holds ? PremiseStatus::Holds : PremiseStatus::Fails;
    r.detail = std::move( detail );
    return r;
}

Assumption unit_assumption( const Mas& mas, const Unit& u )
{
    if ( u.assumption )
        return *u.assumption;
    auto nb = neighborhood( mas, u.agents, u.k );
    if ( nb.empty() )
        return universal_assumption( mas.modules.at( 0 ).domain );
    Module c = compose_agents( mas, nb );
    return { c, std::vector< bool >( c.num_states(), true ) };
}

// (M^P | A, R^P) ⊨ ⟨⟨P⟩⟩ψ_P, or its only-variant.
PremiseReport ability( const Mas& mas, const AgConfig& cfg, const Unit& u, const Game& global )
{
    Module mp = compose_agents( mas, u.agents );
    Assumption ext = compose_with_assumption( mp, unit_assumption( mas, u ) );
    std::vector< AgentSpec > specs;
    for ( std::size_t c = 0; c < u.agents.size(); ++c )
        specs.push_back( { static_cast< int >( c ), std::to_string( u.agents[ c ] + 1 ), &mas.repertoires[ u.agents[ c ] ] } );
    Game g = module_game( ext.module, specs, ext.accepting );
    std::vector< int > members( u.agents.size() );
    std::iota( members.begin(), members.end(), 0 );

    QualOptions opts;
    opts.view = cfg.view;
    opts.cap = cfg.cap;
    QualResult q = only_rule( cfg.rule ) ? check_only( g, g.init, members, u.local, opts )
                                         : check_coop( g, g.init, members, u.local, opts );
    std::string ids = unit_text( u ).substr( 1, unit_text( u ).size() - 2 );
    std::string what = "<<" + ids + ( only_rule( cfg.rule ) ? ">>only " : ">> " ) + to_string( u.local ) + " under "
                       + ( u.assumption ? u.assumption_name : std::string( "the neighbourhood" ) );
    PremiseReport r;
    if ( !q.holds )
    {
        r.status = restricting_rule( cfg.rule ) ? PremiseStatus::Error : PremiseStatus::Fails;
        r.detail = restricting_rule( cfg.rule ) ? "SynthesisFailed: no strategy for unit " + unit_text( u ) + ": " + what
                                                : what + " does not hold";
        return r;
    }
    Strategy s;
    s.agents = u.agents;
    s.choice = q.witness->choice;
    validate( global, s );
    r.status = PremiseStatus::Holds;
    r.detail = what;
    r.witness = s;
    r.witness_text = to_text( global, s );
    return r;
}

PremiseReport guarantee( const Mas& mas, const AgConfig& cfg, const Unit& u )
{
    auto nb = neighborhood( mas, u.agents, u.k );
    std::string what = "C" + unit_text( u ) + "_" + std::to_string( u.k ) + " guarantees "
                       + ( u.assumption ? u.assumption_name : std::string( "itself" ) );
    if ( !u.assumption )
        return decided( true, what + " (identity)" );
    Module c = compose_agents( mas, nb );
    std::vector< AgentSpec > specs;
    for ( std::size_t i = 0; i < nb.size(); ++i )
        specs.push_back( { static_cast< int >( i ), std::to_string( nb[ i ] + 1 ), &mas.repertoires[ nb[ i ] ] } );
    GuaranteeResult g = check_guarantee( c, *u.assumption, specs, cfg.budget );
    if ( g.holds )
        return decided( true, what );
    std::string trace;
    for ( const auto& s : g.counterexample->prefix )
        trace += s + " ";
    trace += "(";
    for ( std::size_t i = 0; i < g.counterexample->cycle.size(); ++i )
        trace += ( i ? " " : "" ) + g.counterexample->cycle[ i ];
    return decided( false, what + " fails on " + trace + ")^w" );
}

PremiseReport bounded( const Mdp& m, const Formula& f, Opt opt, const Rational& p, const std::string& where )
{
    Rational v = mdp_probability( m, f, opt );
    bool holds = opt == Opt::Min ? v >= p : v <= p;
    std::string what = std::string( opt == Opt::Min ? "min" : "max" ) + " Pr(" + to_string( f ) + ") = " + to_string( v )
                       + ( holds ? ( opt == Opt::Min ? " >= " : " <= " ) : ( opt == Opt::Min ? " < " : " > " ) ) + to_string( p ) + " on " + where;
    return decided( holds, what );
}

// Chain choosing uniformly among the steps available at each state.
MarkovChain uniform_chain( const Game& g )
{
    MarkovChain mc;
    mc.states = g.states;
    mc.label = g.label;
    mc.init = g.init;
    for ( std::size_t q = 0; q < g.num_states(); ++q )
    {
        std::vector< std::pair< int, Rational > > w;
        Rational share( 1, static_cast< long >( g.out[ q ].size() ) );
        for ( int e : g.out[ q ] )
            for ( const auto& [ x, p ] : g.edges[ e ].succ.support() )
                w.emplace_back( x, share * p );
        mc.next.push_back( Dist< int >::from( std::move( w ) ) );
    }
    return mc;
}

Formula locals_of( const AgConfig& cfg )
{
    std::vector< Formula > fs;
    for ( const auto& u : cfg.units )
        fs.push_back( u.local );
    return conjunction( fs );
}

void side_checks( const Game& restricted, const AgConfig& cfg, Verdict& v )
{
    Formula locals = locals_of( cfg );
    auto note = [ & ]( const std::string& what, const std::function< bool() >& check ) {
        try
        {
            bool ok = check();
            v.side_checks.push_back( what + ": " + ( ok ? "holds" : "fails" ) );
            v.side_checks_hold = v.side_checks_hold && ok;
        }
        catch ( const std::exception& e )
        {
            v.side_checks.push_back( what + ": error: " + e.what() );
            v.side_checks_hold = false;
        }
    };
    note( "every fair run of the restricted system satisfies " + to_string( locals ),
          [ & ] { return all_runs_satisfy( restricted, { restricted.init }, locals, nullptr ); } );
    MarkovChain mc = uniform_chain( restricted );
    note( "mu(" + to_string( locals ) + ") = 1 under uniform scheduling",
          [ & ] { return mc_probability( mc, locals ) == 1; } );
    note( "mu(psi and locals) = mu(psi) under uniform scheduling", [ & ] {
        return mc_probability( mc, mk_and( cfg.global, locals ) ) == mc_probability( mc, cfg.global );
    } );
}

Verdict run_rule( const Mas& mas, const AgConfig& cfg )
{
    Verdict v;
    v.rule = cfg.rule;
    v.conclusion = rule_conclusion( mas, cfg );
    Game global = mas_game( mas );

    std::vector< std::pair< std::string, std::function< PremiseReport() > > > tasks;
    for ( const auto& u : cfg.units )
    {
        tasks.emplace_back( "premise 1 " + unit_text( u ), [ &, u ] { return ability( mas, cfg, u, global ); } );
        tasks.emplace_back( "premise 2 " + unit_text( u ), [ &, u ] { return guarantee( mas, cfg, u ); } );
    }
    Formula locals = locals_of( cfg );
    std::optional< Mdp > full;
    if ( cfg.rule == Rule::PRk || cfg.rule == Rule::PRonly )
        full = compile_mdp( mas );
    if ( cfg.rule == Rule::PRk )
    {
        tasks.emplace_back( "premise 3", [ & ] { return bounded( *full, mk_and( cfg.global, locals ), Opt::Min, cfg.p1, "the system" ); } );
        tasks.emplace_back( "premise 4", [ & ] { return bounded( *full, locals, Opt::Max, cfg.p2, "the system" ); } );
    }
    if ( cfg.rule == Rule::PRonly )
        tasks.emplace_back( "premise 3", [ & ] { return bounded( *full, mk_and( cfg.global, locals ), Opt::Min, cfg.p, "the system" ); } );
    v.premises = run_all( tasks, cfg.parallel );

    if ( restricting_rule( cfg.rule ) )
    {
        std::optional< Strategy > joint = empty_strategy();
        for ( std::size_t i = 0; i < cfg.units.size(); ++i )
        {
            const auto& r = v.premises[ 2 * i ];
            if ( r.status != PremiseStatus::Holds )
                joint.reset();
            else if ( joint )
                joint = combine( *joint, *r.witness );
        }
        Formula target = cfg.rule == Rule::PRso ? mk_and( cfg.global, locals ) : cfg.global;
        if ( !joint )
        {
            PremiseReport r;
            r.name = "premise 3";
            r.status = PremiseStatus::Error;
            r.detail = "SynthesisFailed: no restricted system without every unit strategy";
            v.premises.push_back( r );
        }
        else
        {
            v.strategy = joint;
            Game restricted = apply( global, *joint );
            v.premises.push_back( guarded( "premise 3", [ & ] {
                return bounded( game_mdp( restricted ), target, Opt::Min, cfg.p, "the restricted system" );
            } ) );
            if ( cfg.rule != Rule::PRso )
                side_checks( restricted, cfg, v );
        }
    }

    bool all = std::all_of( v.premises.begin(), v.premises.end(),
                            []( const PremiseReport& r ) { return r.status == PremiseStatus::Holds; } );
    v.status = all ? Verdict::Concluded : Verdict::Inapplicable;
    if ( all && !v.strategy && !only_rule( cfg.rule ) )
    {
        Strategy joint = empty_strategy();
        for ( std::size_t i = 0; i < cfg.units.size(); ++i )
            joint = combine( joint, *v.premises[ 2 * i ].witness );
        v.strategy = joint;
    }
    return v;
}

Verdict as_rule( const Mas& mas, AgConfig cfg, Rule r )
{
    cfg.rule = r;
    return run_rule( mas, cfg );
}

} // namespace

Verdict apply_rule( const Mas& mas, const AgConfig& cfg ) { return run_rule( mas, cfg ); }

Verdict apply_Rk( const Mas& mas, const AgConfig& cfg ) { return as_rule( mas, cfg, Rule::Rk ); }
Verdict apply_Part( const Mas& mas, const AgConfig& cfg ) { return as_rule( mas, cfg, Rule::Part ); }
Verdict apply_PRk( const Mas& mas, const AgConfig& cfg ) { return as_rule( mas, cfg, Rule::PRk ); }
Verdict apply_PRsynt( const Mas& mas, const AgConfig& cfg ) { return as_rule( mas, cfg, Rule::PRsynt ); }
Verdict apply_PPart( const Mas& mas, const AgConfig& cfg ) { return as_rule( mas, cfg, Rule::PPart ); }
Verdict apply_PRonly( const Mas& mas, const AgConfig& cfg ) { return as_rule( mas, cfg, Rule::PRonly ); }
Verdict apply_PRso( const Mas& mas, const AgConfig& cfg ) { return as_rule( mas, cfg, Rule::PRso ); }

// ---------------------------------------------------------------------------
// nested formulas

namespace
{

using Override = std::function< std::optional< std::string >( const Formula& ) >;

Formula innermost( const Formula& f )
{
    if ( !f )
        return nullptr;
    if ( f->op == Op::Coop )
    {
        if ( !contains_coop( f->lhs ) )
            return f;
        return innermost( f->lhs );
    }
    if ( auto l = innermost( f->lhs ) )
        return l;
    return innermost( f->rhs );
}

Formula substitute( const Formula& f, const Formula& target, const Formula& by )
{
    if ( !f )
        return f;
    if ( equal( f, target ) )
        return by;
    Formula l = substitute( f->lhs, target, by );
    Formula r = substitute( f->rhs, target, by );
    if ( l == f->lhs && r == f->rhs )
        return f;
    Node n = *f;
    n.lhs = l;
    n.rhs = r;
    return std::make_shared< const Node >( std::move( n ) );
}

bool eval_boolean( const Formula& f, const Valuation& label )
{
    switch ( f->op )
    {
    case Op::True: return true;
    case Op::False: return false;
    case Op::Atom: return satisfies( label, f->atom );
    case Op::Not: return !eval_boolean( f->lhs, label );
    case Op::And: return eval_boolean( f->lhs, label ) && eval_boolean( f->rhs, label );
    case Op::Or: return eval_boolean( f->lhs, label ) || eval_boolean( f->rhs, label );
    default: throw Error( ErrorKind::UnsupportedFormula, "not a boolean formula: " + to_string( f ) );
    }
}

// Whether c, read as a claim at one state, entails f there.
bool entails( const Formula& c, const Formula& f )
{
    if ( c->op != Op::Coop || f->op != Op::Coop || c->coalition != f->coalition || c->flavor != f->flavor
         || !equal( c->lhs, f->lhs ) || c->bound.has_value() != f->bound.has_value() )
        return false;
    if ( !c->bound )
        return true;
    const Bound& bc = *c->bound;
    const Bound& bf = *f->bound;
    if ( !bc.is_lower() || !bf.is_lower() )
        return bc == bf;
    if ( bf.cmp == Cmp::Ge )
        return bc.value >= bf.value;
    return bc.cmp == Cmp::Gt ? bc.value >= bf.value : bc.value > bf.value;
}

NestedResult nested( Game g, Formula phi, View view, const Override& at_init )
{
    NestedResult res;
    int fresh = 0;
    while ( contains_coop( phi ) )
    {
        Formula inner = innermost( phi );
        LabelStep step;
        step.subformula = to_string( inner );
        step.truth = evaluate_all( g, inner, view );
        step.method = "direct";
        if ( at_init )
            if ( auto rule = at_init( inner ) )
            {
                step.truth[ g.init ] = true;
                step.method = *rule;
            }
        step.proposition = "__l" + std::to_string( ++fresh );
        for ( std::size_t q = 0; q < g.num_states(); ++q )
            g.label[ q ][ step.proposition ] = step.truth[ q ] ? "true" : "false";
        phi = substitute( phi, inner, mk_prop( step.proposition ) );
        res.trace.push_back( std::move( step ) );
    }
    if ( is_state_formula( phi ) )
        res.holds = eval_boolean( phi, g.label[ g.init ] );
    else
        res.holds = all_runs_satisfy( g, { g.init }, phi, nullptr );
    return res;
}

} // namespace

NestedResult verify_nested( const Mas& mas, const Formula& phi, const std::vector< AgConfig >& library, View view )
{
    Override at_init = [ & ]( const Formula& f ) -> std::optional< std::string > {
        for ( const auto& cfg : library )
        {
            if ( !entails( rule_conclusion( mas, cfg ), f ) )
                continue;
            if ( apply_rule( mas, cfg ).concluded() )
                return std::string( rule_name( cfg.rule ) );
        }
        return std::nullopt;
    };
    return nested( mas_game( mas ), phi, view, at_init );
}

NestedResult verify_nested( const Game& g, const Formula& phi, View view ) { return nested( g, phi, view, {} ); }

} // namespace sagv
