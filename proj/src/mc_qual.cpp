#include "sagv/mc_qual.hpp"

#include <functional>
#include <set>

namespace sagv
{

std::vector< int > view_starts( const Game& g, int q, const std::vector< int >& coalition, View view )
{
    if ( view == View::Objective || coalition.empty() )
        return { q };
    std::vector< int > out;
    for ( std::size_t r = 0; r < g.states.size(); ++r )
        for ( int a : coalition )
            if ( g.agents[ a ].obs[ r ] == g.agents[ a ].obs[ q ] )
            {
                out.push_back( static_cast< int >( r ) );
                break;
            }
    return out;
}

std::vector< std::uint64_t > state_letters( const Game& g, const std::vector< Formula >& atoms, const Labeling* labels )
{
    std::vector< std::uint64_t > out( g.states.size(), 0 );
    for ( std::size_t i = 0; i < atoms.size(); ++i )
    {
        const auto& f = atoms[ i ];
        const std::vector< bool >* truth = nullptr;
        if ( f->op == Op::Coop )
        {
            auto key = to_string( f );
            if ( !labels || !labels->count( key ) )
                throw Error( ErrorKind::UnsupportedFormula, "no labelling for " + key );
            truth = &labels->at( key );
        }
        for ( std::size_t q = 0; q < g.states.size(); ++q )
        {
            bool v = truth ? ( *truth )[ q ] : satisfies( g.label[ q ], f->atom );
            if ( v )
                out[ q ] |= std::uint64_t{ 1 } << i;
        }
    }
    return out;
}

namespace
{

void reject_next( const Game& g, const Formula& psi )
{
    if ( g.layer == Layer::Modules && contains_next( psi ) )
        throw Error( ErrorKind::UnsupportedNext, "X is not available for asynchronous modules: " + to_string( psi ) );
}

// The game as a marked graph: Büchi set 0 holds the edges leaving accepting
// states; one Streett pair per fair agent.
SystemGraph system_graph( const Game& g, const std::vector< int >& starts, const std::vector< std::uint64_t >& letters )
{
    SystemGraph s;
    s.num_states = static_cast< int >( g.states.size() );
    s.init = starts;
    s.letter = letters;
    s.num_buchi = g.has_acceptance() ? 1 : 0;
    std::vector< int > fair;
    for ( std::size_t a = 0; a < g.agents.size(); ++a )
        if ( a < g.fair.size() && g.fair[ a ] )
            fair.push_back( static_cast< int >( a ) );
    if ( fair.size() > 32 )
        throw Error( ErrorKind::InvalidModel, "more than 32 fair agents" );
    s.num_pairs = static_cast< int >( fair.size() );
    for ( std::size_t q = 0; q < g.states.size(); ++q )
    {
        std::map< int, std::uint32_t > movers;
        for ( int e : g.out[ q ] )
            for ( std::size_t p = 0; p < fair.size(); ++p )
                if ( g.edges[ e ].moving[ fair[ p ] ] )
                    movers[ g.edges[ e ].env ] |= 1u << p;
        for ( int e : g.out[ q ] )
        {
            const auto& edge = g.edges[ e ];
            std::uint32_t moved = 0;
            for ( std::size_t p = 0; p < fair.size(); ++p )
                if ( edge.moving[ fair[ p ] ] )
                    moved |= 1u << p;
            std::uint32_t enabled = movers.count( edge.env ) ? movers[ edge.env ] : 0;
            std::uint32_t buchi = g.has_acceptance() && g.accepting[ q ] ? 1u : 0u;
            for ( const auto& [ x, w ] : edge.succ.support() )
                s.edges.push_back( { static_cast< int >( q ), x, buchi, enabled, moved } );
        }
    }
    return s;
}

bool no_counterexample( const Game& g, const std::vector< int >& starts, const std::vector< std::uint64_t >& letters,
                        const Gba& negation )
{
    auto sys = system_graph( g, starts, letters );
    return !find_accepting_lasso( intersect_system( sys, negation ).graph ).has_value();
}

Labeling with_strategic( const Game& g, const Formula& psi, const QualOptions& opts )
{
    Labeling labels = opts.labels ? *opts.labels : Labeling{};
    label_strategic( g, psi, labels, opts );
    return labels;
}

} // namespace

bool all_runs_satisfy( const Game& g, const std::vector< int >& starts, const Formula& psi, const Labeling* labels )
{
    Gba negation = ltl_to_nba( mk_not( psi ) );
    return no_counterexample( g, starts, state_letters( g, negation.atoms, labels ), negation );
}

QualResult check_coop( const Game& g, int q, const std::vector< int >& coalition, const Formula& psi,
                       const QualOptions& opts )
{
    reject_next( g, psi );
    Labeling labels = with_strategic( g, psi, opts );
    Gba negation = ltl_to_nba( mk_not( psi ) );
    auto letters = state_letters( g, negation.atoms, &labels );
    auto starts = view_starts( g, q, coalition, opts.view );
    QualResult res;

    if ( opts.memory <= 1 )
    {
        if ( strategy_count( g, coalition, opts.cap ) > opts.cap )
            throw Error( ErrorKind::BoundExceeded, "more than " + std::to_string( opts.cap ) + " strategies" );
        res.candidates = enumerate_ir( g, coalition, [ & ]( const Strategy& s ) {
            if ( !no_counterexample( apply( g, s ), starts, letters, negation ) )
                return true;
            res.holds = true;
            res.witness = s;
            return false;
        } );
        return res;
    }

    enumerate_memory( g, coalition, opts.memory, [ & ]( const Memory& m ) {
        auto rg = recall_product( g, m, starts );
        std::vector< std::uint64_t > lifted;
        for ( int b : rg.base_state )
            lifted.push_back( letters[ b ] );
        enumerate_ir( rg.game, coalition, [ & ]( const Strategy& s ) {
            if ( ++res.candidates > opts.cap )
                throw Error( ErrorKind::BoundExceeded, "more than " + std::to_string( opts.cap ) + " strategies" );
            if ( !no_counterexample( apply( rg.game, s ), rg.start_nodes, lifted, negation ) )
                return true;
            res.holds = true;
            res.witness = s;
            res.memory = m;
            return false;
        } );
        return !res.holds;
    } );
    return res;
}

bool check_fixed( const Game& g, int q, const Strategy& s, const Formula& psi, const QualOptions& opts )
{
    reject_next( g, psi );
    Labeling labels = with_strategic( g, psi, opts );
    return all_runs_satisfy( apply( g, s ), view_starts( g, q, s.agents, opts.view ), psi, &labels );
}

QualResult check_coop_under_assumption( const Assumption& ext, const std::vector< AgentSpec >& agents,
                                        const std::vector< std::string >& coalition, const Formula& psi,
                                        const QualOptions& opts )
{
    Game g = module_game( ext.module, agents, ext.accepting );
    return check_coop( g, g.init, g.agent_indices( coalition ), psi, opts );
}

namespace
{

// Runs of the whole game that satisfy ψ and use an edge the strategy
// excludes. Node (q, f): f records whether such an edge was taken.
bool escaping_trace( const Game& g, const std::vector< int >& starts, const std::vector< std::uint64_t >& letters,
                     const Gba& positive, const std::vector< bool >& kept )
{
    int n = static_cast< int >( g.states.size() );
    SystemGraph s;
    s.num_states = 2 * n;
    for ( int q : starts )
        s.init.push_back( 2 * q );
    s.letter.resize( 2 * n );
    for ( int q = 0; q < n; ++q )
        s.letter[ 2 * q ] = s.letter[ 2 * q + 1 ] = letters[ q ];
    int acc_bit = g.has_acceptance() ? 1 : 0;
    s.num_buchi = acc_bit + 1;
    for ( std::size_t e = 0; e < g.edges.size(); ++e )
    {
        const auto& edge = g.edges[ e ];
        std::uint32_t acc = g.has_acceptance() && g.accepting[ edge.src ] ? 1u : 0u;
        for ( const auto& [ x, w ] : edge.succ.support() )
        {
            s.edges.push_back( { 2 * edge.src, 2 * x + ( kept[ e ] ? 0 : 1 ), acc, 0, 0 } );
            s.edges.push_back( { 2 * edge.src + 1, 2 * x + 1, acc | ( 1u << acc_bit ), 0, 0 } );
        }
    }
    return find_accepting_lasso( intersect_system( s, positive ).graph ).has_value();
}

} // namespace

QualResult check_only( const Game& g, int q, const std::vector< int >& coalition, const Formula& psi,
                       const QualOptions& opts )
{
    reject_next( g, psi );
    if ( opts.memory > 1 )
        throw Error( ErrorKind::InvalidConfig, "only-modalities are checked for memoryless strategies" );
    Labeling labels = with_strategic( g, psi, opts );
    Gba positive = ltl_to_nba( psi );
    auto letters = state_letters( g, positive.atoms, &labels );
    auto starts = view_starts( g, q, coalition, opts.view );
    if ( strategy_count( g, coalition, opts.cap ) > opts.cap )
        throw Error( ErrorKind::BoundExceeded, "more than " + std::to_string( opts.cap ) + " strategies" );
    QualResult res;
    res.candidates = enumerate_ir( g, coalition, [ & ]( const Strategy& s ) {
        if ( escaping_trace( g, starts, letters, positive, compliant_edges( g, s ) ) )
            return true;
        res.holds = true;
        res.witness = s;
        return false;
    } );
    return res;
}

bool check_only_fixed( const Game& g, int q, const Strategy& s, const Formula& psi, const QualOptions& opts )
{
    reject_next( g, psi );
    Labeling labels = with_strategic( g, psi, opts );
    Gba positive = ltl_to_nba( psi );
    auto letters = state_letters( g, positive.atoms, &labels );
    return !escaping_trace( g, view_starts( g, q, s.agents, opts.view ), letters, positive, compliant_edges( g, s ) );
}

std::optional< Strategy > synth( const Game& g, int q, const std::vector< int >& coalition, const Formula& psi,
                                 Flavor flavor, const QualOptions& opts )
{
    QualResult r = flavor == Flavor::Only ? check_only( g, q, coalition, psi, opts ) : check_coop( g, q, coalition, psi, opts );
    if ( !r.holds || r.memory )
        return std::nullopt;
    return r.witness;
}

// ---------------------------------------------------------------------------
// labelling of state subformulas

namespace
{

bool eval_state( const Formula& f, int q, const Game& g, const Labeling& labels )
{
    switch ( f->op )
    {
    case Op::True: return true;
    case Op::False: return false;
    case Op::Atom: return satisfies( g.label[ q ], f->atom );
    case Op::Not: return !eval_state( f->lhs, q, g, labels );
    case Op::And: return eval_state( f->lhs, q, g, labels ) && eval_state( f->rhs, q, g, labels );
    case Op::Or: return eval_state( f->lhs, q, g, labels ) || eval_state( f->rhs, q, g, labels );
    case Op::Coop: return labels.at( to_string( f ) )[ q ];
    default: throw Error( ErrorKind::UnsupportedFormula, "'" + to_string( f ) + "' is not a state formula" );
    }
}

} // namespace

void label_strategic( const Game& g, const Formula& f, Labeling& labels, const QualOptions& opts )
{
    if ( !f )
        return;
    if ( f->op != Op::Coop )
    {
        label_strategic( g, f->lhs, labels, opts );
        label_strategic( g, f->rhs, labels, opts );
        return;
    }
    auto key = to_string( f );
    if ( labels.count( key ) )
        return;
    if ( f->bound || f->flavor == Flavor::Prob )
        throw Error( ErrorKind::UnsupportedFormula, "probabilistic subformula " + key + " needs the probabilistic checker" );
    label_strategic( g, f->lhs, labels, opts );
    auto coalition = g.agent_indices( f->coalition );
    QualOptions inner = opts;
    inner.labels = &labels;
    std::vector< bool > truth( g.states.size() );
    for ( std::size_t q = 0; q < g.states.size(); ++q )
    {
        int s = static_cast< int >( q );
        truth[ q ] = f->flavor == Flavor::Only ? check_only( g, s, coalition, f->lhs, inner ).holds
                                               : check_coop( g, s, coalition, f->lhs, inner ).holds;
    }
    labels[ key ] = std::move( truth );
}

std::vector< bool > evaluate_states( const Game& g, const Formula& phi, const QualOptions& opts )
{
    Labeling labels = with_strategic( g, phi, opts );
    std::vector< bool > out( g.states.size() );
    for ( std::size_t q = 0; q < g.states.size(); ++q )
        out[ q ] = eval_state( phi, static_cast< int >( q ), g, labels );
    return out;
}

// ---------------------------------------------------------------------------
// polynomial fixpoint for perfect information

namespace
{

struct FixpointChecker
{
    const Game& g;
    std::vector< std::vector< int > > succ;  // per edge: successor states
    std::vector< int > src;                  // per edge
    std::vector< std::vector< std::uint64_t > > allow;  // per agent, per edge
    std::vector< std::vector< std::uint64_t > > full;   // per agent, per state: every choice

    explicit FixpointChecker( const Game& game ) : g( game )
    {
        for ( const auto& e : g.edges )
        {
            std::vector< int > s;
            for ( const auto& [ x, w ] : e.succ.support() )
                s.push_back( x );
            succ.push_back( std::move( s ) );
            src.push_back( e.src );
        }
        allow.assign( g.agents.size(), std::vector< std::uint64_t >( g.edges.size() ) );
        full.assign( g.agents.size(), std::vector< std::uint64_t >( g.states.size() ) );
        for ( std::size_t a = 0; a < g.agents.size(); ++a )
        {
            for ( std::size_t e = 0; e < g.edges.size(); ++e )
                allow[ a ][ e ] = g.edges[ e ].allow[ a ];
            const auto& ag = g.agents[ a ];
            for ( std::size_t s = 0; s < g.states.size(); ++s )
            {
                int choices = ag.num_choices[ ag.obs[ s ] ];
                full[ a ][ s ] = choices >= 64 ? ~std::uint64_t{ 0 } : ( std::uint64_t{ 1 } << choices ) - 1;
            }
        }
    }

    std::vector< bool > states_of( const Formula& f, Labeling& labels )
    {
        std::vector< bool > out( g.states.size() );
        if ( f->op == Op::Coop )
        {
            auto key = to_string( f );
            if ( !labels.count( key ) )
                labels[ key ] = modality( f, labels );
            return labels[ key ];
        }
        if ( f->lhs )
            states_of( f->lhs, labels );
        if ( f->rhs )
            states_of( f->rhs, labels );
        for ( std::size_t q = 0; q < g.states.size(); ++q )
            out[ q ] = eval_state( f, static_cast< int >( q ), g, labels );
        return out;
    }

    std::vector< bool > modality( const Formula& f, Labeling& labels )
    {
        if ( f->flavor != Flavor::Only || f->bound )
            throw Error( ErrorKind::UnsupportedFormula, "fixpoint checking covers only-modalities: " + to_string( f ) );
        Formula body = nnf( f->lhs );
        auto coalition = g.agent_indices( f->coalition );
        std::size_t n = g.states.size();
        std::vector< bool > a( n, true ), b( n, false );
        Op kind = body->op;
        if ( kind == Op::Next )
            b = states_of( body->lhs, labels );
        else if ( kind == Op::Until || kind == Op::Release )
        {
            if ( !is_state_formula( body->lhs ) || !is_state_formula( body->rhs ) )
                throw Error( ErrorKind::UnsupportedFormula, "nested temporal operators in " + to_string( f ) );
            a = states_of( body->lhs, labels );
            b = states_of( body->rhs, labels );
        }
        else
            throw Error( ErrorKind::UnsupportedFormula, "no single temporal operator in " + to_string( f ) );
        if ( kind == Op::Next && !is_state_formula( body->lhs ) )
            throw Error( ErrorKind::UnsupportedFormula, "nested temporal operators in " + to_string( f ) );

        // States where the path formula can still be met, by backward search
        // over (edge, successor) pairs.
        std::vector< std::vector< int > > pred( n );
        for ( std::size_t e = 0; e < g.edges.size(); ++e )
            for ( int x : succ[ e ] )
                pred[ x ].push_back( static_cast< int >( e ) );
        std::vector< bool > live( n, false );
        if ( kind == Op::Until )
        {
            std::vector< int > stack;
            for ( std::size_t s = 0; s < n; ++s )
                if ( b[ s ] )
                {
                    live[ s ] = true;
                    stack.push_back( static_cast< int >( s ) );
                }
            while ( !stack.empty() )
            {
                int x = stack.back();
                stack.pop_back();
                for ( int e : pred[ x ] )
                {
                    int s = src[ e ];
                    if ( !live[ s ] && a[ s ] )
                    {
                        live[ s ] = true;
                        stack.push_back( s );
                    }
                }
            }
        }
        else if ( kind == Op::Release )
        {
            // b-states leave the set once they satisfy neither a nor have a
            // live successor left
            live = b;
            std::vector< int > count( n, 0 ), stack;
            for ( std::size_t e = 0; e < g.edges.size(); ++e )
                for ( int x : succ[ e ] )
                    if ( live[ x ] )
                        ++count[ src[ e ] ];
            for ( std::size_t s = 0; s < n; ++s )
                if ( live[ s ] && !a[ s ] && count[ s ] == 0 )
                {
                    live[ s ] = false;
                    stack.push_back( static_cast< int >( s ) );
                }
            while ( !stack.empty() )
            {
                int x = stack.back();
                stack.pop_back();
                for ( int e : pred[ x ] )
                {
                    int s = src[ e ];
                    if ( live[ s ] && !a[ s ] && --count[ s ] == 0 )
                    {
                        live[ s ] = false;
                        stack.push_back( s );
                    }
                }
            }
        }

        // Once a trace meets its goal every continuation is needed, so a state
        // reached that way must keep all of its edges. Mark the states that can
        // reach a state where some coalition member cannot keep them all.
        std::vector< bool > doomed( n, false );
        std::vector< int > stack;
        for ( std::size_t s = 0; s < n; ++s )
            for ( int ag : coalition )
            {
                std::uint64_t m = full[ ag ][ s ];
                for ( int e : g.out[ s ] )
                    m &= allow[ ag ][ e ];
                if ( m == 0 && !doomed[ s ] )
                {
                    doomed[ s ] = true;
                    stack.push_back( static_cast< int >( s ) );
                }
            }
        while ( !stack.empty() )
        {
            int x = stack.back();
            stack.pop_back();
            for ( int e : pred[ x ] )
                if ( !doomed[ src[ e ] ] )
                {
                    doomed[ src[ e ] ] = true;
                    stack.push_back( src[ e ] );
                }
        }

        std::vector< bool > out( n );
        for ( std::size_t q = 0; q < n; ++q )
            out[ q ] = coverable( static_cast< int >( q ), kind, a, b, live, doomed, coalition );
        return out;
    }

    std::vector< unsigned > zone_mark, mask_mark;
    std::vector< std::uint64_t > mask;
    unsigned epoch = 0;

    // Whether the coalition can keep every edge lying on a trace from q that
    // satisfies the path formula. Only the part of such traces before the
    // goal is explored here; everything after it is covered by doomed.
    bool coverable( int q, Op kind, const std::vector< bool >& a, const std::vector< bool >& b,
                    const std::vector< bool >& live, const std::vector< bool >& doomed,
                    const std::vector< int >& coalition )
    {
        std::size_t n = g.states.size();
        if ( zone_mark.empty() )
        {
            zone_mark.assign( n, 0 );
            mask_mark.assign( n * g.agents.size(), 0 );
            mask.assign( n * g.agents.size(), 0 );
        }
        ++epoch;
        auto keep = [ & ]( int s, int e ) {
            for ( int ag : coalition )
            {
                std::size_t k = static_cast< std::size_t >( ag ) * n + s;
                if ( mask_mark[ k ] != epoch )
                {
                    mask_mark[ k ] = epoch;
                    mask[ k ] = full[ ag ][ s ];
                }
                if ( ( mask[ k ] &= allow[ ag ][ e ] ) == 0 )
                    return false;
            }
            return true;
        };
        if ( kind == Op::Next )
        {
            for ( int e : g.out[ q ] )
            {
                bool used = false;
                for ( int x : succ[ e ] )
                    if ( b[ x ] )
                    {
                        if ( doomed[ x ] )
                            return false;
                        used = true;
                    }
                if ( used && !keep( q, e ) )
                    return false;
            }
            return true;
        }
        // Until: the goal is b, the path stays in a. Release: the goal is a
        // with b, the path stays in b.
        auto goal = [ & ]( int x ) { return kind == Op::Until ? static_cast< bool >( b[ x ] ) : a[ x ] && b[ x ]; };
        if ( !live[ q ] )
            return true;
        if ( goal( q ) )
            return !doomed[ q ];
        std::vector< int > stack = { q };
        zone_mark[ q ] = epoch;
        while ( !stack.empty() )
        {
            int z = stack.back();
            stack.pop_back();
            for ( int e : g.out[ z ] )
            {
                bool used = false;
                for ( int x : succ[ e ] )
                {
                    if ( !live[ x ] )
                        continue;
                    used = true;
                    if ( goal( x ) )
                    {
                        if ( doomed[ x ] )
                            return false;
                    }
                    else if ( zone_mark[ x ] != epoch )
                    {
                        zone_mark[ x ] = epoch;
                        stack.push_back( x );
                    }
                }
                if ( used && !keep( z, e ) )
                    return false;
            }
        }
        return true;
    }
};

} // namespace

std::vector< bool > only_fixpoint_states( const Game& g, const Formula& phi )
{
    if ( !g.perfect_information() )
        throw Error( ErrorKind::NotPerfectInformation, "the fixpoint algorithm needs perfect information" );
    if ( g.has_acceptance() )
        throw Error( ErrorKind::InvalidConfig, "the fixpoint algorithm does not handle acceptance sets" );
    reject_next( g, phi );
    FixpointChecker fc( g );
    Labeling labels;
    return fc.states_of( phi, labels );
}

bool check_only_fixpoint( const Game& g, int q, const Formula& phi )
{
    return only_fixpoint_states( g, phi )[ q ];
}

} // namespace sagv
