#include "sagv/mc_prob.hpp"

#include "sagv/linear.hpp"

#include <deque>
#include <map>
#include <set>

namespace sagv
{

void validate( const MarkovChain& mc )
{
    if ( mc.states.empty() || mc.next.size() != mc.states.size() || mc.label.size() != mc.states.size() )
        throw Error( ErrorKind::InvalidModel, "malformed Markov chain" );
    if ( mc.init < 0 || mc.init >= static_cast< int >( mc.states.size() ) )
        throw Error( ErrorKind::InvalidModel, "chain initial state out of range" );
    for ( std::size_t s = 0; s < mc.next.size(); ++s )
    {
        if ( !mc.next[ s ].is_valid() )
            throw Error( ErrorKind::InvalidModel, "row " + mc.states[ s ] + " is not a distribution" );
        for ( const auto& [ x, w ] : mc.next[ s ].support() )
            if ( x < 0 || x >= static_cast< int >( mc.states.size() ) )
                throw Error( ErrorKind::InvalidModel, "successor out of range in row " + mc.states[ s ] );
    }
}

void validate( const Mdp& m )
{
    if ( m.states.empty() || m.actions.size() != m.states.size() || m.label.size() != m.states.size() )
        throw Error( ErrorKind::InvalidModel, "malformed MDP" );
    if ( m.init < 0 || m.init >= static_cast< int >( m.states.size() ) )
        throw Error( ErrorKind::InvalidModel, "MDP initial state out of range" );
    for ( std::size_t s = 0; s < m.actions.size(); ++s )
    {
        if ( m.actions[ s ].empty() )
            throw Error( ErrorKind::DeadlockState, "no action at " + m.states[ s ] );
        for ( const auto& a : m.actions[ s ] )
        {
            if ( !a.succ.is_valid() )
                throw Error( ErrorKind::InvalidModel, "action " + a.name + " at " + m.states[ s ] + " is not a distribution" );
            for ( const auto& [ x, w ] : a.succ.support() )
                if ( x < 0 || x >= static_cast< int >( m.states.size() ) )
                    throw Error( ErrorKind::InvalidModel, "successor out of range at " + m.states[ s ] );
        }
    }
}

Mdp game_mdp( const Game& g )
{
    Mdp m;
    m.states = g.states;
    m.label = g.label;
    m.init = g.init;
    m.actions.resize( g.states.size() );
    for ( std::size_t e = 0; e < g.edges.size(); ++e )
    {
        const auto& edge = g.edges[ e ];
        m.actions[ edge.src ].push_back( { edge.succ, edge.label, {}, edge.stutter ? -1 : static_cast< int >( e ) } );
    }
    validate( m );
    return m;
}

Mdp compile_mdp( const Mas& mas )
{
    Game g = mas_game( mas );
    std::size_t k = g.agents.size();
    std::vector< int > index( g.states.size(), -1 );
    std::vector< int > order;
    std::deque< int > queue{ g.init };
    index[ g.init ] = 0;
    order.push_back( g.init );
    Mdp m;
    std::vector< std::vector< Mdp::Action > > raw;
    while ( !queue.empty() )
    {
        int q = queue.front();
        queue.pop_front();
        if ( g.out[ q ].empty() )
            throw Error( ErrorKind::DeadlockState, "no transition at " + g.states[ q ] );
        std::set< int > envs;
        for ( int e : g.out[ q ] )
            envs.insert( g.edges[ e ].env );
        std::vector< Mdp::Action > acts;
        std::vector< int > pick( k, 0 );
        while ( true )
        {
            std::string profile = "[";
            for ( std::size_t a = 0; a < k; ++a )
                profile += ( a ? "," : "" ) + g.agents[ a ].choice_names[ g.agents[ a ].obs[ q ] ][ pick[ a ] ];
            profile += "]";
            for ( int env : envs )
            {
                bool any = false;
                for ( int e : g.out[ q ] )
                {
                    const auto& edge = g.edges[ e ];
                    if ( edge.env != env )
                        continue;
                    bool ok = true;
                    for ( std::size_t a = 0; a < k && ok; ++a )
                        ok = edge.allow[ a ] >> pick[ a ] & 1;
                    if ( !ok )
                        continue;
                    any = true;
                    acts.push_back( { edge.succ, profile + " " + edge.label, pick, e } );
                }
                if ( !any )
                    acts.push_back( { Dist< int >::point( q ), profile + " " + g.env_names[ env ] + " idle", pick, -1 } );
            }
            std::size_t a = k;
            while ( a > 0 )
            {
                const auto& ag = g.agents[ a - 1 ];
                if ( ++pick[ a - 1 ] < ag.num_choices[ ag.obs[ q ] ] )
                    break;
                pick[ a - 1 ] = 0;
                --a;
            }
            if ( a == 0 )
                break;
        }
        for ( const auto& act : acts )
            for ( const auto& [ x, w ] : act.succ.support() )
                if ( index[ x ] < 0 )
                {
                    index[ x ] = static_cast< int >( order.size() );
                    order.push_back( x );
                    queue.push_back( x );
                }
        raw.resize( order.size() );
        raw[ index[ q ] ] = std::move( acts );
    }
    raw.resize( order.size() );
    for ( int q : order )
    {
        m.states.push_back( g.states[ q ] );
        m.label.push_back( g.label[ q ] );
    }
    m.init = 0;
    for ( auto& acts : raw )
    {
        for ( auto& a : acts )
            a.succ = a.succ.map( [ & ]( int x ) { return index[ x ]; } );
        m.actions.push_back( std::move( acts ) );
    }
    validate( m );
    return m;
}

MarkovChain induce_mc( const Game& g, const Strategy& profile, int q )
{
    validate( g, profile );
    if ( profile.agents.size() != g.agents.size() )
        throw Error( ErrorKind::InvalidConfig, "a profile must fix every agent" );
    MarkovChain mc;
    std::map< int, int > index;
    std::vector< int > order;
    std::deque< int > queue;
    auto node = [ & ]( int s ) {
        auto [ it, fresh ] = index.emplace( s, static_cast< int >( order.size() ) );
        if ( fresh )
        {
            order.push_back( s );
            queue.push_back( s );
        }
        return it->second;
    };
    node( q );
    std::vector< Dist< int > > rows;
    while ( !queue.empty() )
    {
        int s = queue.front();
        queue.pop_front();
        std::vector< int > chosen;
        for ( int e : g.out[ s ] )
            if ( complies( g.edges[ e ], g, profile ) )
                chosen.push_back( e );
        if ( chosen.size() > 1 )
            throw Error( ErrorKind::InvalidConfig, "profile leaves a scheduling choice at " + g.states[ s ] );
        Dist< int > d = chosen.empty() ? Dist< int >::point( s ) : g.edges[ chosen.front() ].succ;
        Dist< int > mapped = d.map( [ & ]( int x ) { return node( x ); } );
        rows.resize( order.size() );
        rows[ index[ s ] ] = mapped;
    }
    rows.resize( order.size() );
    for ( int s : order )
    {
        mc.states.push_back( g.states[ s ] );
        mc.label.push_back( g.label[ s ] );
    }
    mc.next = std::move( rows );
    mc.init = 0;
    validate( mc );
    return mc;
}

// ---------------------------------------------------------------------------
// product with the monitor

namespace
{

bool state_holds( const Formula& f, const Valuation& label, int q, const Labeling* labels )
{
    switch ( f->op )
    {
    case Op::True: return true;
    case Op::False: return false;
    case Op::Atom: return satisfies( label, f->atom );
    case Op::Not: return !state_holds( f->lhs, label, q, labels );
    case Op::And: return state_holds( f->lhs, label, q, labels ) && state_holds( f->rhs, label, q, labels );
    case Op::Or: return state_holds( f->lhs, label, q, labels ) || state_holds( f->rhs, label, q, labels );
    case Op::Coop:
    {
        auto key = to_string( f );
        if ( !labels || !labels->count( key ) )
            throw Error( ErrorKind::UnsupportedFormula, "no labelling for " + key );
        return labels->at( key )[ q ];
    }
    default: throw Error( ErrorKind::UnsupportedFormula, "'" + to_string( f ) + "' is not a state formula" );
    }
}

struct Product
{
    std::vector< int > base;
    std::vector< bool > accepting;
    std::vector< std::vector< Dist< int > > > act;
    std::vector< int > start_nodes;
};

Product build_product( const Mdp& m, const DetMonitor& mon, const std::vector< int >& starts, const MdpOptions& opts )
{
    std::vector< std::uint64_t > letters( m.states.size(), 0 );
    for ( std::size_t s = 0; s < m.states.size(); ++s )
        for ( std::size_t i = 0; i < mon.atoms().size(); ++i )
            if ( state_holds( mon.atoms()[ i ], m.label[ s ], static_cast< int >( s ), opts.labels ) )
                letters[ s ] |= std::uint64_t{ 1 } << i;
    Product p;
    std::vector< int > mstate;
    std::map< std::pair< int, int >, int > index;
    std::deque< int > queue;
    auto node = [ & ]( int s, int prev ) {
        int ms = mon.step( prev, letters[ s ] );
        auto [ it, fresh ] = index.emplace( std::make_pair( s, ms ), static_cast< int >( p.base.size() ) );
        if ( fresh )
        {
            if ( p.base.size() >= opts.state_bound )
                throw Error( ErrorKind::BoundExceeded, "product exceeds " + std::to_string( opts.state_bound ) + " states" );
            p.base.push_back( s );
            mstate.push_back( ms );
            p.accepting.push_back( mon.accepting( ms ) );
            queue.push_back( it->second );
        }
        return it->second;
    };
    for ( int s : starts )
        p.start_nodes.push_back( node( s, mon.init() ) );
    while ( !queue.empty() )
    {
        int v = queue.front();
        queue.pop_front();
        int s = p.base[ v ];
        int ms = mstate[ v ];
        std::vector< Dist< int > > acts;
        for ( const auto& a : m.actions[ s ] )
            acts.push_back( a.succ.map( [ & ]( int x ) { return node( x, ms ); } ) );
        p.act.resize( p.base.size() );
        p.act[ v ] = std::move( acts );
    }
    p.act.resize( p.base.size() );
    return p;
}

// Maximal end components; -1 for states in none.
std::vector< int > end_components( const Product& p )
{
    std::size_t n = p.base.size();
    std::vector< std::vector< bool > > alive( n );
    std::vector< bool > live_node( n, true );
    for ( std::size_t v = 0; v < n; ++v )
        alive[ v ].assign( p.act[ v ].size(), true );
    std::vector< int > comp;
    for ( bool changed = true; changed; )
    {
        changed = false;
        std::vector< std::pair< int, int > > edges;
        for ( std::size_t v = 0; v < n; ++v )
            if ( live_node[ v ] )
                for ( std::size_t a = 0; a < p.act[ v ].size(); ++a )
                    if ( alive[ v ][ a ] )
                        for ( const auto& [ x, w ] : p.act[ v ][ a ].support() )
                            if ( live_node[ x ] )
                                edges.emplace_back( static_cast< int >( v ), x );
        int count = 0;
        comp = scc_decomposition( static_cast< int >( n ), edges, count );
        for ( std::size_t v = 0; v < n; ++v )
        {
            if ( !live_node[ v ] )
                continue;
            bool any = false;
            for ( std::size_t a = 0; a < p.act[ v ].size(); ++a )
            {
                if ( !alive[ v ][ a ] )
                    continue;
                for ( const auto& [ x, w ] : p.act[ v ][ a ].support() )
                    if ( !live_node[ x ] || comp[ x ] != comp[ v ] )
                    {
                        alive[ v ][ a ] = false;
                        changed = true;
                        break;
                    }
                any = any || alive[ v ][ a ];
            }
            if ( !any )
            {
                live_node[ v ] = false;
                changed = true;
            }
        }
    }
    std::vector< int > out( n, -1 );
    for ( std::size_t v = 0; v < n; ++v )
        if ( live_node[ v ] )
            out[ v ] = comp[ v ];
    return out;
}

Rational expected( const Dist< int >& d, const std::vector< Rational >& value )
{
    Rational sum = 0;
    for ( const auto& [ x, w ] : d.support() )
        sum += w * value[ x ];
    return sum;
}

// Maximal probability of reaching `target`, by policy iteration with exact
// evaluation of every policy.
std::vector< Rational > max_reach( const Product& p, const std::vector< bool >& target )
{
    std::size_t n = p.base.size();
    std::vector< std::vector< int > > pred( n );
    for ( std::size_t v = 0; v < n; ++v )
        for ( const auto& d : p.act[ v ] )
            for ( const auto& [ x, w ] : d.support() )
                pred[ x ].push_back( static_cast< int >( v ) );
    std::vector< bool > can( n, false );
    std::vector< int > stack;
    for ( std::size_t v = 0; v < n; ++v )
        if ( target[ v ] )
        {
            can[ v ] = true;
            stack.push_back( static_cast< int >( v ) );
        }
    while ( !stack.empty() )
    {
        int v = stack.back();
        stack.pop_back();
        for ( int u : pred[ v ] )
            if ( !can[ u ] )
            {
                can[ u ] = true;
                stack.push_back( u );
            }
    }

    std::vector< int > policy( n, 0 );
    std::vector< Rational > value( n, 0 );
    for ( int round = 0; round < 100000; ++round )
    {
        // Evaluate: states that reach the target under the policy.
        std::vector< std::vector< int > > ppred( n );
        for ( std::size_t v = 0; v < n; ++v )
            if ( !target[ v ] && can[ v ] )
                for ( const auto& [ x, w ] : p.act[ v ][ policy[ v ] ].support() )
                    ppred[ x ].push_back( static_cast< int >( v ) );
        std::vector< bool > reach( n, false );
        for ( std::size_t v = 0; v < n; ++v )
            if ( target[ v ] )
            {
                reach[ v ] = true;
                stack.push_back( static_cast< int >( v ) );
            }
        while ( !stack.empty() )
        {
            int v = stack.back();
            stack.pop_back();
            for ( int u : ppred[ v ] )
                if ( !reach[ u ] )
                {
                    reach[ u ] = true;
                    stack.push_back( u );
                }
        }
        std::vector< int > unknown_index( n, -1 );
        std::vector< int > unknown;
        for ( std::size_t v = 0; v < n; ++v )
            if ( reach[ v ] && !target[ v ] )
            {
                unknown_index[ v ] = static_cast< int >( unknown.size() );
                unknown.push_back( static_cast< int >( v ) );
            }
        Matrix a( unknown.size(), std::vector< Rational >( unknown.size(), 0 ) );
        std::vector< Rational > b( unknown.size(), 0 );
        for ( std::size_t i = 0; i < unknown.size(); ++i )
        {
            int v = unknown[ i ];
            a[ i ][ i ] += 1;
            for ( const auto& [ x, w ] : p.act[ v ][ policy[ v ] ].support() )
            {
                if ( target[ x ] )
                    b[ i ] += w;
                else if ( unknown_index[ x ] >= 0 )
                    a[ i ][ unknown_index[ x ] ] -= w;
            }
        }
        auto sol = solve_linear( std::move( a ), std::move( b ) );
        for ( std::size_t v = 0; v < n; ++v )
            value[ v ] = target[ v ] ? Rational( 1 ) : Rational( 0 );
        for ( std::size_t i = 0; i < unknown.size(); ++i )
            value[ unknown[ i ] ] = sol[ i ];

        bool changed = false;
        for ( std::size_t v = 0; v < n; ++v )
        {
            if ( target[ v ] || !can[ v ] )
                continue;
            int best = policy[ v ];
            Rational best_value = expected( p.act[ v ][ best ], value );
            for ( std::size_t a2 = 0; a2 < p.act[ v ].size(); ++a2 )
            {
                Rational x = expected( p.act[ v ][ a2 ], value );
                if ( x > best_value )
                {
                    best = static_cast< int >( a2 );
                    best_value = x;
                }
            }
            if ( best != policy[ v ] )
            {
                policy[ v ] = best;
                changed = true;
            }
        }
        if ( !changed )
            return value;
    }
    throw Error( ErrorKind::BoundExceeded, "policy iteration did not stabilise" );
}

std::vector< bool > ec_states( const Product& p, const std::vector< int >& ec, bool accepting )
{
    std::vector< bool > out( p.base.size(), false );
    for ( std::size_t v = 0; v < p.base.size(); ++v )
        out[ v ] = ec[ v ] >= 0 && p.accepting[ v ] == accepting;
    return out;
}

} // namespace

std::vector< Rational > mdp_values( const Mdp& m, const std::vector< int >& starts, const Formula& psi, Opt opt,
                                    const MdpOptions& opts )
{
    DetMonitor mon = monitor_for( psi );
    Product p = build_product( m, mon, starts, opts );
    auto ec = end_components( p );
    // The monitor state is constant inside an end component, so a run
    // satisfies ψ iff it settles in an accepting one.
    std::vector< Rational > out;
    if ( opt == Opt::Max )
    {
        auto v = max_reach( p, ec_states( p, ec, true ) );
        for ( int s : p.start_nodes )
            out.push_back( v[ s ] );
    }
    else
    {
        auto v = max_reach( p, ec_states( p, ec, false ) );
        for ( int s : p.start_nodes )
            out.push_back( 1 - v[ s ] );
    }
    return out;
}

Rational mdp_probability( const Mdp& m, const Formula& psi, Opt opt, const MdpOptions& opts )
{
    return mdp_values( m, { m.init }, psi, opt, opts ).front();
}

Rational mc_probability( const MarkovChain& mc, const Formula& psi, const Labeling* labels )
{
    validate( mc );
    Mdp m;
    m.states = mc.states;
    m.label = mc.label;
    m.init = mc.init;
    for ( const auto& d : mc.next )
        m.actions.push_back( { { d, "", {}, -1 } } );
    MdpOptions opts;
    opts.labels = labels;
    return mdp_probability( m, psi, Opt::Max, opts );
}

ApproxValue mdp_probability_vi( const Mdp& m, const Formula& psi, Opt opt, double tolerance, const MdpOptions& opts )
{
    DetMonitor mon = monitor_for( psi );
    Product p = build_product( m, mon, { m.init }, opts );
    auto ec = end_components( p );
    auto target = ec_states( p, ec, opt == Opt::Max );
    std::size_t n = p.base.size();
    std::vector< double > v( n, 0.0 );
    for ( std::size_t s = 0; s < n; ++s )
        if ( target[ s ] )
            v[ s ] = 1.0;
    ApproxValue res;
    while ( true )
    {
        double delta = 0;
        for ( std::size_t s = 0; s < n; ++s )
        {
            if ( target[ s ] )
                continue;
            double best = 0;
            for ( const auto& d : p.act[ s ] )
            {
                double x = 0;
                for ( const auto& [ y, w ] : d.support() )
                    x += w.get_d() * v[ y ];
                best = std::max( best, x );
            }
            delta = std::max( delta, best - v[ s ] );
            v[ s ] = best;
        }
        ++res.iterations;
        res.residual = delta;
        if ( delta <= tolerance || res.iterations >= 10000000 )
            break;
    }
    double x = v[ p.start_nodes.front() ];
    res.value = opt == Opt::Max ? x : 1.0 - x;
    return res;
}

// ---------------------------------------------------------------------------
// strategic checking

Rational strategy_value( const Game& g, int q, const Strategy& s, const Formula& psi, const Bound& bound,
                         const PatlOptions& opts )
{
    Mdp m = game_mdp( apply( g, s ) );
    MdpOptions mo;
    mo.labels = opts.labels;
    auto starts = view_starts( g, q, s.agents, opts.view );
    auto vals = mdp_values( m, starts, psi, bound.is_lower() ? Opt::Min : Opt::Max, mo );
    return bound.is_lower() ? *std::min_element( vals.begin(), vals.end() ) : *std::max_element( vals.begin(), vals.end() );
}

PatlResult check_patl( const Game& g, int q, const Formula& coop, const PatlOptions& opts )
{
    if ( coop->op != Op::Coop || !coop->bound || coop->flavor == Flavor::Only )
        throw Error( ErrorKind::UnsupportedFormula, "expected a probability-bounded modality: " + to_string( coop ) );
    Labeling labels = opts.labels ? *opts.labels : Labeling{};
    label_all( g, coop->lhs, labels, opts.view );
    PatlOptions inner = opts;
    inner.labels = &labels;
    const Bound& bound = *coop->bound;
    auto coalition = g.agent_indices( coop->coalition );
    if ( strategy_count( g, coalition, opts.cap ) > opts.cap )
        throw Error( ErrorKind::BoundExceeded, "more than " + std::to_string( opts.cap ) + " strategies" );
    PatlResult res;
    bool first = true;
    res.candidates = enumerate_ir( g, coalition, [ & ]( const Strategy& s ) {
        Rational v = strategy_value( g, q, s, coop->lhs, bound, inner );
        if ( bound.holds( v ) )
        {
            res.holds = true;
            res.witness = s;
            res.value = v;
            return false;
        }
        if ( first || ( bound.is_lower() ? v > res.value : v < res.value ) )
            res.value = v;
        first = false;
        return true;
    } );
    return res;
}

bool check_probability( const Game& g, int q, const Bound& bound, const Formula& psi, const Labeling* labels )
{
    MdpOptions mo;
    mo.labels = labels;
    Mdp m = game_mdp( g );
    return bound.holds( mdp_values( m, { q }, psi, bound.is_lower() ? Opt::Min : Opt::Max, mo ).front() );
}

void label_all( const Game& g, const Formula& f, Labeling& labels, View view )
{
    if ( !f )
        return;
    if ( f->op != Op::Coop )
    {
        label_all( g, f->lhs, labels, view );
        label_all( g, f->rhs, labels, view );
        return;
    }
    auto key = to_string( f );
    if ( labels.count( key ) )
        return;
    label_all( g, f->lhs, labels, view );
    std::vector< bool > truth( g.states.size() );
    for ( std::size_t q = 0; q < g.states.size(); ++q )
    {
        int s = static_cast< int >( q );
        if ( f->bound )
        {
            PatlOptions po;
            po.view = view;
            po.labels = &labels;
            truth[ q ] = check_patl( g, s, f, po ).holds;
        }
        else
        {
            QualOptions qo;
            qo.view = view;
            qo.labels = &labels;
            auto coalition = g.agent_indices( f->coalition );
            truth[ q ] = f->flavor == Flavor::Only ? check_only( g, s, coalition, f->lhs, qo ).holds
                                                   : check_coop( g, s, coalition, f->lhs, qo ).holds;
        }
    }
    labels[ key ] = std::move( truth );
}

std::vector< bool > evaluate_all( const Game& g, const Formula& phi, View view )
{
    Labeling labels;
    label_all( g, phi, labels, view );
    std::vector< bool > out( g.states.size() );
    for ( std::size_t q = 0; q < g.states.size(); ++q )
        out[ q ] = state_holds( phi, g.label[ q ], static_cast< int >( q ), &labels );
    return out;
}

} // namespace sagv
