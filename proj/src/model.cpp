#include "sagv/model.hpp"

#include <sstream>

namespace sagv
{

// ---------------------------------------------------------------------------
// base.hpp helpers

Rational parse_rational( const std::string& text )
{
    if ( text.empty() )
        throw Error( ErrorKind::SyntaxError, "empty number" );
    auto dot = text.find( '.' );
    try
    {
        if ( dot == std::string::npos )
        {
            Rational r( text, 10 );
            r.canonicalize();
            return r;
        }
        std::string whole = text.substr( 0, dot );
        std::string frac = text.substr( dot + 1 );
        if ( frac.find_first_not_of( "0123456789" ) != std::string::npos
             || whole.find_first_not_of( "0123456789" ) != std::string::npos )
            throw Error( ErrorKind::SyntaxError, "bad number '" + text + "'" );
        mpz_class num( ( whole.empty() ? "0" : whole ) + frac, 10 );
        mpz_class den = 1;
        for ( std::size_t i = 0; i < frac.size(); ++i )
            den *= 10;
        Rational r( num, den );
        r.canonicalize();
        return r;
    }
    catch ( const std::invalid_argument& )
    {
        throw Error( ErrorKind::SyntaxError, "bad number '" + text + "'" );
    }
}

std::string to_string( const Rational& r )
{
    return r.get_str();
}

const char* error_kind_name( ErrorKind kind )
{
    switch ( kind )
    {
    case ErrorKind::IncompatibleValuations: return "IncompatibleValuations";
    case ErrorKind::MissingTransition: return "MissingTransition";
    case ErrorKind::ForbiddenSelfLoop: return "ForbiddenSelfLoop";
    case ErrorKind::VariableClash: return "VariableClash";
    case ErrorKind::VariableNotInScope: return "VariableNotInScope";
    case ErrorKind::NotATrace: return "NotATrace";
    case ErrorKind::NotAsynchronous: return "NotAsynchronous";
    case ErrorKind::UnknownAgent: return "UnknownAgent";
    case ErrorKind::DeadlockState: return "DeadlockState";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::BoundOutOfRange: return "BoundOutOfRange";
    case ErrorKind::AlphabetMismatch: return "AlphabetMismatch";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::UnsupportedFormula: return "UnsupportedFormula";
    case ErrorKind::BoundExceeded: return "BoundExceeded";
    case ErrorKind::IllegalAction: return "IllegalAction";
    case ErrorKind::EmptyList: return "EmptyList";
    case ErrorKind::UnsupportedNext: return "UnsupportedNext";
    case ErrorKind::NotPerfectInformation: return "NotPerfectInformation";
    case ErrorKind::ZeroDenominator: return "ZeroDenominator";
    case ErrorKind::InconsistentBounds: return "InconsistentBounds";
    case ErrorKind::SynthesisFailed: return "SynthesisFailed";
    case ErrorKind::CapExceeded: return "CapExceeded";
    case ErrorKind::HorizonInsufficient: return "HorizonInsufficient";
    case ErrorKind::InvalidModel: return "InvalidModel";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    }
    return "Error";
}

Dist< std::vector< int > > product_dist( const std::vector< Dist< int > >& factors )
{
    if ( factors.empty() )
        throw Error( ErrorKind::EmptyList, "product of no distributions" );
    std::vector< std::pair< std::vector< int >, Rational > > acc{ { {}, Rational( 1 ) } };
    for ( const auto& d : factors )
    {
        std::vector< std::pair< std::vector< int >, Rational > > next;
        for ( const auto& [ tuple, w ] : acc )
            for ( const auto& [ x, v ] : d.support() )
            {
                auto t = tuple;
                t.push_back( x );
                next.emplace_back( std::move( t ), w * v );
            }
        acc = std::move( next );
    }
    return Dist< std::vector< int > >::from( std::move( acc ) );
}

// ---------------------------------------------------------------------------
// valuations

Domain::Domain( std::vector< std::string > values ) : _values{ std::move( values ) }
{
    if ( _values.empty() )
        throw Error( ErrorKind::InvalidModel, "empty domain" );
    std::set< std::string > seen( _values.begin(), _values.end() );
    if ( seen.size() != _values.size() )
        throw Error( ErrorKind::InvalidModel, "duplicate domain value" );
}

bool Domain::contains( const std::string& v ) const
{
    return std::find( _values.begin(), _values.end(), v ) != _values.end();
}

VarSet make_varset( std::vector< std::string > vars )
{
    std::sort( vars.begin(), vars.end() );
    vars.erase( std::unique( vars.begin(), vars.end() ), vars.end() );
    return vars;
}

VarSet var_union( const VarSet& a, const VarSet& b )
{
    VarSet out;
    std::set_union( a.begin(), a.end(), b.begin(), b.end(), std::back_inserter( out ) );
    return out;
}

VarSet var_intersection( const VarSet& a, const VarSet& b )
{
    VarSet out;
    std::set_intersection( a.begin(), a.end(), b.begin(), b.end(), std::back_inserter( out ) );
    return out;
}

VarSet var_difference( const VarSet& a, const VarSet& b )
{
    VarSet out;
    std::set_difference( a.begin(), a.end(), b.begin(), b.end(), std::back_inserter( out ) );
    return out;
}

bool var_subset( const VarSet& a, const VarSet& b )
{
    return std::includes( b.begin(), b.end(), a.begin(), a.end() );
}

bool compatible( const Valuation& r1, const Valuation& r2 )
{
    auto i = r1.begin();
    auto j = r2.begin();
    while ( i != r1.end() && j != r2.end() )
    {
        if ( i->first < j->first )
            ++i;
        else if ( j->first < i->first )
            ++j;
        else
        {
            if ( i->second != j->second )
                return false;
            ++i;
            ++j;
        }
    }
    return true;
}

Valuation merge( const Valuation& r1, const Valuation& r2 )
{
    if ( !compatible( r1, r2 ) )
        throw Error( ErrorKind::IncompatibleValuations, to_string( r1 ) + " vs " + to_string( r2 ) );
    Valuation out = r1;
    out.insert( r2.begin(), r2.end() );
    return out;
}

Valuation restrict_to( const Valuation& r, const VarSet& vars )
{
    Valuation out;
    for ( const auto& [ k, v ] : r )
        if ( std::binary_search( vars.begin(), vars.end(), k ) )
            out.emplace( k, v );
    return out;
}

VarSet vars_of( const Valuation& r )
{
    VarSet out;
    for ( const auto& [ k, v ] : r )
        out.push_back( k );
    return out;
}

std::string to_string( const Valuation& r )
{
    std::string s = "[";
    bool first = true;
    for ( const auto& [ k, v ] : r )
    {
        if ( !first )
            s += ",";
        first = false;
        s += k + "=" + v;
    }
    return s + "]";
}

std::vector< Valuation > all_valuations( const VarSet& vars, const Domain& domain )
{
    std::vector< Valuation > out{ Valuation{} };
    for ( const auto& x : vars )
    {
        std::vector< Valuation > next;
        for ( const auto& base : out )
            for ( const auto& v : domain.values() )
            {
                auto r = base;
                r[ x ] = v;
                next.push_back( std::move( r ) );
            }
        out = std::move( next );
    }
    return out;
}

const char* rule_tag_name( RuleTag tag )
{
    switch ( tag )
    {
    case RuleTag::Local: return "local";
    case RuleTag::AsynL: return "ASYN_L";
    case RuleTag::AsynR: return "ASYN_R";
    case RuleTag::Syn: return "SYN";
    case RuleTag::Implicit: return "implicit";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// modules

int Module::state_index( const std::string& n ) const
{
    for ( std::size_t i = 0; i < states.size(); ++i )
        if ( states[ i ] == n )
            return static_cast< int >( i );
    return -1;
}

std::vector< int > Module::transitions_from( int q ) const
{
    std::vector< int > out;
    for ( std::size_t i = 0; i < trans.size(); ++i )
        if ( trans[ i ].src == q )
            out.push_back( static_cast< int >( i ) );
    return out;
}

int Module::component_index( const std::string& n ) const
{
    for ( std::size_t i = 0; i < components.size(); ++i )
        if ( components[ i ].name == n )
            return static_cast< int >( i );
    return -1;
}

ModuleBuilder::ModuleBuilder( std::string name, Domain domain, std::vector< std::string > state_vars,
                              std::vector< std::string > input_vars )
{
    _m.name = std::move( name );
    _m.domain = std::move( domain );
    _m.state_vars = make_varset( std::move( state_vars ) );
    _m.input_vars = make_varset( std::move( input_vars ) );
    if ( !var_intersection( _m.state_vars, _m.input_vars ).empty() )
        throw Error( ErrorKind::VariableClash, "module " + _m.name + ": state and input variables overlap" );
}

int ModuleBuilder::add_state( const std::string& name, Valuation label )
{
    if ( _m.state_index( name ) >= 0 )
        throw Error( ErrorKind::InvalidModel, "module " + _m.name + ": duplicate state " + name );
    if ( vars_of( label ) != _m.state_vars )
        throw Error( ErrorKind::VariableNotInScope,
                     "module " + _m.name + ": label of " + name + " must assign exactly the state variables" );
    for ( const auto& [ k, v ] : label )
        if ( !_m.domain.contains( v ) )
            throw Error( ErrorKind::InvalidModel, "module " + _m.name + ": value " + v + " not in domain" );
    _m.states.push_back( name );
    _m.label.push_back( std::move( label ) );
    return static_cast< int >( _m.states.size() ) - 1;
}

void ModuleBuilder::set_init( int q )
{
    _m.init = q;
}

void ModuleBuilder::add_transition( const std::string& name, int src, Valuation guard, int dst )
{
    add_prob_transition( name, src, std::move( guard ), { { dst, Rational( 1 ) } } );
}

void ModuleBuilder::add_prob_transition( const std::string& name, int src, Valuation guard,
                                         std::vector< std::pair< int, Rational > > succ )
{
    _raw.push_back( Raw{ name, src, std::move( guard ), std::move( succ ) } );
}

Module ModuleBuilder::build()
{
    Module m = _m;
    if ( m.states.empty() )
        throw Error( ErrorKind::InvalidModel, "module " + m.name + " has no states" );
    if ( m.init < 0 || m.init >= static_cast< int >( m.states.size() ) )
        throw Error( ErrorKind::InvalidModel, "module " + m.name + ": bad initial state" );
    auto inputs = all_valuations( m.input_vars, m.domain );
    for ( const auto& raw : _raw )
    {
        if ( !var_subset( vars_of( raw.guard ), m.input_vars ) )
            throw Error( ErrorKind::VariableNotInScope,
                         "module " + m.name + ": guard " + to_string( raw.guard ) + " mentions non-input variables" );
        auto d = Dist< int >::from( raw.succ );
        if ( !d.is_valid() )
            throw Error( ErrorKind::InvalidModel,
                         "module " + m.name + ": distribution of " + raw.name + " does not sum to 1" );
        for ( const auto& alpha : inputs )
        {
            if ( !compatible( alpha, raw.guard ) )
                continue;
            Transition t;
            t.src = raw.src;
            t.input = alpha;
            t.succ = d;
            t.tag = RuleTag::Local;
            t.name = raw.name;
            m.trans.push_back( std::move( t ) );
        }
    }
    for ( std::size_t q = 0; q < m.states.size(); ++q )
        for ( const auto& alpha : inputs )
        {
            bool covered = false;
            for ( const auto& t : m.trans )
                if ( t.src == static_cast< int >( q ) && t.input == alpha )
                    covered = true;
            if ( covered )
                continue;
            Transition t;
            t.src = static_cast< int >( q );
            t.input = alpha;
            t.succ = Dist< int >::point( static_cast< int >( q ) );
            t.tag = RuleTag::Implicit;
            t.name = "implicit";
            m.trans.push_back( std::move( t ) );
        }
    for ( std::size_t i = 0; i < m.trans.size(); ++i )
    {
        m.trans[ i ].actors = { static_cast< int >( i ) };
        m.trans[ i ].moving = { !m.trans[ i ].is_self_loop() };
    }
    Component c;
    c.name = m.name;
    c.local.resize( m.states.size() );
    std::iota( c.local.begin(), c.local.end(), 0 );
    c.local_names = m.states;
    m.components = { c };
    m.base_trans = { m.trans };
    validate( m );
    return m;
}

Module unit_module( const Domain& domain )
{
    ModuleBuilder b( "unit", domain, {}, {} );
    b.add_state( "u", {} );
    return b.build();
}

void validate( const Module& m )
{
    if ( !var_intersection( m.state_vars, m.input_vars ).empty() )
        throw Error( ErrorKind::VariableClash, "module " + m.name + ": X and I overlap" );
    if ( m.init < 0 || m.init >= static_cast< int >( m.states.size() ) )
        throw Error( ErrorKind::InvalidModel, "module " + m.name + ": init not a state" );
    if ( m.label.size() != m.states.size() )
        throw Error( ErrorKind::InvalidModel, "module " + m.name + ": label not total" );
    for ( const auto& l : m.label )
        if ( vars_of( l ) != m.state_vars )
            throw Error( ErrorKind::InvalidModel, "module " + m.name + ": label over wrong variables" );
    auto inputs = all_valuations( m.input_vars, m.domain );
    std::map< Valuation, int > input_index;
    for ( std::size_t i = 0; i < inputs.size(); ++i )
        input_index[ inputs[ i ] ] = static_cast< int >( i );
    std::vector< std::vector< std::vector< const Transition* > > > by( m.states.size(),
                                                                    std::vector< std::vector< const Transition* > >( inputs.size() ) );
    for ( const auto& t : m.trans )
    {
        if ( t.src < 0 || t.src >= static_cast< int >( m.states.size() ) )
            throw Error( ErrorKind::InvalidModel, "module " + m.name + ": transition from unknown state" );
        auto it = input_index.find( t.input );
        if ( it == input_index.end() )
            throw Error( ErrorKind::InvalidModel, "module " + m.name + ": transition input " + to_string( t.input )
                                                      + " is not a total input valuation" );
        if ( !t.succ.is_valid() )
            throw Error( ErrorKind::InvalidModel, "module " + m.name + ": improper distribution" );
        for ( const auto& [ dst, w ] : t.succ.support() )
            if ( dst < 0 || dst >= static_cast< int >( m.states.size() ) )
                throw Error( ErrorKind::InvalidModel, "module " + m.name + ": transition to unknown state" );
        by[ t.src ][ it->second ].push_back( &t );
    }
    for ( std::size_t q = 0; q < m.states.size(); ++q )
        for ( std::size_t a = 0; a < inputs.size(); ++a )
        {
            const auto& ts = by[ q ][ a ];
            if ( ts.empty() )
                throw Error( ErrorKind::MissingTransition,
                             "module " + m.name + ": no transition for (" + m.states[ q ] + ", " + to_string( inputs[ a ] ) + ")" );
            bool has_loop = false;
            bool has_move = false;
            for ( const auto* t : ts )
                ( t->is_self_loop() ? has_loop : has_move ) = true;
            if ( has_loop && has_move )
                throw Error( ErrorKind::ForbiddenSelfLoop,
                             "module " + m.name + ": self-loop next to a move at (" + m.states[ q ] + ", "
                                 + to_string( inputs[ a ] ) + ")" );
        }
}

Repertoire default_repertoire( const Module& m )
{
    Repertoire r;
    r.choices.resize( m.states.size() );
    for ( std::size_t q = 0; q < m.states.size(); ++q )
    {
        std::vector< int > explicit_ts;
        std::vector< int > all;
        for ( std::size_t i = 0; i < m.trans.size(); ++i )
            if ( m.trans[ i ].src == static_cast< int >( q ) )
            {
                all.push_back( static_cast< int >( i ) );
                if ( m.trans[ i ].tag != RuleTag::Implicit )
                    explicit_ts.push_back( static_cast< int >( i ) );
            }
        r.choices[ q ].push_back( explicit_ts.empty() ? all : explicit_ts );
    }
    return r;
}

void validate( const Repertoire& r, const Module& m )
{
    if ( r.choices.size() != m.states.size() )
        throw Error( ErrorKind::InvalidModel, "repertoire of " + m.name + " does not cover all states" );
    for ( std::size_t q = 0; q < m.states.size(); ++q )
    {
        if ( r.choices[ q ].empty() )
            throw Error( ErrorKind::InvalidModel, "repertoire of " + m.name + " empty at " + m.states[ q ] );
        for ( const auto& choice : r.choices[ q ] )
        {
            if ( choice.empty() )
                throw Error( ErrorKind::InvalidModel, "repertoire of " + m.name + " has an empty choice at " + m.states[ q ] );
            for ( int t : choice )
                if ( t < 0 || t >= static_cast< int >( m.trans.size() ) || m.trans[ t ].src != static_cast< int >( q ) )
                    throw Error( ErrorKind::InvalidModel,
                                 "repertoire of " + m.name + " at " + m.states[ q ] + " refers to a foreign transition" );
        }
    }
}

void validate( const Assumption& a )
{
    validate( a.module );
    if ( a.accepting.size() != a.module.states.size() )
        throw Error( ErrorKind::InvalidModel, "accepting set of " + a.module.name + " has the wrong size" );
}

Assumption universal_assumption( const Domain& domain )
{
    Assumption a{ unit_module( domain ), { true } };
    a.module.name = "universal";
    a.module.components[ 0 ].name = "universal";
    a.module.components[ 0 ].environment = true;
    return a;
}

// ---------------------------------------------------------------------------
// traces and words

void check_trace( const Module& m, const Trace& t )
{
    if ( t.cycle.empty() )
        throw Error( ErrorKind::NotATrace, "empty cycle" );
    if ( t.at( 0 ).state != m.init )
        throw Error( ErrorKind::NotATrace, "trace does not start at the initial state" );
    std::size_t n = t.horizon();
    for ( std::size_t i = 0; i < n; ++i )
    {
        const auto& cur = t.at( i );
        const auto& nxt = t.at( i + 1 );
        bool ok = false;
        for ( const auto& tr : m.trans )
            if ( tr.src == cur.state && tr.input == cur.input && tr.succ.weight( nxt.state ) > 0 )
                ok = true;
        if ( !ok )
            throw Error( ErrorKind::NotATrace, "no transition " + m.states.at( cur.state ) + " -" + to_string( cur.input )
                                                   + "-> " + m.states.at( nxt.state ) );
    }
}

Word derived_word( const Module& m, const Trace& t )
{
    check_trace( m, t );
    Word w;
    for ( const auto& s : t.prefix )
        w.prefix.push_back( m.label[ s.state ] );
    for ( const auto& s : t.cycle )
        w.cycle.push_back( m.label[ s.state ] );
    return w;
}

Word admitted_word( const Module& m, const Trace& t )
{
    check_trace( m, t );
    Word w;
    for ( const auto& s : t.prefix )
        w.prefix.push_back( s.input );
    for ( const auto& s : t.cycle )
        w.cycle.push_back( s.input );
    return w;
}

std::size_t ChangeIndices::at( std::size_t i ) const
{
    if ( i < prefix.size() )
        return prefix[ i ];
    std::size_t j = i - prefix.size();
    return cycle[ j % cycle.size() ] + ( j / cycle.size() ) * stride;
}

Curtailment curtail( const Word& w, const VarSet& vars )
{
    if ( w.cycle.empty() )
        throw Error( ErrorKind::InvalidModel, "word without cycle" );
    for ( std::size_t i = 0; i < w.horizon(); ++i )
        if ( !var_subset( vars, vars_of( w.at( i ) ) ) )
            throw Error( ErrorKind::VariableNotInScope, "curtailment variables not assigned by the word" );

    std::size_t p = w.prefix.size();
    std::size_t c = w.cycle.size();
    auto val = [ & ]( std::size_t i ) { return restrict_to( w.at( i ), vars ); };

    bool constant_cycle = true;
    for ( std::size_t i = 1; i < c; ++i )
        if ( val( p + i ) != val( p ) )
            constant_cycle = false;

    Curtailment out;
    auto is_start = [ & ]( std::size_t i ) { return i == 0 || val( i ) != val( i - 1 ); };
    if ( constant_cycle )
    {
        // Blocks of the prefix, then the constant tail stepping one index at a time.
        std::size_t last_start = 0;
        for ( std::size_t i = 0; i <= p; ++i )
            if ( is_start( i ) )
            {
                last_start = i;
                out.changes.prefix.push_back( i );
                out.word.prefix.push_back( val( i ) );
            }
        out.changes.prefix.pop_back();
        out.word.prefix.pop_back();
        out.changes.cycle = { last_start };
        out.changes.stride = 1;
        out.word.cycle = { val( p ) };
        return out;
    }
    // Block starts are periodic from position p + 1 on.
    for ( std::size_t i = 0; i < p + 1; ++i )
        if ( is_start( i ) )
        {
            out.changes.prefix.push_back( i );
            out.word.prefix.push_back( val( i ) );
        }
    for ( std::size_t i = p + 1; i < p + 1 + c; ++i )
        if ( is_start( i ) )
        {
            out.changes.cycle.push_back( i );
            out.word.cycle.push_back( val( i ) );
        }
    out.changes.stride = c;
    return out;
}

} // namespace sagv
