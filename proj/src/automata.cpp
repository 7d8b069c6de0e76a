#include "sagv/automata.hpp"

#include <deque>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace sagv
{

std::vector< std::vector< int > > Gba::by_source() const
{
    std::vector< std::vector< int > > out( static_cast< std::size_t >( num_states ) );
    for ( std::size_t i = 0; i < trans.size(); ++i )
        out[ trans[ i ].src ].push_back( static_cast< int >( i ) );
    return out;
}

// ---------------------------------------------------------------------------
// tableau

namespace
{

bool is_leaf( const Formula& f )
{
    return f->op == Op::Atom || f->op == Op::Coop;
}

class Tableau
{
public:
    explicit Tableau( const Formula& f ) : _root( nnf( f ) ) { collect( _root ); }

    Gba build()
    {
        Gba g;
        g.atoms = _atoms;
        g.num_acc = static_cast< int >( _untils.size() );
        if ( g.num_acc > 32 )
            throw Error( ErrorKind::UnsupportedFormula, "too many until operators" );
        std::map< std::string, int > index;
        std::vector< std::vector< Formula > > sets;
        auto intern = [ & ]( std::map< std::string, Formula > s ) {
            std::string key;
            std::vector< Formula > v;
            for ( auto& [ k, f ] : s )
            {
                key += k + "\x1f";
                v.push_back( f );
            }
            auto [ it, fresh ] = index.emplace( key, static_cast< int >( sets.size() ) );
            if ( fresh )
            {
                sets.push_back( std::move( v ) );
                g.state_names.push_back( key.empty() ? "true" : key );
            }
            return it->second;
        };
        g.init = { intern( { { to_string( _root ), _root } } ) };
        for ( std::size_t s = 0; s < sets.size(); ++s )
        {
            std::set< std::tuple< std::uint64_t, std::uint64_t, std::string, std::uint32_t > > seen;
            Cover start;
            std::vector< Formula > todo = sets[ s ];
            expand( todo, start, [ & ]( const Cover& c ) {
                std::string key;
                for ( const auto& [ k, f ] : c.next )
                    key += k + "\x1f";
                std::uint32_t acc = ~c.postponed & ( g.num_acc >= 32 ? ~0u : ( ( 1u << g.num_acc ) - 1 ) );
                if ( !seen.emplace( c.pos, c.neg, key, acc ).second )
                    return;
                int dst = intern( c.next );
                g.trans.push_back( { static_cast< int >( s ), dst, c.pos, c.neg, acc } );
            } );
        }
        for ( std::size_t i = 0; i < g.state_names.size(); ++i )
            std::replace( g.state_names[ i ].begin(), g.state_names[ i ].end(), '\x1f', ';' );
        g.num_states = static_cast< int >( sets.size() );
        return g;
    }

private:
    struct Cover
    {
        std::uint64_t pos = 0;
        std::uint64_t neg = 0;
        std::map< std::string, Formula > next;
        std::uint32_t postponed = 0;
        std::set< std::string > done;
    };

    Formula _root;
    std::vector< Formula > _atoms;
    std::map< std::string, int > _atom_index;
    std::map< std::string, int > _untils;

    void collect( const Formula& f )
    {
        if ( is_leaf( f ) )
        {
            auto key = to_string( f );
            if ( !_atom_index.count( key ) )
            {
                if ( _atoms.size() >= 64 )
                    throw Error( ErrorKind::UnsupportedFormula, "more than 64 atoms" );
                _atom_index[ key ] = static_cast< int >( _atoms.size() );
                _atoms.push_back( f );
            }
            return;
        }
        if ( f->op == Op::Until )
            _untils.emplace( to_string( f ), static_cast< int >( _untils.size() ) );
        if ( f->lhs )
            collect( f->lhs );
        if ( f->rhs )
            collect( f->rhs );
    }

    std::uint64_t bit( const Formula& leaf ) const { return std::uint64_t{ 1 } << _atom_index.at( to_string( leaf ) ); }

    void expand( std::vector< Formula > todo, Cover c, const std::function< void( const Cover& ) >& emit )
    {
        while ( !todo.empty() )
        {
            Formula f = todo.back();
            todo.pop_back();
            std::string key = to_string( f );
            if ( !c.done.insert( key ).second )
                continue;
            switch ( f->op )
            {
            case Op::True: break;
            case Op::False: return;
            case Op::Atom:
            case Op::Coop:
                if ( c.neg & bit( f ) )
                    return;
                c.pos |= bit( f );
                break;
            case Op::Not:
                if ( c.pos & bit( f->lhs ) )
                    return;
                c.neg |= bit( f->lhs );
                break;
            case Op::And:
                todo.push_back( f->lhs );
                todo.push_back( f->rhs );
                break;
            case Op::Next: c.next.emplace( to_string( f->lhs ), f->lhs ); break;
            case Op::Or:
            {
                auto other = todo;
                other.push_back( f->rhs );
                expand( std::move( other ), c, emit );
                todo.push_back( f->lhs );
                break;
            }
            case Op::Until:
            {
                auto now = todo;
                now.push_back( f->rhs );
                expand( std::move( now ), c, emit );
                todo.push_back( f->lhs );
                c.next.emplace( key, f );
                c.postponed |= 1u << _untils.at( key );
                break;
            }
            case Op::Release:
            {
                auto now = todo;
                now.push_back( f->lhs );
                now.push_back( f->rhs );
                expand( std::move( now ), c, emit );
                todo.push_back( f->rhs );
                c.next.emplace( key, f );
                break;
            }
            }
        }
        emit( c );
    }
};

} // namespace

Gba ltl_to_nba( const Formula& f )
{
    return Tableau( f ).build();
}

Gba product( const Gba& a, const Gba& b )
{
    Gba g;
    g.atoms = a.atoms;
    std::map< std::string, int > index;
    for ( std::size_t i = 0; i < a.atoms.size(); ++i )
        index[ to_string( a.atoms[ i ] ) ] = static_cast< int >( i );
    std::vector< int > remap;
    for ( const auto& f : b.atoms )
    {
        auto [ it, fresh ] = index.emplace( to_string( f ), static_cast< int >( g.atoms.size() ) );
        if ( fresh )
            g.atoms.push_back( f );
        remap.push_back( it->second );
    }
    if ( g.atoms.size() > 64 )
        throw Error( ErrorKind::AlphabetMismatch, "product needs more than 64 atoms" );
    if ( a.num_acc + b.num_acc > 32 )
        throw Error( ErrorKind::UnsupportedFormula, "too many acceptance sets" );
    auto move = [ & ]( std::uint64_t m ) {
        std::uint64_t out = 0;
        for ( std::size_t i = 0; i < remap.size(); ++i )
            if ( m >> i & 1 )
                out |= std::uint64_t{ 1 } << remap[ i ];
        return out;
    };
    g.num_acc = a.num_acc + b.num_acc;
    g.num_states = a.num_states * b.num_states;
    auto id = [ & ]( int x, int y ) { return x * b.num_states + y; };
    for ( int x = 0; x < a.num_states; ++x )
        for ( int y = 0; y < b.num_states; ++y )
            g.state_names.push_back( a.state_names[ x ] + " x " + b.state_names[ y ] );
    for ( int x : a.init )
        for ( int y : b.init )
            g.init.push_back( id( x, y ) );
    for ( const auto& ta : a.trans )
        for ( const auto& tb : b.trans )
        {
            std::uint64_t pos = ta.pos | move( tb.pos );
            std::uint64_t neg = ta.neg | move( tb.neg );
            if ( pos & neg )
                continue;
            g.trans.push_back( { id( ta.src, tb.src ), id( ta.dst, tb.dst ), pos, neg, ta.acc | ( tb.acc << a.num_acc ) } );
        }
    return g;
}

std::optional< Lasso< std::uint64_t > > find_word( const Gba& a )
{
    MarkedGraph g;
    g.num_nodes = a.num_states;
    g.init = a.init;
    g.num_buchi = a.num_acc;
    for ( const auto& t : a.trans )
        g.edges.push_back( { t.src, t.dst, t.acc, 0, 0 } );
    auto l = find_accepting_lasso( g );
    if ( !l )
        return std::nullopt;
    Lasso< std::uint64_t > w;
    for ( int e : l->prefix )
        w.prefix.push_back( a.trans[ e ].pos );
    for ( int e : l->cycle )
        w.cycle.push_back( a.trans[ e ].pos );
    return w;
}

bool accepts( const Gba& a, const Lasso< std::uint64_t >& w )
{
    SystemGraph s;
    int n = static_cast< int >( w.horizon() );
    s.num_states = n;
    s.init = { 0 };
    for ( int i = 0; i < n; ++i )
    {
        s.letter.push_back( w.at( static_cast< std::size_t >( i ) ) );
        int next = i + 1 < n ? i + 1 : static_cast< int >( w.prefix.size() );
        s.edges.push_back( { i, next, 0, 0, 0 } );
    }
    return find_accepting_lasso( intersect_system( s, a ).graph ).has_value();
}

std::uint64_t letter_of( const std::vector< Formula >& atoms, const Valuation& label )
{
    std::uint64_t m = 0;
    for ( std::size_t i = 0; i < atoms.size(); ++i )
    {
        if ( atoms[ i ]->op != Op::Atom )
            throw Error( ErrorKind::UnsupportedFormula, "atom " + to_string( atoms[ i ] ) + " needs a state evaluation" );
        if ( satisfies( label, atoms[ i ]->atom ) )
            m |= std::uint64_t{ 1 } << i;
    }
    return m;
}

ProductGraph intersect_system( const SystemGraph& sys, const Gba& a )
{
    ProductGraph p;
    p.graph.num_buchi = sys.num_buchi + a.num_acc;
    p.graph.num_pairs = sys.num_pairs;
    if ( p.graph.num_buchi > 32 )
        throw Error( ErrorKind::UnsupportedFormula, "too many acceptance sets" );
    std::vector< std::vector< int > > sys_out( sys.num_states );
    for ( std::size_t e = 0; e < sys.edges.size(); ++e )
        sys_out[ sys.edges[ e ].src ].push_back( static_cast< int >( e ) );
    auto aut_out = a.by_source();
    std::map< std::pair< int, int >, int > index;
    std::deque< int > queue;
    auto node = [ & ]( int q, int s ) {
        auto [ it, fresh ] = index.emplace( std::make_pair( q, s ), static_cast< int >( p.node.size() ) );
        if ( fresh )
        {
            p.node.emplace_back( q, s );
            queue.push_back( it->second );
        }
        return it->second;
    };
    for ( int q : sys.init )
        for ( int s : a.init )
            p.graph.init.push_back( node( q, s ) );
    while ( !queue.empty() )
    {
        int v = queue.front();
        queue.pop_front();
        auto [ q, s ] = p.node[ v ];
        for ( int t : aut_out[ s ] )
        {
            const auto& tr = a.trans[ t ];
            if ( !a.matches( tr, sys.letter[ q ] ) )
                continue;
            for ( int e : sys_out[ q ] )
            {
                const auto& se = sys.edges[ e ];
                int w = node( se.dst, tr.dst );
                p.graph.edges.push_back( { v, w, se.buchi | ( tr.acc << sys.num_buchi ), se.enabled, se.moved } );
                p.sys_edge.push_back( e );
            }
        }
    }
    p.graph.num_nodes = static_cast< int >( p.node.size() );
    return p;
}

// ---------------------------------------------------------------------------
// explicit automata

bool ExplicitNba::deterministic() const
{
    if ( init.size() > 1 )
        return false;
    for ( const auto& row : delta )
        for ( const auto& succ : row )
            if ( succ.size() > 1 )
                return false;
    return true;
}

void validate( const ExplicitNba& a )
{
    if ( a.alphabet <= 0 )
        throw Error( ErrorKind::AlphabetMismatch, "empty alphabet" );
    if ( static_cast< int >( a.delta.size() ) != a.num_states || static_cast< int >( a.accepting.size() ) != a.num_states )
        throw Error( ErrorKind::InvalidModel, "automaton tables have the wrong size" );
    for ( const auto& row : a.delta )
    {
        if ( static_cast< int >( row.size() ) != a.alphabet )
            throw Error( ErrorKind::AlphabetMismatch, "transition row over the wrong alphabet" );
        for ( const auto& succ : row )
            for ( int s : succ )
                if ( s < 0 || s >= a.num_states )
                    throw Error( ErrorKind::InvalidModel, "successor out of range" );
    }
    for ( int s : a.init )
        if ( s < 0 || s >= a.num_states )
            throw Error( ErrorKind::InvalidModel, "initial state out of range" );
}

namespace
{

struct LetterGraph
{
    MarkedGraph graph;
    std::vector< int > letter;
};

LetterGraph letter_graph( const ExplicitNba& a )
{
    LetterGraph lg;
    lg.graph.num_nodes = a.num_states;
    lg.graph.init = a.init;
    lg.graph.num_buchi = 1;
    for ( int s = 0; s < a.num_states; ++s )
        for ( int l = 0; l < a.alphabet; ++l )
            for ( int t : a.delta[ s ][ l ] )
            {
                lg.graph.edges.push_back( { s, t, a.accepting[ s ] ? 1u : 0u, 0, 0 } );
                lg.letter.push_back( l );
            }
    return lg;
}

} // namespace

std::optional< Lasso< int > > find_word( const ExplicitNba& a )
{
    auto lg = letter_graph( a );
    auto l = find_accepting_lasso( lg.graph );
    if ( !l )
        return std::nullopt;
    Lasso< int > w;
    for ( int e : l->prefix )
        w.prefix.push_back( lg.letter[ e ] );
    for ( int e : l->cycle )
        w.cycle.push_back( lg.letter[ e ] );
    return w;
}

bool accepts( const ExplicitNba& a, const Lasso< int >& w )
{
    int n = static_cast< int >( w.horizon() );
    int loop = static_cast< int >( w.prefix.size() );
    MarkedGraph g;
    g.num_nodes = a.num_states * n;
    g.num_buchi = 1;
    for ( int s : a.init )
        g.init.push_back( s * n );
    for ( int s = 0; s < a.num_states; ++s )
        for ( int i = 0; i < n; ++i )
        {
            int l = w.at( static_cast< std::size_t >( i ) );
            if ( l < 0 || l >= a.alphabet )
                throw Error( ErrorKind::AlphabetMismatch, "letter outside the alphabet" );
            int next = i + 1 < n ? i + 1 : loop;
            for ( int t : a.delta[ s ][ l ] )
                g.edges.push_back( { s * n + i, t * n + next, a.accepting[ s ] ? 1u : 0u, 0, 0 } );
        }
    return find_accepting_lasso( g ).has_value();
}

ExplicitNba intersect( const ExplicitNba& a, const ExplicitNba& b )
{
    if ( a.alphabet != b.alphabet )
        throw Error( ErrorKind::AlphabetMismatch, "intersection of automata over different alphabets" );
    ExplicitNba r;
    r.alphabet = a.alphabet;
    r.num_states = a.num_states * b.num_states * 2;
    auto id = [ & ]( int p, int q, int k ) { return ( p * b.num_states + q ) * 2 + k; };
    r.delta.assign( r.num_states, std::vector< std::vector< int > >( r.alphabet ) );
    r.accepting.assign( r.num_states, false );
    for ( int p : a.init )
        for ( int q : b.init )
            r.init.push_back( id( p, q, 0 ) );
    for ( int p = 0; p < a.num_states; ++p )
        for ( int q = 0; q < b.num_states; ++q )
            for ( int k = 0; k < 2; ++k )
            {
                int next_k = k;
                if ( k == 0 && a.accepting[ p ] )
                    next_k = 1;
                else if ( k == 1 && b.accepting[ q ] )
                    next_k = 0;
                r.accepting[ id( p, q, k ) ] = k == 1 && b.accepting[ q ];
                for ( int l = 0; l < r.alphabet; ++l )
                    for ( int p2 : a.delta[ p ][ l ] )
                        for ( int q2 : b.delta[ q ][ l ] )
                            r.delta[ id( p, q, k ) ][ l ].push_back( id( p2, q2, next_k ) );
            }
    return r;
}

namespace
{

ExplicitNba complement_deterministic( const ExplicitNba& a )
{
    // Complete with a rejecting sink, then accept the runs that visit the
    // accepting states finitely often.
    int n = a.num_states + 1;
    int sink = a.num_states;
    auto target = [ & ]( int s, int l ) {
        if ( s == sink || a.delta[ s ][ l ].empty() )
            return sink;
        return a.delta[ s ][ l ].front();
    };
    auto acc = [ & ]( int s ) { return s != sink && a.accepting[ s ]; };
    ExplicitNba r;
    r.alphabet = a.alphabet;
    r.num_states = 2 * n;
    r.delta.assign( r.num_states, std::vector< std::vector< int > >( r.alphabet ) );
    r.accepting.assign( r.num_states, false );
    r.init = { a.init.empty() ? sink : a.init.front() };
    for ( int s = 0; s < n; ++s )
    {
        r.accepting[ n + s ] = !acc( s );
        for ( int l = 0; l < a.alphabet; ++l )
        {
            int t = target( s, l );
            r.delta[ s ][ l ].push_back( t );
            if ( !acc( t ) )
            {
                r.delta[ s ][ l ].push_back( n + t );
                if ( !acc( s ) )
                    r.delta[ n + s ][ l ].push_back( n + t );
            }
        }
    }
    return r;
}

} // namespace

ExplicitNba complement( const ExplicitNba& a, std::size_t state_budget )
{
    validate( a );
    if ( a.deterministic() )
        return complement_deterministic( a );

    int n = a.num_states;
    int max_rank = 2 * n;
    struct Level
    {
        std::vector< int > rank;     // -1: not active
        std::vector< bool > owing;   // obligation set
        bool operator<( const Level& o ) const { return std::tie( rank, owing ) < std::tie( o.rank, o.owing ); }
    };
    std::map< Level, int > index;
    std::vector< Level > levels;
    std::deque< int > queue;
    // Successor enumeration can dwarf the number of distinct states, so it
    // draws on the same budget with a fixed allowance per state.
    std::size_t work = 0, work_budget = state_budget * 64;
    auto intern = [ & ]( const Level& l ) {
        auto [ it, fresh ] = index.emplace( l, static_cast< int >( levels.size() ) );
        if ( fresh )
        {
            if ( levels.size() >= state_budget )
                throw Error( ErrorKind::BudgetExceeded, "complement exceeds " + std::to_string( state_budget ) + " states" );
            levels.push_back( l );
            queue.push_back( it->second );
        }
        return it->second;
    };

    Level start{ std::vector< int >( n, -1 ), std::vector< bool >( n, false ) };
    for ( int s : a.init )
        start.rank[ s ] = a.accepting[ s ] ? max_rank : max_rank;
    ExplicitNba r;
    r.alphabet = a.alphabet;
    r.init = { intern( start ) };
    std::vector< std::vector< std::vector< int > > > delta;

    while ( !queue.empty() )
    {
        int v = queue.front();
        queue.pop_front();
        if ( static_cast< int >( delta.size() ) <= v )
            delta.resize( v + 1, std::vector< std::vector< int > >( a.alphabet ) );
        Level cur = levels[ v ];
        bool owing_empty = std::none_of( cur.owing.begin(), cur.owing.end(), []( bool b ) { return b; } );
        for ( int l = 0; l < a.alphabet; ++l )
        {
            std::vector< int > bound( n, -1 );
            std::vector< bool > owed( n, false );
            for ( int s = 0; s < n; ++s )
                if ( cur.rank[ s ] >= 0 )
                    for ( int t : a.delta[ s ][ l ] )
                    {
                        bound[ t ] = bound[ t ] < 0 ? cur.rank[ s ] : std::min( bound[ t ], cur.rank[ s ] );
                        if ( cur.owing[ s ] )
                            owed[ t ] = true;
                    }
            std::vector< int > active;
            for ( int t = 0; t < n; ++t )
                if ( bound[ t ] >= 0 )
                    active.push_back( t );
            Level next{ std::vector< int >( n, -1 ), std::vector< bool >( n, false ) };
            std::function< void( std::size_t ) > choose = [ & ]( std::size_t i ) {
                if ( i == active.size() )
                {
                    if ( ++work > work_budget )
                        throw Error( ErrorKind::BudgetExceeded, "complement construction exceeds its budget of "
                                                                    + std::to_string( state_budget ) + " states" );
                    Level out = next;
                    for ( int t : active )
                    {
                        bool even = out.rank[ t ] % 2 == 0;
                        out.owing[ t ] = even && ( owing_empty || owed[ t ] );
                    }
                    int w = intern( out );
                    if ( static_cast< int >( delta.size() ) <= v )
                        delta.resize( v + 1, std::vector< std::vector< int > >( a.alphabet ) );
                    delta[ v ][ l ].push_back( w );
                    return;
                }
                int t = active[ i ];
                for ( int rk = 0; rk <= bound[ t ]; ++rk )
                {
                    if ( a.accepting[ t ] && rk % 2 == 1 )
                        continue;
                    next.rank[ t ] = rk;
                    choose( i + 1 );
                }
            };
            choose( 0 );
        }
    }
    r.num_states = static_cast< int >( levels.size() );
    delta.resize( r.num_states, std::vector< std::vector< int > >( a.alphabet ) );
    r.delta = std::move( delta );
    r.accepting.resize( r.num_states );
    for ( int s = 0; s < r.num_states; ++s )
        r.accepting[ s ] = std::none_of( levels[ s ].owing.begin(), levels[ s ].owing.end(), []( bool b ) { return b; } );
    return r;
}

// ---------------------------------------------------------------------------
// monitors

namespace
{

int digit( int state, std::size_t i )
{
    for ( std::size_t k = 0; k < i; ++k )
        state /= 4;
    return state % 4;
}

bool eval_combination( const Formula& f, const std::vector< bool >& value )
{
    switch ( f->op )
    {
    case Op::True: return true;
    case Op::False: return false;
    case Op::Atom: return value[ static_cast< std::size_t >( std::stoi( f->atom.begin()->first.substr( 1 ) ) ) ];
    case Op::Not: return !eval_combination( f->lhs, value );
    case Op::And: return eval_combination( f->lhs, value ) && eval_combination( f->rhs, value );
    case Op::Or: return eval_combination( f->lhs, value ) || eval_combination( f->rhs, value );
    default: throw Error( ErrorKind::UnsupportedFormula, "bad monitor combination" );
    }
}

} // namespace

DetMonitor::DetMonitor( std::vector< Formula > atoms, std::vector< Basic > basics, Formula combination )
    : _atoms( std::move( atoms ) ), _basics( std::move( basics ) ), _combination( std::move( combination ) )
{
    if ( _basics.size() > 15 )
        throw Error( ErrorKind::UnsupportedFormula, "too many temporal objectives for a monitor" );
    if ( _atoms.size() > 64 )
        throw Error( ErrorKind::UnsupportedFormula, "more than 64 atoms" );
    int mul = 1;
    for ( const auto& b : _basics )
    {
        if ( b.kind == Basic::Until )
            _init += mul;
        mul *= 4;
    }
}

int DetMonitor::num_states() const
{
    int n = 1;
    for ( std::size_t i = 0; i < _basics.size(); ++i )
        n *= 4;
    return n;
}

int DetMonitor::step( int state, std::uint64_t letter ) const
{
    auto holds = [ & ]( int atom ) { return atom < 0 || ( letter >> atom & 1 ); };
    int out = 0;
    int mul = 1;
    for ( std::size_t i = 0; i < _basics.size(); ++i )
    {
        const auto& b = _basics[ i ];
        int d = digit( state, i );
        if ( d < 2 )
        {
            switch ( b.kind )
            {
            case Basic::Now: d = holds( b.a ) ? 2 : 3; break;
            case Basic::Next: d = d == 0 ? 1 : ( holds( b.a ) ? 2 : 3 ); break;
            case Basic::Until: d = holds( b.b ) ? 2 : ( holds( b.a ) ? 1 : 3 ); break;
            }
        }
        out += d * mul;
        mul *= 4;
    }
    return out;
}

bool DetMonitor::accepting( int state ) const
{
    std::vector< bool > value;
    for ( std::size_t i = 0; i < _basics.size(); ++i )
        value.push_back( digit( state, i ) == 2 );
    return eval_combination( _combination, value );
}

int DetMonitor::reachable_states() const
{
    if ( _atoms.size() > 16 )
        throw Error( ErrorKind::UnsupportedFormula, "too many atoms to enumerate letters" );
    std::set< int > seen{ _init };
    std::vector< int > stack{ _init };
    while ( !stack.empty() )
    {
        int s = stack.back();
        stack.pop_back();
        for ( std::uint64_t l = 0; l < ( std::uint64_t{ 1 } << _atoms.size() ); ++l )
        {
            int t = step( s, l );
            if ( seen.insert( t ).second )
                stack.push_back( t );
        }
    }
    return static_cast< int >( seen.size() );
}

DetMonitor monitor_for( const Formula& f )
{
    std::vector< Formula > atoms;
    std::map< std::string, int > atom_index;
    std::vector< DetMonitor::Basic > basics;
    auto atom = [ & ]( const Formula& s ) {
        if ( s->op == Op::True )
            return -1;
        auto [ it, fresh ] = atom_index.emplace( to_string( s ), static_cast< int >( atoms.size() ) );
        if ( fresh )
            atoms.push_back( s );
        return it->second;
    };
    auto basic = [ & ]( DetMonitor::Basic b ) {
        basics.push_back( b );
        return mk_prop( "b" + std::to_string( basics.size() - 1 ) );
    };
    std::function< Formula( const Formula& ) > tr = [ & ]( const Formula& g ) -> Formula {
        if ( is_state_formula( g ) && !( g->op == Op::Not || g->op == Op::And || g->op == Op::Or ) )
        {
            if ( g->op == Op::True || g->op == Op::False )
                return g;
            return basic( { DetMonitor::Basic::Now, atom( g ), -1 } );
        }
        switch ( g->op )
        {
        case Op::Not: return mk_not( tr( g->lhs ) );
        case Op::And: return mk_and( tr( g->lhs ), tr( g->rhs ) );
        case Op::Or: return mk_or( tr( g->lhs ), tr( g->rhs ) );
        case Op::Next:
            if ( !is_state_formula( g->lhs ) )
                break;
            return basic( { DetMonitor::Basic::Next, atom( g->lhs ), -1 } );
        case Op::Until:
            if ( !is_state_formula( g->lhs ) || !is_state_formula( g->rhs ) )
                break;
            return basic( { DetMonitor::Basic::Until, atom( g->lhs ), atom( g->rhs ) } );
        case Op::Release:
            if ( !is_state_formula( g->lhs ) || !is_state_formula( g->rhs ) )
                break;
            return mk_not( basic( { DetMonitor::Basic::Until, atom( mk_not( g->lhs ) ), atom( mk_not( g->rhs ) ) } ) );
        default: break;
        }
        throw Error( ErrorKind::UnsupportedFormula, "'" + to_string( g ) + "' is outside the monitor fragment" );
    };
    Formula comb = tr( f );
    return DetMonitor( std::move( atoms ), std::move( basics ), comb );
}

// ---------------------------------------------------------------------------
// dot

std::string to_dot( const Gba& a )
{
    std::ostringstream os;
    os << "digraph gba {\n  __init [shape=point];\n";
    for ( int s = 0; s < a.num_states; ++s )
        os << "  q" << s << " [label=\"" << s << "\"];\n";
    for ( int s : a.init )
        os << "  __init -> q" << s << ";\n";
    for ( const auto& t : a.trans )
    {
        std::string lab;
        for ( std::size_t i = 0; i < a.atoms.size(); ++i )
        {
            if ( t.pos >> i & 1 )
                lab += ( lab.empty() ? "" : " & " ) + to_string( a.atoms[ i ] );
            if ( t.neg >> i & 1 )
                lab += ( lab.empty() ? "!" : " & !" ) + to_string( a.atoms[ i ] );
        }
        if ( lab.empty() )
            lab = "true";
        std::string acc;
        for ( int k = 0; k < a.num_acc; ++k )
            if ( t.acc >> k & 1 )
                acc += ( acc.empty() ? " {" : "," ) + std::to_string( k );
        if ( !acc.empty() )
            acc += "}";
        std::string esc;
        for ( char c : lab + acc )
        {
            if ( c == '"' )
                esc += '\\';
            esc += c;
        }
        os << "  q" << t.src << " -> q" << t.dst << " [label=\"" << esc << "\"];\n";
    }
    os << "}\n";
    return os.str();
}

std::string to_dot( const ExplicitNba& a )
{
    std::ostringstream os;
    os << "digraph nba {\n  __init [shape=point];\n";
    for ( int s = 0; s < a.num_states; ++s )
        os << "  q" << s << " [label=\"" << s << "\"" << ( a.accepting[ s ] ? ", shape=doublecircle" : "" ) << "];\n";
    for ( int s : a.init )
        os << "  __init -> q" << s << ";\n";
    for ( int s = 0; s < a.num_states; ++s )
        for ( int l = 0; l < a.alphabet; ++l )
            for ( int t : a.delta[ s ][ l ] )
                os << "  q" << s << " -> q" << t << " [label=\"" << l << "\"];\n";
    os << "}\n";
    return os.str();
}

} // namespace sagv
