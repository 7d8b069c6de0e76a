#include "sagv/formula.hpp"

#include <cctype>
#include <functional>
#include <sstream>

namespace sagv
{

bool Bound::holds( const Rational& x ) const
{
    switch ( cmp )
    {
    case Cmp::Le: return x <= value;
    case Cmp::Lt: return x < value;
    case Cmp::Gt: return x > value;
    case Cmp::Ge: return x >= value;
    }
    return false;
}

const char* cmp_text( Cmp c )
{
    switch ( c )
    {
    case Cmp::Le: return "<=";
    case Cmp::Lt: return "<";
    case Cmp::Gt: return ">";
    case Cmp::Ge: return ">=";
    }
    return "?";
}

namespace
{

Node node_of( Op op )
{
    Node n;
    n.op = op;
    return n;
}

Formula make( Node n )
{
    return std::make_shared< const Node >( std::move( n ) );
}

} // namespace

Formula mk_true()
{
    static const Formula t = make( node_of( Op::True ) );
    return t;
}

Formula mk_false()
{
    static const Formula f = make( node_of( Op::False ) );
    return f;
}

Formula mk_atom( Valuation a )
{
    Node n = node_of( Op::Atom );
    n.atom = std::move( a );
    return make( std::move( n ) );
}

Formula mk_prop( const std::string& p )
{
    return mk_atom( { { p, "true" } } );
}

Formula mk_not( Formula f )
{
    Node n = node_of( Op::Not );
    n.lhs = std::move( f );
    return make( std::move( n ) );
}

Formula mk_and( Formula a, Formula b )
{
    Node n = node_of( Op::And );
    n.lhs = std::move( a );
    n.rhs = std::move( b );
    return make( std::move( n ) );
}

Formula mk_or( Formula a, Formula b )
{
    Node n = node_of( Op::Or );
    n.lhs = std::move( a );
    n.rhs = std::move( b );
    return make( std::move( n ) );
}

Formula mk_next( Formula f )
{
    Node n = node_of( Op::Next );
    n.lhs = std::move( f );
    return make( std::move( n ) );
}

Formula mk_until( Formula a, Formula b )
{
    Node n = node_of( Op::Until );
    n.lhs = std::move( a );
    n.rhs = std::move( b );
    return make( std::move( n ) );
}

Formula mk_release( Formula a, Formula b )
{
    Node n = node_of( Op::Release );
    n.lhs = std::move( a );
    n.rhs = std::move( b );
    return make( std::move( n ) );
}

Formula mk_eventually( Formula f )
{
    return mk_until( mk_true(), std::move( f ) );
}

Formula mk_always( Formula f )
{
    return mk_not( mk_eventually( mk_not( std::move( f ) ) ) );
}

Formula mk_coop( std::vector< std::string > coalition, Formula body, Flavor flavor, std::optional< Bound > bound )
{
    std::sort( coalition.begin(), coalition.end() );
    coalition.erase( std::unique( coalition.begin(), coalition.end() ), coalition.end() );
    Node n = node_of( Op::Coop );
    n.coalition = std::move( coalition );
    n.lhs = std::move( body );
    n.flavor = flavor;
    n.bound = std::move( bound );
    return make( std::move( n ) );
}

Formula conjunction( const std::vector< Formula >& fs )
{
    if ( fs.empty() )
        return mk_true();
    Formula out = fs.front();
    for ( std::size_t i = 1; i < fs.size(); ++i )
        out = mk_and( out, fs[ i ] );
    return out;
}

bool equal( const Formula& a, const Formula& b )
{
    if ( a == b )
        return true;
    if ( !a || !b )
        return false;
    if ( a->op != b->op || a->atom != b->atom || a->coalition != b->coalition || a->flavor != b->flavor
         || a->bound.has_value() != b->bound.has_value() )
        return false;
    if ( a->bound && !( *a->bound == *b->bound ) )
        return false;
    return equal( a->lhs, b->lhs ) && equal( a->rhs, b->rhs );
}

// ---------------------------------------------------------------------------
// parser

namespace
{

struct Token
{
    enum Kind
    {
        Word,
        Sym,
        End
    } kind;
    std::string text;
    std::size_t pos;
};

std::vector< Token > tokenize( const std::string& s )
{
    static const std::vector< std::string > symbols = { "<<", ">>", "->", ">=", "<=", "(", ")", "[", "]",
                                                         ",",  "&",  "|",  "!",  "=",  ">",  "<",  "~" };
    std::vector< Token > out;
    std::size_t i = 0;
    while ( i < s.size() )
    {
        unsigned char c = static_cast< unsigned char >( s[ i ] );
        if ( std::isspace( c ) )
        {
            ++i;
            continue;
        }
        if ( std::isalnum( c ) || c == '_' || c == '.' || c == '\'' )
        {
            std::size_t j = i;
            bool numeric = std::isdigit( c );
            while ( j < s.size()
                    && ( std::isalnum( static_cast< unsigned char >( s[ j ] ) ) || s[ j ] == '_' || s[ j ] == '.'
                         || s[ j ] == '\'' || ( numeric && s[ j ] == '/' ) ) )
                ++j;
            out.push_back( { Token::Word, s.substr( i, j - i ), i } );
            i = j;
            continue;
        }
        bool matched = false;
        for ( const auto& sym : symbols )
            if ( s.compare( i, sym.size(), sym ) == 0 )
            {
                out.push_back( { Token::Sym, sym, i } );
                i += sym.size();
                matched = true;
                break;
            }
        if ( !matched )
            throw Error( ErrorKind::SyntaxError, "unexpected character '" + std::string( 1, s[ i ] ) + "' at column "
                                                     + std::to_string( i + 1 ) );
    }
    out.push_back( { Token::End, "", s.size() } );
    return out;
}

bool is_keyword( const std::string& w )
{
    return w == "U" || w == "R" || w == "X" || w == "F" || w == "G" || w == "true" || w == "false" || w == "only";
}

class Parser
{
    std::vector< Token > _toks;
    std::size_t _at = 0;

    const Token& peek( std::size_t ahead = 0 ) const { return _toks[ std::min( _at + ahead, _toks.size() - 1 ) ]; }

    bool is_sym( const std::string& s, std::size_t ahead = 0 ) const
    {
        return peek( ahead ).kind == Token::Sym && peek( ahead ).text == s;
    }

    bool is_word( const std::string& s ) const { return peek().kind == Token::Word && peek().text == s; }

    [[noreturn]] void fail( const std::string& what ) const
    {
        throw Error( ErrorKind::SyntaxError, what + " at column " + std::to_string( peek().pos + 1 ) );
    }

    void expect( const std::string& s )
    {
        if ( !is_sym( s ) )
            fail( "expected '" + s + "'" );
        ++_at;
    }

public:
    explicit Parser( const std::string& text ) : _toks( tokenize( text ) ) {}

    Formula parse_all()
    {
        auto f = implication();
        if ( peek().kind != Token::End )
            fail( "unexpected '" + peek().text + "'" );
        return f;
    }

private:
    Formula implication()
    {
        auto lhs = disjunction();
        if ( is_sym( "->" ) )
        {
            ++_at;
            return mk_or( mk_not( lhs ), implication() );
        }
        return lhs;
    }

    Formula disjunction()
    {
        auto lhs = conj();
        while ( is_sym( "|" ) )
        {
            ++_at;
            lhs = mk_or( lhs, conj() );
        }
        return lhs;
    }

    Formula conj()
    {
        auto lhs = temporal();
        while ( is_sym( "&" ) )
        {
            ++_at;
            lhs = mk_and( lhs, temporal() );
        }
        return lhs;
    }

    Formula temporal()
    {
        auto lhs = unary();
        if ( is_word( "U" ) )
        {
            ++_at;
            return mk_until( lhs, temporal() );
        }
        if ( is_word( "R" ) )
        {
            ++_at;
            return mk_release( lhs, temporal() );
        }
        return lhs;
    }

    Bound bound()
    {
        expect( "[" );
        Bound b;
        if ( is_sym( ">=" ) )
            b.cmp = Cmp::Ge;
        else if ( is_sym( ">" ) )
            b.cmp = Cmp::Gt;
        else if ( is_sym( "<=" ) )
            b.cmp = Cmp::Le;
        else if ( is_sym( "<" ) )
            b.cmp = Cmp::Lt;
        else
            fail( "expected a comparison" );
        ++_at;
        if ( peek().kind != Token::Word )
            fail( "expected a probability" );
        std::size_t pos = peek().pos;
        b.value = parse_rational( peek().text );
        if ( b.value < 0 || b.value > 1 )
            throw Error( ErrorKind::BoundOutOfRange,
                         "probability " + peek().text + " outside [0,1] at column " + std::to_string( pos + 1 ) );
        ++_at;
        expect( "]" );
        return b;
    }

    Formula unary()
    {
        if ( is_sym( "!" ) || is_sym( "~" ) )
        {
            ++_at;
            return mk_not( unary() );
        }
        if ( is_word( "X" ) )
        {
            ++_at;
            return mk_next( unary() );
        }
        if ( is_word( "F" ) )
        {
            ++_at;
            return mk_eventually( unary() );
        }
        if ( is_word( "G" ) )
        {
            ++_at;
            return mk_always( unary() );
        }
        if ( is_sym( "<<" ) )
        {
            ++_at;
            std::vector< std::string > agents;
            while ( !is_sym( ">>" ) )
            {
                if ( peek().kind != Token::Word )
                    fail( "expected an agent" );
                agents.push_back( peek().text );
                ++_at;
                if ( is_sym( "," ) )
                    ++_at;
                else if ( !is_sym( ">>" ) )
                    fail( "expected ',' or '>>'" );
            }
            ++_at;
            Flavor flavor = Flavor::Standard;
            if ( is_word( "only" ) )
            {
                ++_at;
                flavor = Flavor::Only;
            }
            std::optional< Bound > b;
            if ( is_sym( "[" ) )
            {
                if ( flavor == Flavor::Only )
                    fail( "only-modalities take no probability bound" );
                b = bound();
            }
            return mk_coop( std::move( agents ), temporal(), flavor, b );
        }
        if ( is_word( "P" ) && is_sym( "[", 1 ) )
        {
            ++_at;
            Bound b = bound();
            return mk_coop( {}, temporal(), Flavor::Prob, b );
        }
        return primary();
    }

    Formula primary()
    {
        if ( is_sym( "(" ) )
        {
            ++_at;
            auto f = implication();
            expect( ")" );
            return f;
        }
        if ( is_word( "true" ) )
        {
            ++_at;
            return mk_true();
        }
        if ( is_word( "false" ) )
        {
            ++_at;
            return mk_false();
        }
        if ( peek().kind == Token::Word && !is_keyword( peek().text ) )
        {
            std::string var = peek().text;
            ++_at;
            if ( is_sym( "=" ) )
            {
                ++_at;
                if ( peek().kind != Token::Word )
                    fail( "expected a value" );
                std::string value = peek().text;
                ++_at;
                return mk_atom( { { var, value } } );
            }
            return mk_prop( var );
        }
        fail( peek().kind == Token::End ? "unexpected end of formula" : "unexpected '" + peek().text + "'" );
    }
};

} // namespace

Formula parse_formula( const std::string& text )
{
    return Parser( text ).parse_all();
}

// ---------------------------------------------------------------------------
// printing

namespace
{

bool is_eventually( const Formula& f )
{
    return f->op == Op::Until && f->lhs->op == Op::True;
}

bool is_always( const Formula& f )
{
    return f->op == Op::Not && is_eventually( f->lhs ) && f->lhs->rhs->op == Op::Not;
}

std::string operand( const Formula& f )
{
    auto s = to_string( f );
    return f->op == Op::Coop ? "(" + s + ")" : s;
}

} // namespace

std::string to_string( const Formula& f )
{
    switch ( f->op )
    {
    case Op::True: return "true";
    case Op::False: return "false";
    case Op::Atom:
    {
        std::string s;
        for ( const auto& [ k, v ] : f->atom )
        {
            if ( !s.empty() )
                s += " & ";
            s += v == "true" ? k : k + "=" + v;
        }
        return f->atom.size() > 1 ? "(" + s + ")" : s;
    }
    case Op::Not:
        if ( is_always( f ) )
            return "G " + operand( f->lhs->rhs->lhs );
        return "!" + operand( f->lhs );
    case Op::And: return "(" + operand( f->lhs ) + " & " + operand( f->rhs ) + ")";
    case Op::Or: return "(" + operand( f->lhs ) + " | " + operand( f->rhs ) + ")";
    case Op::Next: return "X " + operand( f->lhs );
    case Op::Until:
        if ( is_eventually( f ) )
            return "F " + operand( f->rhs );
        return "(" + operand( f->lhs ) + " U " + operand( f->rhs ) + ")";
    case Op::Release: return "(" + operand( f->lhs ) + " R " + operand( f->rhs ) + ")";
    case Op::Coop:
    {
        std::string s;
        std::string b;
        if ( f->bound )
            b = std::string( "[" ) + cmp_text( f->bound->cmp ) + to_string( f->bound->value ) + "]";
        if ( f->flavor == Flavor::Prob )
            s = "P" + b;
        else
        {
            s = "<<";
            for ( std::size_t i = 0; i < f->coalition.size(); ++i )
                s += ( i ? "," : "" ) + f->coalition[ i ];
            s += ">>";
            if ( f->flavor == Flavor::Only )
                s += "only";
            s += b;
        }
        return s + " " + operand( f->lhs );
    }
    }
    return "?";
}

std::string dump_ast( const Formula& f )
{
    std::ostringstream os;
    std::function< void( const Formula&, int ) > rec = [ & ]( const Formula& g, int depth ) {
        os << std::string( static_cast< std::size_t >( depth * 2 ), ' ' );
        switch ( g->op )
        {
        case Op::True: os << "True\n"; return;
        case Op::False: os << "False\n"; return;
        case Op::Atom: os << "Atom " << to_string( g->atom ) << "\n"; return;
        case Op::Not: os << "Not\n"; break;
        case Op::And: os << "And\n"; break;
        case Op::Or: os << "Or\n"; break;
        case Op::Next: os << "Next\n"; break;
        case Op::Until: os << "Until\n"; break;
        case Op::Release: os << "Release\n"; break;
        case Op::Coop:
            os << "Coop {";
            for ( std::size_t i = 0; i < g->coalition.size(); ++i )
                os << ( i ? "," : "" ) << g->coalition[ i ];
            os << "} flavor=" << ( g->flavor == Flavor::Standard ? "standard" : g->flavor == Flavor::Only ? "only" : "prob" );
            if ( g->bound )
                os << " bound=" << cmp_text( g->bound->cmp ) << to_string( g->bound->value );
            os << "\n";
            break;
        }
        if ( g->lhs )
            rec( g->lhs, depth + 1 );
        if ( g->rhs )
            rec( g->rhs, depth + 1 );
    };
    rec( f, 0 );
    return os.str();
}

// ---------------------------------------------------------------------------
// classification

const char* fragment_name( FragmentTag t )
{
    switch ( t )
    {
    case FragmentTag::LTL_NO_X: return "LTL_NO_X";
    case FragmentTag::ONE_ATL_STAR: return "ONE_ATL_STAR";
    case FragmentTag::ATL_STAR: return "ATL_STAR";
    case FragmentTag::PATL: return "PATL";
    case FragmentTag::PATL_STAR: return "PATL_STAR";
    case FragmentTag::ONLY_ATL: return "ONLY_ATL";
    case FragmentTag::ONLY_ATL_STAR: return "ONLY_ATL_STAR";
    case FragmentTag::PCTL_LIKE: return "PCTL_LIKE";
    }
    return "?";
}

bool contains_next( const Formula& f )
{
    if ( !f )
        return false;
    return f->op == Op::Next || contains_next( f->lhs ) || contains_next( f->rhs );
}

bool contains_coop( const Formula& f )
{
    if ( !f )
        return false;
    return f->op == Op::Coop || contains_coop( f->lhs ) || contains_coop( f->rhs );
}

bool is_state_formula( const Formula& f )
{
    switch ( f->op )
    {
    case Op::True:
    case Op::False:
    case Op::Atom:
    case Op::Coop: return true;
    case Op::Not: return is_state_formula( f->lhs );
    case Op::And:
    case Op::Or: return is_state_formula( f->lhs ) && is_state_formula( f->rhs );
    default: return false;
    }
}

namespace
{

// A single temporal operator applied to state formulas.
bool single_temporal( const Formula& body )
{
    if ( is_always( body ) )
        return is_state_formula( body->lhs->rhs->lhs );
    switch ( body->op )
    {
    case Op::Next: return is_state_formula( body->lhs );
    case Op::Until:
    case Op::Release: return is_state_formula( body->lhs ) && is_state_formula( body->rhs );
    default: return false;
    }
}

void collect_coops( const Formula& f, std::vector< Formula >& out )
{
    if ( !f )
        return;
    if ( f->op == Op::Coop )
        out.push_back( f );
    collect_coops( f->lhs, out );
    collect_coops( f->rhs, out );
}

} // namespace

FragmentTag classify( const Formula& f )
{
    std::vector< Formula > coops;
    collect_coops( f, coops );
    if ( coops.empty() )
        return contains_next( f ) ? FragmentTag::ATL_STAR : FragmentTag::LTL_NO_X;

    bool any_bound = false, all_prob = true, any_only = false, any_standard = false, all_single = true;
    for ( const auto& c : coops )
    {
        if ( c->bound )
            any_bound = true;
        if ( c->flavor != Flavor::Prob )
            all_prob = false;
        if ( c->flavor == Flavor::Only )
            any_only = true;
        if ( c->flavor == Flavor::Standard && !c->bound )
            any_standard = true;
        if ( !single_temporal( c->lhs ) )
            all_single = false;
    }
    bool state_level = is_state_formula( f );
    if ( any_bound )
    {
        if ( all_prob )
            return FragmentTag::PCTL_LIKE;
        if ( all_single && state_level && !any_standard && !any_only )
            return FragmentTag::PATL;
        return FragmentTag::PATL_STAR;
    }
    if ( any_only )
        return all_single && state_level && !any_standard ? FragmentTag::ONLY_ATL : FragmentTag::ONLY_ATL_STAR;
    if ( coops.size() == 1 && f->op == Op::Coop && !contains_next( f->lhs ) )
        return FragmentTag::ONE_ATL_STAR;
    return FragmentTag::ATL_STAR;
}

VarSet atoms_of( const Formula& f )
{
    VarSet out;
    std::function< void( const Formula& ) > rec = [ & ]( const Formula& g ) {
        if ( !g )
            return;
        if ( g->op == Op::Atom )
            for ( const auto& [ k, v ] : g->atom )
                out.push_back( k );
        rec( g->lhs );
        rec( g->rhs );
    };
    rec( f );
    return make_varset( out );
}

bool local_to( const Formula& f, const Module& m )
{
    return var_subset( atoms_of( f ), m.state_vars );
}

Formula nnf( const Formula& f )
{
    switch ( f->op )
    {
    case Op::True:
    case Op::False:
    case Op::Atom:
    case Op::Coop: return f;
    case Op::And: return mk_and( nnf( f->lhs ), nnf( f->rhs ) );
    case Op::Or: return mk_or( nnf( f->lhs ), nnf( f->rhs ) );
    case Op::Next: return mk_next( nnf( f->lhs ) );
    case Op::Until: return mk_until( nnf( f->lhs ), nnf( f->rhs ) );
    case Op::Release: return mk_release( nnf( f->lhs ), nnf( f->rhs ) );
    case Op::Not: break;
    }
    const auto& g = f->lhs;
    switch ( g->op )
    {
    case Op::True: return mk_false();
    case Op::False: return mk_true();
    case Op::Atom:
    case Op::Coop: return f;
    case Op::Not: return nnf( g->lhs );
    case Op::And: return mk_or( nnf( mk_not( g->lhs ) ), nnf( mk_not( g->rhs ) ) );
    case Op::Or: return mk_and( nnf( mk_not( g->lhs ) ), nnf( mk_not( g->rhs ) ) );
    case Op::Next: return mk_next( nnf( mk_not( g->lhs ) ) );
    case Op::Until: return mk_release( nnf( mk_not( g->lhs ) ), nnf( mk_not( g->rhs ) ) );
    case Op::Release: return mk_until( nnf( mk_not( g->lhs ) ), nnf( mk_not( g->rhs ) ) );
    }
    return f;
}

bool satisfies( const Valuation& label, const Valuation& atom )
{
    for ( const auto& [ k, v ] : atom )
    {
        auto it = label.find( k );
        if ( it == label.end() )
            throw Error( ErrorKind::VariableNotInScope, "'" + k + "' is not assigned here" );
        if ( it->second != v )
            return false;
    }
    return true;
}

bool holds_on_lasso( const Formula& f, const Lasso< Valuation >& w )
{
    std::size_t n = w.horizon();
    std::size_t loop = w.prefix.size();
    auto next = [ & ]( std::size_t i ) { return i + 1 < n ? i + 1 : loop; };
    std::function< std::vector< bool >( const Formula& ) > eval = [ & ]( const Formula& g ) {
        std::vector< bool > v( n );
        switch ( g->op )
        {
        case Op::True: v.assign( n, true ); break;
        case Op::False: v.assign( n, false ); break;
        case Op::Atom:
            for ( std::size_t i = 0; i < n; ++i )
                v[ i ] = satisfies( w.at( i ), g->atom );
            break;
        case Op::Not:
        {
            auto a = eval( g->lhs );
            for ( std::size_t i = 0; i < n; ++i )
                v[ i ] = !a[ i ];
            break;
        }
        case Op::And:
        case Op::Or:
        {
            auto a = eval( g->lhs );
            auto b = eval( g->rhs );
            for ( std::size_t i = 0; i < n; ++i )
                v[ i ] = g->op == Op::And ? ( a[ i ] && b[ i ] ) : ( a[ i ] || b[ i ] );
            break;
        }
        case Op::Next:
        {
            auto a = eval( g->lhs );
            for ( std::size_t i = 0; i < n; ++i )
                v[ i ] = a[ next( i ) ];
            break;
        }
        case Op::Until:
        case Op::Release:
        {
            auto a = eval( g->lhs );
            auto b = eval( g->rhs );
            bool until = g->op == Op::Until;
            v.assign( n, !until );
            for ( std::size_t round = 0; round <= n; ++round )
                for ( std::size_t k = n; k-- > 0; )
                    v[ k ] = until ? ( b[ k ] || ( a[ k ] && v[ next( k ) ] ) ) : ( b[ k ] && ( a[ k ] || v[ next( k ) ] ) );
            break;
        }
        case Op::Coop: throw Error( ErrorKind::UnsupportedFormula, "strategic operator inside a path check" );
        }
        return v;
    };
    if ( w.cycle.empty() )
        throw Error( ErrorKind::InvalidModel, "word without cycle" );
    return eval( f )[ 0 ];
}

} // namespace sagv
