#include "sagv/io.hpp"

#include <cctype>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace sagv
{

std::string read_file( const std::string& path )
{
    std::ifstream in( path, std::ios::binary );
    if ( !in )
        throw Error( ErrorKind::InvalidConfig, "cannot read " + path );
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

namespace
{

struct Token
{
    enum Kind
    {
        Word,    // identifier or number
        String,
        Punct,
        End,
    } kind = End;
    std::string text;
    int line = 1;
    int col = 1;
};

class Lexer
{
    std::vector< Token > _toks;
    std::size_t _pos = 0;
    std::string _source;

public:
    Lexer( const std::string& text, std::string source ) : _source( std::move( source ) )
    {
        int line = 1, col = 1;
        std::size_t i = 0;
        auto advance = [ & ]( std::size_t n ) {
            for ( std::size_t k = 0; k < n && i < text.size(); ++k, ++i )
            {
                if ( text[ i ] == '\n' )
                {
                    ++line;
                    col = 1;
                }
                else
                    ++col;
            }
        };
        while ( i < text.size() )
        {
            char c = text[ i ];
            if ( std::isspace( static_cast< unsigned char >( c ) ) )
            {
                advance( 1 );
                continue;
            }
            if ( c == '#' || ( c == '/' && i + 1 < text.size() && text[ i + 1 ] == '/' ) )
            {
                while ( i < text.size() && text[ i ] != '\n' )
                    advance( 1 );
                continue;
            }
            Token t;
            t.line = line;
            t.col = col;
            if ( c == '"' )
            {
                std::size_t j = i + 1;
                std::string s;
                while ( j < text.size() && text[ j ] != '"' )
                {
                    if ( text[ j ] == '\\' && j + 1 < text.size() )
                        ++j;
                    s += text[ j++ ];
                }
                if ( j >= text.size() )
                    fail_at( t, "unterminated string" );
                t.kind = Token::String;
                t.text = s;
                advance( j + 1 - i );
            }
            else if ( std::isalnum( static_cast< unsigned char >( c ) ) || c == '_' || c == '.' )
            {
                std::size_t j = i;
                while ( j < text.size()
                        && ( std::isalnum( static_cast< unsigned char >( text[ j ] ) ) || text[ j ] == '_' || text[ j ] == '.'
                             || text[ j ] == '\'' || text[ j ] == '/' ) )
                    ++j;
                t.kind = Token::Word;
                t.text = text.substr( i, j - i );
                advance( j - i );
            }
            else if ( c == '-' && i + 1 < text.size() && text[ i + 1 ] == '>' )
            {
                t.kind = Token::Punct;
                t.text = "->";
                advance( 2 );
            }
            else if ( std::string( "{}[](),;:=*" ).find( c ) != std::string::npos )
            {
                t.kind = Token::Punct;
                t.text = std::string( 1, c );
                advance( 1 );
            }
            else
                fail_at( t, std::string( "unexpected character '" ) + c + "'" );
            _toks.push_back( std::move( t ) );
        }
        Token end;
        end.line = line;
        end.col = col;
        _toks.push_back( end );
    }

    [[noreturn]] void fail_at( const Token& t, const std::string& msg ) const
    {
        throw Error( ErrorKind::SyntaxError,
                     _source + ":" + std::to_string( t.line ) + ":" + std::to_string( t.col ) + ": " + msg );
    }
    [[noreturn]] void fail( const std::string& msg ) const { fail_at( peek(), msg ); }

    [[nodiscard]] const Token& peek() const { return _toks[ _pos ]; }
    [[nodiscard]] std::string where() const
    {
        return _source + ":" + std::to_string( peek().line ) + ":" + std::to_string( peek().col );
    }
    [[nodiscard]] bool at_end() const { return peek().kind == Token::End; }
    [[nodiscard]] bool is( const std::string& s ) const { return peek().kind != Token::String && peek().text == s; }

    Token next() { return _toks[ _pos < _toks.size() - 1 ? _pos++ : _pos ]; }

    bool accept( const std::string& s )
    {
        if ( !is( s ) )
            return false;
        ++_pos;
        return true;
    }

    void expect( const std::string& s )
    {
        if ( !accept( s ) )
            fail( "expected '" + s + "'" + ( at_end() ? " before end of input" : ", found '" + peek().text + "'" ) );
    }

    std::string word()
    {
        if ( peek().kind != Token::Word )
            fail( "expected a name" + ( at_end() ? std::string( " before end of input" ) : ", found '" + peek().text + "'" ) );
        return next().text;
    }

    std::string string()
    {
        if ( peek().kind != Token::String )
            fail( "expected a quoted string" );
        return next().text;
    }

    // { a, b, c } possibly empty
    std::vector< std::string > word_set()
    {
        expect( "{" );
        std::vector< std::string > out;
        if ( accept( "}" ) )
            return out;
        do
            out.push_back( word() );
        while ( accept( "," ) );
        expect( "}" );
        return out;
    }

    // [ x = v, ... ] possibly empty; bare names mean "true"
    Valuation assignment()
    {
        expect( "[" );
        Valuation v;
        if ( accept( "]" ) )
            return v;
        do
        {
            std::string x = word();
            std::string val = "true";
            if ( accept( "=" ) )
                val = word();
            if ( !v.emplace( x, val ).second )
                fail( "variable " + x + " assigned twice" );
        } while ( accept( "," ) );
        expect( "]" );
        return v;
    }

    Rational rational()
    {
        Token t = peek();
        std::string w = word();
        try
        {
            return parse_rational( w );
        }
        catch ( const Error& e )
        {
            fail_at( t, "bad number '" + w + "'" );
        }
    }

    void end_item() { accept( ";" ); }
};

// Relocates an error thrown while interpreting a declaration.
template < typename F >
auto located( const Lexer& lx, const Token& at, F&& f ) -> decltype( f() )
{
    try
    {
        return f();
    }
    catch ( const Error& e )
    {
        if ( e.kind() == ErrorKind::SyntaxError )
            throw;
        std::string what = e.what();
        std::string prefix = std::string( error_kind_name( e.kind() ) ) + ": ";
        if ( what.rfind( prefix, 0 ) == 0 )
            what = what.substr( prefix.size() );
        (void)lx;
        throw Error( e.kind(), "line " + std::to_string( at.line ) + ":" + std::to_string( at.col ) + ": " + what );
    }
}

Domain parse_domain( Lexer& lx )
{
    lx.expect( "domain" );
    auto vals = lx.word_set();
    if ( vals.empty() )
        lx.fail( "empty domain" );
    lx.end_item();
    return Domain( vals );
}

struct ParsedModule
{
    Module module;
    Repertoire repertoire;
    std::optional< std::vector< bool > > accepting;
};

struct RawTrans
{
    std::string name;
    std::string src;
    Valuation guard;
    std::vector< std::pair< std::string, Rational > > succ;
    Token at;
};

std::vector< std::pair< std::string, Rational > > parse_dist( Lexer& lx )
{
    std::vector< std::pair< std::string, Rational > > out;
    if ( !lx.accept( "{" ) )
    {
        out.emplace_back( lx.word(), Rational( 1 ) );
        return out;
    }
    do
    {
        Rational p = lx.rational();
        lx.expect( ":" );
        out.emplace_back( lx.word(), p );
    } while ( lx.accept( "," ) );
    lx.expect( "}" );
    return out;
}

ParsedModule parse_module( Lexer& lx, const Domain& domain )
{
    Token start = lx.peek();
    lx.expect( "module" );
    std::string name = lx.word();
    lx.expect( "{" );
    std::vector< std::string > statevars, inputvars;
    std::vector< std::pair< std::string, Valuation > > states;
    std::vector< Token > state_at;
    std::string init;
    Token init_at;
    std::vector< RawTrans > trans;
    std::map< std::string, std::pair< Token, std::vector< std::vector< std::string > > > > reps;
    std::optional< std::vector< std::string > > accepting;
    Token accepting_at;

    while ( !lx.accept( "}" ) )
    {
        Token at = lx.peek();
        if ( lx.accept( "statevars" ) )
            statevars = lx.word_set();
        else if ( lx.accept( "inputvars" ) )
            inputvars = lx.word_set();
        else if ( lx.accept( "states" ) )
        {
            lx.expect( "{" );
            do
            {
                state_at.push_back( lx.peek() );
                std::string s = lx.word();
                Valuation v = lx.is( "[" ) ? lx.assignment() : Valuation{};
                states.emplace_back( s, v );
            } while ( lx.accept( "," ) );
            lx.expect( "}" );
        }
        else if ( lx.accept( "init" ) )
        {
            init_at = lx.peek();
            init = lx.word();
        }
        else if ( lx.is( "trans" ) || lx.is( "prob" ) )
        {
            lx.accept( "prob" );
            lx.expect( "trans" );
            RawTrans t;
            t.at = at;
            std::string first = lx.word();
            if ( lx.accept( ":" ) )
            {
                t.name = first;
                t.src = lx.word();
            }
            else
                t.src = first;
            bool guarded = false;
            if ( lx.accept( "on" ) )
            {
                t.guard = lx.assignment();
                guarded = true;
            }
            lx.expect( "->" );
            t.succ = parse_dist( lx );
            if ( !guarded && lx.accept( "on" ) )
                t.guard = lx.assignment();
            if ( t.name.empty() )
                t.name = "t" + std::to_string( trans.size() + 1 );
            trans.push_back( std::move( t ) );
        }
        else if ( lx.accept( "repertoire" ) )
        {
            std::string s = lx.word();
            lx.expect( "{" );
            std::vector< std::vector< std::string > > choices;
            if ( !lx.is( "}" ) )
                do
                    choices.push_back( lx.word_set() );
                while ( lx.accept( "," ) );
            lx.expect( "}" );
            if ( !reps.emplace( s, std::make_pair( at, choices ) ).second )
                lx.fail_at( at, "second repertoire for state " + s );
        }
        else if ( lx.accept( "accepting" ) )
        {
            accepting_at = at;
            accepting = lx.word_set();
        }
        else
            lx.fail( "unknown declaration '" + lx.peek().text + "' in module " + name );
        lx.end_item();
    }

    ParsedModule pm;
    pm.module = located( lx, start, [ & ] {
        ModuleBuilder b( name, domain, statevars, inputvars );
        std::map< std::string, int > index;
        for ( std::size_t i = 0; i < states.size(); ++i )
        {
            if ( index.count( states[ i ].first ) )
                lx.fail_at( state_at[ i ], "state " + states[ i ].first + " declared twice" );
            index[ states[ i ].first ] = located( lx, state_at[ i ], [ & ] { return b.add_state( states[ i ].first, states[ i ].second ); } );
        }
        auto state = [ & ]( const std::string& s, const Token& at ) {
            auto it = index.find( s );
            if ( it == index.end() )
                lx.fail_at( at, "unknown state '" + s + "' in module " + name );
            return it->second;
        };
        if ( states.empty() )
            lx.fail_at( start, "module " + name + " declares no states" );
        b.set_init( init.empty() ? 0 : state( init, init_at ) );
        for ( const auto& t : trans )
        {
            std::vector< std::pair< int, Rational > > succ;
            for ( const auto& [ s, p ] : t.succ )
                succ.emplace_back( state( s, t.at ), p );
            b.add_prob_transition( t.name, state( t.src, t.at ), t.guard, succ );
        }
        return b.build();
    } );

    const Module& m = pm.module;
    pm.repertoire = default_repertoire( m );
    for ( const auto& [ s, entry ] : reps )
    {
        const auto& [ at, choices ] = entry;
        int q = m.state_index( s );
        if ( q < 0 )
            lx.fail_at( at, "repertoire for unknown state '" + s + "'" );
        std::vector< std::vector< int > > resolved;
        for ( const auto& choice : choices )
        {
            std::vector< int > ts;
            for ( const auto& ref : choice )
            {
                bool found = false;
                for ( std::size_t i = 0; i < m.trans.size(); ++i )
                    if ( m.trans[ i ].src == q && m.trans[ i ].name == ref )
                    {
                        ts.push_back( static_cast< int >( i ) );
                        found = true;
                    }
                if ( !found )
                    lx.fail_at( at, "no transition '" + ref + "' leaves " + s );
            }
            std::sort( ts.begin(), ts.end() );
            ts.erase( std::unique( ts.begin(), ts.end() ), ts.end() );
            resolved.push_back( ts );
        }
        pm.repertoire.choices[ q ] = resolved;
    }
    located( lx, start, [ & ] {
        validate( pm.repertoire, m );
        return 0;
    } );
    if ( accepting )
    {
        std::vector< bool > acc( m.num_states(), false );
        for ( const auto& s : *accepting )
        {
            int q = m.state_index( s );
            if ( q < 0 )
                lx.fail_at( accepting_at, "accepting set names unknown state '" + s + "'" );
            acc[ q ] = true;
        }
        pm.accepting = acc;
    }
    return pm;
}

} // namespace

Mas parse_mas( const std::string& text, const std::string& source )
{
    Lexer lx( text, source );
    Domain d = parse_domain( lx );
    Mas mas;
    while ( !lx.at_end() )
    {
        Token at = lx.peek();
        ParsedModule pm = parse_module( lx, d );
        if ( pm.accepting )
            lx.fail_at( at, "accepting sets belong in assumption files" );
        mas.modules.push_back( std::move( pm.module ) );
        mas.repertoires.push_back( std::move( pm.repertoire ) );
    }
    Token end = lx.peek();
    located( lx, end, [ & ] {
        validate( mas );
        return 0;
    } );
    return mas;
}

Assumption parse_assumption( const std::string& text, const std::string& source, const Domain* default_domain )
{
    Lexer lx( text, source );
    Domain d;
    if ( lx.is( "domain" ) || !default_domain )
        d = parse_domain( lx );
    else
        d = *default_domain;
    ParsedModule pm = parse_module( lx, d );
    if ( !lx.at_end() )
        lx.fail( "an assumption file holds a single module" );
    Assumption a;
    a.accepting = pm.accepting ? *pm.accepting : std::vector< bool >( pm.module.num_states(), true );
    a.module = std::move( pm.module );
    for ( auto& c : a.module.components )
        c.environment = true;
    validate( a );
    return a;
}

Icgs parse_icgs( const std::string& text, const std::string& source )
{
    Lexer lx( text, source );
    lx.expect( "icgs" );
    lx.expect( "{" );
    Icgs g;
    std::vector< std::string > actions;
    std::vector< std::pair< std::string, std::vector< std::string > > > states;
    std::set< std::string > props;
    struct Legal
    {
        Token at;
        std::string state, agent;
        std::vector< std::string > acts;
    };
    struct Trans
    {
        Token at;
        std::string state;
        std::vector< std::string > move;
        std::vector< std::pair< std::string, Rational > > succ;
    };
    struct Obs
    {
        Token at;
        std::string agent;
        std::vector< std::vector< std::string > > classes;
    };
    std::vector< Legal > legals;
    std::vector< Trans > transs;
    std::vector< Obs > obss;
    std::string init;
    Token init_at;

    while ( !lx.accept( "}" ) )
    {
        Token at = lx.peek();
        if ( lx.accept( "agents" ) )
            g.agents = lx.word_set();
        else if ( lx.accept( "actions" ) )
            actions = lx.word_set();
        else if ( lx.accept( "props" ) )
            for ( auto& p : lx.word_set() )
                props.insert( p );
        else if ( lx.accept( "states" ) )
        {
            lx.expect( "{" );
            do
            {
                std::string s = lx.word();
                std::vector< std::string > ps;
                if ( lx.accept( "[" ) )
                {
                    if ( !lx.accept( "]" ) )
                    {
                        do
                            ps.push_back( lx.word() );
                        while ( lx.accept( "," ) );
                        lx.expect( "]" );
                    }
                }
                props.insert( ps.begin(), ps.end() );
                states.emplace_back( s, ps );
            } while ( lx.accept( "," ) );
            lx.expect( "}" );
        }
        else if ( lx.accept( "obs" ) )
        {
            Obs o{ at, lx.word(), {} };
            lx.expect( ":" );
            while ( lx.is( "{" ) )
                o.classes.push_back( lx.word_set() );
            obss.push_back( std::move( o ) );
        }
        else if ( lx.accept( "legal" ) )
        {
            Legal l{ at, lx.word(), "", {} };
            l.agent = lx.word();
            l.acts = lx.word_set();
            legals.push_back( std::move( l ) );
        }
        else if ( lx.accept( "trans" ) )
        {
            Trans t{ at, lx.word(), {}, {} };
            lx.expect( "(" );
            do
                t.move.push_back( lx.accept( "*" ) ? "*" : lx.word() );
            while ( lx.accept( "," ) );
            lx.expect( ")" );
            lx.expect( "->" );
            t.succ = parse_dist( lx );
            transs.push_back( std::move( t ) );
        }
        else if ( lx.accept( "init" ) )
        {
            init_at = lx.peek();
            init = lx.word();
        }
        else
            lx.fail( "unknown declaration '" + lx.peek().text + "'" );
        lx.end_item();
    }
    if ( !lx.at_end() )
        lx.fail( "text after the game" );
    if ( g.agents.empty() )
        lx.fail( "no agents declared" );
    if ( states.empty() )
        lx.fail( "no states declared" );

    std::size_t n = states.size(), k = g.agents.size();
    for ( const auto& [ s, ps ] : states )
    {
        if ( std::find( g.states.begin(), g.states.end(), s ) != g.states.end() )
            lx.fail( "state " + s + " declared twice" );
        g.states.push_back( s );
        g.props.push_back( ps );
    }
    g.propositions.assign( props.begin(), props.end() );
    auto state = [ & ]( const std::string& s, const Token& at ) {
        int q = g.state_index( s );
        if ( q < 0 )
            lx.fail_at( at, "unknown state '" + s + "'" );
        return q;
    };
    auto agent = [ & ]( const std::string& a, const Token& at ) {
        for ( std::size_t i = 0; i < k; ++i )
            if ( g.agents[ i ] == a )
                return static_cast< int >( i );
        lx.fail_at( at, "unknown agent '" + a + "'" );
    };
    g.init = init.empty() ? 0 : state( init, init_at );

    g.legal.assign( n, std::vector< std::vector< std::string > >( k, actions ) );
    for ( const auto& l : legals )
        g.legal[ state( l.state, l.at ) ][ agent( l.agent, l.at ) ] = l.acts;

    g.obs.assign( k, std::vector< int >( n, -1 ) );
    for ( const auto& o : obss )
    {
        int a = agent( o.agent, o.at );
        int cls = 0;
        for ( const auto& c : o.classes )
        {
            for ( const auto& s : c )
                g.obs[ a ][ state( s, o.at ) ] = cls;
            ++cls;
        }
    }
    for ( auto& row : g.obs )
    {
        int next = *std::max_element( row.begin(), row.end() ) + 1;
        for ( auto& c : row )
            if ( c < 0 )
                c = next++;
    }

    g.trans.resize( n );
    for ( const auto& t : transs )
    {
        int q = state( t.state, t.at );
        if ( t.move.size() != k )
            lx.fail_at( t.at, "move must name one action per agent" );
        std::vector< std::vector< int > > options( k );
        for ( std::size_t a = 0; a < k; ++a )
        {
            const auto& legal = g.legal[ q ][ a ];
            if ( t.move[ a ] == "*" )
            {
                options[ a ].resize( legal.size() );
                std::iota( options[ a ].begin(), options[ a ].end(), 0 );
                continue;
            }
            auto it = std::find( legal.begin(), legal.end(), t.move[ a ] );
            if ( it == legal.end() )
                throw Error( ErrorKind::IllegalAction, "line " + std::to_string( t.at.line ) + ": action " + t.move[ a ]
                                                           + " of agent " + g.agents[ a ] + " is not legal at " + t.state );
            options[ a ] = { static_cast< int >( it - legal.begin() ) };
        }
        std::vector< std::pair< int, Rational > > succ;
        for ( const auto& [ s, p ] : t.succ )
            succ.emplace_back( state( s, t.at ), p );
        auto d = Dist< int >::from( succ );
        if ( !d.is_valid() )
            lx.fail_at( t.at, "distribution does not sum to 1" );
        std::vector< int > move( k, 0 );
        std::function< void( std::size_t ) > fill = [ & ]( std::size_t a ) {
            if ( a == k )
            {
                g.trans[ q ][ move ] = d;
                return;
            }
            for ( int o : options[ a ] )
            {
                move[ a ] = o;
                fill( a + 1 );
            }
        };
        fill( 0 );
    }
    validate( g );
    return g;
}

AgConfig parse_agv( const std::string& text, const Mas& mas, const FileLoader& load, const std::string& source )
{
    Lexer lx( text, source );
    lx.expect( "agv" );
    lx.expect( "{" );
    AgConfig cfg;
    bool have_rule = false;
    auto agent = [ & ]( const Token& at, const std::string& a ) {
        return located( lx, at, [ & ] { return mas.agent_index( a ); } );
    };
    auto agents = [ & ]() {
        Token at = lx.peek();
        std::vector< int > out;
        if ( lx.is( "{" ) )
            for ( const auto& a : lx.word_set() )
                out.push_back( agent( at, a ) );
        else
            out.push_back( agent( at, lx.word() ) );
        std::sort( out.begin(), out.end() );
        return out;
    };
    auto formula = [ & ]() {
        Token at = lx.peek();
        std::string f = lx.string();
        try
        {
            return parse_formula( f );
        }
        catch ( const Error& e )
        {
            lx.fail_at( at, e.what() );
        }
    };

    while ( !lx.accept( "}" ) )
    {
        Token at = lx.peek();
        if ( lx.accept( "rule" ) )
        {
            cfg.rule = located( lx, at, [ & ] { return parse_rule( lx.word() ); } );
            have_rule = true;
        }
        else if ( lx.accept( "coalition" ) )
            cfg.coalition = agents();
        else if ( lx.accept( "unit" ) )
        {
            Unit u;
            u.agents = agents();
            lx.expect( "{" );
            while ( !lx.accept( "}" ) )
            {
                Token uat = lx.peek();
                if ( lx.accept( "assumption" ) )
                {
                    if ( lx.accept( "neighbourhood" ) || lx.accept( "neighborhood" ) )
                        u.assumption.reset();
                    else if ( lx.accept( "universal" ) )
                    {
                        u.assumption = universal_assumption( mas.modules.at( 0 ).domain );
                        u.assumption_name = "universal";
                    }
                    else
                    {
                        std::string file = lx.string();
                        u.assumption = located( lx, uat, [ & ] {
                            return parse_assumption( load( file ), file, &mas.modules.at( 0 ).domain );
                        } );
                        u.assumption_name = file;
                    }
                }
                else if ( lx.accept( "local" ) )
                    u.local = formula();
                else if ( lx.accept( "k" ) )
                {
                    Token kat = lx.peek();
                    std::string k = lx.word();
                    if ( k.empty() || !std::all_of( k.begin(), k.end(), ::isdigit ) )
                        lx.fail_at( kat, "radius must be a positive integer" );
                    u.k = std::stoi( k );
                }
                else
                    lx.fail( "unknown unit field '" + lx.peek().text + "'" );
                lx.end_item();
            }
            cfg.units.push_back( std::move( u ) );
        }
        else if ( lx.accept( "global" ) )
            cfg.global = formula();
        else if ( lx.accept( "bounds" ) )
        {
            do
            {
                Token bat = lx.peek();
                std::string name = lx.word();
                lx.expect( "=" );
                Rational v = lx.rational();
                if ( name == "p" )
                    cfg.p = v;
                else if ( name == "p1" )
                    cfg.p1 = v;
                else if ( name == "p2" )
                    cfg.p2 = v;
                else
                    lx.fail_at( bat, "unknown bound '" + name + "'" );
            } while ( lx.accept( "," ) );
        }
        else if ( lx.accept( "view" ) )
        {
            std::string v = lx.word();
            if ( v == "objective" )
                cfg.view = View::Objective;
            else if ( v == "subjective" )
                cfg.view = View::Subjective;
            else
                lx.fail_at( at, "view is objective or subjective" );
        }
        else if ( lx.accept( "budget" ) )
            cfg.budget = static_cast< std::size_t >( std::stoull( lx.word() ) );
        else
            lx.fail( "unknown configuration field '" + lx.peek().text + "'" );
        lx.end_item();
    }
    if ( !have_rule )
        lx.fail( "configuration names no rule" );
    Token end = lx.peek();
    located( lx, end, [ & ] {
        validate( mas, cfg );
        return 0;
    } );
    return cfg;
}

System parse_system( const std::string& text, const std::string& source )
{
    Lexer lx( text, source );
    if ( lx.is( "icgs" ) )
        return parse_icgs( text, source );
    return parse_mas( text, source );
}

System load_system( const std::string& path ) { return parse_system( read_file( path ), path ); }

AgConfig load_agv( const std::string& path, const Mas& mas )
{
    auto dir = std::filesystem::path( path ).parent_path();
    FileLoader load = [ dir ]( const std::string& file ) {
        std::filesystem::path p( file );
        return read_file( p.is_absolute() ? p.string() : ( dir / p ).string() );
    };
    return parse_agv( read_file( path ), mas, load, path );
}

Game system_game( const System& s )
{
    if ( const auto* m = std::get_if< Mas >( &s ) )
        return mas_game( *m );
    return icgs_game( std::get< Icgs >( s ) );
}

} // namespace sagv
