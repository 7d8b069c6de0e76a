#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sagv
{

using Rational = mpq_class;

/// Parses "3/4", "0.75", "1" or "1e-2"-free decimals into an exact rational.
Rational parse_rational( const std::string& text );
std::string to_string( const Rational& r );

enum class ErrorKind
{
    IncompatibleValuations,
    MissingTransition,
    ForbiddenSelfLoop,
    VariableClash,
    VariableNotInScope,
    NotATrace,
    NotAsynchronous,
    UnknownAgent,
    DeadlockState,
    SyntaxError,
    BoundOutOfRange,
    AlphabetMismatch,
    BudgetExceeded,
    UnsupportedFormula,
    BoundExceeded,
    IllegalAction,
    EmptyList,
    UnsupportedNext,
    NotPerfectInformation,
    ZeroDenominator,
    InconsistentBounds,
    SynthesisFailed,
    CapExceeded,
    HorizonInsufficient,
    InvalidModel,
    InvalidConfig,
};

const char* error_kind_name( ErrorKind kind );

class Error : public std::runtime_error
{
    ErrorKind _kind;

public:
    Error( ErrorKind kind, const std::string& what )
        : std::runtime_error( std::string( error_kind_name( kind ) ) + ": " + what ), _kind{ kind } {}

    [[nodiscard]] ErrorKind kind() const { return _kind; }
};

/// Finite-support probability distribution with exact weights. The support is
/// kept sorted by outcome and free of zero weights.
template < typename T >
class Dist
{
    std::vector< std::pair< T, Rational > > _support;

public:
    Dist() = default;

    static Dist point( T x )
    {
        Dist d;
        d._support.emplace_back( std::move( x ), Rational( 1 ) );
        return d;
    }

    /// Builds a distribution; merges duplicate outcomes and drops zero weights.
    /// Does not check the total.
    static Dist from( std::vector< std::pair< T, Rational > > weights )
    {
        std::sort( weights.begin(), weights.end(),
                   []( const auto& a, const auto& b ) { return a.first < b.first; } );
        Dist d;
        for ( auto& [ x, w ] : weights )
        {
            if ( w == 0 )
                continue;
            if ( !d._support.empty() && d._support.back().first == x )
                d._support.back().second += w;
            else
                d._support.emplace_back( std::move( x ), std::move( w ) );
        }
        return d;
    }

    [[nodiscard]] const std::vector< std::pair< T, Rational > >& support() const { return _support; }
    [[nodiscard]] std::size_t size() const { return _support.size(); }
    [[nodiscard]] bool empty() const { return _support.empty(); }

    [[nodiscard]] Rational total() const
    {
        Rational sum = 0;
        for ( const auto& [ x, w ] : _support )
            sum += w;
        return sum;
    }

    [[nodiscard]] bool is_valid() const
    {
        if ( _support.empty() )
            return false;
        for ( const auto& [ x, w ] : _support )
            if ( w <= 0 )
                return false;
        return total() == 1;
    }

    [[nodiscard]] bool is_point() const { return _support.size() == 1; }
    [[nodiscard]] bool is_point_at( const T& x ) const { return is_point() && _support.front().first == x; }

    [[nodiscard]] Rational weight( const T& x ) const
    {
        for ( const auto& [ y, w ] : _support )
            if ( y == x )
                return w;
        return 0;
    }

    template < typename F >
    [[nodiscard]] auto map( F&& f ) const
    {
        using U = decltype( f( std::declval< const T& >() ) );
        std::vector< std::pair< U, Rational > > out;
        out.reserve( _support.size() );
        for ( const auto& [ x, w ] : _support )
            out.emplace_back( f( x ), w );
        return Dist< U >::from( std::move( out ) );
    }

    friend bool operator==( const Dist& a, const Dist& b ) { return a._support == b._support; }
    friend bool operator<( const Dist& a, const Dist& b ) { return a._support < b._support; }
};

/// Product of distributions over tuples; EmptyList if no factor is given.
Dist< std::vector< int > > product_dist( const std::vector< Dist< int > >& factors );

/// Ultimately periodic sequence prefix · cycle^ω.
template < typename T >
struct Lasso
{
    std::vector< T > prefix;
    std::vector< T > cycle;

    [[nodiscard]] const T& at( std::size_t i ) const
    {
        if ( i < prefix.size() )
            return prefix[ i ];
        return cycle[ ( i - prefix.size() ) % cycle.size() ];
    }

    [[nodiscard]] std::size_t horizon() const { return prefix.size() + cycle.size(); }
};

/// Equality of the infinite words denoted by two lassos.
template < typename T >
bool same_word( const Lasso< T >& a, const Lasso< T >& b )
{
    if ( a.cycle.empty() || b.cycle.empty() )
        return false;
    std::size_t n = std::max( a.prefix.size(), b.prefix.size() ) + std::lcm( a.cycle.size(), b.cycle.size() );
    for ( std::size_t i = 0; i < n; ++i )
        if ( !( a.at( i ) == b.at( i ) ) )
            return false;
    return true;
}

} // namespace sagv
