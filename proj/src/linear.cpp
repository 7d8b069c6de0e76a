#include "sagv/linear.hpp"

namespace sagv
{

std::vector< Rational > solve_linear( Matrix a, std::vector< Rational > b )
{
    std::size_t n = b.size();
    if ( a.size() != n )
        throw Error( ErrorKind::InvalidModel, "matrix and right-hand side differ in size" );
    for ( std::size_t col = 0; col < n; ++col )
    {
        std::size_t pivot = col;
        while ( pivot < n && a[ pivot ][ col ] == 0 )
            ++pivot;
        if ( pivot == n )
            throw Error( ErrorKind::InvalidModel, "singular linear system" );
        std::swap( a[ pivot ], a[ col ] );
        std::swap( b[ pivot ], b[ col ] );
        Rational inv = 1 / a[ col ][ col ];
        for ( std::size_t j = col; j < n; ++j )
            a[ col ][ j ] *= inv;
        b[ col ] *= inv;
        for ( std::size_t i = 0; i < n; ++i )
        {
            if ( i == col || a[ i ][ col ] == 0 )
                continue;
            Rational factor = a[ i ][ col ];
            for ( std::size_t j = col; j < n; ++j )
                a[ i ][ j ] -= factor * a[ col ][ j ];
            b[ i ] -= factor * b[ col ];
        }
    }
    return b;
}

} // namespace sagv
