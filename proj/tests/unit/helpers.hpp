#pragma once

#include "../support.hpp"
#include "sagv/io.hpp"

#include <doctest.h>

#include <functional>
#include <string>

namespace sagv::test
{

/// Kind of the Error thrown by f; fails the test when nothing is thrown.
inline ErrorKind kind_of( const std::function< void() >& f )
{
    try
    {
        f();
    }
    catch ( const Error& e )
    {
        return e.kind();
    }
    FAIL( "no error raised" );
    return ErrorKind::InvalidModel;
}

inline std::string fixture( const std::string& name ) { return std::string( FIXTURE_DIR ) + "/" + name; }

inline Game fixture_game( const std::string& name ) { return system_game( load_system( fixture( name ) ) ); }

inline Mas fixture_mas( const std::string& name ) { return parse_mas( read_file( fixture( name ) ), name ); }

inline Rational frac( long n, long d )
{
    Rational r( n, d );
    r.canonicalize();
    return r;
}

} // namespace sagv::test
