#pragma once

#include "sagv/agv.hpp"

#include <functional>
#include <string>
#include <variant>

namespace sagv
{

/// Text of a file; InvalidConfig if it cannot be read.
std::string read_file( const std::string& path );

/// Module files: `domain {…}` followed by `module NAME { … }` blocks.
/// Errors carry "source:line:column".
Mas parse_mas( const std::string& text, const std::string& source = "<input>" );

/// A single module with an optional `accepting {…}` set (all states
/// accepting when absent). The domain line may be omitted when a default
/// domain is supplied.
Assumption parse_assumption( const std::string& text, const std::string& source = "<input>",
                             const Domain* default_domain = nullptr );

Icgs parse_icgs( const std::string& text, const std::string& source = "<input>" );

/// Resolves assumption file names of a configuration to their text.
using FileLoader = std::function< std::string( const std::string& ) >;

AgConfig parse_agv( const std::string& text, const Mas& mas, const FileLoader& load,
                    const std::string& source = "<input>" );

/// Either kind of system file, told apart by its first keyword.
using System = std::variant< Mas, Icgs >;

System parse_system( const std::string& text, const std::string& source = "<input>" );
System load_system( const std::string& path );
AgConfig load_agv( const std::string& path, const Mas& mas );

Game system_game( const System& s );

} // namespace sagv
