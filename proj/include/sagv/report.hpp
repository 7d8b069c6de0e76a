#pragma once

#include "sagv/agv.hpp"

#include <json.hpp>

#include <string>

namespace sagv
{

using Json = nlohmann::ordered_json;

Json strategy_json( const Game& g, const Strategy& s );
Json premise_json( const PremiseReport& p, const Game& global );
Json verdict_json( const Verdict& v, const Game& global );
Json nested_json( const NestedResult& r, const Game& g );

/// Human-readable verdict: status line, conclusion, one line per premise.
std::string verdict_text( const Verdict& v );

} // namespace sagv
