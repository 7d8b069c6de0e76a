#include "sagv/report.hpp"

#include <sstream>

namespace sagv
{

Json strategy_json( const Game& g, const Strategy& s )
{
    Json out = Json::array();
    for ( std::size_t m = 0; m < s.agents.size(); ++m )
    {
        const auto& ag = g.agents[ s.agents[ m ] ];
        Json table = Json::object();
        for ( std::size_t c = 0; c < s.choice[ m ].size(); ++c )
        {
            int choice = s.choice[ m ][ c ];
            const auto& names = ag.choice_names[ c ];
            table[ ag.class_names[ c ] ] = choice < static_cast< int >( names.size() ) ? names[ choice ] : std::to_string( choice );
        }
        out.push_back( { { "agent", ag.id }, { "name", ag.name }, { "choices", table } } );
    }
    return out;
}

Json premise_json( const PremiseReport& p, const Game& global )
{
    Json j = { { "name", p.name }, { "status", premise_status_name( p.status ) }, { "detail", p.detail } };
    if ( p.witness )
        j[ "witness" ] = strategy_json( global, *p.witness );
    return j;
}

Json verdict_json( const Verdict& v, const Game& global )
{
    Json j = { { "rule", rule_name( v.rule ) },
               { "status", v.concluded() ? "Concluded" : "Inapplicable" },
               { "conclusion", v.conclusion ? to_string( v.conclusion ) : "" } };
    Json ps = Json::array();
    for ( const auto& p : v.premises )
        ps.push_back( premise_json( p, global ) );
    j[ "premises" ] = ps;
    if ( v.strategy )
        j[ "strategy" ] = strategy_json( global, *v.strategy );
    if ( !v.side_checks.empty() )
    {
        j[ "side_checks" ] = v.side_checks;
        j[ "side_checks_hold" ] = v.side_checks_hold;
    }
    return j;
}

Json nested_json( const NestedResult& r, const Game& g )
{
    Json steps = Json::array();
    for ( const auto& s : r.trace )
    {
        std::vector< std::string > where;
        for ( std::size_t q = 0; q < s.truth.size(); ++q )
            if ( s.truth[ q ] )
                where.push_back( g.states[ q ] );
        steps.push_back( { { "subformula", s.subformula },
                           { "proposition", s.proposition },
                           { "method", s.method },
                           { "states", where } } );
    }
    return { { "holds", r.holds }, { "labelling", steps } };
}

std::string verdict_text( const Verdict& v )
{
    std::ostringstream os;
    os << rule_name( v.rule ) << ": " << ( v.concluded() ? "Concluded" : "Inapplicable" );
    if ( v.conclusion )
        os << " " << to_string( v.conclusion );
    os << "\n";
    for ( const auto& p : v.premises )
        os << "  " << p.name << ": " << premise_status_name( p.status ) << " -- " << p.detail << "\n";
    for ( const auto& s : v.side_checks )
        os << "  side check: " << s << "\n";
    return os.str();
}

} // namespace sagv
