#pragma once

#include "sagv/mc_prob.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace sagv
{

struct GuaranteeResult
{
    bool holds = false;
    std::optional< Lasso< std::string > > counterexample;  // state names of a violating trace
};

/// m ⊨ a: every trace of m (fair for the agents in `agents`) has a
/// curtailment of its derived word accepted by the assumption, reading the
/// assumption's inputs at the change points. Without agent specs every
/// component of m is a fair agent with its explicit transitions as the
/// only choice.
GuaranteeResult check_guarantee( const Module& m, const Assumption& a, const std::vector< AgentSpec >& agents = {},
                                 std::size_t budget = 100000 );

/// Stutter-tracking expansion of an assumption over letters
/// (X^A valuation, I^A valuation or "none"): the assumption may idle while
/// the projection repeats, and accepts when it moves into an accepting
/// state infinitely often.
struct StutterAutomaton
{
    ExplicitNba nba;
    std::vector< Valuation > state_letters;  // X^A valuations, letter / (inputs + 1)
    std::vector< Valuation > input_letters;  // I^A valuations; index inputs.size() means none

    [[nodiscard]] int letter( int state_index, int input_index ) const
    {
        return state_index * static_cast< int >( input_letters.size() + 1 ) + input_index;
    }
};

StutterAutomaton stutter_automaton( const Assumption& a );

enum class Rule
{
    Rk,
    Part,
    PRk,
    PRsynt,
    PPart,
    PRonly,
    PRso,
};

const char* rule_name( Rule r );
Rule parse_rule( const std::string& name );  // InvalidConfig for unknown names

struct Unit
{
    std::vector< int > agents;                 // 0-based MAS agents (one for the non-partition rules)
    std::optional< Assumption > assumption;    // nullopt: the neighbourhood composition itself
    std::string assumption_name;
    Formula local;
    int k = 1;
};

struct AgConfig
{
    Rule rule = Rule::Rk;
    std::vector< int > coalition;  // 0-based, sorted
    std::vector< Unit > units;
    Formula global;                // ψ of the probabilistic rules
    Rational p = 0;                // PRsynt, PPart, PRonly, PRso
    Rational p1 = 0;               // PRk
    Rational p2 = 1;               // PRk
    View view = View::Objective;
    std::size_t budget = 100000;   // complementation states
    std::size_t cap = 1000000;     // strategy candidates
    bool parallel = true;
};

/// Shape of the configuration for its rule; InvalidConfig, ZeroDenominator
/// or InconsistentBounds.
void validate( const Mas& mas, const AgConfig& cfg );

enum class PremiseStatus
{
    Holds,
    Fails,
    Error,
};

const char* premise_status_name( PremiseStatus s );

struct PremiseReport
{
    std::string name;
    PremiseStatus status = PremiseStatus::Error;
    std::string detail;
    std::optional< Strategy > witness;   // on the global game
    std::string witness_text;
};

struct Verdict
{
    enum Status
    {
        Concluded,
        Inapplicable,
    } status = Inapplicable;

    Rule rule = Rule::Rk;
    Formula conclusion;
    std::vector< PremiseReport > premises;
    std::optional< Strategy > strategy;  // joint coalition strategy on the global game, when synthesized
    std::vector< std::string > side_checks;
    bool side_checks_hold = true;

    [[nodiscard]] bool concluded() const { return status == Concluded; }
};

/// Conclusion the rule would draw from the configuration.
Formula rule_conclusion( const Mas& mas, const AgConfig& cfg );

Verdict apply_rule( const Mas& mas, const AgConfig& cfg );

Verdict apply_Rk( const Mas& mas, const AgConfig& cfg );
Verdict apply_Part( const Mas& mas, const AgConfig& cfg );
Verdict apply_PRk( const Mas& mas, const AgConfig& cfg );
Verdict apply_PRsynt( const Mas& mas, const AgConfig& cfg );
Verdict apply_PPart( const Mas& mas, const AgConfig& cfg );
Verdict apply_PRonly( const Mas& mas, const AgConfig& cfg );
Verdict apply_PRso( const Mas& mas, const AgConfig& cfg );

struct LabelStep
{
    std::string subformula;
    std::string proposition;
    std::vector< bool > truth;  // per global state
    std::string method;         // "direct" or the rule that settled the initial state
};

struct NestedResult
{
    bool holds = false;
    std::vector< LabelStep > trace;
};

/// Innermost-first labelling. Each strategic subformula is decided at every
/// state directly; at the initial state a library configuration whose
/// conclusion implies the subformula is tried first.
NestedResult verify_nested( const Mas& mas, const Formula& phi, const std::vector< AgConfig >& library = {},
                            View view = View::Objective );
NestedResult verify_nested( const Game& g, const Formula& phi, View view = View::Objective );

} // namespace sagv
