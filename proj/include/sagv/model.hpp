#pragma once

#include "sagv/base.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace sagv
{

/// Shared finite domain of values for every variable of a system.
class Domain
{
    std::vector< std::string > _values;

public:
    Domain() = default;
    explicit Domain( std::vector< std::string > values );

    [[nodiscard]] const std::vector< std::string >& values() const { return _values; }
    [[nodiscard]] bool contains( const std::string& v ) const;
    [[nodiscard]] std::size_t size() const { return _values.size(); }

    friend bool operator==( const Domain&, const Domain& ) = default;
};

/// Partial assignment variable -> value. Ordered so that printing and
/// comparison are deterministic.
using Valuation = std::map< std::string, std::string >;
using VarSet = std::vector< std::string >; // sorted, unique

VarSet make_varset( std::vector< std::string > vars );
VarSet var_union( const VarSet& a, const VarSet& b );
VarSet var_intersection( const VarSet& a, const VarSet& b );
VarSet var_difference( const VarSet& a, const VarSet& b );
bool var_subset( const VarSet& a, const VarSet& b );

bool compatible( const Valuation& r1, const Valuation& r2 );
/// Union of two compatible valuations; IncompatibleValuations otherwise.
Valuation merge( const Valuation& r1, const Valuation& r2 );
Valuation restrict_to( const Valuation& r, const VarSet& vars );
VarSet vars_of( const Valuation& r );
std::string to_string( const Valuation& r );

/// All total valuations of `vars` over `domain`, in lexicographic order.
std::vector< Valuation > all_valuations( const VarSet& vars, const Domain& domain );

/// How a composite transition was derived.
enum class RuleTag
{
    Local,
    AsynL,
    AsynR,
    Syn,
    Implicit,
};

const char* rule_tag_name( RuleTag tag );

/// One element of the transition relation. Probabilistic modules carry a
/// proper distribution; plain modules use point distributions.
struct Transition
{
    int src = 0;
    Valuation input;   // total valuation over the module's input variables
    Dist< int > succ;  // over module states
    RuleTag tag = RuleTag::Local;
    std::string name;  // declaration name (several expanded guards share it)

    // Per component: index of the component's base transition that fired, or
    // -1 when the component did not take part in the step.
    std::vector< int > actors;
    // Per component: whether the component changed its local state (for
    // probabilistic steps: whether the base transition is anything other
    // than a point self-loop).
    std::vector< bool > moving;

    [[nodiscard]] bool is_self_loop() const { return succ.is_point_at( src ); }
};

/// A base module that was folded into this one, with its projection.
struct Component
{
    std::string name;
    bool environment = false;      // assumption parts have no strategic choices
    std::vector< int > local;      // module state -> local state of the component
    std::vector< std::string > local_names;
};

/// Reactive module. Composite modules keep track of their components so
/// that strategies of the original agents can be applied to them.
struct Module
{
    std::string name;
    Domain domain;
    VarSet state_vars;
    VarSet input_vars;
    std::vector< std::string > states;
    int init = 0;
    std::vector< Valuation > label;
    std::vector< Transition > trans;
    std::vector< Component > components;

    // Base transitions of each component, kept for repertoire lookups.
    std::vector< std::vector< Transition > > base_trans;

    [[nodiscard]] std::size_t num_states() const { return states.size(); }
    [[nodiscard]] int state_index( const std::string& name ) const; // -1 if absent
    [[nodiscard]] std::vector< int > transitions_from( int q ) const;
    [[nodiscard]] int component_index( const std::string& name ) const;
};

/// Builder for a fresh base module. Transitions with partial guards are
/// expanded over the missing input variables; (q, α) pairs without an
/// explicit transition receive an implicit self-loop.
class ModuleBuilder
{
    Module _m;
    struct Raw
    {
        std::string name;
        int src;
        Valuation guard;
        std::vector< std::pair< int, Rational > > succ;
    };
    std::vector< Raw > _raw;

public:
    ModuleBuilder( std::string name, Domain domain, std::vector< std::string > state_vars,
                   std::vector< std::string > input_vars );

    int add_state( const std::string& name, Valuation label );
    void set_init( int q );
    void add_transition( const std::string& name, int src, Valuation guard, int dst );
    void add_prob_transition( const std::string& name, int src, Valuation guard,
                              std::vector< std::pair< int, Rational > > succ );
    [[nodiscard]] const Module& peek() const { return _m; }
    /// Finishes the module, validating it.
    Module build();
};

/// The one-state module without variables: neutral element of composition.
Module unit_module( const Domain& domain );

/// Checks the module invariants; throws the violated clause.
void validate( const Module& m );

/// Per-state menu of transition subsets.
struct Repertoire
{
    // choices[q] lists the choices at q; every choice is a sorted list of
    // indices into the base module's transitions.
    std::vector< std::vector< std::vector< int > > > choices;
};

/// Default repertoire: a single choice containing every transition leaving
/// the state (explicit ones if any exist, otherwise the implicit loops).
Repertoire default_repertoire( const Module& m );
void validate( const Repertoire& r, const Module& m );

struct Assumption
{
    Module module;
    std::vector< bool > accepting;
};

void validate( const Assumption& a );

/// Assumption with a single accepting state and no variables.
Assumption universal_assumption( const Domain& domain );

struct TraceStep
{
    int state = 0;
    Valuation input;
    friend bool operator==( const TraceStep&, const TraceStep& ) = default;
};

using Trace = Lasso< TraceStep >;
using Word = Lasso< Valuation >;

/// NotATrace unless consecutive steps are linked by transitions and the
/// trace starts in the initial state.
void check_trace( const Module& m, const Trace& t );
Word derived_word( const Module& m, const Trace& t );
Word admitted_word( const Module& m, const Trace& t );

/// Change indices of a curtailment: explicit prefix, then `cycle` offsets
/// repeated with period `stride`.
struct ChangeIndices
{
    std::vector< std::size_t > prefix;
    std::vector< std::size_t > cycle;
    std::size_t stride = 1;

    [[nodiscard]] std::size_t at( std::size_t i ) const;
};

struct Curtailment
{
    Word word;
    ChangeIndices changes;
};

/// Maximal stutter compression of w projected to `vars`.
Curtailment curtail( const Word& w, const VarSet& vars );

} // namespace sagv
