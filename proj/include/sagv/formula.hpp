#pragma once

#include "sagv/model.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace sagv
{

enum class Op
{
    True,
    False,
    Atom,
    Not,
    And,
    Or,
    Next,
    Until,
    Release,
    Coop,
};

enum class Flavor
{
    Standard,
    Only,
    Prob,
};

enum class Cmp
{
    Le,
    Lt,
    Gt,
    Ge,
};

struct Bound
{
    Cmp cmp = Cmp::Ge;
    Rational value = 0;

    [[nodiscard]] bool holds( const Rational& x ) const;
    /// Lower bounds (≥, >) are checked against the worst case minimum.
    [[nodiscard]] bool is_lower() const { return cmp == Cmp::Ge || cmp == Cmp::Gt; }
    friend bool operator==( const Bound& a, const Bound& b ) { return a.cmp == b.cmp && a.value == b.value; }
};

const char* cmp_text( Cmp c );

struct Node;
using Formula = std::shared_ptr< const Node >;

/// One AST for path and state formulas of every supported fragment.
/// F and G are not separate node kinds: F a is (true U a) and G a is
/// !(true U !a).
struct Node
{
    Op op = Op::True;
    Valuation atom;                           // Op::Atom; bare propositions map to "true"
    Formula lhs;                              // unary operand / left operand
    Formula rhs;                              // right operand
    std::vector< std::string > coalition;     // Op::Coop, sorted
    std::optional< Bound > bound;             // Op::Coop
    Flavor flavor = Flavor::Standard;         // Op::Coop
};

Formula mk_true();
Formula mk_false();
Formula mk_atom( Valuation a );
Formula mk_prop( const std::string& p );
Formula mk_not( Formula f );
Formula mk_and( Formula a, Formula b );
Formula mk_or( Formula a, Formula b );
Formula mk_next( Formula f );
Formula mk_until( Formula a, Formula b );
Formula mk_release( Formula a, Formula b );
Formula mk_eventually( Formula f );
Formula mk_always( Formula f );
Formula mk_coop( std::vector< std::string > coalition, Formula body, Flavor flavor = Flavor::Standard,
                 std::optional< Bound > bound = std::nullopt );
Formula conjunction( const std::vector< Formula >& fs );

bool equal( const Formula& a, const Formula& b );

/// Parses the concrete syntax; throws SyntaxError (with the column) or
/// BoundOutOfRange.
Formula parse_formula( const std::string& text );

/// Prints in a form that parses back to the same tree.
std::string to_string( const Formula& f );

/// Multi-line indented dump of the tree.
std::string dump_ast( const Formula& f );

enum class FragmentTag
{
    LTL_NO_X,
    ONE_ATL_STAR,
    ATL_STAR,
    PATL,
    PATL_STAR,
    ONLY_ATL,
    ONLY_ATL_STAR,
    PCTL_LIKE,
};

const char* fragment_name( FragmentTag t );
FragmentTag classify( const Formula& f );

bool contains_next( const Formula& f );
bool contains_coop( const Formula& f );
/// True if f has no temporal operator outside strategic modalities.
bool is_state_formula( const Formula& f );

/// Variables (or propositions) mentioned by atoms, strategic subformulas included.
VarSet atoms_of( const Formula& f );
bool local_to( const Formula& f, const Module& m );

/// Negation normal form over {true, false, atom, ¬atom, ∧, ∨, X, U, R};
/// strategic subformulas are kept as opaque leaves (possibly negated).
Formula nnf( const Formula& f );

/// Whether a state label satisfies an atomic constraint. Throws
/// VariableNotInScope if the label does not assign a constrained variable.
bool satisfies( const Valuation& label, const Valuation& atom );

/// Direct evaluation of a strategy-free path formula at position 0 of a lasso.
bool holds_on_lasso( const Formula& f, const Lasso< Valuation >& w );

} // namespace sagv
