#pragma once

/*!
  \file simplify.hpp
  \brief Sound syntactic entailment and a deterministic LTL rewrite system.

  The rewrite set is fixed: constant folding, identity/annihilator elements
  for & and |, double negation, F F p -> F p, G G p -> G p, flattening of
  nested &/| chains into a sorted, duplicate-free, right-associated chain,
  and absorption driven by `implies_syntactic`. `simplify` iterates to a
  fixed point, never grows a formula and preserves its meaning on every
  trace.
*/

#include <ltl2a/formula.hpp>

#include <algorithm>
#include <vector>

namespace ltl2a
{

/*! \brief Sound, incomplete entailment check.

  Returns true only if every trace satisfying `f` also satisfies `g`.
  A false result says nothing.
*/
inline bool implies_syntactic( formula const& f, formula const& g )
{
  if ( f == g || f.is_false() || g.is_true() )
    return true;

  /* splitting a disjunctive premise or a conjunctive conclusion loses nothing */
  if ( f.kind() == op_kind::or_ )
    return implies_syntactic( f.left(), g ) && implies_syntactic( f.right(), g );
  if ( g.kind() == op_kind::and_ )
    return implies_syntactic( f, g.left() ) && implies_syntactic( f, g.right() );

  if ( g.kind() == op_kind::or_ && ( implies_syntactic( f, g.left() ) || implies_syntactic( f, g.right() ) ) )
    return true;
  if ( f.kind() == op_kind::and_ && ( implies_syntactic( f.left(), g ) || implies_syntactic( f.right(), g ) ) )
    return true;

  if ( g.kind() == op_kind::eventually )
  {
    if ( implies_syntactic( f, g.child() ) )
      return true;
    if ( f.kind() == op_kind::eventually &&
         ( implies_syntactic( f.child(), g.child() ) || implies_syntactic( f.child(), g ) ) )
      return true;
  }
  if ( f.kind() == op_kind::until && implies_syntactic( formula::make_eventually( f.right() ), g ) )
    return true;
  if ( f.kind() == op_kind::always && implies_syntactic( f.child(), g ) )
    return true;
  if ( f.kind() == op_kind::next && g.kind() == op_kind::next )
    return implies_syntactic( f.child(), g.child() );
  return false;
}

namespace detail
{

inline void flatten( formula const& f, op_kind k, std::vector<formula>& out )
{
  if ( f.kind() == k )
  {
    flatten( f.left(), k, out );
    flatten( f.right(), k, out );
  }
  else
    out.push_back( f );
}

/* rebuilds a normalized &/| chain from already-simplified operands */
inline formula normalize_chain( op_kind k, formula const& original, formula const& l, formula const& r )
{
  bool const is_and = k == op_kind::and_;
  formula const unit = is_and ? formula::tt() : formula::ff();
  formula const zero = is_and ? formula::ff() : formula::tt();

  std::vector<formula> ops;
  flatten( l, k, ops );
  flatten( r, k, ops );

  std::vector<formula> kept;
  kept.reserve( ops.size() );
  for ( auto const& f : ops )
  {
    if ( f == zero )
      return zero;
    if ( f != unit )
      kept.push_back( f );
  }

  std::sort( kept.begin(), kept.end(), []( formula const& a, formula const& b ) { return a.text() < b.text(); } );
  kept.erase( std::unique( kept.begin(), kept.end() ), kept.end() );

  /* absorption: drop a disjunct that entails another surviving disjunct,
     drop a conjunct entailed by another surviving conjunct */
  std::vector<bool> dropped( kept.size(), false );
  for ( std::size_t i = 0; i < kept.size(); ++i )
  {
    for ( std::size_t j = 0; j < kept.size(); ++j )
    {
      if ( i == j || dropped[j] )
        continue;
      bool const redundant = is_and ? implies_syntactic( kept[j], kept[i] ) : implies_syntactic( kept[i], kept[j] );
      if ( redundant )
      {
        dropped[i] = true;
        break;
      }
    }
  }
  std::vector<formula> survivors;
  for ( std::size_t i = 0; i < kept.size(); ++i )
    if ( !dropped[i] )
      survivors.push_back( kept[i] );

  if ( survivors.empty() )
    return unit;

  formula result = survivors.back();
  for ( std::size_t i = survivors.size() - 1; i-- > 0; )
    result = formula::make_binary( k, survivors[i], result );

  if ( result == original )
    return original;
  return result;
}

inline formula simplify_pass( formula const& f )
{
  switch ( f.kind() )
  {
  case op_kind::true_lit:
  case op_kind::false_lit:
  case op_kind::prop:
    return f;

  case op_kind::not_:
  {
    auto c = simplify_pass( f.child() );
    if ( c.is_true() )
      return formula::ff();
    if ( c.is_false() )
      return formula::tt();
    if ( c.kind() == op_kind::not_ )
      return c.child();
    return c.identical( f.child() ) ? f : formula::make_not( c );
  }

  case op_kind::next:
  case op_kind::eventually:
  case op_kind::always:
  {
    auto c = simplify_pass( f.child() );
    if ( c.is_constant() )
      return c;
    if ( f.kind() != op_kind::next && c.kind() == f.kind() )
      return c;
    return c.identical( f.child() ) ? f : formula::make_unary( f.kind(), c );
  }

  case op_kind::until:
  {
    auto l = simplify_pass( f.left() );
    auto r = simplify_pass( f.right() );
    if ( r.is_constant() )
      return r;
    if ( l.is_false() || l == r )
      return r;
    if ( l.is_true() )
      return r.kind() == op_kind::eventually ? r : formula::make_eventually( r );
    if ( l.identical( f.left() ) && r.identical( f.right() ) )
      return f;
    return formula::make_until( l, r );
  }

  case op_kind::and_:
  case op_kind::or_:
  {
    auto l = simplify_pass( f.left() );
    auto r = simplify_pass( f.right() );
    return normalize_chain( f.kind(), f, l, r );
  }
  }
  return f;
}

} // namespace detail

/*! \brief Rewrites `f` to a smaller or equal, semantically equivalent normal form.

  Idempotent: `simplify(simplify(f)) == simplify(f)`.
*/
inline formula simplify( formula const& f )
{
  formula current = f;
  for ( ;; )
  {
    formula next = detail::simplify_pass( current );
    if ( next.identical( current ) || next == current )
      return current;
    current = std::move( next );
  }
}

} // namespace ltl2a
