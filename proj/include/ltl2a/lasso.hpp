#pragma once

/*!
  \file lasso.hpp
  \brief Direct LTL semantics over ultimately periodic traces.

  Used as the reference oracle for progression and simplification, so it
  shares no code with either. The trace is unrolled to |prefix| + 2|loop|
  positions whose last position loops back to the start of the second loop
  copy; temporal operators are evaluated as fixpoints over that graph.
*/

#include <ltl2a/formula.hpp>

#include <vector>

namespace ltl2a
{

namespace detail
{

class lasso_evaluator
{
public:
  explicit lasso_evaluator( lasso_trace const& trace )
    : trace_( trace ), length_( trace.prefix().size() + 2 * trace.loop().size() ),
      loop_back_( trace.prefix().size() + trace.loop().size() )
  {
  }

  std::vector<bool> eval( formula const& f ) const
  {
    std::vector<bool> v( length_ );
    switch ( f.kind() )
    {
    case op_kind::true_lit:
      v.assign( length_, true );
      break;
    case op_kind::false_lit:
      break;
    case op_kind::prop:
      for ( std::size_t i = 0; i < length_; ++i )
        v[i] = trace_.at( i ).contains( f.name() );
      break;
    case op_kind::not_:
    {
      auto c = eval( f.child() );
      for ( std::size_t i = 0; i < length_; ++i )
        v[i] = !c[i];
      break;
    }
    case op_kind::and_:
    case op_kind::or_:
    {
      auto a = eval( f.left() );
      auto b = eval( f.right() );
      for ( std::size_t i = 0; i < length_; ++i )
        v[i] = f.kind() == op_kind::and_ ? ( a[i] && b[i] ) : ( a[i] || b[i] );
      break;
    }
    case op_kind::next:
    {
      auto c = eval( f.child() );
      for ( std::size_t i = 0; i < length_; ++i )
        v[i] = c[succ( i )];
      break;
    }
    case op_kind::until:
      v = least_fixpoint( eval( f.left() ), eval( f.right() ) );
      break;
    case op_kind::eventually:
      v = least_fixpoint( std::vector<bool>( length_, true ), eval( f.child() ) );
      break;
    case op_kind::always:
      v = greatest_fixpoint( eval( f.child() ) );
      break;
    }
    return v;
  }

  /* any index maps onto the unrolled range */
  std::size_t position( std::size_t i ) const
  {
    std::size_t const p = trace_.prefix().size();
    if ( i < length_ )
      return i;
    return p + ( i - p ) % trace_.loop().size();
  }

private:
  std::size_t succ( std::size_t i ) const { return i + 1 < length_ ? i + 1 : loop_back_; }

  /* v = target | (guard & X v), smallest solution */
  std::vector<bool> least_fixpoint( std::vector<bool> const& guard, std::vector<bool> const& target ) const
  {
    std::vector<bool> v( length_, false );
    bool changed = true;
    while ( changed )
    {
      changed = false;
      for ( std::size_t k = length_; k-- > 0; )
      {
        bool const nv = target[k] || ( guard[k] && v[succ( k )] );
        if ( nv != v[k] )
        {
          v[k] = nv;
          changed = true;
        }
      }
    }
    return v;
  }

  /* v = hold & X v, largest solution */
  std::vector<bool> greatest_fixpoint( std::vector<bool> const& hold ) const
  {
    std::vector<bool> v( length_, true );
    bool changed = true;
    while ( changed )
    {
      changed = false;
      for ( std::size_t k = length_; k-- > 0; )
      {
        bool const nv = hold[k] && v[succ( k )];
        if ( nv != v[k] )
        {
          v[k] = nv;
          changed = true;
        }
      }
    }
    return v;
  }

  lasso_trace const& trace_;
  std::size_t length_;
  std::size_t loop_back_;
};

} // namespace detail

/* <trace, i> |= f */
inline bool eval_lasso( lasso_trace const& trace, std::size_t i, formula const& f )
{
  detail::lasso_evaluator ev( trace );
  return ev.eval( f )[ev.position( i )];
}

} // namespace ltl2a
