#pragma once

/*!
  \file count.hpp
  \brief Exact sizes of the procedural task spaces.

  Counting convention: a task is a *set* of distinct sequences (conjunct
  order and repetition do not create new tasks) and a disjunctive term is an
  unordered pair of distinct propositions.
*/

#include <ltl2a/errors.hpp>
#include <ltl2a/taskgen.hpp>

#include <boost/multiprecision/cpp_int.hpp>

#include <variant>

namespace ltl2a
{

using big_int = boost::multiprecision::cpp_int;

inline big_int binomial( big_int const& n, unsigned k )
{
  if ( n < k )
    return 0;
  big_int r = 1;
  for ( unsigned i = 0; i < k; ++i )
  {
    r *= n - i;
    r /= i + 1;
  }
  return r;
}

/* n (n-1) ... (n-k+1) */
inline big_int falling_factorial( unsigned n, unsigned k )
{
  if ( k > n )
    return 0;
  big_int r = 1;
  for ( unsigned i = 0; i < k; ++i )
    r *= n - i;
  return r;
}

inline big_int count_partially_ordered( partially_ordered_params const& params )
{
  params.validate();
  unsigned const n = static_cast<unsigned>( params.vocab.size() );
  big_int terms = 0;
  if ( params.disjunction_prob < 1.0 )
    terms += n;
  if ( params.disjunction_prob > 0.0 )
    terms += binomial( n, 2 );

  big_int sequences = 0;
  for ( int d = params.depth.min; d <= params.depth.max; ++d )
    sequences += boost::multiprecision::pow( terms, static_cast<unsigned>( d ) );

  /* repeated draws collapse, so any set of up to conjuncts.max sequences is reachable */
  big_int total = 0;
  for ( int k = 1; k <= params.conjuncts.max; ++k )
    total += binomial( sequences, static_cast<unsigned>( k ) );
  return total;
}

inline big_int count_avoidance( avoidance_params const& params )
{
  params.validate();
  unsigned const n = static_cast<unsigned>( params.vocab.size() );
  big_int total = 0;
  for ( int k = params.conjuncts.min; k <= params.conjuncts.max; ++k )
  {
    /* ordered tuples of sequences with disjoint propositions, then forget the order */
    big_int ordered = 0;
    std::vector<int> depths( k, params.depth.min );
    for ( ;; )
    {
      unsigned used = 0;
      for ( int d : depths )
        used += 2u * static_cast<unsigned>( d );
      ordered += falling_factorial( n, used );

      int pos = k - 1;
      while ( pos >= 0 && depths[pos] == params.depth.max )
        depths[pos--] = params.depth.min;
      if ( pos < 0 )
        break;
      ++depths[pos];
    }
    big_int k_factorial = 1;
    for ( int i = 2; i <= k; ++i )
      k_factorial *= i;
    total += ordered / k_factorial;
  }
  return total;
}

inline big_int count_tasks( task_distribution const& dist )
{
  if ( auto const* p = std::get_if<partially_ordered_params>( &dist.kind() ) )
    return count_partially_ordered( *p );
  if ( auto const* a = std::get_if<avoidance_params>( &dist.kind() ) )
    return count_avoidance( *a );
  throw invalid_argument_error( "task counting needs a partially-ordered or avoidance distribution" );
}

} // namespace ltl2a
