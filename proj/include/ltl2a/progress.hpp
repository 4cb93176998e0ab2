#pragma once

/*!
  \file progress.hpp
  \brief LTL progression and progression closure.
*/

#include <ltl2a/errors.hpp>
#include <ltl2a/formula.hpp>
#include <ltl2a/simplify.hpp>

#include <deque>
#include <unordered_set>
#include <vector>

namespace ltl2a
{

namespace detail
{

inline formula progress_raw( truth_assignment const& sigma, formula const& f )
{
  switch ( f.kind() )
  {
  case op_kind::true_lit:
  case op_kind::false_lit:
    return f;
  case op_kind::prop:
    return sigma.contains( f.name() ) ? formula::tt() : formula::ff();
  case op_kind::not_:
    return formula::make_not( progress_raw( sigma, f.child() ) );
  case op_kind::and_:
    return formula::make_and( progress_raw( sigma, f.left() ), progress_raw( sigma, f.right() ) );
  case op_kind::or_:
    return formula::make_or( progress_raw( sigma, f.left() ), progress_raw( sigma, f.right() ) );
  case op_kind::next:
    return f.child();
  case op_kind::until:
    return formula::make_or( progress_raw( sigma, f.right() ),
                             formula::make_and( progress_raw( sigma, f.left() ), f ) );
  case op_kind::eventually:
    return formula::make_or( progress_raw( sigma, f.child() ), f );
  case op_kind::always:
    return formula::make_and( progress_raw( sigma, f.child() ), f );
  }
  return f;
}

} // namespace detail

/*! \brief The obligation left after observing `sigma`, simplified.

  `true` means the formula was satisfied by the step, `false` that it was
  falsified.
*/
inline formula progress( truth_assignment const& sigma, formula const& f )
{
  if ( f.is_constant() )
    return f;
  return simplify( detail::progress_raw( sigma, f ) );
}

/*! \brief Smallest set containing `phis` closed under progression by `assignments`.

  Formulas are deduplicated after simplification. Throws `cap_exceeded_error`
  once the set would grow past `cap`.
*/
inline std::vector<formula> closure( std::vector<formula> const& phis, std::vector<truth_assignment> const& assignments,
                                     std::size_t cap )
{
  std::vector<formula> out;
  std::unordered_set<formula, formula_hash> seen;
  std::deque<formula> frontier;

  auto const visit = [&]( formula const& f ) {
    if ( !seen.insert( f ).second )
      return;
    if ( out.size() >= cap )
      throw cap_exceeded_error( "progression closure exceeds cap " + std::to_string( cap ), frontier.size() + 1 );
    out.push_back( f );
    frontier.push_back( f );
  };

  for ( auto const& f : phis )
    visit( simplify( f ) );

  while ( !frontier.empty() )
  {
    auto f = frontier.front();
    frontier.pop_front();
    for ( auto const& sigma : assignments )
      visit( progress( sigma, f ) );
  }
  return out;
}

/* every subset of `vocab`, smallest first */
inline std::vector<truth_assignment> all_assignments( vocabulary const& vocab )
{
  std::vector<truth_assignment> out;
  std::size_t const n = vocab.size();
  if ( n >= 20 )
    throw invalid_argument_error( "too many propositions to enumerate all assignments" );
  for ( std::size_t mask = 0; mask < ( std::size_t{ 1 } << n ); ++mask )
  {
    std::vector<std::string> members;
    for ( std::size_t i = 0; i < n; ++i )
      if ( mask & ( std::size_t{ 1 } << i ) )
        members.push_back( vocab[i] );
    out.emplace_back( std::move( members ) );
  }
  std::stable_sort( out.begin(), out.end(), []( auto const& a, auto const& b ) { return a.size() < b.size(); } );
  return out;
}

/* the empty assignment plus one singleton per proposition */
inline std::vector<truth_assignment> singleton_assignments( vocabulary const& vocab, bool include_empty = true )
{
  std::vector<truth_assignment> out;
  if ( include_empty )
    out.emplace_back();
  for ( auto const& p : vocab )
    out.push_back( truth_assignment{ p } );
  return out;
}

} // namespace ltl2a
