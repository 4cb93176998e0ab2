#pragma once

/*!
  \file guidance.hpp
  \brief Per-proposition effect of making one proposition true on a task.

  This is all the myopic baseline gets to see of its task: for each
  proposition, whether setting it alone would progress the formula, leave
  it unchanged, or falsify it.
*/

#include <ltl2a/errors.hpp>
#include <ltl2a/formula.hpp>
#include <ltl2a/progress.hpp>

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ltl2a
{

enum class effect : std::uint8_t
{
  progress = 0,
  no_effect = 1,
  falsify = 2
};

inline std::string_view effect_name( effect e )
{
  switch ( e )
  {
  case effect::progress: return "progress";
  case effect::no_effect: return "no_effect";
  case effect::falsify: return "falsify";
  }
  return "?";
}

/*! \brief Effects in vocabulary order. */
struct classification
{
  std::vector<std::string> props;
  std::vector<effect> effects;

  effect operator[]( std::string_view p ) const
  {
    for ( std::size_t i = 0; i < props.size(); ++i )
      if ( props[i] == p )
        return effects[i];
    throw unknown_proposition_error( std::string( p ) );
  }

  /* compact key, one character per proposition: P, N or F */
  std::string key() const
  {
    std::string k;
    for ( auto e : effects )
      k += e == effect::progress ? 'P' : e == effect::no_effect ? 'N' : 'F';
    return k;
  }

  bool operator==( classification const& ) const = default;
};

inline classification classify_propositions( formula const& f, vocabulary const& vocab )
{
  if ( f.is_constant() )
    throw invalid_argument_error( "cannot classify propositions against a constant formula" );
  auto const current = simplify( f );
  classification out;
  for ( auto const& p : vocab )
  {
    auto const next = progress( truth_assignment{ p }, f );
    out.props.push_back( p );
    if ( next.is_false() )
      out.effects.push_back( effect::falsify );
    else if ( next == current )
      out.effects.push_back( effect::no_effect );
    else
      out.effects.push_back( effect::progress );
  }
  return out;
}

} // namespace ltl2a
