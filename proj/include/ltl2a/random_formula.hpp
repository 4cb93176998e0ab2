#pragma once

/*!
  \file random_formula.hpp
  \brief Random formulas, assignments and lasso traces for property checks.
*/

#include <ltl2a/formula.hpp>
#include <ltl2a/rng.hpp>

#include <string>
#include <vector>

namespace ltl2a
{

inline std::vector<std::string> prop_names( std::size_t n )
{
  std::vector<std::string> out;
  for ( std::size_t i = 0; i < n; ++i )
    out.push_back( std::string( 1, char( 'a' + i ) ) );
  return out;
}

/* uniformish random formula with exactly `nodes` AST nodes */
inline formula random_formula( rng& r, std::size_t nodes, std::vector<std::string> const& props )
{
  if ( nodes <= 1 )
  {
    auto const pick = r.below( props.size() + 2 );
    if ( pick == props.size() )
      return r.below( 4 ) == 0 ? formula::tt() : formula::prop( props[0] );
    if ( pick == props.size() + 1 )
      return r.below( 4 ) == 0 ? formula::ff() : formula::prop( props.back() );
    return formula::prop( props[pick] );
  }
  if ( nodes == 2 || r.below( 3 ) == 0 )
  {
    static constexpr op_kind unary[] = { op_kind::not_, op_kind::next, op_kind::eventually, op_kind::always };
    return formula::make_unary( unary[r.below( 4 )], random_formula( r, nodes - 1, props ) );
  }
  static constexpr op_kind binary[] = { op_kind::and_, op_kind::or_, op_kind::until };
  auto const left = 1 + r.below( nodes - 2 );
  return formula::make_binary( binary[r.below( 3 )], random_formula( r, left, props ),
                               random_formula( r, nodes - 1 - left, props ) );
}

inline formula random_formula_upto( rng& r, std::size_t max_nodes, std::vector<std::string> const& props )
{
  return random_formula( r, 1 + r.below( max_nodes ), props );
}

inline truth_assignment random_assignment( rng& r, std::vector<std::string> const& props )
{
  std::vector<std::string> members;
  for ( auto const& p : props )
    if ( r.bernoulli( 0.35 ) )
      members.push_back( p );
  return truth_assignment( members );
}

inline lasso_trace random_lasso( rng& r, std::size_t max_prefix, std::size_t max_loop, std::vector<std::string> const& props )
{
  std::vector<truth_assignment> prefix, loop;
  auto const np = r.below( max_prefix + 1 );
  auto const nl = 1 + r.below( max_loop );
  for ( std::size_t i = 0; i < np; ++i )
    prefix.push_back( random_assignment( r, props ) );
  for ( std::size_t i = 0; i < nl; ++i )
    loop.push_back( random_assignment( r, props ) );
  return lasso_trace( prefix, loop );
}

} // namespace ltl2a
