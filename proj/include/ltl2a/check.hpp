#pragma once

/*!
  \file check.hpp
  \brief Randomized check that progression preserves satisfaction.

  Case k of a seed draws, from stream k, a formula of at most 15 nodes over
  1 to 5 propositions, a lasso with prefix <= 4 and loop <= 3, and a
  position i <= 3, then compares

      sigma, i |= phi   with   sigma without position i, i |= prog(sigma_i, phi)
*/

#include <ltl2a/lasso.hpp>
#include <ltl2a/progress.hpp>
#include <ltl2a/random_formula.hpp>
#include <ltl2a/rng.hpp>

#include <cstdint>
#include <optional>
#include <thread>
#include <vector>

namespace ltl2a
{

struct progression_case
{
  formula phi;
  lasso_trace trace;
  std::size_t position = 0;
  formula residual;
  bool before = false;
  bool after = false;

  bool pass() const { return before == after; }
};

inline progression_case make_progression_case( std::uint64_t seed, std::uint64_t index )
{
  auto r = rng::stream( seed, index );
  auto const props = prop_names( 1 + r.below( 5 ) );
  auto phi = random_formula_upto( r, 15, props );
  auto trace = random_lasso( r, 4, 3, props );
  auto const i = r.below( 4 );
  auto residual = progress( trace.at( i ), phi );
  bool const before = eval_lasso( trace, i, phi );
  bool const after = eval_lasso( trace.drop( i ), i, residual );
  return { std::move( phi ), std::move( trace ), i, std::move( residual ), before, after };
}

struct check_summary
{
  std::uint64_t cases = 0;
  std::uint64_t passed = 0;
  /* index of the first failing case */
  std::optional<std::uint64_t> first_failure;
};

inline check_summary run_progression_check( std::uint64_t cases, std::uint64_t seed, std::size_t workers = 1 )
{
  std::vector<char> ok( cases, 0 );
  workers = std::max<std::size_t>( 1, std::min<std::uint64_t>( workers, std::max<std::uint64_t>( cases, 1 ) ) );
  auto const work = [&]( std::size_t w ) {
    for ( std::uint64_t k = w; k < cases; k += workers )
      ok[k] = make_progression_case( seed, k ).pass();
  };
  std::vector<std::thread> threads;
  for ( std::size_t w = 1; w < workers; ++w )
    threads.emplace_back( work, w );
  work( 0 );
  for ( auto& t : threads )
    t.join();

  check_summary s;
  s.cases = cases;
  for ( std::uint64_t k = 0; k < cases; ++k )
  {
    s.passed += ok[k] != 0;
    if ( !ok[k] && !s.first_failure )
      s.first_failure = k;
  }
  return s;
}

} // namespace ltl2a
