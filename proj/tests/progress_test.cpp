#include <ltl2a/lasso.hpp>
#include <ltl2a/parse.hpp>
#include <ltl2a/progress.hpp>

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <algorithm>

using namespace ltl2a;

TEST( Progress, Examples )
{
  EXPECT_EQ( progress( { "R" }, parse( "F (R & F G)" ) ), parse( "F G" ) );
  EXPECT_EQ( progress( {}, parse( "F R" ) ), parse( "F R" ) );
  EXPECT_EQ( progress( { "B" }, parse( "G !B" ) ), formula::ff() );
  EXPECT_EQ( progress( { "b" }, parse( "!a U b" ) ), formula::tt() );
  EXPECT_EQ( progress( { "a" }, parse( "!a U b" ) ), formula::ff() );
  EXPECT_EQ( progress( { "c" }, parse( "X (a & b)" ) ), parse( "a & b" ) );
  EXPECT_EQ( progress( { "a" }, parse( "G a" ) ), parse( "G a" ) );
}

TEST( Progress, ConstantsAreFixedPoints )
{
  rng r( 2 );
  auto const props = testkit::prop_names( 4 );
  for ( int i = 0; i < 50; ++i )
  {
    auto const sigma = testkit::random_assignment( r, props );
    EXPECT_EQ( progress( sigma, formula::tt() ), formula::tt() );
    EXPECT_EQ( progress( sigma, formula::ff() ), formula::ff() );
  }
}

TEST( EvalLasso, Examples )
{
  lasso_trace const red_first( { { "R" } }, { {} } );
  EXPECT_TRUE( eval_lasso( red_first, 0, parse( "F R" ) ) );
  EXPECT_FALSE( eval_lasso( red_first, 1, parse( "F R" ) ) );
  EXPECT_FALSE( eval_lasso( lasso_trace( {}, { {} } ), 0, parse( "F R" ) ) );
  EXPECT_FALSE( eval_lasso( lasso_trace( { {}, { "B" } }, { {} } ), 0, parse( "G !B" ) ) );
  EXPECT_TRUE( eval_lasso( lasso_trace( { { "B" } }, { {} } ), 1, parse( "G !B" ) ) );
  /* G F a holds on an infinitely recurring a even though a is false now */
  EXPECT_TRUE( eval_lasso( lasso_trace( { {} }, { {}, { "a" } } ), 0, parse( "G F a" ) ) );
  EXPECT_FALSE( eval_lasso( lasso_trace( { { "a" } }, { {} } ), 0, parse( "G F a" ) ) );
}

TEST( EvalLasso, MatchesTextbookSemantics )
{
  rng r( 99 );
  auto const props = testkit::prop_names( 3 );
  for ( int i = 0; i < 3000; ++i )
  {
    auto const f = testkit::random_formula_upto( r, 12, props );
    auto const t = testkit::random_lasso( r, 4, 3, props );
    auto const pos = r.below( 8 );
    ASSERT_EQ( eval_lasso( t, pos, f ), testkit::naive_eval( t, pos, f ) ) << render( f );
  }
}

TEST( Progress, CorrectAgainstLassoSemantics )
{
  rng r( 7 );
  auto const props = testkit::prop_names( 5 );
  for ( int i = 0; i < 2000; ++i )
  {
    auto const f = testkit::random_formula_upto( r, 15, props );
    auto const t = testkit::random_lasso( r, 4, 3, props );
    auto const pos = r.below( 4 );
    auto const residual = progress( t.at( pos ), f );
    ASSERT_EQ( eval_lasso( t, pos, f ), eval_lasso( t.drop( pos ), pos, residual ) )
        << render( f ) << " at " << pos << " -> " << render( residual );
  }
}

TEST( Closure, EventuallyRed )
{
  auto const c = closure( { parse( "F R" ) }, { {}, { "R" } }, 10 );
  ASSERT_EQ( c.size(), 2u );
  EXPECT_EQ( c[0], parse( "F R" ) );
  EXPECT_EQ( c[1], formula::tt() );
}

TEST( Closure, TrueIsClosed )
{
  auto const c = closure( { formula::tt() }, { {}, { "a" } }, 1 );
  ASSERT_EQ( c.size(), 1u );
  EXPECT_TRUE( c[0].is_true() );
}

TEST( Closure, CapExceeded )
{
  auto const f = parse( "F (a & F b)" );
  std::vector<truth_assignment> const singles{ { "a" }, { "b" } };
  EXPECT_THROW( closure( { f }, singles, 2 ), cap_exceeded_error );
  auto const c = closure( { f }, singles, 3 );
  EXPECT_EQ( c.size(), 3u );
}

TEST( Closure, ContainsInputsAndIsClosed )
{
  auto const phis = std::vector<formula>{ parse( "!a U (b & (!c U d))" ), parse( "F (a | b) & F c" ) };
  auto const sigmas = all_assignments( vocabulary{ "a", "b", "c", "d" } );
  auto const c = closure( phis, sigmas, 1000 );
  auto const has = [&]( formula const& f ) { return std::find( c.begin(), c.end(), f ) != c.end(); };
  for ( auto const& f : phis )
    EXPECT_TRUE( has( simplify( f ) ) );
  for ( auto const& f : c )
    for ( auto const& s : sigmas )
      ASSERT_TRUE( has( progress( s, f ) ) );
}
