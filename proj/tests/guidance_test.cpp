#include <ltl2a/guidance.hpp>
#include <ltl2a/parse.hpp>
#include <ltl2a/taskgen.hpp>

#include "test_support.hpp"

#include <gtest/gtest.h>

using namespace ltl2a;

TEST( Guidance, AvoidUntilReach )
{
  auto const c = classify_propositions( parse( "!a U b" ), vocabulary{ "a", "b", "c" } );
  EXPECT_EQ( c["a"], effect::falsify );
  EXPECT_EQ( c["b"], effect::progress );
  EXPECT_EQ( c["c"], effect::no_effect );
  EXPECT_EQ( c.key(), "FPN" );
}

TEST( Guidance, ConjunctionOfEventualities )
{
  auto const c = classify_propositions( parse( "F a & F b" ), vocabulary{ "a", "b" } );
  EXPECT_EQ( c["a"], effect::progress );
  EXPECT_EQ( c["b"], effect::progress );
}

TEST( Guidance, RejectsConstants )
{
  EXPECT_THROW( classify_propositions( formula::tt(), vocabulary{ "p" } ), invalid_argument_error );
  EXPECT_THROW( classify_propositions( formula::ff(), vocabulary{ "p" } ), invalid_argument_error );
  EXPECT_EQ( classify_propositions( parse( "F p" ), vocabulary{ "p" } )["p"], effect::progress );
}

TEST( Guidance, ConsistentWithProgression )
{
  rng r( 12 );
  auto const props = testkit::prop_names( 4 );
  vocabulary const v{ "a", "b", "c", "d" };
  for ( int i = 0; i < 2000; ++i )
  {
    auto const f = testkit::random_formula_upto( r, 12, props );
    if ( simplify( f ).is_constant() || f.is_constant() )
      continue;
    auto const c = classify_propositions( f, v );
    for ( auto const& p : v )
    {
      auto const next = progress( truth_assignment{ p }, f );
      switch ( c[p] )
      {
      case effect::progress: ASSERT_NE( next, simplify( f ) ); break;
      case effect::falsify: ASSERT_TRUE( next.is_false() ); break;
      case effect::no_effect: ASSERT_EQ( next, simplify( f ) ); break;
      }
    }
  }
}

TEST( Guidance, AvoidanceHeadsClassify )
{
  auto const d = task_preset( "letterworld-avoid" );
  rng r( 13 );
  for ( int i = 0; i < 1000; ++i )
  {
    auto const f = d.sample( r );
    auto const shape = recognize_avoidance( f );
    ASSERT_TRUE( shape );
    auto const c = classify_propositions( f, d.vocab() );
    for ( auto const& seq : *shape )
    {
      EXPECT_EQ( c[seq.front()[0]], effect::falsify ) << render( f );
      EXPECT_EQ( c[seq.front()[1]], effect::progress ) << render( f );
    }
  }
}
