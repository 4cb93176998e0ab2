#include <ltl2a/count.hpp>
#include <ltl2a/lasso.hpp>
#include <ltl2a/parse.hpp>
#include <ltl2a/taskgen.hpp>

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <set>

using namespace ltl2a;

namespace
{

std::size_t brute_force_count( task_distribution const& dist )
{
  std::set<std::string> keys;
  for ( auto const& w : enumerate_support( dist, 2000000 ) )
    keys.insert( testkit::canonical_key( w.task ) );
  return keys.size();
}

/* visits the reach propositions of each sequence in order, one per step */
lasso_trace avoidance_witness( task_shape const& shape )
{
  std::vector<truth_assignment> prefix;
  for ( auto const& seq : shape )
    for ( auto const& step : seq )
      prefix.push_back( truth_assignment{ step[1] } );
  return lasso_trace( prefix, { {} } );
}

} // namespace

TEST( Taskgen, PartiallyOrderedMinimalShape )
{
  partially_ordered_params p{ { 1, 1 }, { 1, 1 }, 0.0, letters( 5 ) };
  rng r( 1 );
  for ( int i = 0; i < 100; ++i )
  {
    auto const f = sample_partially_ordered( p, r );
    ASSERT_EQ( f.kind(), op_kind::eventually );
    ASSERT_EQ( f.child().kind(), op_kind::prop );
  }
}

TEST( Taskgen, PaperShapesAreRecognized )
{
  auto const po = recognize_partially_ordered( parse( "F ((A | B) & F C) & F (C & F D)" ) );
  ASSERT_TRUE( po );
  EXPECT_EQ( po->size(), 2u );
  EXPECT_EQ( ( *po )[0][0], ( std::vector<std::string>{ "A", "B" } ) );

  auto const av = recognize_avoidance( parse( "(!A U (K & (!H U J))) & (!G U (L & (!F U I)))" ) );
  ASSERT_TRUE( av );
  EXPECT_EQ( av->size(), 2u );
  EXPECT_EQ( ( *av )[1][1], ( std::vector<std::string>{ "F", "I" } ) );

  EXPECT_FALSE( recognize_avoidance( parse( "!a U (b & (!a U c))" ) ) );
  EXPECT_FALSE( recognize_partially_ordered( parse( "F (a & b)" ) ) );
}

TEST( Taskgen, SamplesMatchGrammarAndReparse )
{
  auto const po = task_preset( "letterworld-po" );
  auto const av = task_preset( "letterworld-avoid" );
  rng r( 3 );
  for ( int i = 0; i < 2000; ++i )
  {
    auto const f = po.sample( r );
    ASSERT_TRUE( recognize_partially_ordered( f ) ) << render( f );
    ASSERT_EQ( parse( render( f ) ), f );
    auto const g = av.sample( r );
    ASSERT_TRUE( recognize_avoidance( g ) ) << render( g );
    ASSERT_EQ( parse( render( g ) ), g );
  }
}

TEST( Taskgen, Deterministic )
{
  auto const d = task_preset( "letterworld-po", 77 );
  for ( std::uint64_t i = 0; i < 50; ++i )
    ASSERT_EQ( d.sample_at( i ), d.sample_at( i ) );
  rng a( 5 ), b( 5 );
  for ( int i = 0; i < 50; ++i )
    ASSERT_EQ( sample_avoidance( std::get<avoidance_params>( task_preset( "letterworld-avoid" ).kind() ), a ),
               sample_avoidance( std::get<avoidance_params>( task_preset( "letterworld-avoid" ).kind() ), b ) );
}

TEST( Taskgen, AvoidanceNeverRepeatsAProposition )
{
  auto const d = task_preset( "letterworld-avoid" );
  rng r( 9 );
  for ( int i = 0; i < 10000; ++i )
  {
    auto const f = d.sample( r );
    auto const shape = recognize_avoidance( f );
    ASSERT_TRUE( shape );
    std::size_t used = 0;
    for ( auto const& seq : *shape )
      used += 2 * seq.size();
    ASSERT_EQ( f.propositions().size(), used );
  }
}

TEST( Taskgen, AvoidanceVocabularyTooSmall )
{
  EXPECT_THROW( task_distribution( avoidance_params{ { 1, 2 }, { 1, 3 }, letters( 11 ) } ), vocabulary_too_small_error );
  EXPECT_NO_THROW( task_distribution( avoidance_params{ { 1, 2 }, { 1, 3 }, letters( 12 ) } ) );
}

TEST( Taskgen, AvoidanceSamplesAreSatisfiable )
{
  auto const d = task_preset( "letterworld-avoid" );
  rng r( 21 );
  for ( int i = 0; i < 500; ++i )
  {
    auto const f = d.sample( r );
    auto const shape = recognize_avoidance( f );
    ASSERT_TRUE( shape );
    ASSERT_TRUE( eval_lasso( avoidance_witness( *shape ), 0, f ) ) << render( f );
  }
}

TEST( Taskgen, SupportProbabilitiesMatchSampler )
{
  task_distribution const d( avoidance_params{ { 1, 1 }, { 1, 1 }, letters( 3 ) } );
  auto const support = enumerate_support( d );
  ASSERT_EQ( support.size(), 6u );
  double total = 0.0;
  for ( auto const& w : support )
    total += w.weight;
  EXPECT_NEAR( total, 1.0, 1e-12 );

  std::map<std::string, int> hits;
  rng r( 4 );
  int const n = 60000;
  for ( int i = 0; i < n; ++i )
    ++hits[render( d.sample( r ) )];
  for ( auto const& w : support )
    EXPECT_NEAR( hits[render( w.task )] / double( n ), w.weight, 0.01 ) << render( w.task );
}

TEST( Count, SmallExamples )
{
  EXPECT_EQ( count_tasks( task_distribution( partially_ordered_params{ { 1, 1 }, { 1, 1 }, 0.0, letters( 12 ) } ) ), 12 );
  EXPECT_EQ( count_tasks( task_distribution( avoidance_params{ { 1, 1 }, { 1, 1 }, letters( 4 ) } ) ), 12 );
  EXPECT_EQ( binomial( 42, 2 ), 861 );
  EXPECT_EQ( falling_factorial( 12, 12 ), 479001600 );
}

TEST( Count, PaperScale )
{
  auto const avoid = count_tasks( task_preset( "letterworld-avoid" ) );
  EXPECT_EQ( avoid, big_int( 510287712 ) );
  auto const po = count_tasks( task_preset( "letterworld-po" ) );
  EXPECT_GE( po, big_int( "1000000000000000000000000000000000000" ) );
}

TEST( Count, AgreesWithBruteForce )
{
  std::vector<task_distribution> cases = {
      task_distribution( partially_ordered_params{ { 1, 1 }, { 1, 1 }, 0.0, letters( 12 ) } ),
      task_distribution( partially_ordered_params{ { 1, 2 }, { 1, 2 }, 0.25, letters( 3 ) } ),
      task_distribution( partially_ordered_params{ { 1, 3 }, { 1, 1 }, 0.5, letters( 4 ) } ),
      task_distribution( partially_ordered_params{ { 2, 2 }, { 1, 2 }, 1.0, letters( 3 ) } ),
      task_distribution( partially_ordered_params{ { 1, 2 }, { 2, 3 }, 0.0, letters( 2 ) } ),
      task_distribution( avoidance_params{ { 1, 1 }, { 1, 1 }, letters( 4 ) } ),
      task_distribution( avoidance_params{ { 1, 2 }, { 1, 1 }, letters( 5 ) } ),
      task_distribution( avoidance_params{ { 1, 1 }, { 1, 2 }, letters( 4 ) } ),
      task_distribution( avoidance_params{ { 1, 2 }, { 1, 2 }, letters( 8 ) } ),
  };
  for ( auto const& d : cases )
  {
    auto const exact = count_tasks( d );
    ASSERT_LE( exact, big_int( 100000 ) );
    EXPECT_EQ( big_int( brute_force_count( d ) ), exact );
  }
}

TEST( Taskgen, TokenCountGrowsWithParameters )
{
  auto const mean_size = []( task_distribution const& d ) {
    rng r( 8 );
    double total = 0.0;
    for ( int i = 0; i < 3000; ++i )
      total += double( d.sample( r ).size() );
    return total / 3000.0;
  };
  auto const base = mean_size( task_preset( "letterworld-po" ) );
  EXPECT_LT( base, mean_size( task_preset( "upgen-depth" ) ) );
  EXPECT_LT( base, mean_size( task_preset( "upgen-conjuncts" ) ) );
  auto const avoid = mean_size( task_preset( "letterworld-avoid" ) );
  EXPECT_LT( avoid, mean_size( task_preset( "upgen-depth-avoid" ) ) );
}

TEST( Taskgen, PresetsBuild )
{
  for ( auto const& name : task_preset_names() )
  {
    auto const d = task_preset( name );
    rng r( 1 );
    EXPECT_NO_THROW( d.sample( r ) ) << name;
  }
  EXPECT_THROW( task_preset( "nope" ), invalid_argument_error );
}
