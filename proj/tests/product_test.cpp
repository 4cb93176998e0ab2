#include <ltl2a/lasso.hpp>
#include <ltl2a/parse.hpp>
#include <ltl2a/product.hpp>

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace ltl2a;

namespace
{

constexpr int N = 0, S = 1, E = 2, W = 3;

product_state start( env_config const& cfg, formula const& f )
{
  rng r;
  return { env_reset( cfg, r ), simplify( f ) };
}

/* Bootcamp policy picking actions from a fixed script, then action 0 */
policy_fn scripted( std::vector<int> actions )
{
  auto step = std::make_shared<std::size_t>( 0 );
  return [actions, step]( product_state const&, rng& ) {
    return *step < actions.size() ? actions[( *step )++] : 0;
  };
}

} // namespace

TEST( ProductStep, RewardsAndTermination )
{
  auto const cfg = env_config::locked_rooms();
  auto const s0 = start( cfg, parse( "F R" ) );

  /* into room A, down to the red corner */
  auto st = product_step( cfg, s0, W );
  EXPECT_EQ( st.reward, 0.0 );
  EXPECT_EQ( st.next.task, parse( "F R" ) );
  st = product_step( cfg, st.next, S );
  st = product_step( cfg, st.next, W );
  EXPECT_FALSE( st.terminal );
  st = product_step( cfg, st.next, W );
  EXPECT_EQ( st.label, truth_assignment{ "R" } );
  EXPECT_EQ( st.reward, 1.0 );
  EXPECT_TRUE( st.terminal );
  EXPECT_THROW( product_step( cfg, st.next, N ), terminal_state_error );

  auto const avoid = start( cfg, parse( "G !B" ) );
  auto a = product_step( cfg, avoid, W );
  a = product_step( cfg, a.next, N );
  a = product_step( cfg, a.next, W );
  EXPECT_EQ( a.reward, 0.0 );
  a = product_step( cfg, a.next, W );
  EXPECT_EQ( a.reward, -1.0 );
  EXPECT_TRUE( a.terminal );
}

TEST( RunEpisode, BootcampGoldenReturns )
{
  auto const cfg = env_config::bootcamp( vocabulary{ "a", "b" } );
  rng r( 1 );
  auto const rec = run_episode( cfg, task_distribution::single( parse( "F (a & F b)" ) ), scripted( { 0, 1 } ), r );
  EXPECT_EQ( rec.outcome, episode_outcome::success );
  EXPECT_DOUBLE_EQ( rec.discounted_return, 0.9 );
  EXPECT_DOUBLE_EQ( rec.total_reward, 1.0 );
  ASSERT_EQ( rec.steps.size(), 2u );
  EXPECT_EQ( rec.steps[0].task, parse( "F b" ) );

  auto const once = run_episode( cfg, task_distribution::single( parse( "F a" ) ), scripted( { 0 } ), r );
  EXPECT_DOUBLE_EQ( once.discounted_return, 1.0 );
}

TEST( RunEpisode, TimeoutCarriesNoReward )
{
  auto const cfg = env_config::locked_rooms();
  rng r( 1 );
  auto const rec = run_episode( cfg, task_distribution::single( parse( "F R" ) ),
                                []( product_state const&, rng& ) { return N; }, r );
  EXPECT_EQ( rec.outcome, episode_outcome::timeout );
  EXPECT_EQ( rec.steps.size(), 75u );
  EXPECT_EQ( rec.discounted_return, 0.0 );
  auto const short_rec = run_episode( cfg, task_distribution::single( parse( "F R" ) ),
                                      []( product_state const&, rng& ) { return N; }, r, 5 );
  EXPECT_EQ( short_rec.steps.size(), 5u );
}

/* every reward equals the verdict of replaying progression, and matches the
   lasso semantics of the original task on the padded label sequence */
TEST( RunEpisode, RewardsCoherentWithSemantics )
{
  auto const cfg = env_config::bootcamp( letters( 4 ) );
  auto const props = letters( 4 ).names();
  int decided = 0;
  for ( std::uint64_t i = 0; i < 5000; ++i )
  {
    auto r = rng::stream( 31, i );
    auto const f = testkit::random_formula_upto( r, 10, props );
    auto const rec = run_episode( cfg, task_distribution::single( f ),
                                  []( product_state const&, rng& g ) { return int( g.below( 4 ) ); }, r, 12 );
    formula replay = simplify( f );
    std::vector<truth_assignment> labels;
    int nonzero = 0;
    for ( auto const& s : rec.steps )
    {
      replay = progress( s.label, replay );
      labels.push_back( s.label );
      ASSERT_EQ( s.reward, reward_of( replay ) );
      nonzero += s.reward != 0.0;
    }
    ASSERT_EQ( nonzero, rec.outcome == episode_outcome::timeout ? 0 : ( rec.steps.empty() ? 0 : 1 ) );
    if ( rec.steps.empty() || rec.outcome == episode_outcome::timeout )
      continue;
    ++decided;
    /* any continuation works once progression has decided; pad with the empty loop */
    bool const sat = eval_lasso( lasso_trace( labels, { {} } ), 0, f );
    ASSERT_EQ( sat, rec.outcome == episode_outcome::success ) << render( f );
    bool const sat2 = eval_lasso( lasso_trace( labels, { { "a", "b", "c", "d" } } ), 0, f );
    ASSERT_EQ( sat2, rec.outcome == episode_outcome::success ) << render( f );
  }
  EXPECT_GT( decided, 1000 );
}

TEST( ProductStep, MarkovReplay )
{
  auto const cfg = env_config::letter_world( 5 );
  rng r( 3 );
  auto const f = parse( "F (a & F b) & !c U d" );
  auto const s0 = start( cfg, f );
  /* two different histories reaching the same product state */
  auto a = product_step( cfg, product_step( cfg, s0, N ).next, S ).next;
  auto b = product_step( cfg, product_step( cfg, s0, S ).next, N ).next;
  if ( a == b )
    for ( int act = 0; act < 4; ++act )
    {
      auto const x = product_step( cfg, a, act ), y = product_step( cfg, b, act );
      EXPECT_EQ( x.next, y.next );
      EXPECT_EQ( x.reward, y.reward );
    }
}

TEST( EnumerateProduct, BootcampEventually )
{
  auto const cfg = env_config::bootcamp( vocabulary{ "a", "b" } );
  auto const m = enumerate_product( cfg, { { parse( "F a" ), 1.0 } } );
  ASSERT_EQ( m.size(), 2u );
  EXPECT_FALSE( m.terminal[0] );
  EXPECT_TRUE( m.terminal[1] );
  EXPECT_EQ( m.next( 0, 0 ), 1 );
  EXPECT_EQ( m.next( 0, 1 ), 0 );
  EXPECT_EQ( m.reward_at( 0, 0 ), 1.0 );
  EXPECT_EQ( m.next( 1, 0 ), -1 );
}

TEST( EnumerateProduct, ClosedAndBounded )
{
  auto const cfg = env_config::locked_rooms();
  auto const phis = enumerate_support( task_preset( "lockedrooms-two-rooms" ) );
  auto const m = enumerate_product( cfg, phis );
  std::set<std::string> formulas;
  for ( auto const& s : m.states )
    formulas.insert( s.task.text() );
  EXPECT_LE( m.size(), 27u * 3u * formulas.size() );
  ASSERT_EQ( m.initial.size(), 2u );
  EXPECT_DOUBLE_EQ( m.initial[0].second, 0.5 );
  for ( std::size_t s = 0; s < m.size(); ++s )
    for ( std::size_t a = 0; a < m.num_actions; ++a )
    {
      auto const t = m.next( s, a );
      if ( m.terminal[s] )
        ASSERT_EQ( t, -1 );
      else
      {
        ASSERT_GE( t, 0 );
        ASSERT_LT( std::size_t( t ), m.size() );
        auto const step = product_step( cfg, m.states[s], int( a ) );
        ASSERT_EQ( m.states[std::size_t( t )], step.next );
        ASSERT_EQ( m.reward_at( s, a ), step.reward );
      }
    }
}

TEST( EnumerateProduct, Caps )
{
  auto const cfg = env_config::bootcamp( letters( 4 ) );
  EXPECT_THROW( enumerate_product( cfg, { { parse( "F (a & F (b & F c))" ), 1.0 } }, { 2, 1000 } ), cap_exceeded_error );
  EXPECT_THROW( enumerate_product( cfg, { { parse( "F (a & F (b & F c))" ), 1.0 } }, { 100, 2 } ), cap_exceeded_error );
  auto const m = enumerate_product( cfg, { { formula::tt(), 1.0 } } );
  EXPECT_EQ( m.size(), 1u );
  EXPECT_TRUE( m.terminal[0] );
}
