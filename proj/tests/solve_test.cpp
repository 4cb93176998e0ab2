#include <ltl2a/parse.hpp>
#include <ltl2a/solve.hpp>

#include <gtest/gtest.h>

#include <cmath>

using namespace ltl2a;

namespace
{

explicit_mdp fig1_product()
{
  return enumerate_product( env_config::locked_rooms(), enumerate_support( task_preset( "lockedrooms-two-rooms" ) ) );
}

/* optimal return from a bootcamp task by breadth-first search for the
   shortest satisfying word; independent of the solvers under test */
double bootcamp_shortest_success( env_config const& cfg, formula const& f, int max_len )
{
  std::vector<formula> frontier{ simplify( f ) };
  for ( int len = 1; len <= max_len; ++len )
  {
    std::vector<formula> next;
    for ( auto const& g : frontier )
      for ( auto const& p : cfg.propositions() )
      {
        auto const h = progress( truth_assignment{ p }, g );
        if ( h.is_true() )
          return std::pow( cfg.gamma, len - 1 );
        if ( !h.is_false() && std::find( next.begin(), next.end(), h ) == next.end() )
          next.push_back( h );
      }
    frontier = std::move( next );
  }
  return 0.0;
}

} // namespace

TEST( ValueIteration, LockedRoomsOptimal )
{
  auto const m = fig1_product();
  auto const vi = value_iteration( m );
  ASSERT_TRUE( vi.converged );
  auto const exact = evaluate_exact( m, vi.policy );
  EXPECT_EQ( exact.success_rate, 1.0 );
  EXPECT_EQ( exact.total, 1.0 );
  EXPECT_NEAR( initial_value( m, vi.values ), exact.discounted, 1e-8 );
  /* six moves to the far corner: B then the room's own colour */
  EXPECT_NEAR( exact.discounted, std::pow( 0.9, 5 ), 1e-12 );
}

TEST( ValueIteration, ResidualsNonIncreasing )
{
  auto const m = enumerate_product( env_config::letter_world( 4, letters( 4 ) ),
                                    enumerate_support( task_preset( "letterworld-avoid4" ) ) );
  auto const vi = value_iteration( m );
  ASSERT_TRUE( vi.converged );
  for ( std::size_t i = 1; i < vi.residuals.size(); ++i )
    ASSERT_LE( vi.residuals[i], vi.residuals[i - 1] + 1e-15 );
  for ( std::size_t s = 0; s < m.size(); ++s )
    if ( m.terminal[s] )
    {
      EXPECT_EQ( vi.values[s], 0.0 );
      EXPECT_EQ( vi.policy[s], -1 );
    }
}

TEST( ValueIteration, TrivialTask )
{
  auto const m = enumerate_product( env_config::bootcamp( letters( 2 ) ), { { formula::tt(), 1.0 } } );
  auto const vi = value_iteration( m );
  for ( auto v : vi.values )
    EXPECT_EQ( v, 0.0 );
}

TEST( ValueIteration, BootcampMatchesShortestWord )
{
  auto const cfg = env_config::bootcamp( letters( 4 ) );
  for ( auto const& w : enumerate_support( task_preset( "bootcamp-avoid4" ) ) )
  {
    auto const m = enumerate_product( cfg, { w } );
    auto const v = initial_value( m, value_iteration( m ).values );
    EXPECT_NEAR( v, bootcamp_shortest_success( cfg, w.task, 10 ), 1e-9 ) << render( w.task );
  }
  auto const m = enumerate_product( cfg, { { parse( "F (a & F b)" ), 1.0 } } );
  EXPECT_NEAR( initial_value( m, value_iteration( m ).values ), 0.9, 1e-9 );
}

TEST( Myopic, LockedRoomsHalf )
{
  auto const m = fig1_product();
  auto const best = best_myopic_policy( m, env_config::locked_rooms().propositions() );
  EXPECT_DOUBLE_EQ( best.value, 0.5 );
  auto const exact = evaluate_exact( m, best.policy );
  EXPECT_DOUBLE_EQ( exact.total, 0.5 );
  EXPECT_DOUBLE_EQ( exact.success_rate, 0.5 );
}

TEST( Myopic, NoWorseThanOptimalAndMatchesWhenUnambiguous )
{
  /* a single task: the observation never aliases two formulas usefully */
  auto const cfg = env_config::bootcamp( letters( 3 ) );
  auto const m = enumerate_product( cfg, { { parse( "!a U (b & (!c U a))" ), 1.0 } } );
  auto const best = best_myopic_policy( m, cfg.propositions(), cfg.gamma );
  EXPECT_NEAR( best.value, initial_value( m, value_iteration( m ).values ), 1e-9 );
}

TEST( Exhaustive, Examples )
{
  auto const bc = env_config::bootcamp( vocabulary{ "a", "b" } );
  EXPECT_EQ( exhaustive_optimum( bc, parse( "F (a & F b)" ), 0 ), 0.0 );
  EXPECT_DOUBLE_EQ( exhaustive_optimum( bc, parse( "F (a & F b)" ), 2 ), 0.9 );
  EXPECT_DOUBLE_EQ( exhaustive_optimum( bc, parse( "F (a & F b)" ), 1 ), 0.0 );
  EXPECT_THROW( exhaustive_optimum( bc, parse( "F (a & b)" ), 30, 1000 ), budget_exceeded_error );
}

TEST( Exhaustive, AgreesWithValueIteration )
{
  auto const cfg = env_config::locked_rooms();
  int const h = 12;
  for ( auto const& text : { "F (B & F G)", "F (B & F R)", "!B U G" } )
  {
    auto const m = enumerate_product( cfg, { { parse( text ), 1.0 } } );
    auto const v = initial_value( m, value_iteration( m ).values );
    EXPECT_NEAR( exhaustive_optimum( cfg, parse( text ), h ), v, std::pow( cfg.gamma, h ) + 1e-6 ) << text;
  }
}

TEST( QLearning, DeterministicAndEmpty )
{
  auto const cfg = env_config::bootcamp( letters( 3 ) );
  auto const dist = task_preset( "bootcamp-avoid4" );
  q_hyper h;
  h.episodes = 0;
  EXPECT_TRUE( q_learning( cfg, task_distribution::single( parse( "F a" ) ), h ).empty() );
  h.episodes = 300;
  auto const bc = env_config::bootcamp( letters( 4 ) );
  EXPECT_TRUE( q_learning( bc, dist, h ) == q_learning( bc, dist, h ) );
  h.seed = 9;
  EXPECT_FALSE( q_learning( bc, dist, h ) == q_learning( bc, dist, { 300 } ) );
}

TEST( QLearning, BootcampReachesOptimum )
{
  auto const cfg = env_config::bootcamp( letters( 4 ) );
  auto const dist = task_preset( "bootcamp-avoid4" );
  auto const m = enumerate_product( cfg, enumerate_support( dist ) );
  auto const vi = value_iteration( m );
  q_hyper h;
  h.episodes = 10000;
  auto const q = q_learning( cfg, dist, h );
  auto const learned = evaluate_exact( m, policy_from_q( m, q ) );
  auto const best = evaluate_exact( m, vi.policy );
  EXPECT_GE( learned.success_rate, 0.99 );
  EXPECT_NEAR( learned.discounted, best.discounted, 0.02 );
}

TEST( Evaluate, OptimalAndRandom )
{
  auto const cfg = env_config::locked_rooms();
  optimal_policy const opt( cfg );
  policy_fn const pol = [&]( product_state const& s, rng& r ) { return opt( s, r ); };
  auto const m = evaluate( cfg, task_preset( "lockedrooms-two-rooms" ), pol, 1000, 1 );
  EXPECT_EQ( m.success_rate(), 1.0 );
  EXPECT_EQ( m.n, 1000u );

  auto const bc = env_config::bootcamp( letters( 2 ) );
  auto const rnd = evaluate( bc, task_distribution::single( parse( "F a" ) ), uniform_random_policy( 2 ), 2000, 3 );
  EXPECT_EQ( rnd.success_rate(), 1.0 );
  /* geometric: P(first a at step k) = 2^-(k+1), so E[gamma^k] = 1 / (2 - gamma) */
  EXPECT_NEAR( rnd.mean_discounted_return, 1.0 / ( 2.0 - 0.9 ), 4 * rnd.ci90 );

  auto const one = evaluate( bc, task_distribution::single( parse( "F a" ) ), uniform_random_policy( 2 ), 1, 3 );
  EXPECT_NEAR( one.success_rate() + one.failure_rate() + one.timeout_rate(), 1.0, 1e-9 );
}

TEST( Evaluate, WorkersDoNotChangeResults )
{
  auto const cfg = env_config::letter_world( 2 );
  auto const dist = task_preset( "letterworld-avoid" );
  auto const pol = uniform_random_policy( 4 );
  auto const a = run_episodes( cfg, dist, pol, 64, 5, 1 );
  auto const b = run_episodes( cfg, dist, pol, 64, 5, 4 );
  for ( std::size_t i = 0; i < a.size(); ++i )
  {
    ASSERT_EQ( a[i].initial_task, b[i].initial_task );
    ASSERT_EQ( a[i].steps.size(), b[i].steps.size() );
    ASSERT_EQ( a[i].discounted_return, b[i].discounted_return );
  }
}

TEST( Metrics, ConfidenceShrinks )
{
  auto const bc = env_config::bootcamp( letters( 3 ) );
  auto const d = task_distribution::single( parse( "F (a & F b)" ) );
  auto const small = evaluate( bc, d, uniform_random_policy( 3 ), 100, 1 );
  auto const large = evaluate( bc, d, uniform_random_policy( 3 ), 1600, 1 );
  EXPECT_NEAR( large.ci90 / small.ci90, 0.25, 0.1 );
}
