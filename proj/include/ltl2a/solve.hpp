#pragma once

/*!
  \file solve.hpp
  \brief Solvers over the product: value iteration, exhaustive search,
         restricted (myopic) policy search, tabular Q-learning, evaluation.

  All environments here are deterministic, so policies are evaluated
  exactly by following their unique trajectory until it terminates or
  revisits a state (a cycle never collects a reward).
*/

#include <ltl2a/envs.hpp>
#include <ltl2a/errors.hpp>
#include <ltl2a/guidance.hpp>
#include <ltl2a/product.hpp>
#include <ltl2a/rng.hpp>
#include <ltl2a/taskgen.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <mutex>
#include <optional>
#include <thread>
#include <unordered_map>
#include <vector>

namespace ltl2a
{

/* actions whose values differ by less than this are treated as tied (lowest index wins) */
inline constexpr double tie_tolerance = 1e-7;

struct value_result
{
  std::vector<double> values;
  /* greedy action per state, -1 for terminals */
  std::vector<int> policy;
  /* sup-norm Bellman residual after each sweep */
  std::vector<double> residuals;
  bool converged = false;
};

inline int greedy_action( explicit_mdp const& m, std::vector<double> const& v, std::size_t s, double* best_value = nullptr )
{
  int best = 0;
  double best_q = -1e300;
  for ( std::size_t a = 0; a < m.num_actions; ++a )
  {
    auto const t = m.next( s, a );
    double const q = m.reward_at( s, a ) + m.gamma * v[static_cast<std::size_t>( t )];
    if ( q > best_q + tie_tolerance )
    {
      best_q = q;
      best = static_cast<int>( a );
    }
  }
  if ( best_value )
    *best_value = best_q;
  return best;
}

/* synchronous sweeps until the residual drops below `tol` */
inline value_result value_iteration( explicit_mdp const& m, double tol = 1e-9, std::size_t max_sweeps = 1000000 )
{
  if ( !( tol > 0.0 ) )
    throw invalid_argument_error( "tolerance must be positive" );
  value_result out;
  std::vector<double> v( m.size(), 0.0 ), next( m.size(), 0.0 );
  for ( std::size_t sweep = 0; sweep < max_sweeps; ++sweep )
  {
    double residual = 0.0;
    for ( std::size_t s = 0; s < m.size(); ++s )
    {
      if ( m.terminal[s] )
        continue;
      double best = -1e300;
      for ( std::size_t a = 0; a < m.num_actions; ++a )
        best = std::max( best, m.reward_at( s, a ) + m.gamma * v[static_cast<std::size_t>( m.next( s, a ) )] );
      next[s] = best;
      residual = std::max( residual, std::abs( best - v[s] ) );
    }
    v.swap( next );
    out.residuals.push_back( residual );
    if ( residual < tol )
    {
      out.converged = true;
      break;
    }
  }
  out.policy.assign( m.size(), -1 );
  for ( std::size_t s = 0; s < m.size(); ++s )
    if ( !m.terminal[s] )
      out.policy[s] = greedy_action( m, v, s );
  out.values = std::move( v );
  return out;
}

/*! \brief Return of the single trajectory a deterministic policy takes from `s`. */
struct path_value
{
  episode_outcome outcome = episode_outcome::timeout; /* timeout: the path cycles */
  double discounted = 0.0;
  double total = 0.0;
  std::size_t length = 0;
};

inline path_value follow_policy( explicit_mdp const& m, std::vector<int> const& policy, std::size_t s,
                                 std::optional<std::size_t> max_steps = std::nullopt )
{
  path_value out;
  std::vector<bool> seen( m.size(), false );
  double discount = 1.0;
  while ( !m.terminal[s] && !seen[s] && ( !max_steps || out.length < *max_steps ) )
  {
    seen[s] = true;
    auto const a = static_cast<std::size_t>( policy[s] );
    double const r = m.reward_at( s, a );
    out.discounted += discount * r;
    out.total += r;
    discount *= m.gamma;
    s = static_cast<std::size_t>( m.next( s, a ) );
    ++out.length;
  }
  if ( m.terminal[s] )
    out.outcome = m.states[s].task.is_true() ? episode_outcome::success : episode_outcome::failure;
  return out;
}

struct exact_value
{
  double success_rate = 0.0;
  double failure_rate = 0.0;
  double nonterminating_rate = 0.0;
  double discounted = 0.0;
  double total = 0.0;
};

/* expectation over the initial distribution */
inline exact_value evaluate_exact( explicit_mdp const& m, std::vector<int> const& policy,
                                   std::optional<std::size_t> max_steps = std::nullopt )
{
  exact_value out;
  for ( auto const& [s, p] : m.initial )
  {
    auto const v = follow_policy( m, policy, s, max_steps );
    out.discounted += p * v.discounted;
    out.total += p * v.total;
    ( v.outcome == episode_outcome::success   ? out.success_rate
      : v.outcome == episode_outcome::failure ? out.failure_rate
                                              : out.nonterminating_rate ) += p;
  }
  return out;
}

inline double initial_value( explicit_mdp const& m, std::vector<double> const& values )
{
  double v = 0.0;
  for ( auto const& [s, p] : m.initial )
    v += p * values[s];
  return v;
}

/*! \brief Best discounted return over all action sequences of length `horizon`.

  Plain depth-first enumeration of action histories from the initial state,
  pruned only by the bound "at most +1, discounted to the current depth".
  Throws `budget_exceeded_error` after `budget` expanded nodes.
*/
inline double exhaustive_optimum( env_config const& config, formula const& phi, int horizon,
                                  std::uint64_t budget = 10000000, env_state const* start = nullptr )
{
  if ( horizon < 0 )
    throw invalid_argument_error( "horizon must be nonnegative" );
  rng r;
  product_state const s0{ start ? *start : env_reset( config, r ), simplify( phi ) };
  if ( horizon == 0 || s0.terminal() )
    return 0.0;
  int const actions = static_cast<int>( config.num_actions() );
  std::uint64_t nodes = 0;
  double best = -1e300;
  progression_cache cache;

  auto dfs = [&]( auto&& self, product_state const& s, int depth, double acc, double discount ) -> void {
    if ( ++nodes > budget )
      throw budget_exceeded_error( "exhaustive search exceeded " + std::to_string( budget ) + " nodes" );
    if ( depth == horizon || s.terminal() )
    {
      best = std::max( best, acc );
      return;
    }
    /* no history can collect more than one more +1 */
    if ( acc + discount <= best )
      return;
    for ( int a = 0; a < actions; ++a )
    {
      auto res = product_step( config, s, a, &cache );
      self( self, res.next, depth + 1, acc + discount * res.reward, discount * config.gamma );
    }
  };
  dfs( dfs, s0, 0, 0.0, 1.0 );
  return best;
}

/*! \brief Best policy measurable in (environment state, guidance classification).

  Searches deterministic maps observation -> action, assigning an action
  the first time a trajectory meets an observation, with branch and bound
  against the unrestricted optimum. `discount` 1 scores total reward.
*/
struct myopic_result
{
  double value = 0.0;
  /* per initial task, in the order of the MDP's initial distribution */
  std::vector<double> task_values;
  /* action per product state (-1 terminal or never reached) */
  std::vector<int> policy;
  std::uint64_t nodes = 0;
};

inline std::vector<std::size_t> myopic_observations( explicit_mdp const& m, vocabulary const& vocab )
{
  std::unordered_map<std::string, std::size_t> ids;
  std::vector<std::size_t> obs( m.size(), 0 );
  for ( std::size_t s = 0; s < m.size(); ++s )
  {
    if ( m.terminal[s] )
      continue;
    auto key = std::to_string( m.states[s].env.key() ) + ":" + classify_propositions( m.states[s].task, vocab ).key();
    obs[s] = ids.emplace( std::move( key ), ids.size() ).first->second;
  }
  return obs;
}

inline myopic_result best_myopic_policy( explicit_mdp const& m, vocabulary const& vocab, double discount = 1.0,
                                         std::uint64_t budget = 50000000 )
{
  auto const obs = myopic_observations( m, vocab );
  std::size_t const num_obs = obs.empty() ? 0 : *std::max_element( obs.begin(), obs.end() ) + 1;

  /* unrestricted optimum as an admissible bound */
  explicit_mdp bound_mdp = m;
  bound_mdp.gamma = discount;
  auto const ub = value_iteration( bound_mdp, 1e-12 ).values;

  auto const& tasks = m.initial;
  std::vector<double> tail( tasks.size() + 1, 0.0 );
  for ( std::size_t i = tasks.size(); i-- > 0; )
    tail[i] = tail[i + 1] + tasks[i].second * ub[tasks[i].first];

  std::vector<int> assign( num_obs, -1 );
  std::vector<std::vector<bool>> visited( tasks.size(), std::vector<bool>( m.size(), false ) );
  std::vector<double> values( tasks.size(), 0.0 );

  myopic_result out;
  out.value = -1e300;
  std::uint64_t nodes = 0;

  auto walk = [&]( auto&& self, std::size_t i, std::size_t s, double acc, double d, double done ) -> void {
    if ( ++nodes > budget )
      throw budget_exceeded_error( "myopic policy search exceeded " + std::to_string( budget ) + " nodes" );
    if ( i == tasks.size() )
    {
      if ( done > out.value + 1e-12 )
      {
        out.value = done;
        out.task_values = values;
        out.policy.assign( m.size(), -1 );
        for ( std::size_t t = 0; t < m.size(); ++t )
          if ( !m.terminal[t] && assign[obs[t]] >= 0 )
            out.policy[t] = assign[obs[t]];
      }
      return;
    }
    double const w = tasks[i].second;
    if ( m.terminal[s] || visited[i][s] )
    {
      values[i] = acc;
      double const next_done = done + w * acc;
      if ( i + 1 < tasks.size() && next_done + tail[i + 1] <= out.value + 1e-12 )
        return;
      self( self, i + 1, i + 1 < tasks.size() ? tasks[i + 1].first : 0, 0.0, 1.0, next_done );
      return;
    }
    if ( done + w * ( acc + d * ub[s] ) + tail[i + 1] <= out.value + 1e-12 )
      return;
    visited[i][s] = true;
    auto const o = obs[s];
    auto const step = [&]( int a ) {
      auto const t = static_cast<std::size_t>( m.next( s, static_cast<std::size_t>( a ) ) );
      self( self, i, t, acc + d * m.reward_at( s, static_cast<std::size_t>( a ) ), d * discount, done );
    };
    if ( assign[o] >= 0 )
      step( assign[o] );
    else
    {
      /* most promising actions first so the incumbent tightens early */
      std::vector<int> order( m.num_actions );
      for ( std::size_t a = 0; a < m.num_actions; ++a )
        order[a] = static_cast<int>( a );
      auto const q = [&]( int a ) {
        return m.reward_at( s, std::size_t( a ) ) + discount * ub[static_cast<std::size_t>( m.next( s, std::size_t( a ) ) )];
      };
      std::stable_sort( order.begin(), order.end(), [&]( int a, int b ) { return q( a ) > q( b ) + tie_tolerance; } );
      for ( int a : order )
      {
        assign[o] = a;
        step( a );
      }
      assign[o] = -1;
    }
    visited[i][s] = false;
  };

  if ( !tasks.empty() )
    walk( walk, 0, tasks[0].first, 0.0, 1.0, 0.0 );
  out.nodes = nodes;
  return out;
}

/*! \brief Tabular Q-learning over (environment state, progressed formula). */
struct q_hyper
{
  std::size_t episodes = 10000;
  /* stop once this many environment steps were taken (0: no limit) */
  std::size_t max_total_steps = 0;
  double alpha = 0.1;
  double epsilon_start = 1.0;
  double epsilon_end = 0.05;
  /* fraction of the episodes over which epsilon decays linearly */
  double decay_fraction = 0.5;
  std::uint64_t seed = default_seed;
  std::optional<int> timeout;
};

struct q_state_key
{
  std::uint64_t env;
  std::uint64_t layout;
  formula task;

  bool operator==( q_state_key const& o ) const { return env == o.env && layout == o.layout && task == o.task; }
};

struct q_state_key_hash
{
  std::size_t operator()( q_state_key const& k ) const noexcept
  {
    return k.task.hash() ^ ( k.env * 0x9e3779b97f4a7c15ull ) ^ ( k.layout * 0xc2b2ae3d27d4eb4full );
  }
};

class q_table
{
public:
  struct entry
  {
    std::vector<double> q;
    std::vector<std::uint32_t> visits;
  };

  explicit q_table( std::size_t num_actions = 0 ) : actions_( num_actions ) {}

  static q_state_key key_of( product_state const& s )
  {
    return { s.env.key(), s.env.layout ? s.env.layout->seed : 0, s.task };
  }

  std::size_t num_actions() const noexcept { return actions_; }
  std::size_t size() const noexcept { return table_.size(); }
  bool empty() const noexcept { return table_.empty(); }
  std::size_t steps() const noexcept { return steps_; }
  std::size_t episodes() const noexcept { return episodes_; }

  entry const* find( product_state const& s ) const
  {
    auto it = table_.find( key_of( s ) );
    return it == table_.end() ? nullptr : &it->second;
  }

  entry& at( product_state const& s )
  {
    auto [it, fresh] = table_.try_emplace( key_of( s ) );
    if ( fresh )
    {
      it->second.q.assign( actions_, 0.0 );
      it->second.visits.assign( actions_, 0 );
    }
    return it->second;
  }

  double max_q( product_state const& s ) const
  {
    auto const* e = find( s );
    return e ? *std::max_element( e->q.begin(), e->q.end() ) : 0.0;
  }

  /* unseen states fall back to action 0 */
  int greedy( product_state const& s ) const
  {
    auto const* e = find( s );
    if ( !e )
      return 0;
    int best = 0;
    for ( std::size_t a = 1; a < actions_; ++a )
      if ( e->q[a] > e->q[static_cast<std::size_t>( best )] )
        best = static_cast<int>( a );
    return best;
  }

  /* entries sorted by (task text, layout, env key) for stable output */
  std::vector<std::pair<q_state_key, entry const*>> sorted() const
  {
    std::vector<std::pair<q_state_key, entry const*>> out;
    for ( auto const& [k, e] : table_ )
      out.emplace_back( k, &e );
    std::sort( out.begin(), out.end(), []( auto const& a, auto const& b ) {
      if ( a.first.task.text() != b.first.task.text() )
        return a.first.task.text() < b.first.task.text();
      if ( a.first.layout != b.first.layout )
        return a.first.layout < b.first.layout;
      return a.first.env < b.first.env;
    } );
    return out;
  }

  bool operator==( q_table const& o ) const
  {
    if ( actions_ != o.actions_ || table_.size() != o.table_.size() )
      return false;
    for ( auto const& [k, e] : table_ )
    {
      auto it = o.table_.find( k );
      if ( it == o.table_.end() || it->second.q != e.q || it->second.visits != e.visits )
        return false;
    }
    return true;
  }

private:
  friend q_table q_learning( env_config const&, task_distribution const&, q_hyper const& );

  std::size_t actions_;
  std::size_t steps_ = 0;
  std::size_t episodes_ = 0;
  std::unordered_map<q_state_key, entry, q_state_key_hash> table_;
};

/* episode i draws everything (task, reset, exploration) from stream i of the seed */
inline q_table q_learning( env_config const& config, task_distribution const& dist, q_hyper const& hyper )
{
  config.validate();
  if ( !( hyper.alpha > 0.0 && hyper.alpha <= 1.0 ) )
    throw invalid_argument_error( "step size must lie in (0, 1]" );
  q_table table( config.num_actions() );
  progression_cache cache;
  int const limit = hyper.timeout ? *hyper.timeout : config.timeout;
  double const decay_episodes = std::max( 1.0, hyper.decay_fraction * double( hyper.episodes ) );
  auto const actions = config.num_actions();

  for ( std::size_t ep = 0; ep < hyper.episodes; ++ep )
  {
    if ( hyper.max_total_steps && table.steps_ >= hyper.max_total_steps )
      break;
    double const frac = std::min( 1.0, double( ep ) / decay_episodes );
    double const eps = hyper.epsilon_start + ( hyper.epsilon_end - hyper.epsilon_start ) * frac;
    auto r = rng::stream( hyper.seed, ep );
    auto task = dist.sample( r );
    product_state st{ env_reset( config, r ), simplify( task ) };
    ++table.episodes_;
    for ( int k = 0; k < limit && !st.terminal(); ++k )
    {
      if ( hyper.max_total_steps && table.steps_ >= hyper.max_total_steps )
        break;
      int const a = r.bernoulli( eps ) ? static_cast<int>( r.below( actions ) ) : table.greedy( st );
      auto res = product_step( config, st, a, &cache );
      double const target = res.reward + ( res.terminal ? 0.0 : config.gamma * table.max_q( res.next ) );
      auto& e = table.at( st );
      e.q[static_cast<std::size_t>( a )] += hyper.alpha * ( target - e.q[static_cast<std::size_t>( a )] );
      ++e.visits[static_cast<std::size_t>( a )];
      ++table.steps_;
      st = std::move( res.next );
    }
  }
  return table;
}

/* greedy Q policy restricted to the states of `m` */
inline std::vector<int> policy_from_q( explicit_mdp const& m, q_table const& q )
{
  std::vector<int> policy( m.size(), -1 );
  for ( std::size_t s = 0; s < m.size(); ++s )
    if ( !m.terminal[s] )
      policy[s] = q.greedy( m.states[s] );
  return policy;
}

/*! \brief Aggregate of evaluation episodes. */
struct metrics
{
  std::size_t n = 0;
  std::size_t successes = 0;
  std::size_t failures = 0;
  std::size_t timeouts = 0;
  double mean_discounted_return = 0.0;
  double mean_total_reward = 0.0;
  /* 90% normal-approximation half-width of the mean discounted return */
  double ci90 = 0.0;

  double success_rate() const { return n ? double( successes ) / double( n ) : 0.0; }
  double failure_rate() const { return n ? double( failures ) / double( n ) : 0.0; }
  double timeout_rate() const { return n ? double( timeouts ) / double( n ) : 0.0; }
};

inline metrics summarize( std::vector<episode_record> const& episodes )
{
  metrics m;
  m.n = episodes.size();
  if ( episodes.empty() )
    return m;
  double sum = 0.0, total = 0.0;
  for ( auto const& e : episodes )
  {
    sum += e.discounted_return;
    total += e.total_reward;
    ( e.outcome == episode_outcome::success   ? m.successes
      : e.outcome == episode_outcome::failure ? m.failures
                                              : m.timeouts ) += 1;
  }
  m.mean_discounted_return = sum / double( m.n );
  m.mean_total_reward = total / double( m.n );
  if ( m.n > 1 )
  {
    double ss = 0.0;
    for ( auto const& e : episodes )
      ss += ( e.discounted_return - m.mean_discounted_return ) * ( e.discounted_return - m.mean_discounted_return );
    double const sd = std::sqrt( ss / double( m.n - 1 ) );
    m.ci90 = 1.6448536269514722 * sd / std::sqrt( double( m.n ) );
  }
  return m;
}

/*! \brief Runs episodes 0..n-1, episode i on stream i of `seed`.

  `policy` is called concurrently when `workers` > 1. Results come back in
  episode order whatever the worker count.
*/
inline std::vector<episode_record> run_episodes( env_config const& config, task_distribution const& dist,
                                                 policy_fn const& policy, std::size_t n, std::uint64_t seed,
                                                 std::size_t workers = 1, std::optional<int> timeout = std::nullopt )
{
  std::vector<episode_record> out( n );
  workers = std::max<std::size_t>( 1, std::min( workers, n ) );
  auto const work = [&]( std::size_t w ) {
    progression_cache cache;
    for ( std::size_t i = w; i < n; i += workers )
    {
      auto r = rng::stream( seed, i );
      out[i] = run_episode( config, dist, policy, r, timeout, &cache );
    }
  };
  if ( workers == 1 )
    work( 0 );
  else
  {
    std::vector<std::exception_ptr> errors( workers );
    std::vector<std::thread> threads;
    for ( std::size_t w = 0; w < workers; ++w )
      threads.emplace_back( [&, w] {
        try
        {
          work( w );
        }
        catch ( ... )
        {
          errors[w] = std::current_exception();
        }
      } );
    for ( auto& t : threads )
      t.join();
    for ( auto const& e : errors )
      if ( e )
        std::rethrow_exception( e );
  }
  return out;
}

inline metrics evaluate( env_config const& config, task_distribution const& dist, policy_fn const& policy,
                         std::size_t n, std::uint64_t seed, std::size_t workers = 1,
                         std::optional<int> timeout = std::nullopt )
{
  if ( n == 0 )
    throw invalid_argument_error( "evaluation needs at least one episode" );
  return summarize( run_episodes( config, dist, policy, n, seed, workers, timeout ) );
}

/*! \brief Optimal policy computed lazily: the first visit to a product state
    enumerates the product reachable from it and solves it exactly.

  Safe to call concurrently. Greedy choices only depend on values, which are
  intrinsic to the state, so the result does not depend on visit order.
*/
class optimal_policy
{
public:
  explicit optimal_policy( env_config config, product_caps caps = {} ) : config_( std::move( config ) ), caps_( caps ) {}

  int operator()( product_state const& s, rng& ) const { return action( s ); }

  int action( product_state const& s ) const
  {
    std::lock_guard lock( mutex_ );
    auto key = q_table::key_of( s );
    if ( auto it = actions_.find( key ); it != actions_.end() )
      return it->second;
    auto const m = enumerate_product( config_, { { s.task, 1.0 } }, caps_, &s.env );
    auto const vi = value_iteration( m );
    for ( std::size_t t = 0; t < m.size(); ++t )
      if ( !m.terminal[t] )
        actions_.try_emplace( q_table::key_of( m.states[t] ), vi.policy[t] );
    return actions_.at( key );
  }

  /* optimal value from `s` */
  double value( product_state const& s ) const
  {
    auto const m = enumerate_product( config_, { { s.task, 1.0 } }, caps_, &s.env );
    return initial_value( m, value_iteration( m ).values );
  }

private:
  env_config config_;
  product_caps caps_;
  mutable std::mutex mutex_;
  mutable std::unordered_map<q_state_key, int, q_state_key_hash> actions_;
};

inline policy_fn uniform_random_policy( std::size_t num_actions )
{
  return [num_actions]( product_state const&, rng& r ) { return static_cast<int>( r.below( num_actions ) ); };
}

} // namespace ltl2a
