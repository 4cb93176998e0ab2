#pragma once

/*!
  \file product.hpp
  \brief Environment x progressed-task product: stepping, episodes and explicit tables.

  A product state pairs an environment state with the formula still to be
  satisfied. Each step progresses the formula through the step's label;
  reaching `true` pays +1, reaching `false` pays -1, and both end the
  episode.
*/

#include <ltl2a/envs.hpp>
#include <ltl2a/errors.hpp>
#include <ltl2a/formula.hpp>
#include <ltl2a/progress.hpp>
#include <ltl2a/rng.hpp>
#include <ltl2a/taskgen.hpp>

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

namespace ltl2a
{

struct product_state
{
  env_state env;
  formula task;

  bool terminal() const { return task.is_constant(); }

  bool operator==( product_state const& o ) const { return env == o.env && task == o.task; }
};

struct product_key
{
  std::uint64_t env;
  formula task;

  bool operator==( product_key const& o ) const { return env == o.env && task == o.task; }
};

struct product_key_hash
{
  std::size_t operator()( product_key const& k ) const noexcept
  {
    return k.task.hash() ^ ( k.env * 0x9e3779b97f4a7c15ull );
  }
};

inline product_key key_of( product_state const& s ) { return { s.env.key(), s.task }; }

/*! \brief Memo for progress(); a plain cache owned by its caller. */
class progression_cache
{
public:
  formula const& operator()( truth_assignment const& sigma, formula const& f )
  {
    auto& slot = cache_[f];
    for ( auto const& [s, g] : slot )
      if ( s == sigma )
        return g;
    slot.emplace_back( sigma, progress( sigma, f ) );
    return slot.back().second;
  }

  std::size_t size() const noexcept { return cache_.size(); }

private:
  std::unordered_map<formula, std::vector<std::pair<truth_assignment, formula>>, formula_hash> cache_;
};

struct step_result
{
  product_state next;
  truth_assignment label;
  double reward = 0.0;
  bool terminal = false;
};

inline double reward_of( formula const& progressed )
{
  return progressed.is_true() ? 1.0 : progressed.is_false() ? -1.0 : 0.0;
}

inline step_result product_step( env_config const& config, product_state const& st, int action,
                                 progression_cache* cache = nullptr )
{
  if ( st.terminal() )
    throw terminal_state_error( "cannot step a terminal product state" );
  auto label = env_label( config, st.env, action );
  auto next_env = env_step( config, st.env, action );
  formula next_task = cache ? ( *cache )( label, st.task ) : progress( label, st.task );
  double const r = reward_of( next_task );
  bool const done = next_task.is_constant();
  return { { std::move( next_env ), std::move( next_task ) }, std::move( label ), r, done };
}

enum class episode_outcome
{
  success,
  failure,
  timeout
};

inline std::string_view outcome_name( episode_outcome o )
{
  switch ( o )
  {
  case episode_outcome::success: return "success";
  case episode_outcome::failure: return "failure";
  case episode_outcome::timeout: return "timeout";
  }
  return "?";
}

struct episode_step
{
  env_state env;
  int action = 0;
  truth_assignment label;
  formula task;
  double reward = 0.0;
};

struct episode_record
{
  formula initial_task;
  std::vector<episode_step> steps;
  episode_outcome outcome = episode_outcome::timeout;
  double discounted_return = 0.0;
  double total_reward = 0.0;
  double gamma = 1.0;
};

using policy_fn = std::function<int( product_state const&, rng& )>;

/* rolls out one episode from a given start; discounting counts the first action as k = 0 */
inline episode_record run_episode_from( env_config const& config, product_state start, policy_fn const& policy, rng& r,
                                        std::optional<int> timeout = std::nullopt, progression_cache* cache = nullptr )
{
  int const limit = timeout ? *timeout : config.timeout;
  episode_record rec;
  rec.initial_task = start.task;
  rec.gamma = config.gamma;
  product_state st = std::move( start );
  st.task = simplify( st.task );
  if ( st.terminal() )
  {
    rec.outcome = st.task.is_true() ? episode_outcome::success : episode_outcome::failure;
    return rec;
  }
  double discount = 1.0;
  for ( int k = 0; k < limit; ++k )
  {
    int const a = policy( st, r );
    auto res = product_step( config, st, a, cache );
    rec.steps.push_back( { st.env, a, res.label, res.next.task, res.reward } );
    rec.discounted_return += discount * res.reward;
    rec.total_reward += res.reward;
    discount *= config.gamma;
    st = std::move( res.next );
    if ( res.terminal )
    {
      rec.outcome = res.reward > 0 ? episode_outcome::success : episode_outcome::failure;
      return rec;
    }
  }
  rec.outcome = episode_outcome::timeout;
  return rec;
}

/* mu'(s, phi) = mu(s) tau(phi): task drawn first, then the environment reset */
inline episode_record run_episode( env_config const& config, task_distribution const& dist, policy_fn const& policy,
                                   rng& r, std::optional<int> timeout = std::nullopt, progression_cache* cache = nullptr )
{
  auto task = dist.sample( r );
  auto env = env_reset( config, r );
  return run_episode_from( config, { std::move( env ), std::move( task ) }, policy, r, timeout, cache );
}

/*! \brief Enumerated product MDP over the states reachable from the initial distribution.

  `successor[s * num_actions + a]` is -1 exactly for terminal `s`.
*/
struct explicit_mdp
{
  std::vector<product_state> states;
  std::size_t num_actions = 0;
  std::vector<std::int64_t> successor;
  std::vector<double> reward;
  std::vector<bool> terminal;
  double gamma = 1.0;
  /* initial distribution over state indices */
  std::vector<std::pair<std::size_t, double>> initial;
  std::unordered_map<product_key, std::size_t, product_key_hash> index;

  std::size_t size() const noexcept { return states.size(); }

  std::int64_t next( std::size_t s, std::size_t a ) const { return successor[s * num_actions + a]; }
  double reward_at( std::size_t s, std::size_t a ) const { return reward[s * num_actions + a]; }

  std::optional<std::size_t> find( product_state const& s ) const
  {
    auto it = index.find( key_of( s ) );
    if ( it == index.end() )
      return std::nullopt;
    return it->second;
  }

  /* distinct formulas appearing in the states */
  std::size_t formula_count() const
  {
    std::unordered_map<formula, int, formula_hash> seen;
    for ( auto const& s : states )
      seen.emplace( s.task, 0 );
    return seen.size();
  }
};

struct product_caps
{
  std::size_t max_formulas = 100000;
  std::size_t max_states = 2000000;
};

inline explicit_mdp enumerate_product( env_config const& config, std::vector<weighted_formula> const& phis,
                                       product_caps caps = {}, env_state const* start = nullptr )
{
  if ( phis.empty() )
    throw invalid_argument_error( "no tasks to enumerate" );
  config.validate();
  rng r;
  env_state const env0 = start ? *start : env_reset( config, r );

  explicit_mdp m;
  m.num_actions = config.num_actions();
  m.gamma = config.gamma;

  std::unordered_map<formula, int, formula_hash> formulas;
  progression_cache cache;

  auto const add = [&]( product_state s ) -> std::size_t {
    auto key = key_of( s );
    if ( auto it = m.index.find( key ); it != m.index.end() )
      return it->second;
    if ( formulas.emplace( s.task, 0 ).second && formulas.size() > caps.max_formulas )
      throw cap_exceeded_error( "progression closure exceeds cap " + std::to_string( caps.max_formulas ), m.states.size() );
    if ( m.states.size() >= caps.max_states )
      throw cap_exceeded_error( "product state count exceeds cap " + std::to_string( caps.max_states ), m.states.size() );
    std::size_t const i = m.states.size();
    m.index.emplace( std::move( key ), i );
    m.terminal.push_back( s.terminal() );
    m.states.push_back( std::move( s ) );
    return i;
  };

  double total = 0.0;
  for ( auto const& w : phis )
    total += w.weight;
  for ( auto const& w : phis )
  {
    auto const i = add( { env0, simplify( w.task ) } );
    auto it = std::find_if( m.initial.begin(), m.initial.end(), [&]( auto const& p ) { return p.first == i; } );
    if ( it == m.initial.end() )
      m.initial.emplace_back( i, w.weight / total );
    else
      it->second += w.weight / total;
  }

  for ( std::size_t s = 0; s < m.states.size(); ++s )
  {
    if ( m.terminal[s] )
    {
      m.successor.insert( m.successor.end(), m.num_actions, -1 );
      m.reward.insert( m.reward.end(), m.num_actions, 0.0 );
      continue;
    }
    for ( std::size_t a = 0; a < m.num_actions; ++a )
    {
      auto res = product_step( config, m.states[s], static_cast<int>( a ), &cache );
      auto const t = add( std::move( res.next ) );
      m.successor.push_back( static_cast<std::int64_t>( t ) );
      m.reward.push_back( res.reward );
    }
  }
  return m;
}

} // namespace ltl2a
