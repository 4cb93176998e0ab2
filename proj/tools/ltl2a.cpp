// ltl2a command-line tool: sample, progress, check, count, solve, run, eval, export.
//
// Exit codes: 0 success, 1 domain error, 2 usage error.

#include <ltl2a/check.hpp>
#include <ltl2a/count.hpp>
#include <ltl2a/envs.hpp>
#include <ltl2a/export.hpp>
#include <ltl2a/guidance.hpp>
#include <ltl2a/json_io.hpp>
#include <ltl2a/parse.hpp>
#include <ltl2a/product.hpp>
#include <ltl2a/solve.hpp>
#include <ltl2a/taskgen.hpp>

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

using namespace ltl2a;

namespace
{

struct usage_error : std::runtime_error
{
  using std::runtime_error::runtime_error;
};

struct options
{
  std::optional<std::uint64_t> seed_flag;
  bool json_out = false;
  std::string out_path;
  std::size_t workers = 1;

  std::string env = "letterworld";
  std::string placement_seed = "1";
  std::string tasks;
  std::string preset;
  std::optional<double> gamma_override;
  std::optional<int> timeout;

  std::size_t count = 10;
  std::uint64_t cases = 10000;
  std::size_t episodes = 0;
  std::size_t train_episodes = 10000;
  std::string policy = "optimal";
  bool table = false;

  std::string formula_text;
  std::vector<std::string> assignments;

  std::string export_kind;
  std::string vocab;
  std::string features = "onehot";
  std::size_t dim = 3;
  std::uint64_t feature_seed = default_seed;
  bool egocentric = false;
};

std::uint64_t resolve_seed( options const& o )
{
  if ( o.seed_flag )
    return *o.seed_flag;
  if ( char const* env = std::getenv( "LTL2A_SEED" ) )
  {
    std::uint64_t v = 0;
    std::string const s( env );
    auto const res = std::from_chars( s.data(), s.data() + s.size(), v );
    if ( s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size() )
      throw usage_error( "LTL2A_SEED must be an unsigned integer" );
    return v;
  }
  return default_seed;
}

void emit( options const& o, std::string const& text )
{
  if ( o.out_path.empty() )
  {
    std::cout << text;
    return;
  }
  std::ofstream out( o.out_path, std::ios::binary );
  if ( !out )
    throw invalid_argument_error( "cannot write '" + o.out_path + "'" );
  out << text;
}

bool ends_with( std::string const& s, std::string_view suffix )
{
  return s.size() >= suffix.size() && s.compare( s.size() - suffix.size(), suffix.size(), suffix ) == 0;
}

std::string default_tasks_for( std::string const& env )
{
  if ( env == "lockedrooms" )
    return "lockedrooms-two-rooms";
  if ( env == "bootcamp" )
    return "bootcamp-avoid4";
  return "letterworld-avoid";
}

task_distribution load_tasks( options const& o, std::uint64_t seed )
{
  std::string name = !o.preset.empty() ? o.preset : !o.tasks.empty() ? o.tasks : default_tasks_for( o.env );
  if ( ends_with( name, ".json" ) )
  {
    /* the file's own seed stands unless one was given explicitly */
    std::optional<std::uint64_t> override;
    if ( o.seed_flag || std::getenv( "LTL2A_SEED" ) )
      override = seed;
    return task_distribution_from_json( read_json_file( name ), override );
  }
  return task_preset( name, seed );
}

std::string tasks_label( options const& o )
{
  return !o.preset.empty() ? o.preset : !o.tasks.empty() ? o.tasks : default_tasks_for( o.env );
}

env_config load_env( options const& o, task_distribution const& dist )
{
  env_config c;
  if ( ends_with( o.env, ".json" ) )
    c = env_config_from_json( read_json_file( o.env ) );
  else if ( o.env == "letterworld" )
  {
    std::optional<std::uint64_t> placement;
    if ( o.placement_seed != "random" )
    {
      std::uint64_t v = 0;
      auto const& s = o.placement_seed;
      auto const res = std::from_chars( s.data(), s.data() + s.size(), v );
      if ( res.ec != std::errc() || res.ptr != s.data() + s.size() )
        throw usage_error( "--placement-seed takes an unsigned integer or 'random'" );
      placement = v;
    }
    c = env_config::letter_world( placement );
  }
  else if ( o.env == "lockedrooms" )
    c = env_config::locked_rooms();
  else if ( o.env == "bootcamp" )
    c = env_config::bootcamp( dist.vocab() );
  else
    throw usage_error( "unknown environment '" + o.env + "' (letterworld, lockedrooms, bootcamp or a .json file)" );
  if ( o.gamma_override )
    c.gamma = *o.gamma_override;
  if ( o.timeout )
    c.timeout = *o.timeout;
  c.validate();
  for ( auto const& p : dist.vocab() )
    if ( !c.propositions().contains( p ) )
      throw invalid_argument_error( "task proposition '" + p + "' is never emitted by " + c.name() );
  return c;
}

json config_echo( std::string const& command, options const& o, std::uint64_t seed )
{
  json j{ { "command", command }, { "seed", seed } };
  if ( command == "solve" || command == "run" || command == "eval" || command == "export" )
  {
    j["env"] = o.env;
    if ( o.env == "letterworld" )
      j["placement_seed"] = o.placement_seed;
  }
  if ( command != "progress" && command != "check" && command != "export" )
    j["tasks"] = tasks_label( o );
  if ( command == "sample" )
    j["count"] = o.count;
  if ( command == "check" )
    j["cases"] = o.cases;
  if ( command == "run" || command == "eval" )
  {
    j["episodes"] = o.episodes ? o.episodes : command == "run" ? 10 : 1000;
    if ( o.policy == "qlearn" )
      j["train_episodes"] = o.train_episodes;
  }
  if ( o.gamma_override )
    j["gamma_override"] = *o.gamma_override;
  if ( o.timeout )
    j["timeout"] = *o.timeout;
  return j;
}

truth_assignment parse_assignment( std::string line )
{
  for ( char& c : line )
    if ( c == ',' || c == '{' || c == '}' || c == '\t' )
      c = ' ';
  std::istringstream in( line );
  std::vector<std::string> members;
  std::string p;
  while ( in >> p )
  {
    if ( p == "-" )
      continue;
    if ( !is_valid_proposition_name( p ) )
      throw invalid_argument_error( "invalid proposition '" + p + "' in assignment" );
    members.push_back( p );
  }
  return truth_assignment( members );
}

/* ---- subcommands ---- */

int cmd_sample( options const& o )
{
  auto const seed = resolve_seed( o );
  auto const dist = load_tasks( o, seed );
  json formulas = json::array();
  std::string text;
  for ( std::size_t i = 0; i < o.count; ++i )
  {
    auto const f = dist.sample_at( i );
    formulas.push_back( f.text() );
    text += f.text() + "\n";
  }
  if ( o.json_out )
    emit( o, dump( { { "schema", schema_name( "samples" ) }, { "config", config_echo( "sample", o, seed ) }, { "formulas", formulas } } ) );
  else
    emit( o, text );
  return 0;
}

int cmd_progress( options const& o )
{
  auto f = parse( o.formula_text );
  std::vector<truth_assignment> sigmas;
  if ( o.assignments.empty() )
  {
    std::string line;
    while ( std::getline( std::cin, line ) )
      sigmas.push_back( parse_assignment( line ) );
  }
  else
    for ( auto const& a : o.assignments )
      sigmas.push_back( parse_assignment( a ) );

  json steps = json::array();
  std::string text;
  for ( auto const& s : sigmas )
  {
    f = progress( s, f );
    steps.push_back( { { "assignment", s.members() }, { "residual", f.text() } } );
    text += f.text() + "\n";
  }
  if ( o.json_out )
    emit( o, dump( { { "schema", schema_name( "progress" ) }, { "formula", parse( o.formula_text ).text() }, { "steps", steps } } ) );
  else
    emit( o, text );
  return 0;
}

int cmd_check( options const& o )
{
  auto const seed = resolve_seed( o );
  auto const s = run_progression_check( o.cases, seed, o.workers );
  if ( o.json_out )
  {
    json j{ { "schema", schema_name( "check" ) }, { "config", config_echo( "check", o, seed ) }, { "cases", s.cases }, { "passed", s.passed } };
    if ( s.first_failure )
    {
      auto const c = make_progression_case( seed, *s.first_failure );
      j["first_failure"] = { { "index", *s.first_failure }, { "formula", c.phi.text() }, { "position", c.position } };
    }
    emit( o, dump( j ) );
  }
  else
    emit( o, std::to_string( s.passed ) + "/" + std::to_string( s.cases ) + " pass\n" );
  return s.passed == s.cases ? 0 : 1;
}

int cmd_count( options const& o )
{
  auto const seed = resolve_seed( o );
  auto const dist = load_tasks( o, seed );
  auto const n = count_tasks( dist );
  if ( o.json_out )
    emit( o, dump( { { "schema", schema_name( "count" ) },
                     { "config", config_echo( "count", o, seed ) },
                     { "count", n.str() },
                     { "convention", "sets of distinct sequences; disjunctions unordered pairs of distinct propositions" } } ) );
  else
    emit( o, n.str() + "\n" );
  return 0;
}

std::vector<weighted_formula> support_of( task_distribution const& dist )
{
  try
  {
    return enumerate_support( dist, 20000 );
  }
  catch ( cap_exceeded_error const& )
  {
    throw invalid_argument_error( "task distribution too large to enumerate; use a smaller preset" );
  }
}

env_state start_state( env_config const& cfg, std::uint64_t seed )
{
  rng r( seed );
  return env_reset( cfg, r );
}

int cmd_solve( options const& o )
{
  auto const seed = resolve_seed( o );
  auto const dist = load_tasks( o, seed );
  auto const cfg = load_env( o, dist );
  if ( cfg.is_letter_world() && !std::get<letter_world_config>( cfg.kind ).placement_seed )
    throw invalid_argument_error( "solving needs a fixed LetterWorld layout (--placement-seed)" );
  auto const s0 = start_state( cfg, seed );
  auto const m = enumerate_product( cfg, support_of( dist ), {}, &s0 );
  auto const vi = value_iteration( m );
  auto const exact = evaluate_exact( m, vi.policy );

  if ( o.table )
  {
    emit( o, mdp_table_text( m ) );
    return 0;
  }
  if ( o.json_out )
  {
    json initial = json::array();
    for ( auto const& [s, p] : m.initial )
      initial.push_back( { { "task", m.states[s].task.text() }, { "weight", p }, { "value", vi.values[s] } } );
    json policy = json::array();
    for ( std::size_t s = 0; s < m.size(); ++s )
      if ( !m.terminal[s] )
        policy.push_back( { { "state", env_state_to_json( m.states[s].env ) },
                            { "task", m.states[s].task.text() },
                            { "action", vi.policy[s] },
                            { "value", vi.values[s] } } );
    emit( o, dump( { { "schema", schema_name( "solve" ) },
                     { "config", config_echo( "solve", o, seed ) },
                     { "states", m.size() },
                     { "formulas", m.formula_count() },
                     { "sweeps", vi.residuals.size() },
                     { "value", initial_value( m, vi.values ) },
                     { "initial", initial },
                     { "exact",
                       { { "success_rate", exact.success_rate },
                         { "failure_rate", exact.failure_rate },
                         { "nonterminating_rate", exact.nonterminating_rate },
                         { "discounted_return", exact.discounted },
                         { "total_reward", exact.total } } },
                     { "policy", policy } } ) );
  }
  else
  {
    std::ostringstream out;
    out << "states " << m.size() << "\nformulas " << m.formula_count() << "\nsweeps " << vi.residuals.size()
        << "\nvalue " << format_double( initial_value( m, vi.values ) ) << "\nsuccess_rate "
        << format_double( exact.success_rate ) << "\ntotal_reward " << format_double( exact.total ) << "\n";
    emit( o, out.str() );
  }
  return 0;
}

/* builds the named policy; training happens here for qlearn */
policy_fn make_policy( options const& o, env_config const& cfg, task_distribution const& dist, std::uint64_t seed )
{
  if ( o.policy == "random" )
    return uniform_random_policy( cfg.num_actions() );
  if ( o.policy == "optimal" )
  {
    auto p = std::make_shared<optimal_policy>( cfg );
    return [p]( product_state const& s, rng& r ) { return ( *p )( s, r ); };
  }
  if ( o.policy == "qlearn" )
  {
    q_hyper h;
    h.episodes = o.train_episodes;
    h.seed = rng::stream( seed, 1 ).next();
    h.timeout = o.timeout;
    auto q = std::make_shared<q_table>( q_learning( cfg, dist, h ) );
    return [q]( product_state const& s, rng& ) { return q->greedy( s ); };
  }
  if ( o.policy == "myopic-optimal" )
  {
    if ( cfg.is_letter_world() && !std::get<letter_world_config>( cfg.kind ).placement_seed )
      throw invalid_argument_error( "the myopic optimum needs a fixed LetterWorld layout (--placement-seed)" );
    rng r;
    auto const s0 = env_reset( cfg, r );
    auto m = std::make_shared<explicit_mdp>( enumerate_product( cfg, support_of( dist ), {}, &s0 ) );
    auto best = std::make_shared<myopic_result>( best_myopic_policy( *m, cfg.propositions(), cfg.gamma ) );
    return [m, best]( product_state const& s, rng& ) {
      auto const i = m->find( s );
      if ( !i || best->policy[*i] < 0 )
        return 0;
      return best->policy[*i];
    };
  }
  throw usage_error( "unknown policy '" + o.policy + "' (optimal, myopic-optimal, random, qlearn)" );
}

int cmd_run( options const& o )
{
  auto const seed = resolve_seed( o );
  auto const dist = load_tasks( o, seed );
  auto const cfg = load_env( o, dist );
  auto const policy = make_policy( o, cfg, dist, seed );
  auto const n = o.episodes ? o.episodes : 10;
  auto const episodes = run_episodes( cfg, dist, policy, n, seed, o.workers, o.timeout );
  if ( o.json_out )
  {
    json list = json::array();
    for ( auto const& e : episodes )
      list.push_back( episode_to_json( e ) );
    auto cfg_json = config_echo( "run", o, seed );
    cfg_json["policy"] = o.policy;
    emit( o, dump( { { "schema", schema_name( "episodes" ) }, { "config", cfg_json }, { "episodes", list } } ) );
  }
  else
  {
    std::ostringstream out;
    for ( std::size_t i = 0; i < episodes.size(); ++i )
    {
      auto const& e = episodes[i];
      out << i << "\t" << outcome_name( e.outcome ) << "\t" << e.steps.size() << "\t"
          << format_double( e.discounted_return ) << "\t" << e.initial_task.text() << "\n";
    }
    emit( o, out.str() );
  }
  return 0;
}

int cmd_eval( options const& o )
{
  auto const seed = resolve_seed( o );
  auto const dist = load_tasks( o, seed );
  auto const cfg = load_env( o, dist );
  auto const policy = make_policy( o, cfg, dist, seed );
  auto const n = o.episodes ? o.episodes : 1000;
  metrics_row const row{ cfg.name(), tasks_label( o ), o.policy, evaluate( cfg, dist, policy, n, seed, o.workers, o.timeout ) };
  if ( o.json_out )
  {
    auto j = metrics_to_json( row );
    auto cfg_json = config_echo( "eval", o, seed );
    cfg_json["policy"] = o.policy;
    j["config"] = cfg_json;
    emit( o, dump( j ) );
  }
  else
    emit( o, metrics_csv_header() + metrics_csv_row( row ) );
  return 0;
}

vocabulary vocab_for_export( options const& o, formula const& f )
{
  vocabulary v;
  if ( !o.vocab.empty() )
  {
    std::string s = o.vocab;
    for ( char& c : s )
      if ( c == ',' )
        c = ' ';
    std::istringstream in( s );
    std::string p;
    while ( in >> p )
      v.add( p );
    return v;
  }
  auto props = f.propositions();
  std::sort( props.begin(), props.end() );
  for ( auto const& p : props )
    v.add( p );
  return v;
}

feature_mode mode_of( options const& o )
{
  if ( o.features == "onehot" )
    return feature_mode::one_hot();
  if ( o.features == "random" )
    return feature_mode::random_fixed( o.dim, o.feature_seed );
  throw usage_error( "--features takes onehot or random" );
}

int cmd_export( options const& o )
{
  auto const seed = resolve_seed( o );
  if ( o.export_kind == "graph" || o.export_kind == "prefix" )
  {
    if ( o.formula_text.empty() )
      throw usage_error( "export " + o.export_kind + " needs a formula" );
    auto const f = parse( o.formula_text );
    if ( o.export_kind == "prefix" )
    {
      if ( o.json_out )
        emit( o, dump( prefix_to_json( f ) ) );
      else
        emit( o, render( f, notation::prefix ) + "\n" );
      return 0;
    }
    emit( o, dump( graph_to_json( formula_to_graph( f, vocab_for_export( o, f ), mode_of( o ) ) ) ) );
    return 0;
  }
  if ( o.export_kind == "observation" || o.export_kind == "layout" )
  {
    auto const dist = task_preset( default_tasks_for( o.env ), seed );
    auto const cfg = load_env( o, dist );
    if ( cfg.is_bootcamp() )
      throw invalid_argument_error( "bootcamp has no grid to export" );
    auto const s = start_state( cfg, seed );
    if ( o.export_kind == "layout" )
      emit( o, dump( layout_to_json( *s.layout ) ) );
    else
      emit( o, dump( observation_to_json( grid_observation( cfg, s, mode_of( o ), o.egocentric ) ) ) );
    return 0;
  }
  throw usage_error( "export kind must be graph, prefix, observation or layout" );
}

} // namespace

int main( int argc, char** argv )
{
  CLI::App app{ "ltl2a: LTL task progression, procedural tasks, environments and solvers" };
  app.require_subcommand( 1 );
  app.fallthrough();
  options o;

  app.add_option_function<std::uint64_t>( "--seed", [&]( std::uint64_t s ) { o.seed_flag = s; },
                                          "Seed (falls back to LTL2A_SEED, then 20210701)" );
  app.add_flag( "--json", o.json_out, "Machine-readable JSON output" );
  app.add_option( "--out", o.out_path, "Write output to this file instead of stdout" );
  app.add_option( "--workers", o.workers, "Worker threads for check/run/eval" )->check( CLI::PositiveNumber );

  auto const env_opts = [&]( CLI::App* sub ) {
    sub->add_option( "--env", o.env, "letterworld, lockedrooms, bootcamp, or an env .json file" );
    sub->add_option( "--placement-seed", o.placement_seed, "LetterWorld layout seed, or 'random' for a fresh layout per episode" );
    sub->add_option( "--tasks", o.tasks, "Task preset name or a tasks .json file" );
    sub->add_option( "--preset", o.preset, "Task preset name" );
    sub->add_option_function<double>( "--gamma-override", [&]( double g ) { o.gamma_override = g; }, "Override the discount" );
    sub->add_option_function<int>( "--timeout", [&]( int t ) { o.timeout = t; }, "Episode step limit" );
  };

  auto* sample = app.add_subcommand( "sample", "Print sampled tasks" );
  sample->add_option( "--tasks", o.tasks, "Task preset name or a tasks .json file" );
  sample->add_option( "--preset", o.preset, "Task preset name" );
  sample->add_option( "-n,--count", o.count, "Number of tasks" );

  auto* prog = app.add_subcommand( "progress", "Progress a formula through assignments (arguments, or stdin lines)" );
  prog->add_option( "formula", o.formula_text, "Formula" )->required();
  prog->add_option( "assignments", o.assignments, "Assignments such as 'a,b', '{}' or '-'" );

  auto* check = app.add_subcommand( "check", "Randomized progression soundness check" );
  check->add_option( "--cases", o.cases, "Number of random cases" );

  auto* count = app.add_subcommand( "count", "Exact number of tasks in a procedural task space" );
  count->add_option( "--preset", o.preset, "Task preset name" );
  count->add_option( "--tasks", o.tasks, "Task preset name or a tasks .json file" );

  auto* solve = app.add_subcommand( "solve", "Value iteration on the product of an environment and a task space" );
  env_opts( solve );
  solve->add_flag( "--table", o.table, "Print the enumerated product as a text table" );

  auto* run = app.add_subcommand( "run", "Run episodes under a policy" );
  env_opts( run );
  run->add_option( "--policy", o.policy, "optimal, myopic-optimal, random or qlearn" );
  run->add_option( "--episodes", o.episodes, "Episodes to run (default 10)" );
  run->add_option( "--train-episodes", o.train_episodes, "Q-learning training episodes" );

  auto* eval = app.add_subcommand( "eval", "Evaluate a policy; CSV row, or JSON with --json" );
  env_opts( eval );
  eval->add_option( "--policy", o.policy, "optimal, myopic-optimal, random or qlearn" );
  eval->add_option( "--episodes", o.episodes, "Evaluation episodes (default 1000)" );
  eval->add_option( "--train-episodes", o.train_episodes, "Q-learning training episodes" );

  auto* exp = app.add_subcommand( "export", "Export graph, prefix, observation or layout JSON" );
  exp->add_option( "kind", o.export_kind, "graph, prefix, observation or layout" )->required();
  exp->add_option( "formula", o.formula_text, "Formula (graph, prefix)" );
  exp->add_option( "--vocab", o.vocab, "Comma-separated proposition vocabulary" );
  exp->add_option( "--features", o.features, "onehot or random" );
  exp->add_option( "--dim", o.dim, "Random feature dimension" )->check( CLI::PositiveNumber );
  exp->add_option( "--feature-seed", o.feature_seed, "Random feature seed" );
  exp->add_option( "--env", o.env, "letterworld or lockedrooms" );
  exp->add_option( "--placement-seed", o.placement_seed, "LetterWorld layout seed" );
  exp->add_flag( "--egocentric", o.egocentric, "Agent-centred observation window" );

  try
  {
    app.parse( argc, argv );
  }
  catch ( CLI::CallForHelp const& e )
  {
    return app.exit( e );
  }
  catch ( CLI::ParseError const& e )
  {
    std::cerr << app.help() << "\n";
    app.exit( e );
    return 2;
  }

  try
  {
    if ( *sample )
      return cmd_sample( o );
    if ( *prog )
      return cmd_progress( o );
    if ( *check )
      return cmd_check( o );
    if ( *count )
      return cmd_count( o );
    if ( *solve )
      return cmd_solve( o );
    if ( *run )
      return cmd_run( o );
    if ( *eval )
      return cmd_eval( o );
    if ( *exp )
      return cmd_export( o );
  }
  catch ( usage_error const& e )
  {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  }
  catch ( parse_error const& e )
  {
    std::cerr << "error: " << e.what() << " (at offset " << e.offset() << ")\n";
    return 1;
  }
  catch ( std::exception const& e )
  {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
