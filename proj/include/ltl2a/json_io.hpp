#pragma once

/*!
  \file json_io.hpp
  \brief JSON documents for graphs, observations, episodes, metrics and parameter files.

  Every document carries a `schema` string ("ltl2a.<name>/<version>").
  Objects are written with sorted keys, so identical payloads serialize to
  identical bytes. Graph features are decimal strings (shortest round-trip
  form) so consumers can recover the exact doubles.
*/

#include <ltl2a/envs.hpp>
#include <ltl2a/errors.hpp>
#include <ltl2a/export.hpp>
#include <ltl2a/guidance.hpp>
#include <ltl2a/parse.hpp>
#include <ltl2a/product.hpp>
#include <ltl2a/solve.hpp>
#include <ltl2a/taskgen.hpp>

#include <json.hpp>

#include <charconv>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>

namespace ltl2a
{

using json = nlohmann::json;

inline constexpr int schema_version = 1;

inline std::string schema_name( std::string_view what ) { return "ltl2a." + std::string( what ) + "/" + std::to_string( schema_version ); }

/* shortest decimal text that reads back as exactly `x` */
inline std::string format_double( double x )
{
  char buf[64];
  auto const res = std::to_chars( buf, buf + sizeof( buf ), x );
  return std::string( buf, res.ptr );
}

inline double parse_double( std::string const& s )
{
  double x = 0.0;
  auto const res = std::from_chars( s.data(), s.data() + s.size(), x );
  if ( res.ec != std::errc() || res.ptr != s.data() + s.size() )
    throw invalid_argument_error( "not a decimal number: '" + s + "'" );
  return x;
}

inline std::string dump( json const& j ) { return j.dump( 2 ) + "\n"; }

inline void check_schema( json const& j, std::string_view what )
{
  if ( !j.is_object() || !j.contains( "schema" ) || j.at( "schema" ) != schema_name( what ) )
    throw invalid_argument_error( "expected a " + schema_name( what ) + " document" );
}

/* ---- formulas and graphs ---- */

inline json graph_to_json( labeled_graph const& g )
{
  json nodes = json::array();
  for ( std::size_t i = 0; i < g.nodes.size(); ++i )
  {
    json features = json::array();
    for ( double x : g.nodes[i].features )
      features.push_back( format_double( x ) );
    nodes.push_back( { { "id", i },
                       { "token", g.nodes[i].token },
                       { "kind", g.nodes[i].kind == op_kind::prop ? "proposition" : "operator" },
                       { "features", std::move( features ) } } );
  }
  json edges = json::array();
  for ( auto const& e : g.edges )
    edges.push_back( { { "src", e.src }, { "type", edge_type_name( e.type ) }, { "dst", e.dst } } );
  return { { "schema", schema_name( "graph" ) }, { "nodes", std::move( nodes ) }, { "edges", std::move( edges ) }, { "root", g.root } };
}

inline labeled_graph graph_from_json( json const& j )
{
  check_schema( j, "graph" );
  labeled_graph g;
  g.root = j.at( "root" ).get<std::size_t>();
  for ( auto const& n : j.at( "nodes" ) )
  {
    graph_node node;
    node.token = n.at( "token" ).get<std::string>();
    if ( n.at( "kind" ) == "proposition" )
      node.kind = op_kind::prop;
    else
    {
      bool found = false;
      for ( auto k : { op_kind::true_lit, op_kind::false_lit, op_kind::not_, op_kind::and_, op_kind::or_, op_kind::next,
                       op_kind::until, op_kind::eventually, op_kind::always } )
        if ( operator_token( k ) == node.token )
        {
          node.kind = k;
          found = true;
        }
      if ( !found )
        throw invalid_argument_error( "unknown operator token '" + node.token + "'" );
    }
    for ( auto const& x : n.at( "features" ) )
      node.features.push_back( parse_double( x.get<std::string>() ) );
    g.nodes.push_back( std::move( node ) );
  }
  for ( auto const& e : j.at( "edges" ) )
    g.edges.push_back( { e.at( "src" ).get<std::size_t>(), edge_type_from_name( e.at( "type" ).get<std::string>() ),
                         e.at( "dst" ).get<std::size_t>() } );
  return g;
}

inline json prefix_to_json( formula const& f )
{
  return { { "schema", schema_name( "prefix" ) }, { "formula", f.text() }, { "tokens", prefix_tokens( f ) } };
}

inline json observation_to_json( observation const& o )
{
  json planes = json::array();
  for ( std::size_t c = 0; c < o.channels; ++c )
  {
    json rows = json::array();
    for ( std::size_t r = 0; r < o.height; ++r )
    {
      json row = json::array();
      for ( std::size_t col = 0; col < o.width; ++col )
        row.push_back( o.at( c, r, col ) );
      rows.push_back( std::move( row ) );
    }
    planes.push_back( std::move( rows ) );
  }
  return { { "schema", schema_name( "observation" ) },
           { "shape", { o.channels, o.height, o.width } },
           { "egocentric", o.egocentric },
           { "planes", std::move( planes ) } };
}

inline json classification_to_json( classification const& c )
{
  json effects = json::object();
  for ( std::size_t i = 0; i < c.props.size(); ++i )
    effects[c.props[i]] = effect_name( c.effects[i] );
  return { { "schema", schema_name( "classification" ) }, { "effects", std::move( effects ) } };
}

inline json layout_to_json( grid_layout const& g )
{
  json cells = json::array();
  for ( int r = 0; r < g.height; ++r )
    for ( int c = 0; c < g.width; ++c )
      if ( !g.label( r, c ).empty() )
        cells.push_back( { { "row", r }, { "col", c }, { "label", g.label( r, c ) } } );
  return { { "schema", schema_name( "layout" ) },
           { "width", g.width },
           { "height", g.height },
           { "seed", g.seed },
           { "start", { g.start_row, g.start_col } },
           { "map", g.ascii() },
           { "labels", std::move( cells ) } };
}

/* ---- episodes and metrics ---- */

inline json env_state_to_json( env_state const& s )
{
  return { { "row", s.row }, { "col", s.col }, { "lock", static_cast<int>( s.lock ) } };
}

inline json episode_to_json( episode_record const& e )
{
  json steps = json::array();
  for ( auto const& s : e.steps )
    steps.push_back( { { "state", env_state_to_json( s.env ) },
                       { "action", s.action },
                       { "label", s.label.members() },
                       { "task", s.task.text() },
                       { "reward", s.reward } } );
  return { { "schema", schema_name( "episode" ) },
           { "task", e.initial_task.text() },
           { "outcome", outcome_name( e.outcome ) },
           { "discounted_return", e.discounted_return },
           { "total_reward", e.total_reward },
           { "gamma", e.gamma },
           { "steps", std::move( steps ) } };
}

struct metrics_row
{
  std::string env;
  std::string task_dist;
  std::string policy;
  metrics m;
};

inline json metrics_to_json( metrics_row const& row )
{
  auto const& m = row.m;
  return { { "schema", schema_name( "metrics" ) },
           { "env", row.env },
           { "task_dist", row.task_dist },
           { "policy", row.policy },
           { "n", m.n },
           { "success_rate", m.success_rate() },
           { "failure_rate", m.failure_rate() },
           { "timeout_rate", m.timeout_rate() },
           { "mean_discounted_return", m.mean_discounted_return },
           { "mean_total_reward", m.mean_total_reward },
           { "ci90", m.ci90 } };
}

inline std::string metrics_csv_header()
{
  return "env,task_dist,policy,n,success_rate,mean_discounted_return,mean_total_reward,ci90\n";
}

inline std::string metrics_csv_row( metrics_row const& row )
{
  auto const& m = row.m;
  return row.env + "," + row.task_dist + "," + row.policy + "," + std::to_string( m.n ) + "," +
         format_double( m.success_rate() ) + "," + format_double( m.mean_discounted_return ) + "," +
         format_double( m.mean_total_reward ) + "," + format_double( m.ci90 ) + "\n";
}

/* ---- parameter files ---- */

inline json vocab_to_json( vocabulary const& v ) { return v.names(); }

inline vocabulary vocab_from_json( json const& j )
{
  vocabulary v;
  for ( auto const& p : j )
  {
    auto name = p.get<std::string>();
    if ( !is_valid_proposition_name( name ) )
      throw invalid_argument_error( "invalid proposition name '" + name + "'" );
    v.add( name );
  }
  return v;
}

inline json range_to_json( int_range r ) { return { r.min, r.max }; }

inline int_range range_from_json( json const& j )
{
  if ( j.is_number_integer() )
    return { j.get<int>(), j.get<int>() };
  if ( !j.is_array() || j.size() != 2 )
    throw invalid_argument_error( "a range is an integer or a [min, max] pair" );
  return { j[0].get<int>(), j[1].get<int>() };
}

inline json task_distribution_to_json( task_distribution const& d )
{
  json j{ { "schema", schema_name( "tasks" ) }, { "seed", d.seed() } };
  if ( auto const* p = std::get_if<partially_ordered_params>( &d.kind() ) )
  {
    j["kind"] = "partially_ordered";
    j["conjuncts"] = range_to_json( p->conjuncts );
    j["depth"] = range_to_json( p->depth );
    j["disjunction_prob"] = p->disjunction_prob;
    j["vocab"] = vocab_to_json( p->vocab );
  }
  else if ( auto const* a = std::get_if<avoidance_params>( &d.kind() ) )
  {
    j["kind"] = "avoidance";
    j["conjuncts"] = range_to_json( a->conjuncts );
    j["depth"] = range_to_json( a->depth );
    j["vocab"] = vocab_to_json( a->vocab );
  }
  else
  {
    j["kind"] = "explicit";
    json tasks = json::array();
    for ( auto const& w : std::get<task_distribution::explicit_list>( d.kind() ) )
      tasks.push_back( { { "formula", w.task.text() }, { "weight", w.weight } } );
    j["tasks"] = std::move( tasks );
  }
  return j;
}

inline task_distribution task_distribution_from_json( json const& j, std::optional<std::uint64_t> seed_override = std::nullopt )
{
  check_schema( j, "tasks" );
  std::uint64_t const seed = seed_override ? *seed_override : j.value( "seed", default_seed );
  auto const kind = j.at( "kind" ).get<std::string>();
  if ( kind == "partially_ordered" )
    return task_distribution( partially_ordered_params{ range_from_json( j.at( "conjuncts" ) ), range_from_json( j.at( "depth" ) ),
                                                        j.value( "disjunction_prob", 0.25 ), vocab_from_json( j.at( "vocab" ) ) },
                              seed );
  if ( kind == "avoidance" )
    return task_distribution( avoidance_params{ range_from_json( j.at( "conjuncts" ) ), range_from_json( j.at( "depth" ) ),
                                                vocab_from_json( j.at( "vocab" ) ) },
                              seed );
  if ( kind == "explicit" )
  {
    task_distribution::explicit_list list;
    for ( auto const& t : j.at( "tasks" ) )
      list.push_back( { parse( t.at( "formula" ).get<std::string>() ), t.value( "weight", 1.0 ) } );
    return task_distribution( std::move( list ), seed );
  }
  throw invalid_argument_error( "unknown task distribution kind '" + kind + "'" );
}

inline json env_config_to_json( env_config const& c )
{
  json j{ { "schema", schema_name( "env" ) }, { "kind", c.name() }, { "gamma", c.gamma }, { "timeout", c.timeout } };
  if ( auto const* l = std::get_if<letter_world_config>( &c.kind ) )
  {
    j["width"] = l->width;
    j["height"] = l->height;
    j["letters"] = vocab_to_json( l->letters );
    j["placement_seed"] = l->placement_seed ? json( *l->placement_seed ) : json( nullptr );
  }
  else if ( auto const* b = std::get_if<bootcamp_config>( &c.kind ) )
    j["vocab"] = vocab_to_json( b->vocab );
  return j;
}

inline env_config env_config_from_json( json const& j )
{
  check_schema( j, "env" );
  auto const kind = j.at( "kind" ).get<std::string>();
  env_config c;
  if ( kind == "letterworld" )
  {
    letter_world_config l;
    l.width = j.value( "width", 7 );
    l.height = j.value( "height", 7 );
    if ( j.contains( "letters" ) )
      l.letters = vocab_from_json( j.at( "letters" ) );
    if ( j.contains( "placement_seed" ) && !j.at( "placement_seed" ).is_null() )
      l.placement_seed = j.at( "placement_seed" ).get<std::uint64_t>();
    c = { l, 0.94, 75 };
  }
  else if ( kind == "lockedrooms" )
    c = env_config::locked_rooms();
  else if ( kind == "bootcamp" )
    c = env_config::bootcamp( vocab_from_json( j.at( "vocab" ) ) );
  else
    throw invalid_argument_error( "unknown environment kind '" + kind + "'" );
  c.gamma = j.value( "gamma", c.gamma );
  c.timeout = j.value( "timeout", c.timeout );
  c.validate();
  return c;
}

/* ---- explicit product, as a plain-text table for debugging ---- */

inline std::string mdp_table_text( explicit_mdp const& m )
{
  std::ostringstream out;
  out << "# states " << m.size() << " actions " << m.num_actions << " gamma " << format_double( m.gamma ) << "\n";
  out << "# initial";
  for ( auto const& [s, p] : m.initial )
    out << " " << s << ":" << format_double( p );
  out << "\n";
  for ( std::size_t s = 0; s < m.size(); ++s )
  {
    auto const& st = m.states[s];
    out << s << "\t(" << st.env.row << "," << st.env.col << "," << int( st.env.lock ) << ")\t" << st.task.text();
    if ( m.terminal[s] )
      out << "\tterminal";
    else
      for ( std::size_t a = 0; a < m.num_actions; ++a )
        out << "\t" << m.next( s, a ) << ":" << format_double( m.reward_at( s, a ) );
    out << "\n";
  }
  return out.str();
}

inline json read_json_file( std::string const& path )
{
  std::ifstream in( path );
  if ( !in )
    throw invalid_argument_error( "cannot open '" + path + "'" );
  try
  {
    return json::parse( in );
  }
  catch ( json::parse_error const& e )
  {
    throw invalid_argument_error( "malformed JSON in '" + path + "': " + e.what() );
  }
}

} // namespace ltl2a
