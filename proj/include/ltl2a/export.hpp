#pragma once

/*!
  \file export.hpp
  \brief Encodings for external learners: formula graphs, token features and
         grid observations.

  A formula graph has one node per AST node (pre-order, root first), a
  self-loop on every node, and one edge from each child to its parent typed
  by the child's position: `unary`, `binary_left` or `binary_right`.

  Token features: the nine operators (true false ! & | X U F G) take indices
  0..8; in one-hot mode propositions follow in vocabulary order. In
  random-fixed mode a proposition is a seeded unit vector of dimension d
  appended after the nine operator slots, and the same vector encodes that
  proposition in grid observations.
*/

#include <ltl2a/envs.hpp>
#include <ltl2a/errors.hpp>
#include <ltl2a/formula.hpp>
#include <ltl2a/rng.hpp>

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ltl2a
{

enum class edge_type : std::uint8_t
{
  self_loop = 0,
  unary = 1,
  binary_left = 2,
  binary_right = 3
};

inline std::string_view edge_type_name( edge_type t )
{
  switch ( t )
  {
  case edge_type::self_loop: return "self";
  case edge_type::unary: return "unary";
  case edge_type::binary_left: return "binary_left";
  case edge_type::binary_right: return "binary_right";
  }
  return "?";
}

inline edge_type edge_type_from_name( std::string_view s )
{
  for ( auto t : { edge_type::self_loop, edge_type::unary, edge_type::binary_left, edge_type::binary_right } )
    if ( edge_type_name( t ) == s )
      return t;
  throw invalid_argument_error( "unknown edge type '" + std::string( s ) + "'" );
}

struct feature_mode
{
  enum class kind_type
  {
    one_hot,
    random_fixed
  };

  kind_type kind = kind_type::one_hot;
  std::size_t dim = 3;
  std::uint64_t seed = default_seed;

  static feature_mode one_hot() { return {}; }
  static feature_mode random_fixed( std::size_t d = 3, std::uint64_t seed = default_seed )
  {
    if ( d == 0 )
      throw invalid_argument_error( "random feature dimension must be positive" );
    return { kind_type::random_fixed, d, seed };
  }

  std::size_t length( vocabulary const& vocab ) const
  {
    return operator_count + ( kind == kind_type::one_hot ? vocab.size() : dim );
  }
};

namespace detail
{

inline std::uint64_t fnv1a( std::string_view s )
{
  std::uint64_t h = 0xcbf29ce484222325ull;
  for ( unsigned char c : s )
  {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

} // namespace detail

/* the seeded unit vector of a proposition; depends only on (name, dim, seed) */
inline std::vector<double> proposition_vector( std::string_view name, std::size_t dim, std::uint64_t seed )
{
  auto r = rng::stream( seed, detail::fnv1a( name ) );
  std::vector<double> v( dim );
  double norm = 0.0;
  do
  {
    norm = 0.0;
    for ( auto& x : v )
    {
      x = r.normal();
      norm += x * x;
    }
  } while ( norm < 1e-24 );
  norm = std::sqrt( norm );
  for ( auto& x : v )
    x /= norm;
  return v;
}

inline std::vector<double> encode_operator( op_kind k, vocabulary const& vocab, feature_mode const& mode )
{
  if ( k == op_kind::prop )
    throw invalid_argument_error( "propositions are not operator tokens" );
  std::vector<double> v( mode.length( vocab ), 0.0 );
  v[static_cast<std::size_t>( operator_index( k ) )] = 1.0;
  return v;
}

inline std::vector<double> encode_proposition( std::string const& name, vocabulary const& vocab, feature_mode const& mode )
{
  auto const i = vocab.index_of( name );
  std::vector<double> v( mode.length( vocab ), 0.0 );
  if ( mode.kind == feature_mode::kind_type::one_hot )
    v[operator_count + i] = 1.0;
  else
  {
    auto const u = proposition_vector( name, mode.dim, mode.seed );
    std::copy( u.begin(), u.end(), v.begin() + operator_count );
  }
  return v;
}

struct graph_node
{
  op_kind kind = op_kind::prop;
  /* operator token, or the proposition name */
  std::string token;
  std::vector<double> features;
};

struct graph_edge
{
  std::size_t src = 0;
  edge_type type = edge_type::self_loop;
  std::size_t dst = 0;

  bool operator==( graph_edge const& ) const = default;
};

struct labeled_graph
{
  std::vector<graph_node> nodes;
  std::vector<graph_edge> edges;
  std::size_t root = 0;

  std::size_t tree_edge_count() const
  {
    std::size_t n = 0;
    for ( auto const& e : edges )
      n += e.type != edge_type::self_loop;
    return n;
  }
};

inline labeled_graph formula_to_graph( formula const& f, vocabulary const& vocab, feature_mode const& mode = {} )
{
  labeled_graph g;
  auto visit = [&]( auto&& self, formula const& node, std::optional<std::size_t> parent, edge_type via ) -> void {
    std::size_t const id = g.nodes.size();
    if ( node.kind() == op_kind::prop )
      g.nodes.push_back( { node.kind(), node.name(), encode_proposition( node.name(), vocab, mode ) } );
    else
      g.nodes.push_back( { node.kind(), std::string( operator_token( node.kind() ) ), encode_operator( node.kind(), vocab, mode ) } );
    g.edges.push_back( { id, edge_type::self_loop, id } );
    if ( parent )
      g.edges.push_back( { id, via, *parent } );
    if ( is_unary( node.kind() ) )
      self( self, node.child(), id, edge_type::unary );
    else if ( is_binary( node.kind() ) )
    {
      self( self, node.left(), id, edge_type::binary_left );
      self( self, node.right(), id, edge_type::binary_right );
    }
  };
  visit( visit, f, std::nullopt, edge_type::self_loop );
  return g;
}

/* inverse of formula_to_graph, from the node kinds/tokens and the typed tree edges */
inline formula graph_to_formula( labeled_graph const& g )
{
  std::size_t const n = g.nodes.size();
  if ( n == 0 || g.root >= n )
    throw invalid_argument_error( "graph has no root" );
  std::vector<std::optional<std::size_t>> unary( n ), left( n ), right( n );
  std::vector<std::size_t> out_degree( n, 0 );
  for ( auto const& e : g.edges )
  {
    if ( e.src >= n || e.dst >= n )
      throw invalid_argument_error( "edge endpoint out of range" );
    if ( e.type == edge_type::self_loop )
    {
      if ( e.src != e.dst )
        throw invalid_argument_error( "self-loop joins two nodes" );
      continue;
    }
    ++out_degree[e.src];
    auto& slot = e.type == edge_type::unary ? unary[e.dst] : e.type == edge_type::binary_left ? left[e.dst] : right[e.dst];
    if ( slot )
      throw invalid_argument_error( "node has two children in the same position" );
    slot = e.src;
  }
  for ( std::size_t i = 0; i < n; ++i )
    if ( out_degree[i] != ( i == g.root ? 0u : 1u ) )
      throw invalid_argument_error( "graph is not a tree rooted at its root" );

  std::size_t built = 0;
  auto build = [&]( auto&& self, std::size_t i, std::size_t depth ) -> formula {
    if ( depth > n )
      throw invalid_argument_error( "graph has a cycle" );
    ++built;
    auto const& node = g.nodes[i];
    auto const need = [&]( std::optional<std::size_t> const& c ) {
      if ( !c )
        throw invalid_argument_error( "operator node is missing an operand" );
      return self( self, *c, depth + 1 );
    };
    switch ( node.kind )
    {
    case op_kind::true_lit: return formula::tt();
    case op_kind::false_lit: return formula::ff();
    case op_kind::prop: return formula::prop( node.token );
    default: break;
    }
    if ( is_unary( node.kind ) )
      return formula::make_unary( node.kind, need( unary[i] ) );
    auto l = need( left[i] );
    return formula::make_binary( node.kind, l, need( right[i] ) );
  };
  auto f = build( build, g.root, 0 );
  if ( built != n )
    throw invalid_argument_error( "graph has nodes unreachable from the root" );
  return f;
}

/*! \brief Grid observation as channel planes, row-major within each plane.

  One-hot: one plane per proposition (vocabulary order) then the agent
  plane. Random-fixed: `dim` planes holding the proposition vector of each
  labelled cell, then the agent plane. The egocentric variant is a window of
  the grid's own size centred on the agent, zero outside the grid.
*/
struct observation
{
  std::size_t channels = 0;
  std::size_t height = 0;
  std::size_t width = 0;
  bool egocentric = false;
  std::vector<double> data;

  double at( std::size_t c, std::size_t r, std::size_t col ) const { return data[( c * height + r ) * width + col]; }

  double plane_sum( std::size_t c ) const
  {
    double s = 0.0;
    for ( std::size_t i = 0; i < height * width; ++i )
      s += data[c * height * width + i];
    return s;
  }
};

inline observation grid_observation( env_config const& config, env_state const& s, feature_mode const& mode = {},
                                     bool egocentric = false )
{
  if ( !s.layout )
    throw invalid_argument_error( "observations need a grid environment" );
  auto const& g = *s.layout;
  auto const vocab = config.propositions();
  bool const one_hot = mode.kind == feature_mode::kind_type::one_hot;
  observation o;
  o.egocentric = egocentric;
  o.height = static_cast<std::size_t>( g.height );
  o.width = static_cast<std::size_t>( g.width );
  o.channels = ( one_hot ? vocab.size() : mode.dim ) + 1;
  o.data.assign( o.channels * o.height * o.width, 0.0 );

  int const off_r = egocentric ? s.row - g.height / 2 : 0;
  int const off_c = egocentric ? s.col - g.width / 2 : 0;
  auto const put = [&]( std::size_t c, std::size_t r, std::size_t col, double x ) {
    o.data[( c * o.height + r ) * o.width + col] = x;
  };
  for ( int r = 0; r < g.height; ++r )
    for ( int c = 0; c < g.width; ++c )
    {
      int const gr = r + off_r, gc = c + off_c;
      if ( !g.inside( gr, gc ) )
        continue;
      auto const& label = g.label( gr, gc );
      if ( !label.empty() )
      {
        if ( one_hot )
          put( vocab.index_of( label ), std::size_t( r ), std::size_t( c ), 1.0 );
        else
        {
          auto const v = proposition_vector( label, mode.dim, mode.seed );
          for ( std::size_t k = 0; k < v.size(); ++k )
            put( k, std::size_t( r ), std::size_t( c ), v[k] );
        }
      }
      if ( gr == s.row && gc == s.col )
        put( o.channels - 1, std::size_t( r ), std::size_t( c ), 1.0 );
    }
  return o;
}

} // namespace ltl2a
