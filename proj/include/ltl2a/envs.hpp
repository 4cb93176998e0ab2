#pragma once

/*!
  \file envs.hpp
  \brief Reward-free, deterministic reference environments with labelling functions.

  LetterWorld: 7x7 grid, every letter on exactly two cells, agent starts in
  the centre. LockedRooms: two rooms behind doors that lock once entered.
  Bootcamp: a single state where each action makes one proposition true.

  Labels are read from the cell the agent occupies after the move.
*/

#include <ltl2a/errors.hpp>
#include <ltl2a/formula.hpp>
#include <ltl2a/rng.hpp>
#include <ltl2a/taskgen.hpp>

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace ltl2a
{

enum class direction : int
{
  north = 0,
  south = 1,
  east = 2,
  west = 3
};

inline constexpr std::string_view direction_name( int a )
{
  constexpr std::string_view names[] = { "north", "south", "east", "west" };
  return a >= 0 && a < 4 ? names[a] : "?";
}

enum class lock_flag : std::uint8_t
{
  none = 0,
  locked_a = 1,
  locked_b = 2
};

struct letter_world_config
{
  int width = 7;
  int height = 7;
  vocabulary letters = ltl2a::letters( 12 );
  /* pins the layout; otherwise every reset draws a fresh one */
  std::optional<std::uint64_t> placement_seed;
};

struct locked_rooms_config
{
};

struct bootcamp_config
{
  vocabulary vocab;
};

struct env_config
{
  std::variant<letter_world_config, locked_rooms_config, bootcamp_config> kind;
  double gamma = 0.9;
  int timeout = 75;

  static env_config letter_world( std::optional<std::uint64_t> placement_seed = std::nullopt,
                                  vocabulary letters = ltl2a::letters( 12 ) )
  {
    return { letter_world_config{ 7, 7, std::move( letters ), placement_seed }, 0.94, 75 };
  }

  static env_config locked_rooms() { return { locked_rooms_config{}, 0.9, 75 }; }

  static env_config bootcamp( vocabulary vocab ) { return { bootcamp_config{ std::move( vocab ) }, 0.9, 75 }; }

  bool is_letter_world() const { return std::holds_alternative<letter_world_config>( kind ); }
  bool is_locked_rooms() const { return std::holds_alternative<locked_rooms_config>( kind ); }
  bool is_bootcamp() const { return std::holds_alternative<bootcamp_config>( kind ); }

  std::string name() const
  {
    return is_letter_world() ? "letterworld" : is_locked_rooms() ? "lockedrooms" : "bootcamp";
  }

  std::size_t num_actions() const
  {
    if ( auto const* b = std::get_if<bootcamp_config>( &kind ) )
      return b->vocab.size();
    return 4;
  }

  /* propositions the labelling function can emit */
  vocabulary propositions() const
  {
    if ( auto const* b = std::get_if<bootcamp_config>( &kind ) )
      return b->vocab;
    if ( auto const* l = std::get_if<letter_world_config>( &kind ) )
      return l->letters;
    return vocabulary{ "B", "R", "G" };
  }

  void validate() const
  {
    if ( !( gamma > 0.0 && gamma <= 1.0 ) )
      throw invalid_argument_error( "discount must lie in (0, 1]" );
    if ( timeout < 1 )
      throw invalid_argument_error( "timeout must be positive" );
    if ( auto const* l = std::get_if<letter_world_config>( &kind ) )
    {
      if ( l->width < 1 || l->height < 1 )
        throw invalid_argument_error( "grid must be nonempty" );
      if ( 2 * l->letters.size() + 1 > static_cast<std::size_t>( l->width * l->height ) )
        throw invalid_argument_error( "grid too small for two cells per letter" );
    }
    if ( auto const* b = std::get_if<bootcamp_config>( &kind ); b && b->vocab.empty() )
      throw invalid_argument_error( "bootcamp needs at least one proposition" );
  }
};

enum class cell_type : std::uint8_t
{
  floor,
  wall,
  door_a,
  door_b
};

/*! \brief Immutable grid: cell types and the proposition (if any) on each cell. */
struct grid_layout
{
  int width = 0;
  int height = 0;
  std::vector<cell_type> cells;
  std::vector<std::string> labels;
  int start_row = 0;
  int start_col = 0;
  std::uint64_t seed = 0;

  std::size_t index( int row, int col ) const { return static_cast<std::size_t>( row * width + col ); }
  bool inside( int row, int col ) const { return row >= 0 && row < height && col >= 0 && col < width; }
  cell_type type( int row, int col ) const { return cells[index( row, col )]; }
  std::string const& label( int row, int col ) const { return labels[index( row, col )]; }

  std::vector<std::string> ascii() const
  {
    std::vector<std::string> rows;
    for ( int r = 0; r < height; ++r )
    {
      std::string line;
      for ( int c = 0; c < width; ++c )
      {
        switch ( type( r, c ) )
        {
        case cell_type::wall: line += '#'; break;
        case cell_type::door_a: line += '['; break;
        case cell_type::door_b: line += ']'; break;
        case cell_type::floor:
          if ( !label( r, c ).empty() )
            line += label( r, c );
          else
            line += ( r == start_row && c == start_col ) ? '@' : '.';
          break;
        }
      }
      rows.push_back( std::move( line ) );
    }
    return rows;
  }
};

/*! \brief Fixed LockedRooms map.

      B..###..B
      ...[@]...
      R..###..G

  `@` is the corridor start, `[` and `]` the doors of room A (left) and
  room B (right). Walking into a door from the corridor carries the agent
  through it into the room and locks that room; doors never open again.
*/
inline std::vector<std::string> const& locked_rooms_map()
{
  static std::vector<std::string> const map = { "B..###..B", "...[@]...", "R..###..G" };
  return map;
}

inline std::shared_ptr<grid_layout const> make_locked_rooms_layout()
{
  static std::shared_ptr<grid_layout const> const layout = [] {
    auto g = std::make_shared<grid_layout>();
    auto const& map = locked_rooms_map();
    g->height = static_cast<int>( map.size() );
    g->width = static_cast<int>( map.front().size() );
    g->cells.assign( static_cast<std::size_t>( g->width * g->height ), cell_type::floor );
    g->labels.assign( g->cells.size(), "" );
    for ( int r = 0; r < g->height; ++r )
      for ( int c = 0; c < g->width; ++c )
      {
        char const ch = map[r][c];
        auto const i = g->index( r, c );
        if ( ch == '#' )
          g->cells[i] = cell_type::wall;
        else if ( ch == '[' )
          g->cells[i] = cell_type::door_a;
        else if ( ch == ']' )
          g->cells[i] = cell_type::door_b;
        else if ( ch == '@' )
        {
          g->start_row = r;
          g->start_col = c;
        }
        else if ( ch != '.' )
          g->labels[i] = std::string( 1, ch );
      }
    return g;
  }();
  return layout;
}

/*! \brief Random LetterWorld layout: 2|letters| distinct non-start cells,
    letters assigned in vocabulary order, two consecutive cells each. */
inline std::shared_ptr<grid_layout const> make_letter_world_layout( letter_world_config const& cfg, std::uint64_t seed )
{
  auto g = std::make_shared<grid_layout>();
  g->width = cfg.width;
  g->height = cfg.height;
  g->start_row = cfg.height / 2;
  g->start_col = cfg.width / 2;
  g->seed = seed;
  g->cells.assign( static_cast<std::size_t>( cfg.width * cfg.height ), cell_type::floor );
  g->labels.assign( g->cells.size(), "" );

  std::vector<std::size_t> candidates;
  for ( std::size_t i = 0; i < g->cells.size(); ++i )
    if ( i != g->index( g->start_row, g->start_col ) )
      candidates.push_back( i );

  rng r( seed );
  std::size_t const needed = 2 * cfg.letters.size();
  for ( std::size_t i = 0; i < needed; ++i )
  {
    auto const j = i + r.below( candidates.size() - i );
    std::swap( candidates[i], candidates[j] );
    g->labels[candidates[i]] = cfg.letters[i / 2];
  }
  return g;
}

/*! \brief Environment state. LetterWorld and LockedRooms states share their layout. */
struct env_state
{
  int row = 0;
  int col = 0;
  lock_flag lock = lock_flag::none;
  std::shared_ptr<grid_layout const> layout;

  /* dense key, unique within one layout */
  std::uint64_t key() const
  {
    if ( !layout )
      return 0;
    return ( static_cast<std::uint64_t>( row ) * static_cast<std::uint64_t>( layout->width ) +
             static_cast<std::uint64_t>( col ) ) *
               3u +
           static_cast<std::uint64_t>( lock );
  }

  bool operator==( env_state const& o ) const
  {
    return row == o.row && col == o.col && lock == o.lock && layout == o.layout;
  }
};

inline env_state env_reset( env_config const& config, rng& r )
{
  config.validate();
  if ( auto const* lw = std::get_if<letter_world_config>( &config.kind ) )
  {
    std::uint64_t const seed = lw->placement_seed ? *lw->placement_seed : r.next();
    auto layout = make_letter_world_layout( *lw, seed );
    return { layout->start_row, layout->start_col, lock_flag::none, layout };
  }
  if ( config.is_locked_rooms() )
  {
    auto layout = make_locked_rooms_layout();
    return { layout->start_row, layout->start_col, lock_flag::none, layout };
  }
  return {};
}

inline void check_action( env_config const& config, int action )
{
  if ( action < 0 || static_cast<std::size_t>( action ) >= config.num_actions() )
    throw invalid_action_error( "action " + std::to_string( action ) + " invalid for " + config.name() );
}

inline env_state env_step( env_config const& config, env_state const& s, int action )
{
  check_action( config, action );
  if ( config.is_bootcamp() )
    return s;

  static constexpr int dr[] = { -1, 1, 0, 0 };
  static constexpr int dc[] = { 0, 0, 1, -1 };
  auto const& g = *s.layout;
  env_state next = s;
  int const r = s.row + dr[action];
  int const c = s.col + dc[action];
  if ( !g.inside( r, c ) )
    return s;
  switch ( g.type( r, c ) )
  {
  case cell_type::wall:
    return s;
  case cell_type::floor:
    next.row = r;
    next.col = c;
    return next;
  case cell_type::door_a:
  case cell_type::door_b:
  {
    if ( s.lock != lock_flag::none )
      return s;
    int const r2 = r + dr[action];
    int const c2 = c + dc[action];
    if ( !g.inside( r2, c2 ) || g.type( r2, c2 ) != cell_type::floor )
      return s;
    next.row = r2;
    next.col = c2;
    next.lock = g.type( r, c ) == cell_type::door_a ? lock_flag::locked_a : lock_flag::locked_b;
    return next;
  }
  }
  return s;
}

/* L(s, a): propositions true after taking `action` in `s` */
inline truth_assignment env_label( env_config const& config, env_state const& s, int action )
{
  check_action( config, action );
  if ( auto const* b = std::get_if<bootcamp_config>( &config.kind ) )
    return truth_assignment{ b->vocab[static_cast<std::size_t>( action )] };
  auto const next = env_step( config, s, action );
  auto const& label = next.layout->label( next.row, next.col );
  if ( label.empty() )
    return {};
  return truth_assignment{ label };
}

} // namespace ltl2a
