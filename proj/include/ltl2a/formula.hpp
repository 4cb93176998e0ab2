#pragma once

/*!
  \file formula.hpp
  \brief Immutable LTL formulas, propositions, vocabularies and traces.

  A formula is a shared, immutable tree. Every node carries its size, a
  structural hash and its standalone infix rendering, all computed once at
  construction. Equality is structural.
*/

#include <ltl2a/errors.hpp>

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace ltl2a
{

enum class op_kind : std::uint8_t
{
  true_lit,
  false_lit,
  prop,
  not_,
  and_,
  or_,
  next,
  until,
  eventually,
  always
};

inline constexpr std::size_t operator_count = 9;

/* stable operator token index, used by the one-hot encodings; props have none */
inline constexpr int operator_index( op_kind k )
{
  switch ( k )
  {
  case op_kind::true_lit: return 0;
  case op_kind::false_lit: return 1;
  case op_kind::not_: return 2;
  case op_kind::and_: return 3;
  case op_kind::or_: return 4;
  case op_kind::next: return 5;
  case op_kind::until: return 6;
  case op_kind::eventually: return 7;
  case op_kind::always: return 8;
  case op_kind::prop: return -1;
  }
  return -1;
}

inline constexpr std::string_view operator_token( op_kind k )
{
  switch ( k )
  {
  case op_kind::true_lit: return "true";
  case op_kind::false_lit: return "false";
  case op_kind::not_: return "!";
  case op_kind::and_: return "&";
  case op_kind::or_: return "|";
  case op_kind::next: return "X";
  case op_kind::until: return "U";
  case op_kind::eventually: return "F";
  case op_kind::always: return "G";
  case op_kind::prop: return "";
  }
  return "";
}

inline constexpr bool is_unary( op_kind k )
{
  return k == op_kind::not_ || k == op_kind::next || k == op_kind::eventually || k == op_kind::always;
}

inline constexpr bool is_binary( op_kind k )
{
  return k == op_kind::and_ || k == op_kind::or_ || k == op_kind::until;
}

/* binding strength used by the infix printer and the parser */
inline constexpr int precedence( op_kind k )
{
  switch ( k )
  {
  case op_kind::or_: return 1;
  case op_kind::and_: return 2;
  case op_kind::until: return 3;
  case op_kind::not_:
  case op_kind::next:
  case op_kind::eventually:
  case op_kind::always: return 4;
  default: return 5;
  }
}

/* letters/digits/underscore, starting with a letter; `true`, `false` and `U` are reserved */
inline bool is_valid_proposition_name( std::string_view name )
{
  if ( name.empty() )
    return false;
  auto const alpha = []( char c ) { return ( c >= 'a' && c <= 'z' ) || ( c >= 'A' && c <= 'Z' ); };
  auto const digit = []( char c ) { return c >= '0' && c <= '9'; };
  if ( !alpha( name.front() ) )
    return false;
  for ( char c : name )
    if ( !alpha( c ) && !digit( c ) && c != '_' )
      return false;
  return name != "true" && name != "false" && name != "U";
}

class formula
{
  struct node;

public:
  /* default-constructed formula is `true` */
  formula() : formula( tt() ) {}

  static formula tt()
  {
    static formula const f( make( op_kind::true_lit, {}, {}, {} ) );
    return f;
  }

  static formula ff()
  {
    static formula const f( make( op_kind::false_lit, {}, {}, {} ) );
    return f;
  }

  static formula prop( std::string name )
  {
    if ( !is_valid_proposition_name( name ) )
      throw invalid_argument_error( "invalid proposition name '" + name + "'" );
    return make( op_kind::prop, std::move( name ), {}, {} );
  }

  static formula make_not( formula const& f ) { return make( op_kind::not_, {}, f, {} ); }
  static formula make_next( formula const& f ) { return make( op_kind::next, {}, f, {} ); }
  static formula make_eventually( formula const& f ) { return make( op_kind::eventually, {}, f, {} ); }
  static formula make_always( formula const& f ) { return make( op_kind::always, {}, f, {} ); }
  static formula make_and( formula const& l, formula const& r ) { return make( op_kind::and_, {}, l, r ); }
  static formula make_or( formula const& l, formula const& r ) { return make( op_kind::or_, {}, l, r ); }
  static formula make_until( formula const& l, formula const& r ) { return make( op_kind::until, {}, l, r ); }

  static formula make_unary( op_kind k, formula const& f ) { return make( k, {}, f, {} ); }
  static formula make_binary( op_kind k, formula const& l, formula const& r ) { return make( k, {}, l, r ); }

  op_kind kind() const noexcept { return node_->kind; }
  bool is_true() const noexcept { return node_->kind == op_kind::true_lit; }
  bool is_false() const noexcept { return node_->kind == op_kind::false_lit; }
  bool is_constant() const noexcept { return is_true() || is_false(); }

  /* proposition name; empty for operators */
  std::string const& name() const noexcept { return node_->name; }

  /* operand of a unary node, left operand of a binary node */
  formula const& child() const noexcept { return *node_->lhs; }
  formula const& left() const noexcept { return *node_->lhs; }
  formula const& right() const noexcept { return *node_->rhs; }

  std::size_t size() const noexcept { return node_->size; }
  std::size_t hash() const noexcept { return node_->hash; }

  /* standalone infix rendering; parses back to this exact tree */
  std::string const& text() const noexcept { return node_->text; }

  bool operator==( formula const& other ) const noexcept
  {
    if ( node_ == other.node_ )
      return true;
    return node_->hash == other.node_->hash && node_->size == other.node_->size && node_->text == other.node_->text;
  }

  bool operator!=( formula const& other ) const noexcept { return !( *this == other ); }

  /* same shared node, not merely equal */
  bool identical( formula const& other ) const noexcept { return node_ == other.node_; }

  /* collects proposition names in order of first appearance (pre-order) */
  std::vector<std::string> propositions() const
  {
    std::vector<std::string> out;
    collect_props( *this, out );
    return out;
  }

private:
  struct node
  {
    op_kind kind;
    std::string name;
    std::unique_ptr<formula const> lhs;
    std::unique_ptr<formula const> rhs;
    std::size_t size = 1;
    std::size_t hash = 0;
    std::string text;
  };

  explicit formula( std::shared_ptr<node const> n ) : node_( std::move( n ) ) {}

  static void collect_props( formula const& f, std::vector<std::string>& out )
  {
    if ( f.kind() == op_kind::prop )
    {
      if ( std::find( out.begin(), out.end(), f.name() ) == out.end() )
        out.push_back( f.name() );
      return;
    }
    if ( is_unary( f.kind() ) )
      collect_props( f.child(), out );
    else if ( is_binary( f.kind() ) )
    {
      collect_props( f.left(), out );
      collect_props( f.right(), out );
    }
  }

  static std::size_t mix( std::size_t h, std::size_t v )
  {
    return h ^ ( v + 0x9e3779b97f4a7c15ull + ( h << 6 ) + ( h >> 2 ) );
  }

  static std::string wrap( formula const& f, bool parens )
  {
    return parens ? "(" + f.text() + ")" : f.text();
  }

  static formula make( op_kind k, std::string name, std::optional<formula> const& l, std::optional<formula> const& r );

  std::shared_ptr<node const> node_;
};

inline formula formula::make( op_kind k, std::string name, std::optional<formula> const& l, std::optional<formula> const& r )
{
  auto n = std::make_shared<node>();
  n->kind = k;
  n->hash = mix( 0xcbf29ce484222325ull, static_cast<std::size_t>( k ) );
  if ( k == op_kind::prop )
  {
    n->hash = mix( n->hash, std::hash<std::string>{}( name ) );
    n->text = name;
    n->name = std::move( name );
  }
  else if ( k == op_kind::true_lit || k == op_kind::false_lit )
  {
    n->text = std::string( operator_token( k ) );
  }
  else if ( is_unary( k ) )
  {
    n->lhs = std::make_unique<formula const>( *l );
    n->size = 1 + l->size();
    n->hash = mix( n->hash, l->hash() );
    bool const parens = is_binary( l->kind() );
    /* `!` hugs its operand, the letter operators need a separator */
    n->text = k == op_kind::not_ ? "!" + wrap( *l, parens )
                                 : std::string( operator_token( k ) ) + " " + wrap( *l, parens );
  }
  else
  {
    n->lhs = std::make_unique<formula const>( *l );
    n->rhs = std::make_unique<formula const>( *r );
    n->size = 1 + l->size() + r->size();
    n->hash = mix( mix( n->hash, l->hash() ), r->hash() );
    /* all binary operators are right-associative */
    int const p = precedence( k );
    bool const lp = precedence( l->kind() ) <= p;
    bool const rp = precedence( r->kind() ) < p;
    n->text = wrap( *l, lp ) + " " + std::string( operator_token( k ) ) + " " + wrap( *r, rp );
  }
  return formula( std::move( n ) );
}

struct formula_hash
{
  std::size_t operator()( formula const& f ) const noexcept { return f.hash(); }
};

/*! \brief Ordered set of propositions with stable positions 0..n-1. */
class vocabulary
{
public:
  vocabulary() = default;

  vocabulary( std::initializer_list<std::string> names )
  {
    for ( auto const& n : names )
      add( n );
  }

  explicit vocabulary( std::vector<std::string> const& names )
  {
    for ( auto const& n : names )
      add( n );
  }

  /* registers `name` if absent; returns its position */
  std::size_t add( std::string const& name )
  {
    if ( auto it = index_.find( name ); it != index_.end() )
      return it->second;
    if ( !is_valid_proposition_name( name ) )
      throw invalid_argument_error( "invalid proposition name '" + name + "'" );
    index_.emplace( name, names_.size() );
    names_.push_back( name );
    return names_.size() - 1;
  }

  bool contains( std::string const& name ) const { return index_.count( name ) != 0; }

  std::size_t index_of( std::string const& name ) const
  {
    auto it = index_.find( name );
    if ( it == index_.end() )
      throw unknown_proposition_error( name );
    return it->second;
  }

  std::string const& operator[]( std::size_t i ) const { return names_.at( i ); }
  std::size_t size() const noexcept { return names_.size(); }
  bool empty() const noexcept { return names_.empty(); }
  std::vector<std::string> const& names() const noexcept { return names_; }

  auto begin() const noexcept { return names_.begin(); }
  auto end() const noexcept { return names_.end(); }

  bool operator==( vocabulary const& other ) const { return names_ == other.names_; }

private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::size_t> index_;
};

/*! \brief The set of propositions that hold at one time step. */
class truth_assignment
{
public:
  truth_assignment() = default;

  truth_assignment( std::initializer_list<std::string> names ) : members_( names ) { normalize(); }

  explicit truth_assignment( std::vector<std::string> names ) : members_( std::move( names ) ) { normalize(); }

  bool contains( std::string_view name ) const
  {
    return std::binary_search( members_.begin(), members_.end(), name,
                               []( auto const& a, auto const& b ) { return std::string_view( a ) < std::string_view( b ); } );
  }

  std::vector<std::string> const& members() const noexcept { return members_; }
  std::size_t size() const noexcept { return members_.size(); }
  bool empty() const noexcept { return members_.empty(); }

  bool operator==( truth_assignment const& other ) const { return members_ == other.members_; }
  bool operator!=( truth_assignment const& other ) const { return members_ != other.members_; }
  bool operator<( truth_assignment const& other ) const { return members_ < other.members_; }

  std::string to_string() const
  {
    std::string s = "{";
    for ( std::size_t i = 0; i < members_.size(); ++i )
      s += ( i ? "," : "" ) + members_[i];
    return s + "}";
  }

private:
  void normalize()
  {
    std::sort( members_.begin(), members_.end() );
    members_.erase( std::unique( members_.begin(), members_.end() ), members_.end() );
  }

  std::vector<std::string> members_;
};

/*! \brief Ultimately periodic trace: `prefix` followed by `loop` repeated forever. */
class lasso_trace
{
public:
  lasso_trace( std::vector<truth_assignment> prefix, std::vector<truth_assignment> loop )
    : prefix_( std::move( prefix ) ), loop_( std::move( loop ) )
  {
    if ( loop_.empty() )
      throw invalid_argument_error( "lasso loop must be nonempty" );
  }

  std::vector<truth_assignment> const& prefix() const noexcept { return prefix_; }
  std::vector<truth_assignment> const& loop() const noexcept { return loop_; }

  truth_assignment const& at( std::size_t i ) const
  {
    if ( i < prefix_.size() )
      return prefix_[i];
    return loop_[( i - prefix_.size() ) % loop_.size()];
  }

  /* the trace with position `i` removed: sigma_0 .. sigma_{i-1} sigma_{i+1} ... */
  lasso_trace drop( std::size_t i ) const
  {
    if ( i < prefix_.size() )
    {
      auto p = prefix_;
      p.erase( p.begin() + static_cast<std::ptrdiff_t>( i ) );
      return lasso_trace( std::move( p ), loop_ );
    }
    std::size_t const offset = i - prefix_.size();
    std::size_t const laps = offset / loop_.size();
    std::size_t const j = offset % loop_.size();
    auto p = prefix_;
    for ( std::size_t k = 0; k < laps; ++k )
      p.insert( p.end(), loop_.begin(), loop_.end() );
    for ( std::size_t k = 0; k < loop_.size(); ++k )
      if ( k != j )
        p.push_back( loop_[k] );
    return lasso_trace( std::move( p ), loop_ );
  }

private:
  std::vector<truth_assignment> prefix_;
  std::vector<truth_assignment> loop_;
};

} // namespace ltl2a
