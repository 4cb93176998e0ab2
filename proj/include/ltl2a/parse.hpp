#pragma once

/*!
  \file parse.hpp
  \brief Infix LTL parser and infix/prefix printers.

  Grammar, loosest to tightest binding:

      or    := and ( '|' or )?
      and   := until ( '&' and )?
      until := unary ( 'U' until )?
      unary := ( '!' | 'X' | 'F' | 'G' ) unary | atom
      atom  := 'true' | 'false' | identifier | '(' or ')'

  All binary operators associate to the right. `X`, `F` and `G` act as
  operators only when the next token can start an operand; otherwise they
  are read as proposition names, so `F G` is "eventually G".
*/

#include <ltl2a/errors.hpp>
#include <ltl2a/formula.hpp>

#include <cctype>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace ltl2a
{

enum class notation
{
  infix,
  prefix
};

namespace detail
{

struct token
{
  enum class type
  {
    ident,
    bang,
    amp,
    bar,
    lparen,
    rparen,
    end
  };

  type kind;
  std::string_view text;
  std::size_t offset;
};

inline std::vector<token> tokenize( std::string_view text )
{
  std::vector<token> out;
  std::size_t i = 0;
  auto const ident_char = []( char c ) { return std::isalnum( static_cast<unsigned char>( c ) ) || c == '_'; };
  while ( i < text.size() )
  {
    char const c = text[i];
    if ( std::isspace( static_cast<unsigned char>( c ) ) )
    {
      ++i;
      continue;
    }
    switch ( c )
    {
    case '!': out.push_back( { token::type::bang, text.substr( i, 1 ), i } ); ++i; continue;
    case '&': out.push_back( { token::type::amp, text.substr( i, 1 ), i } ); ++i; continue;
    case '|': out.push_back( { token::type::bar, text.substr( i, 1 ), i } ); ++i; continue;
    case '(': out.push_back( { token::type::lparen, text.substr( i, 1 ), i } ); ++i; continue;
    case ')': out.push_back( { token::type::rparen, text.substr( i, 1 ), i } ); ++i; continue;
    default: break;
    }
    if ( std::isalpha( static_cast<unsigned char>( c ) ) )
    {
      std::size_t j = i;
      while ( j < text.size() && ident_char( text[j] ) )
        ++j;
      out.push_back( { token::type::ident, text.substr( i, j - i ), i } );
      i = j;
      continue;
    }
    throw parse_error( std::string( "unexpected character '" ) + c + "'", i );
  }
  out.push_back( { token::type::end, {}, text.size() } );
  return out;
}

class parser
{
public:
  /* `extend` receives new propositions; `known`, when set, rejects unknown ones */
  parser( std::string_view text, vocabulary* extend, vocabulary const* known )
    : tokens_( tokenize( text ) ), extend_( extend ), known_( known )
  {
  }

  formula run()
  {
    auto f = parse_or();
    if ( peek().kind != token::type::end )
      throw parse_error( "unexpected '" + std::string( peek().text ) + "'", peek().offset );
    return f;
  }

private:
  token const& peek( std::size_t ahead = 0 ) const
  {
    std::size_t const i = std::min( pos_ + ahead, tokens_.size() - 1 );
    return tokens_[i];
  }

  bool is_until( token const& t ) const { return t.kind == token::type::ident && t.text == "U"; }

  bool starts_operand( token const& t ) const
  {
    return t.kind == token::type::bang || t.kind == token::type::lparen ||
           ( t.kind == token::type::ident && !is_until( t ) );
  }

  formula parse_or()
  {
    auto lhs = parse_and();
    if ( peek().kind == token::type::bar )
    {
      ++pos_;
      return formula::make_or( lhs, parse_or() );
    }
    return lhs;
  }

  formula parse_and()
  {
    auto lhs = parse_until();
    if ( peek().kind == token::type::amp )
    {
      ++pos_;
      return formula::make_and( lhs, parse_and() );
    }
    return lhs;
  }

  formula parse_until()
  {
    auto lhs = parse_unary();
    if ( is_until( peek() ) )
    {
      ++pos_;
      return formula::make_until( lhs, parse_until() );
    }
    return lhs;
  }

  formula parse_unary()
  {
    auto const& t = peek();
    if ( t.kind == token::type::bang )
    {
      ++pos_;
      return formula::make_not( parse_unary() );
    }
    if ( t.kind == token::type::ident && ( t.text == "X" || t.text == "F" || t.text == "G" ) && starts_operand( peek( 1 ) ) )
    {
      ++pos_;
      auto operand = parse_unary();
      if ( t.text == "X" )
        return formula::make_next( operand );
      if ( t.text == "F" )
        return formula::make_eventually( operand );
      return formula::make_always( operand );
    }
    return parse_atom();
  }

  formula parse_atom()
  {
    auto const t = peek();
    switch ( t.kind )
    {
    case token::type::lparen:
    {
      ++pos_;
      auto f = parse_or();
      if ( peek().kind != token::type::rparen )
        throw parse_error( "expected ')'", peek().offset );
      ++pos_;
      return f;
    }
    case token::type::ident:
    {
      if ( is_until( t ) )
        throw parse_error( "'U' needs a left operand", t.offset );
      ++pos_;
      if ( t.text == "true" )
        return formula::tt();
      if ( t.text == "false" )
        return formula::ff();
      std::string name( t.text );
      if ( known_ && !known_->contains( name ) )
        throw unknown_proposition_error( name );
      if ( extend_ )
        extend_->add( name );
      return formula::prop( std::move( name ) );
    }
    case token::type::end:
      throw parse_error( "unexpected end of input", t.offset );
    default:
      throw parse_error( "unexpected '" + std::string( t.text ) + "'", t.offset );
    }
  }

  std::vector<token> tokens_;
  std::size_t pos_ = 0;
  vocabulary* extend_;
  vocabulary const* known_;
};

inline void render_prefix( formula const& f, std::string& out )
{
  if ( !out.empty() )
    out += ' ';
  if ( f.kind() == op_kind::prop )
  {
    out += f.name();
    return;
  }
  out += operator_token( f.kind() );
  if ( is_unary( f.kind() ) )
    render_prefix( f.child(), out );
  else if ( is_binary( f.kind() ) )
  {
    render_prefix( f.left(), out );
    render_prefix( f.right(), out );
  }
}

} // namespace detail

/* parses without any vocabulary bookkeeping */
inline formula parse( std::string_view text )
{
  return detail::parser( text, nullptr, nullptr ).run();
}

/* parses and registers every proposition in `vocab` */
inline formula parse( std::string_view text, vocabulary& vocab )
{
  return detail::parser( text, &vocab, nullptr ).run();
}

/* parses and rejects propositions missing from `vocab` */
inline formula parse_strict( std::string_view text, vocabulary const& vocab )
{
  return detail::parser( text, nullptr, &vocab ).run();
}

inline std::string render( formula const& f, notation n = notation::infix )
{
  if ( n == notation::infix )
    return f.text();
  std::string out;
  detail::render_prefix( f, out );
  return out;
}

inline std::vector<std::string> prefix_tokens( formula const& f )
{
  std::vector<std::string> out;
  std::vector<formula const*> stack{ &f };
  while ( !stack.empty() )
  {
    auto const* g = stack.back();
    stack.pop_back();
    out.push_back( g->kind() == op_kind::prop ? g->name() : std::string( operator_token( g->kind() ) ) );
    if ( is_unary( g->kind() ) )
      stack.push_back( &g->child() );
    else if ( is_binary( g->kind() ) )
    {
      stack.push_back( &g->right() );
      stack.push_back( &g->left() );
    }
  }
  return out;
}

inline std::ostream& operator<<( std::ostream& os, formula const& f )
{
  return os << f.text();
}

} // namespace ltl2a
