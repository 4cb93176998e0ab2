#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ltl2a
{

/* base of every domain error raised by the library */
class error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

class invalid_argument_error : public error
{
public:
  using error::error;
};

class parse_error : public error
{
public:
  parse_error( std::string const& what, std::size_t offset )
    : error( "syntax error at offset " + std::to_string( offset ) + ": " + what ), offset_( offset )
  {
  }

  std::size_t offset() const noexcept { return offset_; }

private:
  std::size_t offset_;
};

class unknown_proposition_error : public error
{
public:
  explicit unknown_proposition_error( std::string const& name )
    : error( "unknown proposition '" + name + "'" ), name_( name )
  {
  }

  std::string const& name() const noexcept { return name_; }

private:
  std::string name_;
};

class cap_exceeded_error : public error
{
public:
  cap_exceeded_error( std::string const& what, std::size_t frontier )
    : error( what + " (frontier size " + std::to_string( frontier ) + ")" ), frontier_( frontier )
  {
  }

  std::size_t frontier() const noexcept { return frontier_; }

private:
  std::size_t frontier_;
};

class vocabulary_too_small_error : public error
{
public:
  using error::error;
};

class invalid_action_error : public error
{
public:
  using error::error;
};

class terminal_state_error : public error
{
public:
  using error::error;
};

class budget_exceeded_error : public error
{
public:
  using error::error;
};

} // namespace ltl2a
