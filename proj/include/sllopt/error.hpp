/*!
  \file error.hpp
  \brief Exception types shared by all modules
*/

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sllopt
{

class error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/*! \brief Malformed or unsupported input text; carries the 1-based line. */
class parse_error : public error
{
public:
  parse_error( std::size_t line, std::string const& what )
      : error( "line " + std::to_string( line ) + ": " + what ), line_( line )
  {
  }

  std::size_t line() const { return line_; }

private:
  std::size_t line_;
};

/*! \brief Structural violation: combinational cycle, multiple drivers, dangling references. */
class structure_error : public error
{
public:
  using error::error;
};

} /* namespace sllopt */
