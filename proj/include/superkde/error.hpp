#pragma once

#include <stdexcept>
#include <string>

namespace superkde {

enum class ErrorCode
{
  invalid_argument,
  invalid_bandwidth,
  invalid_bracket,
  non_convergence,
  divergent,
  not_integrable,
  not_applicable,
  no_flat_region,
  empty_grid,
  degenerate_sample,
  no_root,
  config_error,
  io_error,
};

//! Name of an error code as used in diagnostics ("NonConvergence", ...).
const char* error_code_name(ErrorCode code) noexcept;

//! Exception type thrown by every module of the library.
class Error : public std::runtime_error
{
public:
  Error(ErrorCode code, const std::string& what)
    : std::runtime_error(what)
    , code_(code)
  {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

} // namespace superkde
