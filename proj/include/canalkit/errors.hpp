#pragma once

#include <stdexcept>
#include <string>

namespace canalkit {

/// Base class for all canalkit errors.
class Error : public std::runtime_error {
  public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Construction-time validation failures: bad parameters, malformed
/// configuration, out-of-range domains. CLI maps these to exit code 2.
class InvalidParameter : public Error {
  public:
    explicit InvalidParameter(const std::string& what) : Error(what) {}
};

/// Numeric/geometric failures at evaluation time: vanishing curvature,
/// |r'| >= 1, singular surface points, integrator breakdown. Exit code 3.
class RegularityError : public Error {
  public:
    explicit RegularityError(const std::string& what) : Error(what) {}
};

/// Filesystem failures, always carrying the offending path in the message.
class IoError : public Error {
  public:
    explicit IoError(const std::string& what) : Error(what) {}
};

}  // namespace canalkit
