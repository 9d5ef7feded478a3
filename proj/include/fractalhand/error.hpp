#pragma once

#include <stdexcept>
#include <string>

namespace fractalhand {

// Root of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Precondition or domain violation on a numeric argument.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

enum class IngestErrorKind { io, malformed, open_curve, self_intersecting, degenerate };

const char* to_string(IngestErrorKind kind);

// Raised while reading or validating a boundary profile.
class IngestError : public Error {
 public:
  IngestError(IngestErrorKind kind, const std::string& what)
      : Error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  IngestErrorKind kind() const { return kind_; }

 private:
  IngestErrorKind kind_;
};

// Degenerate geometry encountered during a query (zero tangent, parallel lines).
class GeometryError : public Error {
 public:
  using Error::Error;
};

// Requested linkage pose lies beyond the assembly branch.
class BranchLimitError : public Error {
 public:
  BranchLimitError(const std::string& what, double last_reachable)
      : Error(what), last_reachable_(last_reachable) {}

  double last_reachable() const { return last_reachable_; }

 private:
  double last_reachable_;
};

// No design in the searched region scores above zero.
class InfeasibleError : public Error {
 public:
  InfeasibleError(const std::string& what, int level = 0) : Error(what), level_(level) {}

  // Tree level that failed, 0 when not tied to a cascade.
  int level() const { return level_; }

 private:
  int level_;
};

}  // namespace fractalhand
