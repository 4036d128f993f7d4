#pragma once

#include <stdexcept>
#include <string>

namespace sylvkit {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A precondition on an argument was violated (not prime, out of range, ...).
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(what) {}
};

/// A query fell outside the range a table was built for. Never extrapolated.
class CoverageError : public Error {
 public:
  explicit CoverageError(const std::string& what) : Error(what) {}
};

/// A configured cap (memory budget, search bound) was exceeded.
class ResourceError : public Error {
 public:
  explicit ResourceError(const std::string& what) : Error(what) {}
};

/// A brute-force oracle refused to run above its scale guard.
class ScaleGuardError : public Error {
 public:
  explicit ScaleGuardError(const std::string& what) : Error(what) {}
};

/// A certified comparison stayed inconclusive at the precision cap.
/// Carries the best enclosure reached so the caller can report it.
class InconclusiveError : public Error {
 public:
  InconclusiveError(const std::string& what, double best_mid, double best_radius)
      : Error(what), best_mid_(best_mid), best_radius_(best_radius) {}

  double best_mid() const { return best_mid_; }
  double best_radius() const { return best_radius_; }

 private:
  double best_mid_;
  double best_radius_;
};

}  // namespace sylvkit
