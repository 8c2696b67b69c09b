#ifndef TREESHIFT_ERRORS_HPP
#define TREESHIFT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace treeshift {

// Base class for everything this library throws on purpose.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Tree construction was asked for more vertices than the configured budget.
class CapacityError : public Error {
 public:
  explicit CapacityError(const std::string& msg) : Error(msg) {}
};

// Malformed tree input: cycles, repeated parents, unreachable vertices,
// or childless vertices strictly above the horizon.
class TreeStructureError : public Error {
 public:
  explicit TreeStructureError(const std::string& msg) : Error(msg) {}
};

// A computation needed more stored depth than the truncation provides.
class HorizonError : public Error {
 public:
  explicit HorizonError(const std::string& msg) : Error(msg) {}
};

// lambda_product(u, v) was called with u not an ancestor of v.
class AncestryError : public Error {
 public:
  explicit AncestryError(const std::string& msg) : Error(msg) {}
};

// An edge weight that must be nonzero (or strictly positive) is not.
class WeightValueError : public Error {
 public:
  explicit WeightValueError(const std::string& msg) : Error(msg) {}
};

// A computation that assumes unit child sums was run on weights that
// fail that check.
class NotNormalizedError : public Error {
 public:
  explicit NotNormalizedError(const std::string& msg) : Error(msg) {}
};

// Data required past the stored horizon; the caller asked for a hard error
// rather than a flagged result.
class TruncationError : public Error {
 public:
  explicit TruncationError(const std::string& msg) : Error(msg) {}
};

// Iterative solver hit its iteration cap before meeting tolerance.
class ConvergenceError : public Error {
 public:
  explicit ConvergenceError(const std::string& msg) : Error(msg) {}
};

// A power series was evaluated outside its certified disc.
class DivergentSeriesError : public Error {
 public:
  explicit DivergentSeriesError(const std::string& msg) : Error(msg) {}
};

// Bad JSON input (schema violations, unknown families, unparsable files).
class SpecFormatError : public Error {
 public:
  explicit SpecFormatError(const std::string& msg) : Error(msg) {}
};

}  // namespace treeshift

#endif
