#ifndef MCONE_ERRORS_HPP
#define MCONE_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace mcone {

/// What a single violated constraint looks like when validation fails.
enum class ViolationKind {
    NotSquare,        // input matrix is not square
    NonFinite,        // NaN or infinity encountered
    DiagonalNonzero,  // r(i,i) != 0
    Asymmetric,       // r(i,j) != r(j,i)
    Negative,         // r(i,j) < 0
    Triangle,         // r(i,k) + r(k,j) < r(i,j)
    DifferenceBound,  // |a_i - a_j| > r(i,j)
    SumBound,         // a_i + a_j < r(i,j)
    LengthMismatch,   // vector length does not match matrix order
};

struct Violation {
    ViolationKind kind;
    int i = -1;
    int j = -1;
    int k = -1;       // middle index for triangle violations, else -1
    double slack = 0; // amount by which the constraint is missed
};

std::string to_string(const Violation& v);

class Error : public std::runtime_error {
  public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Shape or indexing problems: non-square input, out-of-range order, ...
class StructuralError : public Error {
  public:
    using Error::Error;
};

/// Bad numeric content: NaN, negative distance, weights that do not sum to 1.
class ValueError : public Error {
  public:
    using Error::Error;
};

/// A metric/admissibility constraint is violated; carries the full list.
class ConstraintError : public Error {
  public:
    ConstraintError(const std::string& what, std::vector<Violation> violations)
        : Error(what), violations_(std::move(violations)) {}
    const std::vector<Violation>& violations() const { return violations_; }

  private:
    std::vector<Violation> violations_;
};

/// The request is valid but outside what this implementation can do
/// (e.g. exact vertex enumeration beyond the supported order).
class CapabilityError : public Error {
  public:
    using Error::Error;
};

/// A documented precondition does not hold (e.g. degenerate measure).
class PreconditionError : public Error {
  public:
    using Error::Error;
};

} // namespace mcone

#endif
