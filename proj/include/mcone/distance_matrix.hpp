#ifndef MCONE_DISTANCE_MATRIX_HPP
#define MCONE_DISTANCE_MATRIX_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mcone/errors.hpp"

namespace mcone {

struct ValidationReport {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
    std::string to_string() const;
};

/// Finite symmetric nonnegative matrix with zero diagonal satisfying all
/// triangle inequalities. Zero off-diagonal entries are allowed (semi-metric).
///
/// Storage is the packed upper triangle in column-major block order
/// r(1,2), r(1,3), r(2,3), r(1,4), ... so the NW-corner of order k is
/// exactly the first k(k-1)/2 entries. Symmetry and the zero diagonal are
/// unrepresentable rather than checked. Instances are immutable.
class DistanceMatrix {
  public:
    static constexpr double kDefaultTolerance = 1e-9;

    /// Zero matrix of the given order (the one-class semi-metric).
    static DistanceMatrix zero(int order, double tolerance = kDefaultTolerance);

    /// Builds from the packed upper triangle; throws if any invariant fails.
    static DistanceMatrix from_upper(int order, std::vector<double> upper,
                                     double tolerance = kDefaultTolerance);

    /// Builds from a full square matrix; throws if any invariant fails.
    static DistanceMatrix from_full(const std::vector<std::vector<double>>& full,
                                    double tolerance = kDefaultTolerance);

    int order() const { return order_; }
    double tolerance() const { return tolerance_; }
    const std::vector<double>& upper() const { return upper_; }

    /// Symmetric access, zero diagonal; indices are 0-based.
    double operator()(int i, int j) const {
        if (i == j) return 0.0;
        if (i > j) std::swap(i, j);
        return upper_[static_cast<std::size_t>(j) * (j - 1) / 2 + i];
    }

    double max_entry() const;

    /// No off-diagonal entry within tolerance of zero.
    bool is_true_metric() const;

    /// Distances from the first k points to point m (k <= m < order).
    std::vector<double> column_prefix(int m, int k) const;

    /// Leading principal submatrix of order k; exact slice of storage.
    DistanceMatrix nw_corner(int k) const;

    /// Deletes the first row and column.
    DistanceMatrix nw_shift() const;

    /// Borders the matrix with `a` as last row/column; `a` must be admissible.
    DistanceMatrix extended(std::span<const double> a) const;

    /// Simultaneous row/column permutation: result(i,j) = (*this)(perm[i], perm[j]).
    DistanceMatrix permuted(std::span<const int> perm) const;

    /// Number of equivalence classes of points under distance <= tolerance.
    int geometric_rank() const;

    std::vector<std::vector<double>> to_full() const;

    bool operator==(const DistanceMatrix& other) const {
        return order_ == other.order_ && upper_ == other.upper_;
    }

    /// Unchecked construction for internal callers that already hold a
    /// valid triangle (slices, validated extensions, samplers).
    struct Trusted {};
    DistanceMatrix(Trusted, int order, std::vector<double> upper, double tolerance)
        : order_(order), upper_(std::move(upper)), tolerance_(tolerance) {}

  private:
    int order_ = 1;
    std::vector<double> upper_;
    double tolerance_ = kDefaultTolerance;
};

/// Checks all four invariant families on a full square candidate and
/// reports every violated constraint with indices and slack.
ValidationReport validate_full(const std::vector<std::vector<double>>& candidate,
                               double tolerance = DistanceMatrix::kDefaultTolerance);

/// Same check when symmetry/diagonal are already structural (packed input).
ValidationReport validate_upper(int order, const std::vector<double>& upper,
                                double tolerance = DistanceMatrix::kDefaultTolerance);

/// Border-row admissibility: |a_i - a_j| <= r(i,j) <= a_i + a_j for all pairs,
/// and a_i >= 0. Lists every violated constraint.
ValidationReport check_admissible(const DistanceMatrix& r, std::span<const double> a);

bool is_admissible(const DistanceMatrix& r, std::span<const double> a);

/// Extremal ray of the cone of distance matrices of order n: the 0-1
/// semi-metric of a bipartition whose metric quotient has two points.
struct ExtremalRay {
    std::uint32_t side_mask;   // bit i set iff point i lies in the side containing point 0
    DistanceMatrix generator;
};

/// All extremal rays of the order-n cone, one per unordered bipartition;
/// exactly 2^(n-1) - 1 of them. Requires n >= 2 (the order-1 cone is {0}).
std::vector<ExtremalRay> extremal_rays(int n);

struct Interval {
    double lo = 0;
    double hi = 0;
    bool contains(double x) const { return x >= lo && x <= hi; }
    double midpoint() const { return 0.5 * (lo + hi); }
};

/// Feasible distances h between two one-point extensions of a shared space:
/// [max_i |a_i - b_i|, min_i (a_i + b_i)]. Both vectors must be admissible
/// for `shared`; the interval is never empty.
Interval amalgamation_interval(std::span<const double> rho1_to_new,
                               std::span<const double> rho2_to_new,
                               const DistanceMatrix& shared);

/// Glues the two extensions at distance h, producing the order-(n+2) matrix.
/// h must lie in the amalgamation interval.
DistanceMatrix amalgamate(const DistanceMatrix& shared,
                          std::span<const double> rho1_to_new,
                          std::span<const double> rho2_to_new, double h);

} // namespace mcone

#endif
