#ifndef MCONE_POLYTOPE_HPP
#define MCONE_POLYTOPE_HPP

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mcone/distance_matrix.hpp"
#include "mcone/rng.hpp"

namespace mcone {

/// Exact vertex enumeration is combinatorial; orders above this bound
/// are served by the approximate hit-and-run sampler instead.
inline constexpr int kMaxExactOrder = 8;

/// Vertex description of the set A(r) of admissible border rows for r.
/// A(r) = conv(vertices) + {lambda * (1,...,1) : lambda >= 0}; the compact
/// summand conv(vertices) is the polytope M_r.
struct AdmissiblePolytope {
    DistanceMatrix base;
    Eigen::MatrixXd vertices;             // one extreme point per row
    Eigen::VectorXd recession_direction;  // the all-ones diagonal direction
    int hull_dimension = 0;               // affine dimension of conv(vertices)
    int set_dimension = 0;                // affine dimension of A(r)
};

/// All extreme points of A(r), deduplicated within 1e-8. Orders above
/// kMaxExactOrder raise CapabilityError.
AdmissiblePolytope enumerate_vertices(const DistanceMatrix& r);

/// Polytope-membership phrasing of admissibility (identical test).
bool contains(const DistanceMatrix& r, std::span<const double> a);

/// Is `point` a convex combination of the rows of `vertices`?
/// Decided by linear feasibility.
bool in_convex_hull(const Eigen::VectorXd& point, const Eigen::MatrixXd& vertices,
                    double tol = 1e-9);

struct DiagonalShift {
    double lambda = 0;    // minimal feasible diagonal component
    double residual = 0;  // bisection bracket width at termination
};

/// Smallest lambda >= 0 such that p - lambda*(1,...,1) lies in
/// conv(vertices), located by a coarse scan plus bisection; nullopt when
/// no lambda in [0, lambda_max] is feasible.
std::optional<DiagonalShift> min_diagonal_shift(const AdmissiblePolytope& poly,
                                                const Eigen::VectorXd& p,
                                                double bisect_tol = 1e-7);

/// Draws a + lambda*(1,...,1) where a is Lebesgue-uniform on M_r (rejection
/// from the bounding box of the vertices, restricted to the affine hull when
/// M_r is degenerate) and lambda follows the diagonal law.
class AdmissibleSampler {
  public:
    AdmissibleSampler(const DistanceMatrix& r, DiagonalLaw law);
    AdmissibleSampler(AdmissiblePolytope poly, DiagonalLaw law);

    /// Uniform point of the compact summand M_r.
    std::vector<double> sample_compact(Rng& rng) const;

    /// Full admissible vector: compact part plus diagonal component.
    std::vector<double> sample(Rng& rng) const;

    const AdmissiblePolytope& polytope() const { return poly_; }
    const DiagonalLaw& law() const { return law_; }

  private:
    void prepare();

    AdmissiblePolytope poly_;
    DiagonalLaw law_;
    Eigen::VectorXd hull_origin_;  // centroid of the vertices
    Eigen::MatrixXd hull_basis_;   // orthonormal columns spanning the hull
    Eigen::MatrixXd hull_coords_;  // vertices expressed in the hull basis
    Eigen::VectorXd lo_, hi_;      // bounding box in hull coordinates
};

/// Markov-chain sampler over the interior of A(r) for orders where exact
/// enumeration is out of reach. Stationary density is tilted exponentially
/// along the diagonal (rate taken from the law's mean) so the unbounded
/// direction stays integrable; within any compact slice the chain is
/// uniform in the limit.
class HitAndRunSampler {
  public:
    HitAndRunSampler(const DistanceMatrix& r, DiagonalLaw law,
                     std::optional<double> diameter = std::nullopt);

    /// Advances the chain and returns the current point.
    std::vector<double> sample(Rng& rng, int steps);

    const std::vector<double>& state() const { return state_; }

  private:
    const DistanceMatrix r_;
    DiagonalLaw law_;
    std::optional<double> diameter_;
    std::vector<double> state_;
};

struct MinkowskiReport {
    bool pass = true;
    int forward_trials = 0;    // points of M_r + Delta_n checked by contains
    int decompose_trials = 0;  // contains-accepted points decomposed as q + lambda*1
    double worst_residual = 0.0;
    std::vector<double> counterexample;  // offending point when pass == false
    std::string note;
};

/// Empirical check of A(r) = M_r + Delta_n in both directions.
MinkowskiReport minkowski_check(const DistanceMatrix& r, int trials, Rng& rng);

} // namespace mcone

#endif
