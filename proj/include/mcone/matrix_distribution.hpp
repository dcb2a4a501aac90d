#ifndef MCONE_MATRIX_DISTRIBUTION_HPP
#define MCONE_MATRIX_DISTRIBUTION_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mcone/distance_matrix.hpp"
#include "mcone/rng.hpp"

namespace mcone {

/// Finite metric space with a probability weight on its points; the desk
/// scale stand-in for a Polish space with a Borel probability measure.
struct MetricTriple {
    DistanceMatrix space;
    std::vector<double> weights;
    std::string label;

    /// Throws if weights are negative, mis-sized, or do not sum to 1
    /// within 1e-12.
    void validate() const;

    /// Every point carries positive mass (no nonempty open null sets).
    bool non_degenerate() const;

    static MetricTriple uniform(DistanceMatrix space, std::string label);
    static MetricTriple two_points(double distance, double w0, double w1, std::string label);
    /// p points, all pairwise at the given distance, uniform weights.
    static MetricTriple equidistant(int points, double distance, std::string label);
    /// points on a line at consecutive distance `step`, uniform weights.
    static MetricTriple path_graph(int points, double step, std::string label);
    /// points evenly spaced on a circle with arc-length metric, uniform weights.
    static MetricTriple circle(int points, double circumference, std::string label);
};

/// Multiset of k x k distance matrices drawn from a triple: the
/// finite-dimensional marginals of its matrix distribution.
struct EmpiricalMatrixDistribution {
    int dimension = 0;
    std::vector<DistanceMatrix> samples;
    std::string source_label;
    std::uint64_t seed = 0;
    /// Kept so diagnostics can draw fresh samples at other dimensions.
    std::optional<MetricTriple> source;
};

/// Draws `count` samples: k indices i.i.d. from the weights, then the
/// induced submatrix. Repeats are kept; they produce off-diagonal zeros.
EmpiricalMatrixDistribution sample_matrix_distribution(const MetricTriple& T, int k, int count,
                                                       std::uint64_t seed);

/// Upper triangle in storage order (permutation-sensitive).
std::vector<double> upper_feature(const DistanceMatrix& m);
/// Sorted upper triangle: invariant under simultaneous row/column permutation.
std::vector<double> sorted_upper_feature(const DistanceMatrix& m);

struct TwoSampleTest {
    double statistic = 0;   // energy distance between the two feature clouds
    double threshold = 0;   // (1 - alpha) quantile of the permutation statistics
    double p_value = 1;
    int permutations = 0;
    double alpha = 0.05;
    bool same() const { return p_value > alpha; }
};

/// Energy-distance two-sample test with a permutation p-value.
TwoSampleTest energy_permutation_test(const std::vector<std::vector<double>>& a,
                                      const std::vector<std::vector<double>>& b,
                                      int permutations, double alpha, Rng& rng);

struct EquivalenceVerdict {
    double statistic = 0;
    double threshold = 0;
    double p_value = 1;
    bool equivalent = false;
    int k = 0;
    int count = 0;
    int permutations = 0;
    double alpha = 0.05;
};

/// Two triples have the same matrix distribution iff they are
/// measure-preserving isometric; this compares the k-marginals through
/// sorted-upper-triangle features. Requires non-degenerate weights.
EquivalenceVerdict equivalence_test(const MetricTriple& T1, const MetricTriple& T2, int k,
                                    int count, int permutations, double alpha,
                                    std::uint64_t seed);

struct InvarianceReport {
    TwoSampleTest permutation_test;  // against simultaneously permuted copies
    TwoSampleTest shift_test;        // against NW-shifted copies drawn at k+1
};

/// Diagnoses the two invariances genuine matrix-distribution marginals
/// must have. Uses raw (unsorted) upper-triangle features, which is what
/// makes per-sample ordering detectable. Needs >= 100 samples, k >= 3,
/// and a retained source triple for the shift diagnostic.
InvarianceReport invariance_diagnostics(const EmpiricalMatrixDistribution& E,
                                        std::uint64_t seed, int permutations = 199,
                                        double alpha = 0.01);

/// One long i.i.d. sample of point indices; the "anchor row of length n"
/// view of a matrix-distribution draw.
struct LongSample {
    MetricTriple triple;
    std::vector<int> indices;
    std::uint64_t seed = 0;
};

LongSample draw_long_sample(const MetricTriple& T, int n, std::uint64_t seed);

/// (1/n) #{k : d(anchor, x_k) < radius}; the ergodic-average estimate of
/// the measure of the ball around the anchor point.
double ball_measure_estimate(const LongSample& s, int anchor, double radius);

/// Fraction of columns j of the long-sample matrix with
/// min_{i <= N} r(i,j) < epsilon.
double tightness_statistic(const DistanceMatrix& long_sample_matrix, double epsilon, int N);

/// Fraction of columns j > N with min_{i <= N} r(i,j) < epsilon
/// (the criterion requires the fraction to be exactly 1).
double compactness_statistic(const DistanceMatrix& long_sample_matrix, double epsilon, int N);

struct CriterionCheck {
    std::vector<double> per_replica;  // inner statistic of each replica
    double probability = 0;          // fraction of replicas meeting the inner condition
    bool pass = false;               // probability > 1 - epsilon
    double epsilon = 0;
    int N = 0;
    int n = 0;
    int replicas = 0;
};

/// Monte-Carlo estimate of the tightness criterion: the inner condition is
/// that the epsilon-cover fraction exceeds 1 - epsilon.
CriterionCheck tightness_check(const MetricTriple& T, int n, int N, double epsilon,
                               int replicas, std::uint64_t seed);

/// The compactness (epsilon-net) criterion: the inner condition is that
/// every column j > N has an epsilon-close anchor among the first N.
CriterionCheck compactness_check(const MetricTriple& T, int n, int N, double epsilon,
                                 int replicas, std::uint64_t seed);

} // namespace mcone

#endif
