#ifndef MCONE_RANDOM_METRICS_HPP
#define MCONE_RANDOM_METRICS_HPP

#include <cstdint>
#include <vector>

#include "mcone/distance_matrix.hpp"
#include "mcone/rng.hpp"
#include "mcone/universal.hpp"

namespace mcone {

struct RandomMetricConfig {
    int order = 2;
    DiagonalLaw diagonal_law = DiagonalLaw::exponential(1.0);
    std::uint64_t seed = 0;
    /// Rows appended beyond prefixes of this order use the hit-and-run
    /// sampler instead of exact vertex enumeration.
    int exact_order_limit = kMaxExactOrder;
    bool allow_approximate = false;
};

/// Grows a random distance matrix one point at a time: the first entry is
/// a direct draw from the diagonal law, and each later row is drawn from
/// the admissible set of the current prefix (uniform compact part plus
/// law-distributed diagonal). Prefixes are consistent within a run and
/// across runs sharing a seed.
class RandomMetricSampler {
  public:
    explicit RandomMetricSampler(RandomMetricConfig config);

    void step();
    const DistanceMatrix& current() const { return current_; }
    bool approximate_used() const { return approximate_used_; }
    const RandomMetricConfig& config() const { return config_; }

  private:
    RandomMetricConfig config_;
    DistanceMatrix current_;
    Rng rng_;
    bool approximate_used_ = false;
};

DistanceMatrix sample_metric(const RandomMetricConfig& config);

struct GenericityProbe {
    std::vector<double> worst_defects;  // one universality defect per replica
    double median_defect = 0;
    int order = 0;
    int n = 0;
    int targets = 0;
    int replicas = 0;
    bool approximate_used = false;
};

/// Samples `replicas` random metrics of the configured order and measures
/// their universality defect at order n; the distribution of defects is
/// the finite-size surrogate for almost-sure universality.
GenericityProbe urysohn_genericity_probe(const RandomMetricConfig& base, int replicas, int n,
                                         double epsilon, int targets, std::uint64_t test_seed);

} // namespace mcone

#endif
