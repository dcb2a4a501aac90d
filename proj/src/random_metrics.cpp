#include "mcone/random_metrics.hpp"

#include <algorithm>

#include "mcone/polytope.hpp"

namespace mcone {

RandomMetricSampler::RandomMetricSampler(RandomMetricConfig config)
    : config_(config), current_(DistanceMatrix::zero(1)), rng_(config.seed) {
    if (config_.order < 2)
        throw StructuralError("random metric sampler: order must be >= 2");
    if (!config_.diagonal_law.full_support())
        throw ValueError("random metric sampler: diagonal law must have full support on (0, inf)");
    if (config_.order - 1 > config_.exact_order_limit && !config_.allow_approximate)
        throw CapabilityError(
            "random metric sampler: exact vertex enumeration is limited to order " +
            std::to_string(config_.exact_order_limit) +
            "; pass allow_approximate to switch to hit-and-run beyond it");
}

void RandomMetricSampler::step() {
    const int n = current_.order();
    std::vector<double> row;
    if (n <= config_.exact_order_limit) {
        AdmissibleSampler sampler(current_, config_.diagonal_law);
        row = sampler.sample(rng_);
    } else {
        approximate_used_ = true;
        HitAndRunSampler walker(current_, config_.diagonal_law);
        row = walker.sample(rng_, 48 + 2 * n);
    }
    for (double& v : row) v = std::max(v, 0.0);
    current_ = current_.extended(row);
}

DistanceMatrix sample_metric(const RandomMetricConfig& config) {
    RandomMetricSampler sampler(config);
    while (sampler.current().order() < config.order) sampler.step();
    return sampler.current();
}

GenericityProbe urysohn_genericity_probe(const RandomMetricConfig& base, int replicas, int n,
                                         double epsilon, int targets, std::uint64_t test_seed) {
    if (replicas < 1) throw StructuralError("genericity probe: need replicas >= 1");
    if (base.order <= n)
        throw StructuralError("genericity probe: the sampled order must exceed n");
    GenericityProbe probe;
    probe.order = base.order;
    probe.n = n;
    probe.targets = targets;
    probe.replicas = replicas;
    Rng seeds(base.seed);
    Rng test_seeds(test_seed);
    for (int rep = 0; rep < replicas; ++rep) {
        RandomMetricConfig cfg = base;
        cfg.seed = seeds.split(rep).seed();
        RandomMetricSampler sampler(cfg);
        while (sampler.current().order() < cfg.order) sampler.step();
        probe.approximate_used = probe.approximate_used || sampler.approximate_used();
        UniversalityReport report = universality_test(sampler.current(), n, epsilon, targets,
                                                      test_seeds.split(rep).seed());
        probe.worst_defects.push_back(report.worst_defect);
    }
    std::vector<double> sorted = probe.worst_defects;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t mid = sorted.size() / 2;
    probe.median_defect = sorted.size() % 2 == 1
                              ? sorted[mid]
                              : 0.5 * (sorted[mid - 1] + sorted[mid]);
    return probe;
}

} // namespace mcone
