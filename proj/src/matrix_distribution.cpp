#include "mcone/matrix_distribution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace mcone {

namespace {

// Inverse-CDF draw from a cumulative weight table.
int draw_index(const std::vector<double>& cumulative, Rng& rng) {
    const double u = rng.uniform01() * cumulative.back();
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    return static_cast<int>(std::min<std::ptrdiff_t>(it - cumulative.begin(),
                                                     cumulative.size() - 1));
}

std::vector<double> cumulative_weights(const MetricTriple& T) {
    std::vector<double> c(T.weights.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < T.weights.size(); ++i) {
        acc += T.weights[i];
        c[i] = acc;
    }
    if (acc <= 0.0) throw StructuralError("weights sum to zero");
    return c;
}

DistanceMatrix submatrix(const DistanceMatrix& space, const std::vector<int>& idx,
                         double tolerance) {
    const int k = static_cast<int>(idx.size());
    std::vector<double> upper;
    upper.reserve(static_cast<std::size_t>(k) * (k - 1) / 2);
    for (int j = 1; j < k; ++j)
        for (int i = 0; i < j; ++i) upper.push_back(space(idx[i], idx[j]));
    return DistanceMatrix(DistanceMatrix::Trusted{}, k, std::move(upper), tolerance);
}

} // namespace

void MetricTriple::validate() const {
    if (static_cast<int>(weights.size()) != space.order())
        throw StructuralError("metric triple: weights length does not match the space order");
    double sum = 0.0;
    for (double w : weights) {
        if (!std::isfinite(w) || w < 0.0)
            throw ValueError("metric triple: weights must be finite and nonnegative");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw ValueError("metric triple: weights must sum to 1 within 1e-12");
}

bool MetricTriple::non_degenerate() const {
    for (double w : weights)
        if (w <= 0.0) return false;
    return true;
}

MetricTriple MetricTriple::uniform(DistanceMatrix space, std::string label) {
    const int p = space.order();
    return {std::move(space), std::vector<double>(p, 1.0 / p), std::move(label)};
}

MetricTriple MetricTriple::two_points(double distance, double w0, double w1, std::string label) {
    MetricTriple t{DistanceMatrix::from_upper(2, {distance}), {w0, w1}, std::move(label)};
    t.validate();
    return t;
}

MetricTriple MetricTriple::equidistant(int points, double distance, std::string label) {
    if (points < 1) throw StructuralError("equidistant: need at least one point");
    std::vector<double> upper(static_cast<std::size_t>(points) * (points - 1) / 2, distance);
    return uniform(DistanceMatrix::from_upper(points, std::move(upper)), std::move(label));
}

MetricTriple MetricTriple::path_graph(int points, double step, std::string label) {
    if (points < 1) throw StructuralError("path_graph: need at least one point");
    std::vector<double> upper;
    upper.reserve(static_cast<std::size_t>(points) * (points - 1) / 2);
    for (int j = 1; j < points; ++j)
        for (int i = 0; i < j; ++i) upper.push_back(step * (j - i));
    return uniform(DistanceMatrix::from_upper(points, std::move(upper)), std::move(label));
}

MetricTriple MetricTriple::circle(int points, double circumference, std::string label) {
    if (points < 1) throw StructuralError("circle: need at least one point");
    const double arc = circumference / points;
    std::vector<double> upper;
    upper.reserve(static_cast<std::size_t>(points) * (points - 1) / 2);
    for (int j = 1; j < points; ++j)
        for (int i = 0; i < j; ++i) {
            const int gap = std::min(j - i, points - (j - i));
            upper.push_back(arc * gap);
        }
    return uniform(DistanceMatrix::from_upper(points, std::move(upper)), std::move(label));
}

EmpiricalMatrixDistribution sample_matrix_distribution(const MetricTriple& T, int k, int count,
                                                       std::uint64_t seed) {
    T.validate();
    if (k < 2) throw StructuralError("sample_matrix_distribution: need k >= 2");
    if (count < 1) throw StructuralError("sample_matrix_distribution: need count >= 1");
    const auto cumulative = cumulative_weights(T);
    Rng rng(seed);
    EmpiricalMatrixDistribution E;
    E.dimension = k;
    E.source_label = T.label;
    E.seed = seed;
    E.source = T;
    E.samples.reserve(count);
    std::vector<int> idx(k);
    for (int c = 0; c < count; ++c) {
        for (int i = 0; i < k; ++i) idx[i] = draw_index(cumulative, rng);
        E.samples.push_back(submatrix(T.space, idx, T.space.tolerance()));
    }
    return E;
}

std::vector<double> upper_feature(const DistanceMatrix& m) { return m.upper(); }

std::vector<double> sorted_upper_feature(const DistanceMatrix& m) {
    std::vector<double> f = m.upper();
    std::sort(f.begin(), f.end());
    return f;
}

namespace {

// Energy statistic from the pooled distance matrix via the masked-sum
// identity: with R_A = sum of rows in A and S_AA = sum of entries with both
// indices in A, the cross sum is R_A - S_AA.
struct EnergyWorkspace {
    int na = 0, nb = 0, N = 0;
    std::vector<float> dist;       // N x N pooled distances, row-major
    std::vector<double> row_sum;   // per pooled point
    double total = 0;              // full double sum

    double statistic(const std::vector<int>& group_a) const {
        double saa = 0.0, ra = 0.0;
        for (int i : group_a) {
            const float* row = dist.data() + static_cast<std::size_t>(i) * N;
            double acc = 0.0;
            for (int j : group_a) acc += row[j];
            saa += acc;
            ra += row_sum[i];
        }
        const double sab = ra - saa;
        const double sbb = total - 2.0 * ra + saa;
        const double mxx = saa / (static_cast<double>(na) * na);
        const double myy = sbb / (static_cast<double>(nb) * nb);
        const double mxy = sab / (static_cast<double>(na) * nb);
        return 2.0 * mxy - mxx - myy;
    }
};

} // namespace

TwoSampleTest energy_permutation_test(const std::vector<std::vector<double>>& a,
                                      const std::vector<std::vector<double>>& b,
                                      int permutations, double alpha, Rng& rng) {
    if (a.empty() || b.empty())
        throw StructuralError("energy_permutation_test: empty sample");
    const std::size_t dim = a.front().size();
    for (const auto& v : a)
        if (v.size() != dim) throw StructuralError("energy_permutation_test: ragged features");
    for (const auto& v : b)
        if (v.size() != dim) throw StructuralError("energy_permutation_test: feature dimensions differ");

    EnergyWorkspace ws;
    ws.na = static_cast<int>(a.size());
    ws.nb = static_cast<int>(b.size());
    ws.N = ws.na + ws.nb;
    if (ws.N > 8192)
        throw CapabilityError("energy_permutation_test: pooled sample too large (limit 8192)");

    std::vector<const std::vector<double>*> pooled;
    pooled.reserve(ws.N);
    for (const auto& v : a) pooled.push_back(&v);
    for (const auto& v : b) pooled.push_back(&v);

    ws.dist.assign(static_cast<std::size_t>(ws.N) * ws.N, 0.0f);
    for (int i = 0; i < ws.N; ++i) {
        for (int j = i + 1; j < ws.N; ++j) {
            double d2 = 0.0;
            for (std::size_t t = 0; t < dim; ++t) {
                const double d = (*pooled[i])[t] - (*pooled[j])[t];
                d2 += d * d;
            }
            const float d = static_cast<float>(std::sqrt(d2));
            ws.dist[static_cast<std::size_t>(i) * ws.N + j] = d;
            ws.dist[static_cast<std::size_t>(j) * ws.N + i] = d;
        }
    }
    ws.row_sum.assign(ws.N, 0.0);
    for (int i = 0; i < ws.N; ++i) {
        const float* row = ws.dist.data() + static_cast<std::size_t>(i) * ws.N;
        double acc = 0.0;
        for (int j = 0; j < ws.N; ++j) acc += row[j];
        ws.row_sum[i] = acc;
        ws.total += acc;
    }

    std::vector<int> group(ws.na);
    std::iota(group.begin(), group.end(), 0);
    const double observed = ws.statistic(group);

    std::vector<double> perm_stats;
    perm_stats.reserve(permutations);
    std::vector<int> shuffled;
    int at_least = 0;
    for (int p = 0; p < permutations; ++p) {
        rng.shuffle_indices(shuffled, ws.N);
        shuffled.resize(ws.na);
        perm_stats.push_back(ws.statistic(shuffled));
        if (perm_stats.back() >= observed) ++at_least;
    }

    TwoSampleTest result;
    result.statistic = observed;
    result.permutations = permutations;
    result.alpha = alpha;
    result.p_value = (1.0 + at_least) / (permutations + 1.0);
    std::sort(perm_stats.begin(), perm_stats.end());
    const int qidx = std::min<int>(permutations - 1,
                                   static_cast<int>(std::ceil((1.0 - alpha) * permutations)));
    result.threshold = perm_stats.empty() ? 0.0 : perm_stats[qidx];
    return result;
}

EquivalenceVerdict equivalence_test(const MetricTriple& T1, const MetricTriple& T2, int k,
                                    int count, int permutations, double alpha,
                                    std::uint64_t seed) {
    T1.validate();
    T2.validate();
    if (!T1.non_degenerate() || !T2.non_degenerate())
        throw PreconditionError("equivalence_test: both measures must be non-degenerate");
    Rng root(seed);
    EmpiricalMatrixDistribution E1 =
        sample_matrix_distribution(T1, k, count, root.split(1).seed());
    EmpiricalMatrixDistribution E2 =
        sample_matrix_distribution(T2, k, count, root.split(2).seed());
    std::vector<std::vector<double>> f1, f2;
    f1.reserve(count);
    f2.reserve(count);
    for (const auto& s : E1.samples) f1.push_back(sorted_upper_feature(s));
    for (const auto& s : E2.samples) f2.push_back(sorted_upper_feature(s));
    Rng perm_rng = root.split(3);
    TwoSampleTest t = energy_permutation_test(f1, f2, permutations, alpha, perm_rng);
    return {t.statistic, t.threshold, t.p_value, t.same(), k, count, permutations, alpha};
}

InvarianceReport invariance_diagnostics(const EmpiricalMatrixDistribution& E,
                                        std::uint64_t seed, int permutations, double alpha) {
    if (static_cast<int>(E.samples.size()) < 100)
        throw CapabilityError("invariance_diagnostics: need at least 100 samples");
    if (E.dimension < 3)
        throw CapabilityError("invariance_diagnostics: need dimension >= 3");

    Rng root(seed);
    const int count = static_cast<int>(E.samples.size());
    const int k = E.dimension;

    std::vector<std::vector<double>> raw;
    raw.reserve(count);
    for (const auto& s : E.samples) raw.push_back(upper_feature(s));

    // (a) simultaneous row/column permutations of each sample
    Rng perm_src = root.split(1);
    std::vector<std::vector<double>> permuted;
    permuted.reserve(count);
    std::vector<int> perm;
    for (const auto& s : E.samples) {
        perm_src.shuffle_indices(perm, k);
        permuted.push_back(upper_feature(s.permuted(perm)));
    }
    Rng rng_a = root.split(2);
    InvarianceReport report;
    report.permutation_test = energy_permutation_test(raw, permuted, permutations, alpha, rng_a);

    // (b) NW-shifted copies drawn at dimension k+1
    if (!E.source)
        throw CapabilityError("invariance_diagnostics: shift diagnostic needs the source triple");
    EmpiricalMatrixDistribution bigger =
        sample_matrix_distribution(*E.source, k + 1, count, root.split(3).seed());
    std::vector<std::vector<double>> shifted;
    shifted.reserve(count);
    for (const auto& s : bigger.samples) shifted.push_back(upper_feature(s.nw_shift()));
    Rng rng_b = root.split(4);
    report.shift_test = energy_permutation_test(raw, shifted, permutations, alpha, rng_b);
    return report;
}

LongSample draw_long_sample(const MetricTriple& T, int n, std::uint64_t seed) {
    T.validate();
    if (n < 1) throw StructuralError("draw_long_sample: need n >= 1");
    const auto cumulative = cumulative_weights(T);
    Rng rng(seed);
    LongSample s{T, {}, seed};
    s.indices.resize(n);
    for (int i = 0; i < n; ++i) s.indices[i] = draw_index(cumulative, rng);
    return s;
}

double ball_measure_estimate(const LongSample& s, int anchor, double radius) {
    if (radius < 0) throw ValueError("ball_measure_estimate: radius must be nonnegative");
    if (anchor < 0 || anchor >= static_cast<int>(s.indices.size()))
        throw StructuralError("ball_measure_estimate: anchor out of range");
    const int n = static_cast<int>(s.indices.size());
    const int a = s.indices[anchor];
    int inside = 0;
    for (int k = 0; k < n; ++k) {
        if (s.triple.space(a, s.indices[k]) < radius) ++inside;
    }
    return static_cast<double>(inside) / n;
}

double tightness_statistic(const DistanceMatrix& r, double epsilon, int N) {
    const int n = r.order();
    if (N >= n) throw StructuralError("tightness_statistic: need N < n");
    if (N < 1) throw StructuralError("tightness_statistic: need N >= 1");
    int covered = 0;
    for (int j = 0; j < n; ++j) {
        double best = std::numeric_limits<double>::infinity();
        for (int i = 0; i < N; ++i) best = std::min(best, r(i, j));
        if (best < epsilon) ++covered;
    }
    return static_cast<double>(covered) / n;
}

double compactness_statistic(const DistanceMatrix& r, double epsilon, int N) {
    const int n = r.order();
    if (N >= n) throw StructuralError("compactness_statistic: need N < n");
    if (N < 1) throw StructuralError("compactness_statistic: need N >= 1");
    int covered = 0;
    for (int j = N; j < n; ++j) {
        double best = std::numeric_limits<double>::infinity();
        for (int i = 0; i < N; ++i) best = std::min(best, r(i, j));
        if (best < epsilon) ++covered;
    }
    return static_cast<double>(covered) / (n - N);
}

namespace {

// Replica loop without materializing n x n matrices: only distances from
// the first N draws matter, and those group by support point.
template <typename InnerCondition>
CriterionCheck run_criterion(const MetricTriple& T, int n, int N, double epsilon, int replicas,
                             std::uint64_t seed, InnerCondition inner, bool tightness) {
    T.validate();
    if (N >= n) throw StructuralError("criterion check: need N < n");
    if (N < 1 || replicas < 1) throw StructuralError("criterion check: bad parameters");
    const auto cumulative = cumulative_weights(T);
    const int p = T.space.order();
    Rng root(seed);
    CriterionCheck check;
    check.epsilon = epsilon;
    check.N = N;
    check.n = n;
    check.replicas = replicas;
    check.per_replica.reserve(replicas);
    int hits = 0;
    std::vector<int> draws(n);
    std::vector<double> dmin(p);
    for (int rep = 0; rep < replicas; ++rep) {
        Rng rng = root.split(rep);
        for (int i = 0; i < n; ++i) draws[i] = draw_index(cumulative, rng);
        std::fill(dmin.begin(), dmin.end(), std::numeric_limits<double>::infinity());
        for (int q = 0; q < p; ++q) {
            for (int i = 0; i < N; ++i) {
                dmin[q] = std::min(dmin[q], T.space(draws[i], q));
            }
        }
        int covered = 0;
        const int from = tightness ? 0 : N;
        for (int j = from; j < n; ++j) {
            if (dmin[draws[j]] < epsilon) ++covered;
        }
        const double stat = static_cast<double>(covered) / (n - from);
        check.per_replica.push_back(stat);
        if (inner(stat)) ++hits;
    }
    check.probability = static_cast<double>(hits) / replicas;
    check.pass = check.probability > 1.0 - epsilon;
    return check;
}

} // namespace

CriterionCheck tightness_check(const MetricTriple& T, int n, int N, double epsilon,
                               int replicas, std::uint64_t seed) {
    return run_criterion(
        T, n, N, epsilon, replicas, seed,
        [epsilon](double stat) { return stat > 1.0 - epsilon; }, true);
}

CriterionCheck compactness_check(const MetricTriple& T, int n, int N, double epsilon,
                                 int replicas, std::uint64_t seed) {
    return run_criterion(
        T, n, N, epsilon, replicas, seed, [](double stat) { return stat >= 1.0; }, false);
}

} // namespace mcone
