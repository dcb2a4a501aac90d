#include "mcone/universal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mcone {

int diagonal_schedule_value(int step) {
    if (step < 1) throw StructuralError("schedule positions are 1-based");
    // position step sits in block b at offset o (1-based): step = b(b-1)/2 + o
    int b = static_cast<int>((std::sqrt(8.0 * step + 1.0) - 1.0) / 2.0);
    while (b * (b + 1) / 2 >= step) --b;
    while ((b + 1) * (b + 2) / 2 < step) ++b;
    return step - b * (b + 1) / 2;
}

int diagonal_schedule_count(int v, int n) {
    if (v < 1 || n < 0) throw StructuralError("bad schedule query");
    // full blocks F: largest B with B(B+1)/2 <= n, remainder rem
    int F = static_cast<int>((std::sqrt(8.0 * n + 1.0) - 1.0) / 2.0);
    while (F * (F + 1) / 2 > n) --F;
    while ((F + 1) * (F + 2) / 2 <= n) ++F;
    const int rem = n - F * (F + 1) / 2;
    int count = std::max(0, F - v + 1);
    if (v <= rem) ++count;
    return count;
}

struct UniversalBuilder::DenseStream {
    int order;
    Rng rng;
    std::unique_ptr<AdmissibleSampler> exact;
    std::unique_ptr<HitAndRunSampler> walker;

    DenseStream(const DistanceMatrix& corner, std::optional<double> diameter, Rng stream_rng)
        : order(corner.order()), rng(std::move(stream_rng)) {
        const DiagonalLaw law = DiagonalLaw::exponential(1.0);
        if (order <= kMaxExactOrder) {
            exact = std::make_unique<AdmissibleSampler>(corner, law);
        } else {
            walker = std::make_unique<HitAndRunSampler>(corner, law, diameter);
            walker->sample(rng, 64);  // burn-in
        }
        diameter_cap = diameter;
        corner_copy = std::make_unique<DistanceMatrix>(corner);
    }

    std::optional<double> diameter_cap;
    std::unique_ptr<DistanceMatrix> corner_copy;

    std::vector<double> next() {
        const DistanceMatrix& corner = *corner_copy;
        for (int attempt = 0; attempt < 4096; ++attempt) {
            std::vector<double> a = exact ? exact->sample(rng) : walker->sample(rng, 8);
            if (diameter_cap &&
                *std::max_element(a.begin(), a.end()) >= *diameter_cap) {
                continue;
            }
            // keep to the interior: strict slack in every inequality
            const double margin = 4.0 * corner.tolerance();
            bool interior = true;
            for (int i = 0; i < corner.order() && interior; ++i) {
                if (a[i] <= margin) interior = false;
            }
            for (int j = 1; j < corner.order() && interior; ++j) {
                for (int i = 0; i < j; ++i) {
                    const double rij = corner(i, j);
                    if (std::abs(a[i] - a[j]) >= rij - margin || a[i] + a[j] <= rij + margin) {
                        interior = false;
                        break;
                    }
                }
            }
            if (interior || attempt >= 64) return a;  // degenerate corners have no interior
        }
        throw CapabilityError("dense stream: cannot draw an admissible point under the cap");
    }
};

UniversalBuilder::UniversalBuilder(std::uint64_t seed, ScheduleSpec schedule,
                                   std::optional<double> diameter, double tolerance)
    : current_(DistanceMatrix::zero(1, tolerance)),
      schedule_(schedule),
      diameter_(diameter),
      root_(seed) {
    if (diameter_ && *diameter_ <= 0) throw ValueError("diameter cap must be positive");
}

UniversalBuilder::~UniversalBuilder() = default;
UniversalBuilder::UniversalBuilder(UniversalBuilder&&) noexcept = default;
UniversalBuilder& UniversalBuilder::operator=(UniversalBuilder&&) noexcept = default;

std::vector<double> UniversalBuilder::next_dense_point(int k) {
    auto it = streams_.find(k);
    if (it == streams_.end()) {
        it = streams_
                 .emplace(k, std::make_unique<DenseStream>(current_.nw_corner(k), diameter_,
                                                           root_.split(static_cast<std::uint64_t>(k))))
                 .first;
    }
    return it->second->next();
}

void UniversalBuilder::step() {
    const int n = current_.order();
    const int step_index = steps_done_ + 1;
    const int m = diagonal_schedule_value(step_index);
    // the diagonal schedule satisfies m <= step_index = current order
    const int visit = ++visits_[m];

    std::vector<double> target = next_dense_point(m);

    // Complete the projected target coordinate by coordinate: each new
    // coordinate is the midpoint of the amalgamation interval between the
    // row built so far and the corresponding column prefix of the matrix.
    std::vector<double> row = target;
    row.reserve(n);
    for (int k = m; k < n; ++k) {
        double lo = 0.0;
        double hi = std::numeric_limits<double>::infinity();
        for (int i = 0; i < k; ++i) {
            const double rik = current_(i, k);
            lo = std::max(lo, std::abs(row[i] - rik));
            hi = std::min(hi, row[i] + rik);
        }
        if (diameter_) hi = std::min(hi, *diameter_);
        if (lo > hi) {
            // nonemptiness is guaranteed by the projection lifting lemma;
            // tolerate float dust only
            if (lo - hi > 1e-6) {
                throw StructuralError("universal builder: empty amalgamation interval");
            }
            hi = lo;
        }
        row.push_back(0.5 * (lo + hi));
    }

    double gap = 0.0;
    for (int i = 0; i < m; ++i) gap = std::max(gap, std::abs(row[i] - target[i]));
    const double bound = std::max(std::pow(2.0, -step_index), 1e-9);

    current_ = current_.extended(row);
    log_.push_back({step_index, m, visit, gap, bound});
    ++steps_done_;
}

void UniversalBuilder::run(int steps) {
    for (int i = 0; i < steps; ++i) step();
}

DistanceMatrix build_universal(int steps, std::uint64_t seed, ScheduleSpec schedule,
                               std::optional<double> diameter) {
    if (steps < 1) throw StructuralError("build_universal: steps must be >= 1");
    UniversalBuilder builder(seed, schedule, diameter);
    builder.run(steps);
    return builder.current();
}

UniversalityReport universality_test(const DistanceMatrix& r, int n, double epsilon,
                                     int targets, std::uint64_t seed) {
    const int N = r.order();
    if (n >= N) throw StructuralError("universality_test: need n < order of the matrix");
    if (n < 1) throw StructuralError("universality_test: need n >= 1");
    AdmissibleSampler sampler(r.nw_corner(n), DiagonalLaw::exponential(1.0));
    Rng rng(seed);

    double worst = 0.0;
    for (int t = 0; t < targets; ++t) {
        const std::vector<double> a = sampler.sample(rng);
        double best = std::numeric_limits<double>::infinity();
        for (int col = n; col < N; ++col) {
            double gap = 0.0;
            for (int i = 0; i < n; ++i) {
                gap = std::max(gap, std::abs(r(i, col) - a[i]));
                if (gap >= best) break;
            }
            best = std::min(best, gap);
        }
        worst = std::max(worst, best);
    }
    return {n, epsilon, targets, worst, worst < epsilon};
}

namespace {

bool weak_search(const DistanceMatrix& r, const DistanceMatrix& q, double eps,
                 std::vector<int>& chosen, int depth) {
    const int k = q.order();
    if (depth == k) return true;
    const int N = r.order();
    const int start = depth == 0 ? 0 : chosen[depth - 1] + 1;
    for (int cand = start; cand <= N - (k - depth); ++cand) {
        bool ok = true;
        for (int s = 0; s < depth; ++s) {
            if (std::abs(r(chosen[s], cand) - q(s, depth)) >= eps) {
                ok = false;
                break;
            }
        }
        if (!ok) continue;
        chosen[depth] = cand;
        if (weak_search(r, q, eps, chosen, depth + 1)) return true;
    }
    return false;
}

} // namespace

std::optional<std::vector<int>> weak_universality_test(const DistanceMatrix& r,
                                                       const DistanceMatrix& q, double epsilon) {
    if (q.order() > r.order())
        throw StructuralError("weak_universality_test: pattern larger than the matrix");
    if (q.order() > 6)
        throw CapabilityError("weak_universality_test: search bound is order <= 6");
    std::vector<int> chosen(q.order(), -1);
    if (weak_search(r, q, epsilon, chosen, 0)) return chosen;
    return std::nullopt;
}

std::vector<double> chi_projection(std::span<const double> a, int k) {
    if (k < 1 || k > static_cast<int>(a.size()))
        throw StructuralError("chi_projection: k out of range");
    return std::vector<double>(a.begin(), a.begin() + k);
}

} // namespace mcone
