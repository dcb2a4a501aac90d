#include "mcone/distance_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace mcone {

std::string to_string(const Violation& v) {
    std::ostringstream os;
    switch (v.kind) {
        case ViolationKind::NotSquare:
            os << "input is not square";
            break;
        case ViolationKind::NonFinite:
            os << "non-finite entry at (" << v.i << "," << v.j << ")";
            break;
        case ViolationKind::DiagonalNonzero:
            os << "diagonal entry (" << v.i << "," << v.i << ") = " << v.slack << " != 0";
            break;
        case ViolationKind::Asymmetric:
            os << "asymmetry at (" << v.i << "," << v.j << "), difference " << v.slack;
            break;
        case ViolationKind::Negative:
            os << "negative entry at (" << v.i << "," << v.j << "), value " << -v.slack;
            break;
        case ViolationKind::Triangle:
            os << "triangle violation (" << v.i << "," << v.k << "," << v.j
               << "): r(i,k)+r(k,j) short of r(i,j) by " << v.slack;
            break;
        case ViolationKind::DifferenceBound:
            os << "|a_" << v.i << " - a_" << v.j << "| exceeds r(" << v.i << "," << v.j
               << ") by " << v.slack;
            break;
        case ViolationKind::SumBound:
            os << "a_" << v.i << " + a_" << v.j << " short of r(" << v.i << "," << v.j
               << ") by " << v.slack;
            break;
        case ViolationKind::LengthMismatch:
            os << "vector length " << v.i << " does not match order " << v.j;
            break;
    }
    return os.str();
}

std::string ValidationReport::to_string() const {
    if (violations.empty()) return "ok";
    std::ostringstream os;
    os << violations.size() << " violation(s):";
    for (const auto& v : violations) os << "\n  " << mcone::to_string(v);
    return os.str();
}

namespace {

// Triangle scan over the packed upper triangle. For every unordered pair
// {i,j} and every third index k, checks r(i,k) + r(k,j) >= r(i,j) - tol.
void scan_triangles(int n, const std::vector<double>& upper, double tol,
                    std::vector<Violation>& out) {
    auto at = [&](int i, int j) -> double {
        if (i == j) return 0.0;
        if (i > j) std::swap(i, j);
        return upper[static_cast<std::size_t>(j) * (j - 1) / 2 + i];
    };
    for (int j = 1; j < n; ++j) {
        for (int i = 0; i < j; ++i) {
            const double rij = at(i, j);
            for (int k = 0; k < n; ++k) {
                if (k == i || k == j) continue;
                const double lhs = at(i, k) + at(k, j);
                if (lhs < rij - tol) {
                    out.push_back({ViolationKind::Triangle, i, j, k, rij - lhs});
                }
            }
        }
    }
}

} // namespace

ValidationReport validate_upper(int order, const std::vector<double>& upper, double tolerance) {
    ValidationReport report;
    if (order < 1) {
        report.violations.push_back({ViolationKind::NotSquare, order, -1, -1, 0.0});
        return report;
    }
    const std::size_t expect = static_cast<std::size_t>(order) * (order - 1) / 2;
    if (upper.size() != expect) {
        report.violations.push_back(
            {ViolationKind::LengthMismatch, static_cast<int>(upper.size()), order, -1, 0.0});
        return report;
    }
    std::size_t idx = 0;
    for (int j = 1; j < order; ++j) {
        for (int i = 0; i < j; ++i, ++idx) {
            const double v = upper[idx];
            if (!std::isfinite(v)) {
                report.violations.push_back({ViolationKind::NonFinite, i, j, -1, 0.0});
            } else if (v < 0.0) {
                report.violations.push_back({ViolationKind::Negative, i, j, -1, -v});
            }
        }
    }
    if (!report.ok()) return report;
    scan_triangles(order, upper, tolerance, report.violations);
    return report;
}

ValidationReport validate_full(const std::vector<std::vector<double>>& candidate,
                               double tolerance) {
    ValidationReport report;
    const int n = static_cast<int>(candidate.size());
    if (n == 0) {
        report.violations.push_back({ViolationKind::NotSquare, 0, -1, -1, 0.0});
        return report;
    }
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(candidate[i].size()) != n) {
            report.violations.push_back(
                {ViolationKind::NotSquare, i, static_cast<int>(candidate[i].size()), -1, 0.0});
            return report;
        }
    }
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (!std::isfinite(candidate[i][j])) {
                report.violations.push_back({ViolationKind::NonFinite, i, j, -1, 0.0});
            }
        }
    }
    if (!report.ok()) return report;
    for (int i = 0; i < n; ++i) {
        if (candidate[i][i] != 0.0) {
            report.violations.push_back(
                {ViolationKind::DiagonalNonzero, i, i, -1, candidate[i][i]});
        }
    }
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double d = candidate[i][j] - candidate[j][i];
            if (std::abs(d) > tolerance) {
                report.violations.push_back({ViolationKind::Asymmetric, i, j, -1, std::abs(d)});
            }
            if (candidate[i][j] < 0.0) {
                report.violations.push_back({ViolationKind::Negative, i, j, -1, -candidate[i][j]});
            }
        }
    }
    if (!report.ok()) return report;
    std::vector<double> upper;
    upper.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
    for (int j = 1; j < n; ++j)
        for (int i = 0; i < j; ++i) upper.push_back(candidate[i][j]);
    scan_triangles(n, upper, tolerance, report.violations);
    return report;
}

DistanceMatrix DistanceMatrix::zero(int order, double tolerance) {
    if (order < 1) throw StructuralError("matrix order must be >= 1");
    return DistanceMatrix(Trusted{}, order,
                          std::vector<double>(static_cast<std::size_t>(order) * (order - 1) / 2, 0.0),
                          tolerance);
}

DistanceMatrix DistanceMatrix::from_upper(int order, std::vector<double> upper, double tolerance) {
    ValidationReport report = validate_upper(order, upper, tolerance);
    if (!report.ok()) {
        const auto& first = report.violations.front();
        if (first.kind == ViolationKind::NotSquare || first.kind == ViolationKind::LengthMismatch)
            throw StructuralError("bad matrix shape: " + report.to_string());
        if (first.kind == ViolationKind::NonFinite || first.kind == ViolationKind::Negative)
            throw ValueError("bad matrix entries: " + report.to_string());
        throw ConstraintError("not a distance matrix: " + report.to_string(), report.violations);
    }
    return DistanceMatrix(Trusted{}, order, std::move(upper), tolerance);
}

DistanceMatrix DistanceMatrix::from_full(const std::vector<std::vector<double>>& full,
                                         double tolerance) {
    ValidationReport report = validate_full(full, tolerance);
    if (!report.ok()) {
        const auto& first = report.violations.front();
        if (first.kind == ViolationKind::NotSquare)
            throw StructuralError("bad matrix shape: " + report.to_string());
        if (first.kind == ViolationKind::NonFinite || first.kind == ViolationKind::Negative)
            throw ValueError("bad matrix entries: " + report.to_string());
        throw ConstraintError("not a distance matrix: " + report.to_string(), report.violations);
    }
    const int n = static_cast<int>(full.size());
    std::vector<double> upper;
    upper.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
    for (int j = 1; j < n; ++j)
        for (int i = 0; i < j; ++i) upper.push_back(full[i][j]);
    return DistanceMatrix(Trusted{}, n, std::move(upper), tolerance);
}

double DistanceMatrix::max_entry() const {
    double m = 0.0;
    for (double v : upper_) m = std::max(m, v);
    return m;
}

bool DistanceMatrix::is_true_metric() const {
    for (double v : upper_)
        if (v <= tolerance_) return false;
    return true;
}

std::vector<double> DistanceMatrix::column_prefix(int m, int k) const {
    if (m < 0 || m >= order_ || k > m)
        throw StructuralError("column_prefix: need 0 <= k <= m < order");
    std::vector<double> col(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) col[i] = (*this)(i, m);
    return col;
}

DistanceMatrix DistanceMatrix::nw_corner(int k) const {
    if (k < 1 || k > order_)
        throw StructuralError("nw_corner: order out of range");
    std::vector<double> upper(upper_.begin(),
                              upper_.begin() + static_cast<std::size_t>(k) * (k - 1) / 2);
    return DistanceMatrix(Trusted{}, k, std::move(upper), tolerance_);
}

DistanceMatrix DistanceMatrix::nw_shift() const {
    if (order_ < 2) throw StructuralError("nw_shift: order must be >= 2");
    std::vector<double> upper;
    upper.reserve(static_cast<std::size_t>(order_ - 1) * (order_ - 2) / 2);
    for (int j = 2; j < order_; ++j)
        for (int i = 1; i < j; ++i) upper.push_back((*this)(i, j));
    return DistanceMatrix(Trusted{}, order_ - 1, std::move(upper), tolerance_);
}

DistanceMatrix DistanceMatrix::extended(std::span<const double> a) const {
    ValidationReport report = check_admissible(*this, a);
    if (!report.ok()) {
        if (report.violations.front().kind == ViolationKind::LengthMismatch)
            throw StructuralError("extend: " + report.to_string());
        throw ConstraintError("extend: vector is not admissible: " + report.to_string(),
                              report.violations);
    }
    std::vector<double> upper(upper_);
    upper.insert(upper.end(), a.begin(), a.end());
    return DistanceMatrix(Trusted{}, order_ + 1, std::move(upper), tolerance_);
}

DistanceMatrix DistanceMatrix::permuted(std::span<const int> perm) const {
    if (static_cast<int>(perm.size()) != order_)
        throw StructuralError("permuted: permutation length does not match order");
    std::vector<double> upper;
    upper.reserve(upper_.size());
    for (int j = 1; j < order_; ++j)
        for (int i = 0; i < j; ++i) upper.push_back((*this)(perm[i], perm[j]));
    return DistanceMatrix(Trusted{}, order_, std::move(upper), tolerance_);
}

int DistanceMatrix::geometric_rank() const {
    std::vector<int> parent(order_);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    for (int j = 1; j < order_; ++j) {
        for (int i = 0; i < j; ++i) {
            if ((*this)(i, j) <= tolerance_) {
                parent[find(i)] = find(j);
            }
        }
    }
    int classes = 0;
    for (int i = 0; i < order_; ++i)
        if (find(i) == i) ++classes;
    return classes;
}

std::vector<std::vector<double>> DistanceMatrix::to_full() const {
    std::vector<std::vector<double>> full(order_, std::vector<double>(order_, 0.0));
    for (int j = 1; j < order_; ++j) {
        for (int i = 0; i < j; ++i) {
            full[i][j] = full[j][i] = (*this)(i, j);
        }
    }
    return full;
}

ValidationReport check_admissible(const DistanceMatrix& r, std::span<const double> a) {
    ValidationReport report;
    const int n = r.order();
    if (static_cast<int>(a.size()) != n) {
        report.violations.push_back(
            {ViolationKind::LengthMismatch, static_cast<int>(a.size()), n, -1, 0.0});
        return report;
    }
    const double tol = r.tolerance();
    for (int i = 0; i < n; ++i) {
        if (!std::isfinite(a[i])) {
            report.violations.push_back({ViolationKind::NonFinite, i, n, -1, 0.0});
        } else if (a[i] < -tol) {
            report.violations.push_back({ViolationKind::Negative, i, n, -1, -a[i]});
        }
    }
    if (!report.ok()) return report;
    for (int j = 1; j < n; ++j) {
        for (int i = 0; i < j; ++i) {
            const double rij = r(i, j);
            const double diff = std::abs(a[i] - a[j]);
            if (diff > rij + tol)
                report.violations.push_back({ViolationKind::DifferenceBound, i, j, -1, diff - rij});
            const double sum = a[i] + a[j];
            if (sum < rij - tol)
                report.violations.push_back({ViolationKind::SumBound, i, j, -1, rij - sum});
        }
    }
    return report;
}

bool is_admissible(const DistanceMatrix& r, std::span<const double> a) {
    return check_admissible(r, a).ok();
}

std::vector<ExtremalRay> extremal_rays(int n) {
    if (n < 2)
        throw StructuralError("extremal_rays: the order-1 cone is a single point, need n >= 2");
    if (n > 30) throw CapabilityError("extremal_rays: order too large to enumerate");
    std::vector<ExtremalRay> rays;
    rays.reserve((std::size_t{1} << (n - 1)) - 1);
    const std::uint32_t full = (n == 32) ? ~0u : ((1u << n) - 1u);
    // canonical side: the one containing point 0; skip the full set
    for (std::uint32_t mask = 1; mask < full; mask += 2) {
        std::vector<double> upper;
        upper.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
        for (int j = 1; j < n; ++j) {
            for (int i = 0; i < j; ++i) {
                const bool si = (mask >> i) & 1u;
                const bool sj = (mask >> j) & 1u;
                upper.push_back(si == sj ? 0.0 : 1.0);
            }
        }
        rays.push_back({mask, DistanceMatrix(DistanceMatrix::Trusted{}, n, std::move(upper),
                                             DistanceMatrix::kDefaultTolerance)});
    }
    return rays;
}

Interval amalgamation_interval(std::span<const double> rho1_to_new,
                               std::span<const double> rho2_to_new,
                               const DistanceMatrix& shared) {
    ValidationReport r1 = check_admissible(shared, rho1_to_new);
    if (!r1.ok())
        throw ConstraintError("amalgamation_interval: first extension not admissible: " +
                                  r1.to_string(),
                              r1.violations);
    ValidationReport r2 = check_admissible(shared, rho2_to_new);
    if (!r2.ok())
        throw ConstraintError("amalgamation_interval: second extension not admissible: " +
                                  r2.to_string(),
                              r2.violations);
    double lo = 0.0;
    double hi = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < rho1_to_new.size(); ++i) {
        lo = std::max(lo, std::abs(rho1_to_new[i] - rho2_to_new[i]));
        hi = std::min(hi, rho1_to_new[i] + rho2_to_new[i]);
    }
    if (shared.order() == 0 || !std::isfinite(hi)) {
        // cannot happen: shared has order >= 1, so both spans are nonempty
        throw StructuralError("amalgamation_interval: empty extension vectors");
    }
    if (lo > hi) {
        // mathematically impossible for admissible inputs; tolerate float dust
        if (lo - hi <= 4.0 * shared.tolerance()) {
            lo = hi = 0.5 * (lo + hi);
        } else {
            throw ConstraintError("amalgamation_interval: interval unexpectedly empty", {});
        }
    }
    return {lo, hi};
}

DistanceMatrix amalgamate(const DistanceMatrix& shared,
                          std::span<const double> rho1_to_new,
                          std::span<const double> rho2_to_new, double h) {
    DistanceMatrix first = shared.extended(rho1_to_new);
    std::vector<double> second(rho2_to_new.begin(), rho2_to_new.end());
    second.push_back(h);
    return first.extended(second);
}

} // namespace mcone
