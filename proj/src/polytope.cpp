#include "mcone/polytope.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>

#include "mcone/detail/simplex.hpp"

namespace mcone {

namespace {

using ActiveSet = std::array<std::uint64_t, 2>;

inline void set_bit(ActiveSet& s, int b) { s[b >> 6] |= std::uint64_t{1} << (b & 63); }

inline ActiveSet and_sets(const ActiveSet& a, const ActiveSet& b) {
    return {a[0] & b[0], a[1] & b[1]};
}

inline bool subset_of(const ActiveSet& a, const ActiveSet& b) {
    return (a[0] & ~b[0]) == 0 && (a[1] & ~b[1]) == 0;
}

inline int popcount(const ActiveSet& s) {
    return std::popcount(s[0]) + std::popcount(s[1]);
}

// H-representation of A(r) plus the bounding box used to make the
// clipping polytope compact. Rows: for every pair (i < j) the three
// inequalities a_i - a_j <= r_ij, a_j - a_i <= r_ij, -a_i - a_j <= -r_ij,
// then the genuine lower bounds -a_i <= 0, then synthetic uppers a_i <= B.
struct ConstraintSystem {
    int n = 0;
    int metric_count = 0;        // 3 * n(n-1)/2
    int lower_base = 0;          // index of first lower bound
    int upper_base = 0;          // index of first synthetic upper bound
    double box = 0;
    Eigen::MatrixXd normals;     // row c: normals.row(c) * a <= rhs(c)
    Eigen::VectorXd rhs;

    int total() const { return upper_base + n; }
    bool synthetic(int c) const { return c >= upper_base; }
};

ConstraintSystem build_constraints(const DistanceMatrix& r) {
    ConstraintSystem cs;
    const int n = r.order();
    cs.n = n;
    cs.metric_count = 3 * n * (n - 1) / 2;
    cs.lower_base = cs.metric_count;
    cs.upper_base = cs.metric_count + n;
    cs.box = 2.0 * r.max_entry() + 1.0;
    const int total = cs.upper_base + n;
    cs.normals = Eigen::MatrixXd::Zero(total, n);
    cs.rhs = Eigen::VectorXd::Zero(total);
    int c = 0;
    for (int j = 1; j < n; ++j) {
        for (int i = 0; i < j; ++i) {
            const double rij = r(i, j);
            cs.normals(c, i) = 1;
            cs.normals(c, j) = -1;
            cs.rhs(c) = rij;
            ++c;
            cs.normals(c, i) = -1;
            cs.normals(c, j) = 1;
            cs.rhs(c) = rij;
            ++c;
            cs.normals(c, i) = -1;
            cs.normals(c, j) = -1;
            cs.rhs(c) = -rij;
            ++c;
        }
    }
    for (int i = 0; i < n; ++i) {
        cs.normals(cs.lower_base + i, i) = -1;
        cs.rhs(cs.lower_base + i) = 0;
    }
    for (int i = 0; i < n; ++i) {
        cs.normals(cs.upper_base + i, i) = 1;
        cs.rhs(cs.upper_base + i) = cs.box;
    }
    return cs;
}

struct ClipVertex {
    Eigen::VectorXd x;
    ActiveSet as{0, 0};
};

// Incremental clipping of the box by the metric constraints, maintaining
// the exact vertex set. Adjacency between an inside and an outside vertex
// is decided combinatorially: they are adjacent iff no other current
// vertex is active on all constraints common to the pair.
std::vector<ClipVertex> clip_vertices(const ConstraintSystem& cs, double eps_on) {
    const int n = cs.n;
    std::vector<ClipVertex> verts;
    verts.reserve(std::size_t{1} << n);
    for (std::uint64_t corner = 0; corner < (std::uint64_t{1} << n); ++corner) {
        ClipVertex v;
        v.x = Eigen::VectorXd::Zero(n);
        for (int i = 0; i < n; ++i) {
            if ((corner >> i) & 1) {
                v.x(i) = cs.box;
                set_bit(v.as, cs.upper_base + i);
            } else {
                set_bit(v.as, cs.lower_base + i);
            }
        }
        verts.push_back(std::move(v));
    }

    std::vector<double> vals;
    std::vector<int> inside, outside;
    for (int c = 0; c < cs.metric_count; ++c) {
        const int count = static_cast<int>(verts.size());
        vals.resize(count);
        inside.clear();
        outside.clear();
        for (int v = 0; v < count; ++v) {
            const double val = cs.normals.row(c).dot(verts[v].x) - cs.rhs(c);
            vals[v] = val;
            if (val > eps_on) {
                outside.push_back(v);
            } else if (val >= -eps_on) {
                set_bit(verts[v].as, c);
            } else {
                inside.push_back(v);
            }
        }
        if (outside.empty()) continue;

        std::vector<ClipVertex> born;
        const int need = n - 1;
        for (int u : inside) {
            const ActiveSet& au = verts[u].as;
            for (int w : outside) {
                ActiveSet common = and_sets(au, verts[w].as);
                if (popcount(common) < need) continue;
                bool adjacent = true;
                for (int t = 0; t < count; ++t) {
                    if (t == u || t == w) continue;
                    if (subset_of(common, verts[t].as)) {
                        adjacent = false;
                        break;
                    }
                }
                if (!adjacent) continue;
                const double t = vals[u] / (vals[u] - vals[w]);
                ClipVertex nv;
                nv.x = verts[u].x + t * (verts[w].x - verts[u].x);
                nv.as = common;
                set_bit(nv.as, c);
                born.push_back(std::move(nv));
            }
        }

        std::vector<ClipVertex> next;
        next.reserve(count - outside.size() + born.size());
        for (int v = 0; v < count; ++v) {
            if (vals[v] <= eps_on) next.push_back(std::move(verts[v]));
        }
        for (auto& b : born) next.push_back(std::move(b));
        verts.swap(next);
    }
    return verts;
}

} // namespace

AdmissiblePolytope enumerate_vertices(const DistanceMatrix& r) {
    const int n = r.order();
    if (n > kMaxExactOrder) {
        throw CapabilityError(
            "enumerate_vertices: exact enumeration is limited to order <= " +
            std::to_string(kMaxExactOrder) + ", got " + std::to_string(n));
    }
    const ConstraintSystem cs = build_constraints(r);
    const double scale = std::max(1.0, cs.box);
    const double eps_on = 1e-9 * scale;
    std::vector<ClipVertex> verts = clip_vertices(cs, eps_on);

    // Recompute active sets from scratch; numerical drift during clipping
    // must not decide which constraints count as tight.
    const double eps_active = 1e-8 * scale;
    std::vector<Eigen::VectorXd> kept;
    for (auto& v : verts) {
        bool on_box = false;
        std::vector<int> active;
        bool feasible = true;
        for (int c = 0; c < cs.total(); ++c) {
            const double val = cs.normals.row(c).dot(v.x) - cs.rhs(c);
            if (val > eps_active) {
                feasible = false;
                break;
            }
            if (val >= -eps_active) {
                if (cs.synthetic(c)) {
                    on_box = true;
                    break;
                }
                active.push_back(c);
            }
        }
        if (!feasible || on_box) continue;
        if (static_cast<int>(active.size()) < n) continue;
        Eigen::MatrixXd normals(active.size(), n);
        for (std::size_t i = 0; i < active.size(); ++i) normals.row(i) = cs.normals.row(active[i]);
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(normals);
        qr.setThreshold(1e-7);
        if (qr.rank() < n) continue;
        kept.push_back(v.x);
    }

    // Deduplicate within 1e-8 (coincident active-set bases yield repeats).
    std::sort(kept.begin(), kept.end(), [](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
        for (int i = 0; i < a.size(); ++i) {
            if (a(i) < b(i) - 1e-12) return true;
            if (a(i) > b(i) + 1e-12) return false;
        }
        return false;
    });
    const double dedup = 1e-8;
    std::vector<Eigen::VectorXd> unique;
    for (auto& v : kept) {
        bool dup = false;
        for (auto it = unique.rbegin(); it != unique.rend(); ++it) {
            if (v(0) - (*it)(0) > dedup) break;
            if (((*it) - v).cwiseAbs().maxCoeff() <= dedup) {
                dup = true;
                break;
            }
        }
        if (!dup) unique.push_back(std::move(v));
    }

    AdmissiblePolytope poly{r, Eigen::MatrixXd(unique.size(), n),
                            Eigen::VectorXd::Ones(n), 0, 0};
    for (std::size_t i = 0; i < unique.size(); ++i) poly.vertices.row(i) = unique[i];

    if (unique.empty()) {
        // cannot happen: every A(r) has at least one extreme point
        throw StructuralError("enumerate_vertices: no vertices found");
    }

    const int V = static_cast<int>(unique.size());
    Eigen::MatrixXd diffs(V - 1 >= 0 ? V - 1 : 0, n);
    for (int i = 1; i < V; ++i) diffs.row(i - 1) = poly.vertices.row(i) - poly.vertices.row(0);
    auto rank_of = [&](const Eigen::MatrixXd& m) {
        if (m.rows() == 0) return 0;
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(m);
        qr.setThreshold(1e-7 / scale);
        return static_cast<int>(qr.rank());
    };
    poly.hull_dimension = rank_of(diffs);
    Eigen::MatrixXd with_ray(diffs.rows() + 1, n);
    if (diffs.rows() > 0) with_ray.topRows(diffs.rows()) = diffs;
    with_ray.row(diffs.rows()).setOnes();
    poly.set_dimension = rank_of(with_ray);
    return poly;
}

bool contains(const DistanceMatrix& r, std::span<const double> a) {
    if (static_cast<int>(a.size()) != r.order())
        throw StructuralError("contains: vector length does not match order");
    return is_admissible(r, a);
}

bool in_convex_hull(const Eigen::VectorXd& point, const Eigen::MatrixXd& vertices, double tol) {
    const int V = static_cast<int>(vertices.rows());
    const int n = static_cast<int>(vertices.cols());
    if (V == 0) return false;
    Eigen::MatrixXd A(n + 1, V);
    A.topRows(n) = vertices.transpose();
    A.row(n).setOnes();
    Eigen::VectorXd b(n + 1);
    b.head(n) = point;
    b(n) = 1.0;
    return detail::equality_feasible(A, b, tol);
}

std::optional<DiagonalShift> min_diagonal_shift(const AdmissiblePolytope& poly,
                                                const Eigen::VectorXd& p, double bisect_tol) {
    const int n = static_cast<int>(p.size());
    const Eigen::VectorXd lo = poly.vertices.colwise().minCoeff();
    double lambda_max = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) lambda_max = std::min(lambda_max, p(i) - lo(i));
    if (lambda_max < -1e-9) return std::nullopt;
    lambda_max = std::max(lambda_max, 0.0);

    auto feasible = [&](double lam) {
        return in_convex_hull(p - lam * Eigen::VectorXd::Ones(n), poly.vertices, 1e-8);
    };

    if (feasible(0.0)) return DiagonalShift{0.0, 0.0};

    auto scan = [&](int grid) -> std::optional<std::pair<double, double>> {
        double prev = 0.0;
        for (int g = 1; g <= grid; ++g) {
            const double lam = lambda_max * g / grid;
            if (feasible(lam)) return std::make_pair(prev, lam);
            prev = lam;
        }
        return std::nullopt;
    };

    auto bracket = scan(64);
    if (!bracket) bracket = scan(512);
    if (!bracket) return std::nullopt;

    auto [infeas, feas] = *bracket;
    while (feas - infeas > bisect_tol) {
        const double mid = 0.5 * (infeas + feas);
        if (feasible(mid)) {
            feas = mid;
        } else {
            infeas = mid;
        }
    }
    return DiagonalShift{feas, feas - infeas};
}

AdmissibleSampler::AdmissibleSampler(const DistanceMatrix& r, DiagonalLaw law)
    : poly_(enumerate_vertices(r)), law_(law) {
    prepare();
}

AdmissibleSampler::AdmissibleSampler(AdmissiblePolytope poly, DiagonalLaw law)
    : poly_(std::move(poly)), law_(law) {
    prepare();
}

void AdmissibleSampler::prepare() {
    const int V = static_cast<int>(poly_.vertices.rows());
    const int n = static_cast<int>(poly_.vertices.cols());
    hull_origin_ = poly_.vertices.colwise().mean();
    Eigen::MatrixXd centered = poly_.vertices.rowwise() - hull_origin_.transpose();
    const int d = poly_.hull_dimension;
    if (d == 0 || V == 1) {
        hull_basis_.resize(n, 0);
        hull_coords_.resize(V, 0);
        lo_.resize(0);
        hi_.resize(0);
        return;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeThinV);
    hull_basis_ = svd.matrixV().leftCols(d);
    hull_coords_ = centered * hull_basis_;
    lo_ = hull_coords_.colwise().minCoeff();
    hi_ = hull_coords_.colwise().maxCoeff();
}

std::vector<double> AdmissibleSampler::sample_compact(Rng& rng) const {
    const int n = static_cast<int>(poly_.vertices.cols());
    const int d = static_cast<int>(hull_basis_.cols());
    Eigen::VectorXd q;
    if (d == 0) {
        q = poly_.vertices.row(0).transpose();
    } else {
        Eigen::VectorXd y(d);
        const int max_tries = 1000000;
        int tries = 0;
        for (;;) {
            for (int i = 0; i < d; ++i) y(i) = rng.uniform(lo_(i), hi_(i));
            if (in_convex_hull(y, hull_coords_, 1e-8)) break;
            if (++tries >= max_tries)
                throw CapabilityError("sample_compact: rejection sampling failed to accept");
        }
        q = hull_origin_ + hull_basis_ * y;
        for (int i = 0; i < n; ++i) q(i) = std::max(q(i), 0.0);
    }
    return std::vector<double>(q.data(), q.data() + n);
}

std::vector<double> AdmissibleSampler::sample(Rng& rng) const {
    std::vector<double> a = sample_compact(rng);
    const double lambda = law_.sample(rng);
    for (double& v : a) v += lambda;
    return a;
}

HitAndRunSampler::HitAndRunSampler(const DistanceMatrix& r, DiagonalLaw law,
                                   std::optional<double> diameter)
    : r_(r), law_(law), diameter_(diameter) {
    const int n = r.order();
    const double maxr = r.max_entry();
    double c = 0.55 * maxr + 0.25 * std::max(law.mean(), 1e-3);
    if (diameter_) c = std::min(c, 0.5 * (0.5 * maxr + *diameter_));
    state_.assign(n, c);
    if (!is_admissible(r_, state_)) {
        throw CapabilityError(
            "HitAndRunSampler: could not construct an interior starting point "
            "(matrix is not a true distance matrix?)");
    }
}

std::vector<double> HitAndRunSampler::sample(Rng& rng, int steps) {
    const int n = r_.order();
    std::vector<double> dir(n);
    for (int s = 0; s < steps; ++s) {
        double norm = 0.0;
        for (int i = 0; i < n; ++i) {
            dir[i] = rng.normal01();
            norm += dir[i] * dir[i];
        }
        norm = std::sqrt(norm);
        if (norm < 1e-300) continue;
        for (double& v : dir) v /= norm;

        // Chord [t_lo, t_hi] of the line state + t*dir inside A(r).
        double t_lo = -std::numeric_limits<double>::infinity();
        double t_hi = std::numeric_limits<double>::infinity();
        auto bound = [&](double coeff, double slack) {
            // constraint: coeff * t <= slack
            if (coeff > 1e-14) {
                t_hi = std::min(t_hi, slack / coeff);
            } else if (coeff < -1e-14) {
                t_lo = std::max(t_lo, slack / coeff);
            }
            // coeff ~ 0: slack >= 0 holds since the state is feasible
        };
        for (int j = 1; j < n; ++j) {
            for (int i = 0; i < j; ++i) {
                const double rij = r_(i, j);
                const double diff_x = state_[i] - state_[j];
                const double diff_d = dir[i] - dir[j];
                bound(diff_d, rij - diff_x);
                bound(-diff_d, rij + diff_x);
                const double sum_x = state_[i] + state_[j];
                const double sum_d = dir[i] + dir[j];
                bound(-sum_d, sum_x - rij);
            }
        }
        for (int i = 0; i < n; ++i) {
            bound(-dir[i], state_[i]);
            if (diameter_) bound(dir[i], *diameter_ - state_[i]);
        }
        if (!(t_hi >= t_lo)) continue;

        // Exponential tilt along the diagonal keeps the unbounded
        // direction integrable: density exp(-beta * t) on the chord.
        double mean_dir = 0.0;
        for (double v : dir) mean_dir += v;
        mean_dir /= n;
        const double theta = std::max(law_.mean(), 1e-6);
        const double beta = mean_dir / theta;
        const double u = rng.uniform01();
        double t;
        if (!std::isfinite(t_hi)) {
            if (beta <= 1e-14) continue;  // direction cannot be unbounded unless beta > 0
            t = t_lo - std::log(1.0 - u) / beta;
        } else if (std::abs(beta) * (t_hi - t_lo) < 1e-9) {
            t = t_lo + u * (t_hi - t_lo);
        } else if (beta > 0) {
            const double w = t_hi - t_lo;
            const double z = 1.0 - std::exp(-beta * w);
            t = t_lo - std::log(1.0 - u * z) / beta;
        } else {
            const double w = t_hi - t_lo;
            const double z = 1.0 - std::exp(beta * w);
            t = t_hi + std::log(1.0 - u * z) / beta;
        }
        t = std::clamp(t, t_lo, t_hi);
        for (int i = 0; i < n; ++i) state_[i] += t * dir[i];
        // guard against drift out of the closed set
        for (int i = 0; i < n; ++i) state_[i] = std::max(state_[i], 0.0);
    }
    return state_;
}

MinkowskiReport minkowski_check(const DistanceMatrix& r, int trials, Rng& rng) {
    MinkowskiReport report;
    AdmissiblePolytope poly = enumerate_vertices(r);
    const int n = r.order();
    const double scale = std::max(1.0, r.max_entry());
    AdmissibleSampler sampler(poly, DiagonalLaw::exponential(0.5 * scale));

    const int forward = trials / 2;
    const int backward = trials - forward;

    for (int t = 0; t < forward; ++t) {
        std::vector<double> a = sampler.sample(rng);
        if (!is_admissible(r, a)) {
            report.pass = false;
            report.counterexample = a;
            report.note = "sampled point of M_r + Delta_n fails contains";
            return report;
        }
        ++report.forward_trials;
    }

    const Eigen::VectorXd lo = poly.vertices.colwise().minCoeff();
    const Eigen::VectorXd hi = poly.vertices.colwise().maxCoeff();
    int done = 0;
    int attempts = 0;
    const int max_attempts = backward * 1000 + 1000;
    while (done < backward && ++attempts < max_attempts) {
        Eigen::VectorXd p(n);
        const double lift = rng.uniform(0.0, 3.0 * scale);
        for (int i = 0; i < n; ++i) p(i) = rng.uniform(lo(i), hi(i)) + lift;
        std::vector<double> pv(p.data(), p.data() + n);
        if (!is_admissible(r, pv)) continue;
        auto shift = min_diagonal_shift(poly, p);
        if (!shift || shift->lambda < -1e-9) {
            report.pass = false;
            report.counterexample = pv;
            report.note = "contains-accepted point admits no q + lambda*1 decomposition";
            return report;
        }
        report.worst_residual = std::max(report.worst_residual, shift->residual);
        ++done;
        ++report.decompose_trials;
    }
    if (done < backward) {
        report.pass = false;
        report.note = "could not generate enough contains-accepted points";
    }
    return report;
}

} // namespace mcone
