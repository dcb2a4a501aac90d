#include "mcone/detail/simplex.hpp"

#include <cmath>
#include <vector>

namespace mcone::detail {

// Dense full-tableau phase-1 simplex. Dantzig pricing with a switch to
// Bland's rule once the iteration count suggests stalling, which rules
// out cycling.
double phase1_objective(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                        Eigen::VectorXd* x_out) {
    const int m = static_cast<int>(A.rows());
    const int n = static_cast<int>(A.cols());
    const int total = n + m;

    // Row scaling keeps pivot tolerances meaningful across problem scales.
    Eigen::MatrixXd T(m, total + 1);
    for (int i = 0; i < m; ++i) {
        double scale = std::max(1.0, A.row(i).cwiseAbs().maxCoeff());
        double bi = b(i) / scale;
        Eigen::RowVectorXd row = A.row(i) / scale;
        if (bi < 0) {
            bi = -bi;
            row = -row;
        }
        T.row(i).head(n) = row;
        T.row(i).segment(n, m).setZero();
        T(i, n + i) = 1.0;
        T(i, total) = bi;
    }

    std::vector<int> basis(m);
    for (int i = 0; i < m; ++i) basis[i] = n + i;

    // Reduced costs for minimizing the artificial sum (cost 1 on artificials):
    // r_j = c_j - sum_i T(i, j).
    Eigen::RowVectorXd red(total + 1);
    for (int j = 0; j <= total; ++j) red(j) = -T.col(j).sum();
    for (int j = n; j < total; ++j) red(j) += 1.0;

    const double eps = 1e-11;
    const int dantzig_limit = 4 * (m + 2);
    const int hard_limit = 500 + 20 * total;

    for (int iter = 0; iter < hard_limit; ++iter) {
        int enter = -1;
        if (iter < dantzig_limit) {
            double best = -eps;
            for (int j = 0; j < total; ++j) {
                if (red(j) < best) {
                    best = red(j);
                    enter = j;
                }
            }
        } else {  // Bland
            for (int j = 0; j < total; ++j) {
                if (red(j) < -eps) {
                    enter = j;
                    break;
                }
            }
        }
        if (enter < 0) break;

        int leave = -1;
        double best_ratio = 0.0;
        for (int i = 0; i < m; ++i) {
            const double a = T(i, enter);
            if (a > eps) {
                const double ratio = T(i, total) / a;
                if (leave < 0 || ratio < best_ratio - 1e-15 ||
                    (std::abs(ratio - best_ratio) <= 1e-15 && basis[i] < basis[leave])) {
                    best_ratio = ratio;
                    leave = i;
                }
            }
        }
        if (leave < 0) break;  // unbounded cannot happen in phase 1; bail out

        const double piv = T(leave, enter);
        T.row(leave) /= piv;
        for (int i = 0; i < m; ++i) {
            if (i == leave) continue;
            const double f = T(i, enter);
            if (f != 0.0) T.row(i) -= f * T.row(leave);
        }
        const double f = red(enter);
        if (f != 0.0) red -= f * T.row(leave);
        basis[leave] = enter;
    }

    double objective = 0.0;
    for (int i = 0; i < m; ++i) {
        if (basis[i] >= n) objective += T(i, total);
    }
    if (x_out) {
        x_out->setZero(n);
        for (int i = 0; i < m; ++i) {
            if (basis[i] < n) (*x_out)(basis[i]) = T(i, total);
        }
    }
    return objective;
}

bool equality_feasible(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, double tol,
                       Eigen::VectorXd* x_out) {
    return phase1_objective(A, b, x_out) <= tol;
}

} // namespace mcone::detail
