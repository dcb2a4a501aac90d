#ifndef MCONE_DETAIL_SIMPLEX_HPP
#define MCONE_DETAIL_SIMPLEX_HPP

#include <Eigen/Dense>

namespace mcone::detail {

/// Phase-1 simplex for the system  A x = b, x >= 0  (A is m x n with small m).
/// Returns the minimized sum of artificial variables after row scaling;
/// the system is feasible iff the returned value is ~ 0.
double phase1_objective(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                        Eigen::VectorXd* x_out = nullptr);

/// Convenience wrapper: feasibility within `tol`.
bool equality_feasible(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                       double tol = 1e-9, Eigen::VectorXd* x_out = nullptr);

} // namespace mcone::detail

#endif
