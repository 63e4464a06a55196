#ifndef LF_NULLSPACE_HPP
#define LF_NULLSPACE_HPP

#include <Eigen/Dense>
#include <vector>

#include "lf/rational.hpp"

namespace lf {

struct NullspaceResult {
    Eigen::MatrixXd basis;  // K x d, orthonormal columns, first nonzero coordinate positive
    std::vector<double> singular_values;
    int rank = 0;
    bool ill_conditioned = false;  // rank decision sits on an ambiguous gap
    double gap = 0.0;              // sigma_rank / sigma_{rank+1} across the cut
};

// Kernel of A by SVD; rank is decided by the threshold tol * sigma_max and the
// result is flagged ill-conditioned when the singular-value gap across the cut
// is below 10.
NullspaceResult nullspace(const Eigen::MatrixXd& A, double tol);

// Canonical basis of a row span: reduced row echelon form with magnitude
// pivoting, pivots scaled to +1, near-zero entries cleaned. Gives
// seed-independent, golden-testable representatives of a kernel.
Eigen::MatrixXd rref_span(Eigen::MatrixXd rows, double tol);

// Gram-Schmidt over rows (in order); returns K x d with orthonormal columns.
Eigen::MatrixXd orthonormal_columns(const Eigen::MatrixXd& rows);

// Nearest small rational by continued fractions. Falls back to the best
// convergent of the double itself when nothing small fits.
Rational snap_rational(double x, double rel_tol = 1e-7, long long max_den = 1000000);

}  // namespace lf

#endif
