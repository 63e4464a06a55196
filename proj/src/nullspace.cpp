#include "lf/nullspace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lf/errors.hpp"

namespace lf {

NullspaceResult nullspace(const Eigen::MatrixXd& A, double tol) {
    const int K = static_cast<int>(A.cols());
    NullspaceResult res;
    if (A.rows() == 0 || K == 0) {
        res.basis = Eigen::MatrixXd::Identity(K, K);
        res.rank = 0;
        res.gap = std::numeric_limits<double>::infinity();
        return res;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeFullV);
    const Eigen::VectorXd& sv = svd.singularValues();
    res.singular_values.assign(sv.data(), sv.data() + sv.size());
    double smax = sv.size() > 0 ? sv(0) : 0.0;
    double cut = tol * smax;
    int r = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > cut) ++r;
    res.rank = r;
    const int d = K - r;
    res.gap = std::numeric_limits<double>::infinity();
    if (r > 0 && r < sv.size()) {
        double below = sv(r);
        res.gap = below > 0.0 ? sv(r - 1) / below : std::numeric_limits<double>::infinity();
        res.ill_conditioned = res.gap < 10.0;
    }
    res.basis = svd.matrixV().rightCols(d);
    for (int c = 0; c < d; ++c) {
        for (int i = 0; i < K; ++i) {
            if (std::fabs(res.basis(i, c)) > 1e-12) {
                if (res.basis(i, c) < 0) res.basis.col(c) *= -1.0;
                break;
            }
        }
    }
    return res;
}

Eigen::MatrixXd rref_span(Eigen::MatrixXd rows, double tol) {
    const int d = static_cast<int>(rows.rows());
    const int K = static_cast<int>(rows.cols());
    double scale = rows.cwiseAbs().maxCoeff();
    if (d == 0 || scale == 0.0) return rows;
    const double eps = tol * scale;
    int pivot_row = 0;
    for (int c = 0; c < K && pivot_row < d; ++c) {
        int best = -1;
        double best_mag = eps;
        for (int r = pivot_row; r < d; ++r) {
            if (std::fabs(rows(r, c)) > best_mag) {
                best_mag = std::fabs(rows(r, c));
                best = r;
            }
        }
        if (best < 0) continue;
        rows.row(pivot_row).swap(rows.row(best));
        rows.row(pivot_row) /= rows(pivot_row, c);
        for (int r = 0; r < d; ++r) {
            if (r == pivot_row) continue;
            double f = rows(r, c);
            if (f != 0.0) rows.row(r) -= f * rows.row(pivot_row);
        }
        ++pivot_row;
    }
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < K; ++c)
            if (std::fabs(rows(r, c)) < 100 * tol) rows(r, c) = 0.0;
    return rows;
}

Eigen::MatrixXd orthonormal_columns(const Eigen::MatrixXd& rows) {
    const int d = static_cast<int>(rows.rows());
    const int K = static_cast<int>(rows.cols());
    Eigen::MatrixXd Q(K, d);
    int kept = 0;
    for (int r = 0; r < d; ++r) {
        Eigen::VectorXd v = rows.row(r).transpose();
        for (int c = 0; c < kept; ++c) v -= Q.col(c).dot(v) * Q.col(c);
        double norm = v.norm();
        if (norm > 1e-12) Q.col(kept++) = v / norm;
    }
    return Q.leftCols(kept);
}

Rational snap_rational(double x, double rel_tol, long long max_den) {
    if (!std::isfinite(x)) throw OverflowError("cannot snap non-finite value");
    const double tol = rel_tol * std::max(1.0, std::fabs(x));
    bool neg = x < 0;
    double y = std::fabs(x);
    long long p0 = 1, q0 = 0;  // convergents p/q
    long long p1 = static_cast<long long>(std::floor(y)), q1 = 1;
    double frac = y - std::floor(y);
    long long best_p = p1, best_q = 1;
    for (int iter = 0; iter < 64; ++iter) {
        double err = std::fabs(y - static_cast<double>(p1) / static_cast<double>(q1));
        best_p = p1;
        best_q = q1;
        if (err <= tol) break;
        if (frac < 1e-15) break;
        double inv = 1.0 / frac;
        long long a = static_cast<long long>(std::floor(inv));
        frac = inv - std::floor(inv);
        long long p2, q2;
        if (__builtin_mul_overflow(a, p1, &p2) || __builtin_add_overflow(p2, p0, &p2)) break;
        if (__builtin_mul_overflow(a, q1, &q2) || __builtin_add_overflow(q2, q0, &q2)) break;
        if (q2 > max_den) {
            // keep going with a relaxed cap only if nothing fit at all
            if (std::fabs(y - static_cast<double>(p1) / static_cast<double>(q1)) <= tol) break;
            if (q2 > (1LL << 40)) break;
        }
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
    }
    return neg ? Rational(-best_p, best_q) : Rational(best_p, best_q);
}

}  // namespace lf
