#include "lf/mechanics.hpp"

#include <algorithm>

#include "lf/errors.hpp"

namespace lf {

DynamicalSystem::DynamicalSystem(int n_in, std::vector<Expr> f_in) : n(n_in), f(std::move(f_in)) {
    if (n < 1 || n > kMaxDimension)
        throw DimensionMismatchError("system dimension must be in [1, " +
                                     std::to_string(kMaxDimension) + "]");
    if (static_cast<int>(f.size()) != n)
        throw DimensionMismatchError("expected " + std::to_string(n) + " force expressions");
    for (const Expr& e : f) {
        if (contains_kind(e, SymbolKind::Accel))
            throw DimensionMismatchError("force expressions must not contain accelerations");
        if (std::max(max_index(e, SymbolKind::Coord), max_index(e, SymbolKind::Vel)) > n)
            throw DimensionMismatchError("force expression references index beyond n");
    }
}

Lagrangian::Lagrangian(Expr L_in, std::map<std::string, double> params_in, int n_in)
    : L(std::move(L_in)), params(std::move(params_in)), n(n_in) {
    if (contains_kind(L, SymbolKind::Accel))
        throw DimensionMismatchError("a Lagrangian must not contain accelerations");
}

int Lagrangian::dim() const {
    if (n > 0) return n;
    int m = std::max(max_index(L, SymbolKind::Coord), max_index(L, SymbolKind::Vel));
    return std::max(m, 1);
}

Expr determinant(const ExprMatrix& m) {
    const int n = m.dim();
    if (n == 1) return m.at(0, 0);
    if (n == 2) return m.at(0, 0) * m.at(1, 1) - m.at(0, 1) * m.at(1, 0);
    // Cofactor expansion along the first row; fine for n <= 4.
    std::vector<Expr> terms;
    for (int j = 0; j < n; ++j) {
        ExprMatrix minor(n - 1);
        for (int r = 1; r < n; ++r) {
            int cc = 0;
            for (int c = 0; c < n; ++c) {
                if (c == j) continue;
                minor.at(r - 1, cc++) = m.at(r, c);
            }
        }
        Expr term = m.at(0, j) * determinant(minor);
        terms.push_back(j % 2 == 0 ? term : -term);
    }
    return Expr::sum(std::move(terms));
}

ExprMatrix adjugate(const ExprMatrix& m) {
    const int n = m.dim();
    ExprMatrix adj(n);
    if (n == 1) {
        adj.at(0, 0) = Expr::integer(1);
        return adj;
    }
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            ExprMatrix minor(n - 1);
            int rr = 0;
            for (int r = 0; r < n; ++r) {
                if (r == i) continue;
                int cc = 0;
                for (int c = 0; c < n; ++c) {
                    if (c == j) continue;
                    minor.at(rr, cc++) = m.at(r, c);
                }
                ++rr;
            }
            Expr cof = determinant(minor);
            adj.at(j, i) = (i + j) % 2 == 0 ? cof : -cof;  // transpose of cofactors
        }
    }
    return adj;
}

namespace {

Expr total_derivative_impl(const Expr& e, const std::vector<Expr>* accel, int n_limit) {
    if (contains_kind(e, SymbolKind::Accel))
        throw DimensionMismatchError(
            "total_time_derivative: expression already contains accelerations");
    int m = std::max(max_index(e, SymbolKind::Coord), max_index(e, SymbolKind::Vel));
    if (n_limit > 0 && m > n_limit)
        throw DimensionMismatchError("expression references index beyond system dimension");
    std::vector<Expr> terms{diff(e, Symbol::time())};
    for (int i = 1; i <= m; ++i) {
        terms.push_back(v_(i) * diff(e, Symbol::coord(i)));
        Expr acc = accel ? (*accel)[i - 1] : a_(i);
        terms.push_back(acc * diff(e, Symbol::vel(i)));
    }
    return Expr::sum(std::move(terms));
}

}  // namespace

Expr total_time_derivative(const Expr& e) { return total_derivative_impl(e, nullptr, 0); }

Expr total_time_derivative(const Expr& e, const DynamicalSystem& sys) {
    return total_derivative_impl(e, &sys.f, sys.n);
}

HessianCandidate hessian_of(const Lagrangian& L) {
    const int n = L.dim();
    HessianCandidate M(n);
    for (int i = 0; i < n; ++i) {
        Expr dLdvi = diff(L.L, Symbol::vel(i + 1));
        for (int j = i; j < n; ++j) M.set(i, j, diff(dLdvi, Symbol::vel(j + 1)));
    }
    return M;
}

std::vector<Expr> euler_lagrange_residual(const Lagrangian& L, const DynamicalSystem& sys) {
    if (L.dim() > sys.n) throw DimensionMismatchError("Lagrangian dimension exceeds system's");
    std::vector<Expr> out;
    out.reserve(sys.n);
    for (int i = 1; i <= sys.n; ++i) {
        Expr p = diff(L.L, Symbol::vel(i));
        out.push_back(diff(L.L, Symbol::coord(i)) - total_time_derivative(p, sys));
    }
    return out;
}

std::vector<Expr> euler_lagrange_symbolic(const Expr& L, int n) {
    std::vector<Expr> out;
    out.reserve(n);
    for (int i = 1; i <= n; ++i) {
        Expr p = diff(L, Symbol::vel(i));
        out.push_back(diff(L, Symbol::coord(i)) - total_time_derivative(p));
    }
    return out;
}

DynamicalSystem extract_eom(const Lagrangian& L, const ZeroTestConfig& cfg) {
    const int n = L.dim();
    HessianCandidate M = hessian_of(L);
    Expr det = determinant(M.matrix());
    BoxScan scan = min_abs_on_box(det, L.domain(), cfg);
    if (scan.domain_errors * 2 > scan.samples)
        throw SingularHessianError("det M could not be evaluated on the sample box");
    if (scan.min_abs <= kHessianDetFloor)
        throw SingularHessianError("det M vanishes on the sample box (min |det| = " +
                                   std::to_string(scan.min_abs) + ")");

    ExprMatrix adj = adjugate(M.matrix());
    Expr inv_det = Expr::pow(det, Rational(-1));
    std::vector<Expr> f;
    f.reserve(n);
    for (int i = 0; i < n; ++i) {
        // b_j = dL/dq^j - d^2L/dt dv^j - v^k d^2L/dq^k dv^j
        std::vector<Expr> row;
        for (int j = 0; j < n; ++j) {
            Expr p = diff(L.L, Symbol::vel(j + 1));
            std::vector<Expr> b{diff(L.L, Symbol::coord(j + 1)), -diff(p, Symbol::time())};
            for (int k = 1; k <= n; ++k) b.push_back(-(v_(k) * diff(p, Symbol::coord(k))));
            row.push_back(adj.at(i, j) * Expr::sum(std::move(b)));
        }
        f.push_back(inv_det * Expr::sum(std::move(row)));
    }
    return DynamicalSystem(n, std::move(f));
}

bool equivalent_mod_total_derivative(const Lagrangian& L1, const Lagrangian& L2,
                                     const ZeroTestConfig& cfg) {
    const int n = std::max(L1.dim(), L2.dim());
    std::map<std::string, double> params = L1.params;
    params.insert(L2.params.begin(), L2.params.end());
    SampleDomain dom(params);
    std::vector<Expr> residual = euler_lagrange_symbolic(L1.L - L2.L, n);
    for (const Expr& r : residual)
        if (!is_zero(r, dom, cfg).is_zero()) return false;
    return true;
}

}  // namespace lf
