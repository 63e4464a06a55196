#include "lf/noether.hpp"

#include <algorithm>

#include "lf/errors.hpp"

namespace lf {

namespace {

// Chain-rule total derivative for functions of (q, t) only; no accelerations
// can appear, which keeps every identity in this module off-shell.
Expr dt_qt(const Expr& e, int n) {
    std::vector<Expr> terms{diff(e, Symbol::time())};
    for (int i = 1; i <= n; ++i) terms.push_back(v_(i) * diff(e, Symbol::coord(i)));
    return Expr::sum(std::move(terms));
}

void require_qt_only(const Expr& e, const char* what) {
    if (contains_kind(e, SymbolKind::Vel) || contains_kind(e, SymbolKind::Accel))
        throw DimensionMismatchError(std::string(what) +
                                     " must depend on coordinates and time only");
}

// M^{ij} dC/dv^j as adj(M) b / det(M).
std::vector<Expr> inverse_apply_dCdv(const HessianCandidate& M, const ConstantOfMotion& C) {
    const int n = M.dim();
    ExprMatrix adj = adjugate(M.matrix());
    Expr inv_det = Expr::pow(determinant(M.matrix()), Rational(-1));
    std::vector<Expr> w(n);
    for (int i = 0; i < n; ++i) {
        std::vector<Expr> row;
        for (int j = 0; j < n; ++j)
            row.push_back(adj.at(i, j) * diff(C.C, Symbol::vel(j + 1)));
        w[i] = inv_det * Expr::sum(std::move(row));
    }
    return w;
}

void require_invertible(const HessianCandidate& M, const SampleDomain& domain,
                        const ZeroTestConfig& cfg) {
    BoxScan scan = min_abs_on_box(determinant(M.matrix()), domain, cfg);
    if (scan.domain_errors * 2 > scan.samples || scan.min_abs <= kHessianDetFloor)
        throw SingularHessianError("Hessian candidate is singular on the sample box");
}

}  // namespace

SymmetryGenerator::SymmetryGenerator(Expr T_in, std::vector<Expr> Q_in, Expr F_in)
    : T(std::move(T_in)), Q(std::move(Q_in)), F(std::move(F_in)) {
    if (Q.empty() || static_cast<int>(Q.size()) > kMaxDimension)
        throw DimensionMismatchError("generator must cover 1..4 coordinates");
    require_qt_only(T, "T");
    require_qt_only(F, "F");
    for (const Expr& qi : Q) require_qt_only(qi, "Q^i");
}

std::vector<Expr> delta_q(const SymmetryGenerator& g) {
    std::vector<Expr> out;
    out.reserve(g.Q.size());
    for (int i = 1; i <= g.dim(); ++i) out.push_back(g.Q[i - 1] - v_(i) * g.T);
    return out;
}

Expr noether_identity_residual(const Lagrangian& L, const SymmetryGenerator& g) {
    const int n = g.dim();
    if (L.dim() > n) throw DimensionMismatchError("Lagrangian dimension exceeds generator's");
    Expr dT = dt_qt(g.T, n);
    std::vector<Expr> terms;
    for (int k = 1; k <= n; ++k) {
        terms.push_back(diff(L.L, Symbol::coord(k)) * g.Q[k - 1]);
        terms.push_back(diff(L.L, Symbol::vel(k)) *
                        (dt_qt(g.Q[k - 1], n) - v_(k) * dT));
    }
    terms.push_back(diff(L.L, Symbol::time()) * g.T);
    terms.push_back(L.L * dT);
    terms.push_back(-dt_qt(g.F, n));
    return Expr::sum(std::move(terms));
}

NoetherConstantResult noether_constant(const Lagrangian& L, const SymmetryGenerator& g,
                                       const ZeroTestConfig& cfg) {
    NoetherConstantResult res;
    res.identity = is_zero(noether_identity_residual(L, g), L.domain(), cfg);
    const int n = g.dim();
    std::vector<Expr> terms;
    std::vector<Expr> legendre{L.L};
    for (int i = 1; i <= n; ++i) {
        Expr p = diff(L.L, Symbol::vel(i));
        terms.push_back(p * g.Q[i - 1]);
        legendre.push_back(-(p * v_(i)));
    }
    terms.push_back(Expr::sum(std::move(legendre)) * g.T);
    terms.push_back(-g.F);
    res.constant.C = Expr::sum(std::move(terms));
    return res;
}

std::vector<Expr> delta_q_relation_residual(const HessianCandidate& M, const ConstantOfMotion& C,
                                            const SymmetryGenerator& g) {
    const int n = M.dim();
    if (g.dim() != n) throw DimensionMismatchError("generator/Hessian dimension mismatch");
    std::vector<Expr> dq = delta_q(g);
    std::vector<Expr> out;
    out.reserve(n);
    for (int i = 0; i < n; ++i) {
        std::vector<Expr> terms{diff(C.C, Symbol::vel(i + 1))};
        for (int j = 0; j < n; ++j) terms.push_back(-(M.at(i, j) * dq[j]));
        out.push_back(Expr::sum(std::move(terms)));
    }
    return out;
}

TransformationReconstruction reconstruct_transformation(const HessianCandidate& M,
                                                        const ConstantOfMotion& C,
                                                        const SampleDomain& domain,
                                                        const ZeroTestConfig& cfg) {
    const int n = M.dim();
    require_invertible(M, domain, cfg);
    std::vector<Expr> w = inverse_apply_dCdv(M, C);

    std::vector<Expr> trace;
    for (int i = 0; i < n; ++i) trace.push_back(diff(w[i], Symbol::vel(i + 1)));
    TransformationReconstruction res;
    res.T = Expr::number(Rational(-1, n)) * Expr::sum(std::move(trace));
    for (int i = 0; i < n; ++i) res.Q.push_back(w[i] + v_(i + 1) * res.T);

    auto check_v_free = [&](const Expr& e) {
        for (int k = 1; k <= n; ++k) {
            ZeroResult z = is_zero(diff(e, Symbol::vel(k)), domain, cfg);
            if (z.kind == ZeroKind::NonZero) {
                res.consistent = false;
                if (!res.velocity_dependence) res.velocity_dependence = z.witness;
            }
        }
    };
    check_v_free(res.T);
    for (const Expr& qi : res.Q) check_v_free(qi);
    return res;
}

BoundaryTermResult boundary_term(const Lagrangian& L, const HessianCandidate& M,
                                 const ConstantOfMotion& C, const ZeroTestConfig& cfg) {
    const int n = M.dim();
    SampleDomain domain = L.domain();
    if (L.dim() > n) throw DimensionMismatchError("Lagrangian/Hessian dimension mismatch");
    HessianCandidate H = hessian_of(L);
    if (H.dim() != n) throw DimensionMismatchError("Lagrangian/Hessian dimension mismatch");
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
            if (!is_zero(H.at(i, j) - M.at(i, j), domain, cfg).is_zero())
                throw Error("boundary_term: M is not the Hessian of L");
    require_invertible(M, domain, cfg);

    std::vector<Expr> w = inverse_apply_dCdv(M, C);
    std::vector<Expr> terms;
    std::vector<Expr> trace;
    for (int i = 0; i < n; ++i) {
        terms.push_back(diff(L.L, Symbol::vel(i + 1)) * w[i]);
        trace.push_back(diff(w[i], Symbol::vel(i + 1)));
    }
    terms.push_back(Expr::number(Rational(-1, n)) * L.L * Expr::sum(std::move(trace)));
    terms.push_back(-C.C);

    BoundaryTermResult res;
    res.F = Expr::sum(std::move(terms));
    for (int k = 1; k <= n; ++k) {
        ZeroResult z = is_zero(diff(res.F, Symbol::vel(k)), domain, cfg);
        if (z.kind == ZeroKind::NonZero) {
            res.consistent = false;
            if (!res.velocity_dependence) res.velocity_dependence = z.witness;
        }
    }
    return res;
}

namespace {

// Shared assembly for the two compatibility forms. `variation` supplies the
// k-indexed coefficients whose q-gradients multiply M.
ExprMatrix compatibility_impl(const HessianCandidate& M, const SymmetryGenerator& g,
                              const std::vector<Expr>& variation, bool subtract_vT_gradients) {
    const int n = M.dim();
    if (g.dim() != n) throw DimensionMismatchError("generator/Hessian dimension mismatch");
    Expr dT = dt_qt(g.T, n);
    std::vector<Expr> dQ;  // d/dt of Q^k minus v^k d/dt of T, the delta-q rate
    for (int k = 1; k <= n; ++k) dQ.push_back(dt_qt(g.Q[k - 1], n) - v_(k) * dT);

    ExprMatrix R(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            std::vector<Expr> terms;
            // Transport of M_ij along the transformation.
            for (int k = 1; k <= n; ++k) {
                terms.push_back(diff(M.at(i, j), Symbol::coord(k)) * g.Q[k - 1]);
                terms.push_back(diff(M.at(i, j), Symbol::vel(k)) * dQ[k - 1]);
            }
            terms.push_back(diff(M.at(i, j), Symbol::time()) * g.T);
            // Frame terms.
            for (int k = 0; k < n; ++k) {
                terms.push_back(M.at(i, k) * diff(variation[k], Symbol::coord(j + 1)));
                terms.push_back(M.at(j, k) * diff(variation[k], Symbol::coord(i + 1)));
                if (subtract_vT_gradients) {
                    terms.push_back(-(M.at(i, k) * v_(k + 1) * diff(g.T, Symbol::coord(j + 1))));
                    terms.push_back(-(M.at(j, k) * v_(k + 1) * diff(g.T, Symbol::coord(i + 1))));
                }
            }
            terms.push_back(-(M.at(i, j) * dT));
            R.at(i, j) = Expr::sum(std::move(terms));
        }
    }
    return R;
}

}  // namespace

ExprMatrix compatibility_residual(const HessianCandidate& M, const SymmetryGenerator& g) {
    return compatibility_impl(M, g, g.Q, /*subtract_vT_gradients=*/true);
}

ExprMatrix compatibility_residual_delta_form(const HessianCandidate& M,
                                             const SymmetryGenerator& g) {
    return compatibility_impl(M, g, delta_q(g), /*subtract_vT_gradients=*/false);
}

}  // namespace lf
