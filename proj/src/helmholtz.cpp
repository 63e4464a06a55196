#include "lf/helmholtz.hpp"

#include "lf/errors.hpp"

namespace lf {

ExprMatrix a_matrix(const DynamicalSystem& sys) {
    const int n = sys.n;
    ExprMatrix A(n);
    for (int k = 0; k < n; ++k) {
        for (int i = 0; i < n; ++i) {
            std::vector<Expr> terms;
            terms.push_back(
                total_time_derivative(diff(sys.f[k], Symbol::vel(i + 1)), sys));
            terms.push_back(num_(-2) * diff(sys.f[k], Symbol::coord(i + 1)));
            for (int l = 0; l < n; ++l)
                terms.push_back(frac_(-1, 2) * diff(sys.f[k], Symbol::vel(l + 1)) *
                                diff(sys.f[l], Symbol::vel(i + 1)));
            A.at(k, i) = Expr::sum(std::move(terms));
        }
    }
    return A;
}

const LabeledVerdict* HelmholtzReport::first_failure() const {
    for (const auto* grp : {&h1, &h2, &h3, &h4})
        for (const LabeledVerdict& v : *grp)
            if (v.result.kind != ZeroKind::Zero) return &v;
    return nullptr;
}

ExprMatrix h1_residual_matrix(const HessianCandidate& M, const DynamicalSystem& sys) {
    const int n = sys.n;
    ExprMatrix out(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            std::vector<Expr> terms{total_time_derivative(M.at(i, j), sys)};
            for (int k = 0; k < n; ++k) {
                terms.push_back(frac_(1, 2) * M.at(i, k) * diff(sys.f[k], Symbol::vel(j + 1)));
                terms.push_back(frac_(1, 2) * M.at(j, k) * diff(sys.f[k], Symbol::vel(i + 1)));
            }
            out.at(i, j) = Expr::sum(std::move(terms));
        }
    }
    return out;
}

ExprMatrix h2_residual_matrix(const HessianCandidate& M, const DynamicalSystem& sys,
                              const ExprMatrix& A) {
    const int n = sys.n;
    ExprMatrix out(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            std::vector<Expr> terms;
            for (int k = 0; k < n; ++k) {
                terms.push_back(M.at(i, k) * A.at(k, j));
                terms.push_back(-(M.at(j, k) * A.at(k, i)));
            }
            out.at(i, j) = Expr::sum(std::move(terms));
        }
    }
    return out;
}

HelmholtzReport helmholtz_residuals(const HessianCandidate& M, const DynamicalSystem& sys,
                                    const SampleDomain& domain, const ZeroTestConfig& cfg) {
    const int n = sys.n;
    if (M.dim() != n) throw DimensionMismatchError("Hessian/system dimension mismatch");
    HelmholtzReport rep;
    rep.n = n;

    auto label = [](const char* tag, int i, int j, int k = 0) {
        std::string s = std::string(tag) + "[" + std::to_string(i + 1) + "," + std::to_string(j + 1);
        if (k > 0) s += "," + std::to_string(k);
        return s + "]";
    };

    rep.h1_residual = h1_residual_matrix(M, sys);
    rep.h2_residual = h2_residual_matrix(M, sys, a_matrix(sys));

    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
            rep.h1.push_back({label("H1", i, j), is_zero(rep.h1_residual.at(i, j), domain, cfg)});
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            rep.h2.push_back({label("H2", i, j), is_zero(rep.h2_residual.at(i, j), domain, cfg)});
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            rep.h3.push_back(
                {label("H3", i, j), is_zero(M.at(i, j) - M.at(j, i), domain, cfg)});
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = j + 1; k < n; ++k)
                rep.h4.push_back({label("H4", i, j, k + 1),
                                  is_zero(diff(M.at(i, j), Symbol::vel(k + 1)) -
                                              diff(M.at(i, k), Symbol::vel(j + 1)),
                                          domain, cfg)});

    Expr det = determinant(M.matrix());
    rep.h5_scan = min_abs_on_box(det, domain, cfg);
    rep.h5_pass = rep.h5_scan.domain_errors * 2 <= rep.h5_scan.samples &&
                  rep.h5_scan.min_abs > kHessianDetFloor;

    std::vector<Expr> dr{total_time_derivative(det, sys)};
    for (int i = 0; i < n; ++i) dr.push_back(det * diff(sys.f[i], Symbol::vel(i + 1)));
    rep.det_relation_residual = Expr::sum(std::move(dr));
    rep.det_relation = is_zero(rep.det_relation_residual, domain, cfg);

    rep.pass = rep.first_failure() == nullptr && rep.h5_pass;
    return rep;
}

ZeroResult general_h1_solution_check(const Expr& G, const DynamicalSystem& sys,
                                     const std::string& lambda_param, const SampleDomain& domain,
                                     const ZeroTestConfig& cfg) {
    if (sys.n != 1) throw DimensionMismatchError("general H1 solution check needs n = 1");
    Expr lam = par_(lambda_param);
    if (!is_zero(sys.f[0] + lam * v_(1), domain, cfg).is_zero())
        throw Error("general_h1_solution_check: system is not the damped particle");

    std::map<Symbol, Expr> xi{{Symbol::param("xi1"), v_(1) + lam * q_(1)},
                              {Symbol::param("xi2"), v_(1) * Expr::exp(lam * t_())}};
    Expr M11 = substitute(G, xi) / v_(1);
    HessianCandidate M(1);
    M.set(0, 0, M11);

    std::vector<Expr> h1{total_time_derivative(M11, sys),
                         M11 * diff(sys.f[0], Symbol::vel(1))};
    return is_zero(Expr::sum(std::move(h1)), domain, cfg);
}

}  // namespace lf
