#ifndef LF_HELMHOLTZ_HPP
#define LF_HELMHOLTZ_HPP

#include <string>
#include <vector>

#include "lf/mechanics.hpp"

namespace lf {

// A^k_i = d/dt(df^k/dv^i) - 2 df^k/dq^i - (1/2)(df^k/dv^l)(df^l/dv^i), with
// d/dt acceleration-eliminated through f. Entry (k-1, i-1) of the result.
ExprMatrix a_matrix(const DynamicalSystem& sys);

// Residual matrices alone, linear in M; also used by the ansatz solver.
ExprMatrix h1_residual_matrix(const HessianCandidate& M, const DynamicalSystem& sys);
ExprMatrix h2_residual_matrix(const HessianCandidate& M, const DynamicalSystem& sys,
                              const ExprMatrix& A);

struct LabeledVerdict {
    std::string label;
    ZeroResult result;
};

struct HelmholtzReport {
    int n = 0;
    ExprMatrix h1_residual;  // dM_ij/dt + (1/2) M_ik f^k_{,vj} + (1/2) M_jk f^k_{,vi}
    ExprMatrix h2_residual;  // M_ik A^k_j - M_jk A^k_i
    std::vector<LabeledVerdict> h1;  // i <= j
    std::vector<LabeledVerdict> h2;  // i < j
    std::vector<LabeledVerdict> h3;  // M_ij - M_ji, i < j
    std::vector<LabeledVerdict> h4;  // dM_ij/dv^k - dM_ik/dv^j, j < k
    BoxScan h5_scan;                 // |det M| over the box
    bool h5_pass = false;
    Expr det_relation_residual;      // d(det M)/dt + det M * df^i/dv^i
    ZeroResult det_relation;         // follows from H1-H4; reported, not gating
    bool pass = false;               // h1..h4 all zero and h5 holds

    const LabeledVerdict* first_failure() const;
};

HelmholtzReport helmholtz_residuals(const HessianCandidate& M, const DynamicalSystem& sys,
                                    const SampleDomain& domain, const ZeroTestConfig& cfg = {});

// Family-level regression of the damped particle's general H1 solution
// M_11 = G(xi1, xi2)/v1 with xi1 = v1 + lambda q1 and xi2 = v1 e^{lambda t}.
// G is an expression in parameters xi1, xi2; the residual of H1 is returned.
ZeroResult general_h1_solution_check(const Expr& G, const DynamicalSystem& sys,
                                     const std::string& lambda_param, const SampleDomain& domain,
                                     const ZeroTestConfig& cfg = {});

}  // namespace lf

#endif
