#ifndef LF_NOETHER_HPP
#define LF_NOETHER_HPP

#include <optional>
#include <vector>

#include "lf/mechanics.hpp"

namespace lf {

// One rigid infinitesimal transformation per parameter epsilon^a:
//   t' = t + T(q,t) eps,  q'^i = q^i + Q^i(q,t) eps,
// with boundary coefficient F(q,t). None of them may depend on velocities.
struct SymmetryGenerator {
    Expr T;
    std::vector<Expr> Q;
    Expr F;

    SymmetryGenerator(Expr T, std::vector<Expr> Q, Expr F = Expr::integer(0));
    int dim() const { return static_cast<int>(Q.size()); }
};

struct SymmetryGroupAction {
    std::vector<SymmetryGenerator> generators;
    int dim() const { return generators.empty() ? 0 : generators.front().dim(); }
};

struct ConstantOfMotion {
    Expr C;
};

// Form variation at fixed time: dq^i = Q^i - v^i T, per unit eps.
std::vector<Expr> delta_q(const SymmetryGenerator& g);

// Residual of the acceleration-free form of Noether's identity:
//   (dL/dq^k) Q^k + (dL/dv^k)[Q^k' - v^k T'] + (dL/dt) T + L T' - F',
// with ' the chain-rule d/dt on (q,t) functions. Zero verdict <=> g is a
// variational symmetry of the action with boundary term F.
Expr noether_identity_residual(const Lagrangian& L, const SymmetryGenerator& g);

struct NoetherConstantResult {
    ConstantOfMotion constant;
    ZeroResult identity;  // verdict of noether_identity_residual
    bool not_a_symmetry() const { return identity.kind != ZeroKind::Zero; }
};

// Noether charge C = (dL/dv^i) Q^i + (L - (dL/dv^i) v^i) T - F, per unit eps.
// Flags rather than fails when g is not actually a symmetry.
NoetherConstantResult noether_constant(const Lagrangian& L, const SymmetryGenerator& g,
                                       const ZeroTestConfig& cfg = {});

// Residuals of dC/dv^i = M_ij dq^j, the first of the new relations.
std::vector<Expr> delta_q_relation_residual(const HessianCandidate& M, const ConstantOfMotion& C,
                                            const SymmetryGenerator& g);

struct TransformationReconstruction {
    Expr T;
    std::vector<Expr> Q;
    bool consistent = true;  // T and Q came out velocity-independent
    std::optional<Witness> velocity_dependence;
};

// Rebuilds (T, Q^i) from the Hessian and the constant of motion:
//   T   = -(1/n) d/dv^i (M^ij dC/dv^j),
//   Q^i = M^ij dC/dv^j + v^i T.
// When the pair admits no point symmetry of this form, the velocity
// dependence that remains is reported instead of silently dropped.
TransformationReconstruction reconstruct_transformation(const HessianCandidate& M,
                                                        const ConstantOfMotion& C,
                                                        const SampleDomain& domain,
                                                        const ZeroTestConfig& cfg = {});

struct BoundaryTermResult {
    Expr F;
    bool consistent = true;
    std::optional<Witness> velocity_dependence;
};

// F = (dL/dv^i) M^ij (dC/dv^j) - (1/n) L d/dv^i(M^ij dC/dv^j) - C.
BoundaryTermResult boundary_term(const Lagrangian& L, const HessianCandidate& M,
                                 const ConstantOfMotion& C, const ZeroTestConfig& cfg = {});

// Residual matrix of the compatibility relation between M and the symmetry,
//   DM_ij + M_ik d_j Q^k + M_jk d_i Q^k - M_ik v^k d_j T - M_jk v^k d_i T
//   - M_ij dT/dt,
// where DM_ij carries the transport of M along the transformation. All-zero
// means M is compatible with the symmetry.
ExprMatrix compatibility_residual(const HessianCandidate& M, const SymmetryGenerator& g);

// Same relation written through dq^k = Q^k - v^k T; must agree with
// compatibility_residual whenever M is symmetric with symmetric v-gradients.
ExprMatrix compatibility_residual_delta_form(const HessianCandidate& M,
                                             const SymmetryGenerator& g);

}  // namespace lf

#endif
