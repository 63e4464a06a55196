#ifndef LF_SOLVER_HPP
#define LF_SOLVER_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "lf/helmholtz.hpp"
#include "lf/noether.hpp"
#include "lf/nullspace.hpp"

namespace lf {

// Linear search space for Hessian candidates: one basis list per symmetric
// entry (i, j), i <= j, one shared unknown per basis element. Symmetry (H3)
// holds by construction.
class AnsatzFamily {
  public:
    explicit AnsatzFamily(int n);

    void add(int i, int j, const Expr& basis_element);  // 0-based entry indices

    int dim() const { return n_; }
    int unknowns() const { return total_; }
    const std::map<std::pair<int, int>, std::vector<Expr>>& entries() const { return entries_; }

    // Candidate with unknown u set to 1 and every other unknown 0.
    HessianCandidate elementary(int u) const;
    HessianCandidate assemble(const std::vector<Rational>& theta) const;
    std::string unknown_label(int u) const;

  private:
    int n_;
    int total_ = 0;
    std::map<std::pair<int, int>, std::vector<Expr>> entries_;
};

struct SolverConfig {
    int samples = 0;  // residual sample points; 0 = max(4K, 64)
    std::uint64_t seed = kDefaultSeed;
    double tol_rank = 1e-8;
    SampleDomain domain;
    ZeroTestConfig zero;  // verification tolerances; seed is advanced internally
};

enum class SolveStatus { Ok, EmptySolution, IllConditioned };

struct FamilyMember {
    std::vector<double> coefficients;      // canonical representative, snapped
    std::vector<double> raw_coefficients;  // same, before rational snapping
    HessianCandidate M{1};
    HelmholtzReport helmholtz;
    std::vector<LabeledVerdict> imposed;  // re-verified symmetry/constant residuals
    bool verified = false;                // every imposed check and H1-H4 re-verified Zero
    bool degenerate = false;              // H5 failed on the box
    bool homogeneous = false;             // affine systems: annihilates the constant term
};

struct SolutionFamily {
    SolveStatus status = SolveStatus::Ok;
    int dimension = 0;
    std::vector<FamilyMember> members;
    Eigen::MatrixXd orthonormal_basis;  // unknowns x dimension, canonical
    std::vector<double> singular_values;
    double rank_gap = 0.0;
    std::uint64_t seed = 0;
    bool affine = false;
    bool has_particular = false;  // affine: some member realizes the constant term
};

// Method 1: Helmholtz H1/H2/H4 plus the symmetry-compatibility relation for
// every generator, sampled into one homogeneous linear system over the ansatz.
SolutionFamily method1(const DynamicalSystem& sys, const SymmetryGroupAction& G,
                       const AnsatzFamily& ansatz, const SolverConfig& cfg);

// Method 2, ansatz path: Method 1 constraints plus dC/dv^i = M_ij dq^j. The
// constant of motion enters as an affine term, handled by homogenization.
SolutionFamily method2(const DynamicalSystem& sys, const SymmetryGenerator& g,
                       const ConstantOfMotion& C, const AnsatzFamily& ansatz,
                       const SolverConfig& cfg);

struct Method2Direct {
    bool exists = false;
    HessianCandidate M{1};
    HelmholtzReport helmholtz;
    ZeroResult compatibility;
    std::optional<Lagrangian> lagrangian;  // filled when reconstruction succeeds
    std::string failure;                   // short reason when !exists
};

// Method 2 for n = 1 without an ansatz: M_11 = (dC/dv) / (Q - v T) is fully
// determined; Helmholtz plus compatibility then decide existence.
Method2Direct method2_direct(const DynamicalSystem& sys, const SymmetryGenerator& g,
                             const ConstantOfMotion& C, const SolverConfig& cfg);

struct ReconstructionConfig {
    std::vector<Expr> completion_basis;  // (q,t) functions; empty = default from sys
    SolverConfig solver;
};

// Rebuilds a 1D Lagrangian from its Hessian: double velocity antiderivative of
// M_11 termwise, then a linear completion a(q,t) v + b(q,t) fixed by the EL
// residual. Canonical only modulo total time derivatives.
Lagrangian reconstruct_lagrangian_1d(const HessianCandidate& M, const DynamicalSystem& sys,
                                     const ReconstructionConfig& cfg);

const char* solve_status_name(SolveStatus s);

}  // namespace lf

#endif
