#ifndef LF_MECHANICS_HPP
#define LF_MECHANICS_HPP

#include <map>
#include <string>
#include <vector>

#include "lf/expr.hpp"
#include "lf/zerotest.hpp"

namespace lf {

inline constexpr int kMaxDimension = 4;
inline constexpr double kHessianDetFloor = 1e-8;

// Equations of motion in normal form, qddot^i = f^i(q, qdot, t).
struct DynamicalSystem {
    int n = 1;
    std::vector<Expr> f;

    DynamicalSystem(int n, std::vector<Expr> f);
};

struct Lagrangian {
    Expr L;
    std::map<std::string, double> params;
    int n = 0;  // 0 = infer from the highest coordinate/velocity index

    Lagrangian() = default;
    Lagrangian(Expr L, std::map<std::string, double> params, int n = 0);

    int dim() const;
    SampleDomain domain() const { return SampleDomain(params); }
};

// Square matrix of expressions, 0-based indexing; entry (i, j) corresponds to
// the paper-style 1-based (i+1, j+1).
class ExprMatrix {
  public:
    ExprMatrix() = default;
    explicit ExprMatrix(int n) : n_(n), data_(static_cast<std::size_t>(n) * n) {}

    int dim() const { return n_; }
    Expr& at(int i, int j) { return data_[static_cast<std::size_t>(i) * n_ + j]; }
    const Expr& at(int i, int j) const { return data_[static_cast<std::size_t>(i) * n_ + j]; }

  private:
    int n_ = 0;
    std::vector<Expr> data_;
};

Expr determinant(const ExprMatrix& m);
ExprMatrix adjugate(const ExprMatrix& m);

// Candidate for M_ij = d^2 L / dv^i dv^j. Symmetry is maintained by set().
class HessianCandidate {
  public:
    explicit HessianCandidate(int n) : m_(n) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) m_.at(i, j) = Expr::integer(0);
    }

    int dim() const { return m_.dim(); }
    const Expr& at(int i, int j) const { return m_.at(i, j); }
    void set(int i, int j, const Expr& e) {
        m_.at(i, j) = e;
        m_.at(j, i) = e;
    }
    const ExprMatrix& matrix() const { return m_; }

  private:
    ExprMatrix m_;
};

// d/dt along the flow: de/dt = de/dt|_expl + v^i de/dq^i + (a^i or f^i) de/dv^i.
// The first form keeps accelerations symbolic, the second eliminates them
// through the equations of motion.
Expr total_time_derivative(const Expr& e);
Expr total_time_derivative(const Expr& e, const DynamicalSystem& sys);

HessianCandidate hessian_of(const Lagrangian& L);

// E_i = dL/dq^i - d/dt(dL/dv^i), accelerations eliminated via sys.
std::vector<Expr> euler_lagrange_residual(const Lagrangian& L, const DynamicalSystem& sys);

// Same, with accelerations kept symbolic; annihilates exactly the total time
// derivatives of functions of (q, t).
std::vector<Expr> euler_lagrange_symbolic(const Expr& L, int n);

// Solves the EL equations of a regular Lagrangian for the accelerations.
// Throws SingularHessianError when det M fails the box check.
DynamicalSystem extract_eom(const Lagrangian& L, const ZeroTestConfig& cfg = {});

// True iff L1 - L2 is a total time derivative of a function of (q, t).
bool equivalent_mod_total_derivative(const Lagrangian& L1, const Lagrangian& L2,
                                     const ZeroTestConfig& cfg = {});

}  // namespace lf

#endif
