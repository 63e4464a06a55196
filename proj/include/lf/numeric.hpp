#ifndef LF_NUMERIC_HPP
#define LF_NUMERIC_HPP

#include <map>
#include <string>
#include <vector>

#include "lf/mechanics.hpp"
#include "lf/noether.hpp"

namespace lf {

// Uniform-grid RK4 trajectory of a dynamical system.
struct Trajectory {
    int n = 0;
    double h = 0.0;
    std::vector<double> times;
    std::vector<std::vector<double>> q;  // one state vector per grid point
    std::vector<std::vector<double>> v;
    std::map<std::string, double> params;
    std::string method = "RK4";

    std::size_t size() const { return times.size(); }
    EvalPoint point(std::size_t k) const;
    std::string to_csv() const;  // header t,q1..qn,v1..vn; 17 significant digits
};

inline constexpr long long kMaxIntegrationSteps = 10'000'000;

// Classic fourth-order Runge-Kutta on (qdot = v, vdot = f).
Trajectory integrate(const DynamicalSystem& sys, const std::vector<double>& q0,
                     const std::vector<double>& v0, double t0, double t1, double h,
                     const std::map<std::string, double>& params);

// max_k |C(t_k) - C(t_0)| / max(1, |C(t_0)|).
double conservation_drift(const ConstantOfMotion& C, const Trajectory& traj);

struct ActionResult {
    double value = 0.0;
    bool odd_interval_adjustment = false;  // grid had an odd interval count
};

// Composite Simpson quadrature of L along the trajectory; a trailing 3/8 block
// absorbs an odd interval count.
ActionResult action(const Lagrangian& L, const Trajectory& traj);

// Finite coordinate/time transformation with group parameter alpha;
// alpha = 0 must be the identity (checked numerically on construction).
struct FiniteTransformation {
    Expr t_map;                // over (t, alpha)
    std::vector<Expr> q_maps;  // over (t, q, alpha)

    FiniteTransformation(Expr t_map, std::vector<Expr> q_maps,
                         const std::map<std::string, double>& params = {});
};

struct VariationCheck {
    struct Sample {
        double alpha = 0.0;
        double deviation = 0.0;  // D(alpha) = [S' - S] - alpha [F(end) - F(start)]
        bool significant = false;
    };
    std::vector<Sample> samples;
    double slope = 0.0;  // log|D| vs log alpha; +inf when exact to round-off
    bool exact = false;
    double floor = 0.0;
    double base_action = 0.0;

    bool order_at_least(double p) const { return exact || slope >= p; }
};

// First-order action-invariance check: transforms the trajectory at each
// alpha, resamples it on a uniform grid in transformed time with cubic Hermite
// interpolation, and fits the order of the residual variation. A variational
// symmetry cancels the first-order term, so the fitted slope is >= 2 (or the
// deviation sits at round-off, reported as exact).
VariationCheck action_variation_check(const Lagrangian& L, const FiniteTransformation& ft,
                                      const Expr& F, const Trajectory& traj,
                                      const std::vector<double>& alphas);

}  // namespace lf

#endif
