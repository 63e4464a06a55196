#include "lf/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "lf/errors.hpp"

namespace lf {

EvalPoint Trajectory::point(std::size_t k) const {
    EvalPoint p;
    p.t = times[k];
    p.q = q[k];
    p.v = v[k];
    p.params = params;
    return p;
}

std::string Trajectory::to_csv() const {
    std::string out = "t";
    for (int i = 1; i <= n; ++i) out += ",q" + std::to_string(i);
    for (int i = 1; i <= n; ++i) out += ",v" + std::to_string(i);
    out += "\n";
    char buf[64];
    for (std::size_t k = 0; k < size(); ++k) {
        std::snprintf(buf, sizeof buf, "%.17g", times[k]);
        out += buf;
        for (double x : q[k]) {
            std::snprintf(buf, sizeof buf, ",%.17g", x);
            out += buf;
        }
        for (double x : v[k]) {
            std::snprintf(buf, sizeof buf, ",%.17g", x);
            out += buf;
        }
        out += "\n";
    }
    return out;
}

namespace {

void eval_forces(const DynamicalSystem& sys, EvalPoint& p, std::vector<double>& out) {
    for (int i = 0; i < sys.n; ++i) out[i] = eval(sys.f[i], p);
}

}  // namespace

Trajectory integrate(const DynamicalSystem& sys, const std::vector<double>& q0,
                     const std::vector<double>& v0, double t0, double t1, double h,
                     const std::map<std::string, double>& params) {
    if (h <= 0) throw Error("integrate: step size must be positive");
    if (static_cast<int>(q0.size()) != sys.n || static_cast<int>(v0.size()) != sys.n)
        throw DimensionMismatchError("initial state dimension mismatch");
    double steps_d = std::llround((t1 - t0) / h);
    if (steps_d < 0 || steps_d > static_cast<double>(kMaxIntegrationSteps))
        throw StepLimitError("integration would exceed the step limit");
    const long long steps = static_cast<long long>(steps_d);

    Trajectory traj;
    traj.n = sys.n;
    traj.h = h;
    traj.params = params;
    traj.times.reserve(steps + 1);
    traj.q.reserve(steps + 1);
    traj.v.reserve(steps + 1);

    std::vector<double> q = q0, v = v0;
    std::vector<double> kq1(sys.n), kq2(sys.n), kq3(sys.n), kq4(sys.n);
    std::vector<double> kv1(sys.n), kv2(sys.n), kv3(sys.n), kv4(sys.n);
    std::vector<double> qt(sys.n), vt(sys.n);
    EvalPoint p;
    p.params = params;

    traj.times.push_back(t0);
    traj.q.push_back(q);
    traj.v.push_back(v);
    for (long long s = 0; s < steps; ++s) {
        double t = t0 + static_cast<double>(s) * h;
        // k1
        p.t = t;
        p.q = q;
        p.v = v;
        kq1 = v;
        eval_forces(sys, p, kv1);
        // k2
        for (int i = 0; i < sys.n; ++i) {
            qt[i] = q[i] + 0.5 * h * kq1[i];
            vt[i] = v[i] + 0.5 * h * kv1[i];
        }
        p.t = t + 0.5 * h;
        p.q = qt;
        p.v = vt;
        kq2 = vt;
        eval_forces(sys, p, kv2);
        // k3
        for (int i = 0; i < sys.n; ++i) {
            qt[i] = q[i] + 0.5 * h * kq2[i];
            vt[i] = v[i] + 0.5 * h * kv2[i];
        }
        p.q = qt;
        p.v = vt;
        kq3 = vt;
        eval_forces(sys, p, kv3);
        // k4
        for (int i = 0; i < sys.n; ++i) {
            qt[i] = q[i] + h * kq3[i];
            vt[i] = v[i] + h * kv3[i];
        }
        p.t = t + h;
        p.q = qt;
        p.v = vt;
        kq4 = vt;
        eval_forces(sys, p, kv4);

        for (int i = 0; i < sys.n; ++i) {
            q[i] += h / 6.0 * (kq1[i] + 2 * kq2[i] + 2 * kq3[i] + kq4[i]);
            v[i] += h / 6.0 * (kv1[i] + 2 * kv2[i] + 2 * kv3[i] + kv4[i]);
        }
        traj.times.push_back(t0 + static_cast<double>(s + 1) * h);
        traj.q.push_back(q);
        traj.v.push_back(v);
    }
    return traj;
}

double conservation_drift(const ConstantOfMotion& C, const Trajectory& traj) {
    if (traj.size() == 0) throw Error("conservation_drift: empty trajectory");
    double c0 = eval(C.C, traj.point(0));
    double scale = std::max(1.0, std::fabs(c0));
    double drift = 0.0;
    for (std::size_t k = 1; k < traj.size(); ++k)
        drift = std::max(drift, std::fabs(eval(C.C, traj.point(k)) - c0) / scale);
    return drift;
}

namespace {

double simpson(const std::vector<double>& y, double h, bool* odd_adjusted) {
    const std::size_t n = y.size() - 1;  // interval count
    *odd_adjusted = false;
    if (n == 0) return 0.0;
    if (n == 1) {  // trapezoid; nothing better on one interval
        *odd_adjusted = true;
        return 0.5 * h * (y[0] + y[1]);
    }
    double total = 0.0;
    std::size_t limit = n;
    if (n % 2 != 0) {
        if (n < 3) limit = 0;
        else limit = n - 3;
        *odd_adjusted = true;
    }
    for (std::size_t k = 0; k + 2 <= limit; k += 2)
        total += h / 3.0 * (y[k] + 4.0 * y[k + 1] + y[k + 2]);
    if (n % 2 != 0)  // Simpson 3/8 on the trailing three intervals
        total += 3.0 * h / 8.0 *
                 (y[n - 3] + 3.0 * y[n - 2] + 3.0 * y[n - 1] + y[n]);
    return total;
}

}  // namespace

ActionResult action(const Lagrangian& L, const Trajectory& traj) {
    if (traj.size() < 2) throw Error("action: trajectory too short");
    std::vector<double> y(traj.size());
    for (std::size_t k = 0; k < traj.size(); ++k) y[k] = eval(L.L, traj.point(k));
    ActionResult res;
    res.value = simpson(y, traj.h, &res.odd_interval_adjustment);
    return res;
}

FiniteTransformation::FiniteTransformation(Expr t_map_in, std::vector<Expr> q_maps_in,
                                           const std::map<std::string, double>& params)
    : t_map(std::move(t_map_in)), q_maps(std::move(q_maps_in)) {
    const int n = static_cast<int>(q_maps.size());
    // alpha = 0 must give the identity; spot-check numerically.
    for (int k = 0; k < 10; ++k) {
        EvalPoint p;
        p.t = 0.2 * k;
        p.params = params;
        p.params["alpha"] = 0.0;
        for (int i = 0; i < n; ++i) p.q.push_back(0.5 + 0.15 * k + 0.3 * i);
        if (std::fabs(eval(t_map, p) - p.t) > 1e-10)
            throw Error("finite transformation is not the identity at alpha = 0");
        for (int i = 0; i < n; ++i)
            if (std::fabs(eval(q_maps[i], p) - p.q[i]) > 1e-10)
                throw Error("finite transformation is not the identity at alpha = 0");
    }
}

namespace {

struct HermiteData {
    std::vector<double> t;                  // strictly increasing nodes
    std::vector<std::vector<double>> y;     // per node, per coordinate
    std::vector<std::vector<double>> dy;    // dy/dt at nodes
};

// Cubic Hermite evaluation of y and dy/dt at x.
void hermite_eval(const HermiteData& d, double x, std::vector<double>& yout,
                  std::vector<double>& dyout) {
    const std::size_t m = d.t.size();
    std::size_t hi = std::upper_bound(d.t.begin(), d.t.end(), x) - d.t.begin();
    if (hi == 0) hi = 1;
    if (hi >= m) hi = m - 1;
    const std::size_t lo = hi - 1;
    const double dt = d.t[hi] - d.t[lo];
    const double s = (x - d.t[lo]) / dt;
    const double h00 = (2 * s - 3) * s * s + 1, h10 = ((s - 2) * s + 1) * s;
    const double h01 = (3 - 2 * s) * s * s, h11 = (s - 1) * s * s;
    const double g00 = 6 * s * (s - 1), g10 = (3 * s - 4) * s + 1;
    const double g01 = -6 * s * (s - 1), g11 = (3 * s - 2) * s;
    const std::size_t n = d.y[lo].size();
    yout.resize(n);
    dyout.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        yout[i] = h00 * d.y[lo][i] + h10 * dt * d.dy[lo][i] + h01 * d.y[hi][i] +
                  h11 * dt * d.dy[hi][i];
        dyout[i] = (g00 * d.y[lo][i] + g01 * d.y[hi][i]) / dt + g10 * d.dy[lo][i] +
                   g11 * d.dy[hi][i];
    }
}

}  // namespace

VariationCheck action_variation_check(const Lagrangian& L, const FiniteTransformation& ft,
                                      const Expr& F, const Trajectory& traj,
                                      const std::vector<double>& alphas) {
    const int n = traj.n;
    if (static_cast<int>(ft.q_maps.size()) != n)
        throw DimensionMismatchError("transformation/trajectory dimension mismatch");
    VariationCheck out;
    out.base_action = action(L, traj).value;

    // Boundary-term difference per unit parameter.
    double f_end, f_start;
    {
        EvalPoint p0 = traj.point(0);
        EvalPoint p1 = traj.point(traj.size() - 1);
        f_start = eval(F, p0);
        f_end = eval(F, p1);
    }

    // Symbolic partials of the maps, evaluated along the trajectory.
    Expr dtmap_dt = diff(ft.t_map, Symbol::time());
    std::vector<Expr> dqmap_dt, dqmap_dq;  // dq indexed [i*n + j]
    for (int i = 0; i < n; ++i) dqmap_dt.push_back(diff(ft.q_maps[i], Symbol::time()));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            dqmap_dq.push_back(diff(ft.q_maps[i], Symbol::coord(j + 1)));

    for (double alpha : alphas) {
        HermiteData data;
        data.t.resize(traj.size());
        data.y.resize(traj.size());
        data.dy.resize(traj.size());
        for (std::size_t k = 0; k < traj.size(); ++k) {
            EvalPoint p = traj.point(k);
            p.params["alpha"] = alpha;
            double tp = eval(ft.t_map, p);
            double dtp = eval(dtmap_dt, p);
            if (dtp <= 0.0)
                throw DomainError("transformed time is not increasing along the trajectory");
            data.t[k] = tp;
            data.y[k].resize(n);
            data.dy[k].resize(n);
            for (int i = 0; i < n; ++i) {
                data.y[k][i] = eval(ft.q_maps[i], p);
                double dq = eval(dqmap_dt[i], p);
                for (int j = 0; j < n; ++j)
                    dq += eval(dqmap_dq[i * static_cast<std::size_t>(n) + j], p) * p.v[j];
                data.dy[k][i] = dq / dtp;  // dq'/dt'
            }
        }

        // Resample onto a uniform grid in transformed time and integrate.
        const std::size_t N = traj.size() - 1;
        const double h2 = (data.t.back() - data.t.front()) / static_cast<double>(N);
        std::vector<double> integrand(N + 1);
        std::vector<double> yq, yv;
        EvalPoint p;
        p.params = traj.params;
        for (std::size_t k = 0; k <= N; ++k) {
            double tau = data.t.front() + h2 * static_cast<double>(k);
            hermite_eval(data, tau, yq, yv);
            p.t = tau;
            p.q = yq;
            p.v = yv;
            integrand[k] = eval(L.L, p);
        }
        bool odd = false;
        double transformed_action = simpson(integrand, h2, &odd);
        double deviation = (transformed_action - out.base_action) - alpha * (f_end - f_start);
        out.samples.push_back({alpha, deviation, false});
    }

    out.floor = std::max(1e-12, 1e-9 * std::max(1.0, std::fabs(out.base_action)));
    int significant = 0;
    for (auto& s : out.samples) {
        s.significant = std::fabs(s.deviation) > out.floor;
        if (s.significant) ++significant;
    }
    if (significant < 2) {
        out.exact = true;
        out.slope = std::numeric_limits<double>::infinity();
        return out;
    }
    // Least-squares slope of log|D| against log alpha over significant samples.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& s : out.samples) {
        if (!s.significant) continue;
        double x = std::log(s.alpha), y = std::log(std::fabs(s.deviation));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    double m = static_cast<double>(significant);
    out.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    return out;
}

}  // namespace lf
