// Acceptance suite: runs every target criterion end to end and prints one
// pass/fail line each. Exit code is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "lf/helmholtz.hpp"
#include "lf/noether.hpp"
#include "lf/numeric.hpp"
#include "lf/parser.hpp"
#include "lf/solver.hpp"

using namespace lf;

namespace {

struct Checker {
    bool ok = true;
    std::string detail;

    void require(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            if (!detail.empty()) detail += "; ";
            detail += what;
        }
    }
    void note(const std::string& info) {
        if (!detail.empty()) detail += "; ";
        detail += info;
    }
};

const std::map<std::string, double> kParams{{"m", 1.0}, {"lambda", 0.3}};
const double kLambda = 0.3;

DynamicalSystem damped() { return DynamicalSystem(1, {parse("-lambda*v1")}); }
Lagrangian L1() { return Lagrangian(parse("1/2*m*v1^2*exp(lambda*t)"), kParams); }
Lagrangian L2() { return Lagrangian(parse("m*(v1*ln(abs(v1)) - lambda*q1)"), kParams); }
Lagrangian Lxi1() {
    return Lagrangian(parse("1/2*m*v1^2 + m*lambda*q1*v1*(ln(abs(v1)) - 1) "
                            "- 1/2*m*lambda^2*q1^2"),
                      kParams);
}
SampleDomain dom() { return SampleDomain(kParams); }

struct Triple {
    const char* name;
    Lagrangian L;
    SymmetryGenerator g;
    Expr C;
};

// The four cross-pairings of {L1, L2} x {translation, time map} from the
// damped-particle discussion; the (L2, translation) boundary term and constant
// follow from the identity itself and are cross-checked below.
std::vector<Triple> corpus_triples() {
    SymmetryGenerator transl(num_(0), {num_(1)});
    SymmetryGenerator tmap(parse("-exp(lambda*t)"), {num_(0)});
    SymmetryGenerator tmapF(parse("-exp(lambda*t)"), {num_(0)},
                            parse("lambda*m*q1*exp(lambda*t)"));
    SymmetryGenerator translF(num_(0), {num_(1)}, parse("-lambda*m*t"));
    return {
        {"L1/translation", L1(), transl, parse("m*v1*exp(lambda*t)")},
        {"L1/time-map", L1(), tmap, parse("1/2*m*v1^2*exp(2*lambda*t)")},
        {"L2/time-map", L2(), tmapF, parse("m*v1*exp(lambda*t)")},
        {"L2/translation", L2(), translF, parse("m*ln(abs(v1)) + m + lambda*m*t")},
    };
}

AnsatzFamily damped_ansatz() {
    AnsatzFamily a(1);
    a.add(0, 0, parse("exp(lambda*t)"));
    a.add(0, 0, parse("1/v1"));
    a.add(0, 0, parse("1 + lambda*q1/v1"));
    return a;
}

AnsatzFamily oscillator_q_ansatz() {
    std::vector<Expr> monomials{num_(1),      q_(1),        q_(2),
                                q_(1) * q_(1), q_(1) * q_(2), q_(2) * q_(2)};
    AnsatzFamily a(2);
    for (auto [i, j] : {std::pair{0, 0}, {0, 1}, {1, 1}})
        for (const Expr& m : monomials) a.add(i, j, m);
    return a;
}

Expr xi_subst(const Expr& G) {
    return substitute(G, {{Symbol::param("xi1"), v_(1) + par_("lambda") * q_(1)},
                          {Symbol::param("xi2"), v_(1) * Expr::exp(par_("lambda") * t_())}});
}

void criterion1(Checker& c) {
    for (const auto& [name, L, M11] :
         {std::tuple{"L1", L1(), parse("m*exp(lambda*t)")},
          std::tuple{"L2", L2(), parse("m/v1")}}) {
        std::vector<Expr> el = euler_lagrange_residual(L, damped());
        c.require(is_zero(el[0], dom()).is_zero(), std::string(name) + " EL residual not Zero");
        c.require(hessian_of(L).at(0, 0) == M11, std::string(name) + " Hessian mismatch");
        HelmholtzReport rep = helmholtz_residuals(hessian_of(L), damped(), dom());
        c.require(rep.pass, std::string(name) + " Helmholtz report failed");
    }
}

void criterion2(Checker& c) {
    auto triples = corpus_triples();
    for (int i : {0, 1, 2}) {
        auto nc = noether_constant(triples[i].L, triples[i].g);
        c.require(!nc.not_a_symmetry(),
                  std::string(triples[i].name) + " flagged NotASymmetry");
        c.require(is_zero(nc.constant.C - triples[i].C, dom()).is_zero(),
                  std::string(triples[i].name) + " constant mismatch");
    }
    auto bt = boundary_term(L2(), hessian_of(L2()), {parse("m*v1*exp(lambda*t)")});
    c.require(bt.consistent, "L2 boundary term velocity-dependent");
    c.require(is_zero(bt.F - parse("lambda*m*q1*exp(lambda*t)"), dom()).is_zero(),
              "L2 boundary term mismatch");
}

void criterion3(Checker& c) {
    auto triples = corpus_triples();
    for (const Triple& tr : triples) {
        c.require(is_zero(noether_identity_residual(tr.L, tr.g), dom()).is_zero(),
                  std::string(tr.name) + " identity not Zero");
        HessianCandidate M = hessian_of(tr.L);
        auto rel = delta_q_relation_residual(M, {tr.C}, tr.g);
        c.require(is_zero(rel[0], dom()).is_zero(),
                  std::string(tr.name) + " delta-q relation not Zero");
        c.require(is_zero(compatibility_residual(M, tr.g).at(0, 0), dom()).is_zero(),
                  std::string(tr.name) + " compatibility not Zero");
        c.require(
            is_zero(compatibility_residual_delta_form(M, tr.g).at(0, 0), dom()).is_zero(),
            std::string(tr.name) + " delta-form compatibility not Zero");
    }
    // Same symmetry, two Lagrangians: distinct constants.
    c.require(is_zero(triples[1].C - triples[2].C, dom()).kind == ZeroKind::NonZero,
              "time-map constants should differ between L1 and L2");
    // Same constant, two symmetries.
    c.require(is_zero(triples[0].C - triples[2].C, dom()).is_zero(),
              "translation/time-map constant should coincide");
}

void criterion4(Checker& c) {
    const char* gs[] = {"1", "xi1", "xi2", "xi1*xi2", "xi2^2"};
    for (const char* g : gs)
        c.require(general_h1_solution_check(parse(g), damped(), "lambda", dom()).is_zero(),
                  std::string("H1 family check failed for G = ") + g);

    auto compat_pass = [&](const char* g, const SymmetryGenerator& gen, bool expect) {
        HessianCandidate M(1);
        M.set(0, 0, xi_subst(parse(g)) / v_(1));
        ZeroResult z = is_zero(compatibility_residual(M, gen).at(0, 0), dom());
        if (expect)
            c.require(z.is_zero(), std::string("G = ") + g + " should be compatible");
        else
            c.require(z.kind == ZeroKind::NonZero && z.witness.has_value(),
                      std::string("G = ") + g + " should fail with a witness");
    };
    SymmetryGenerator transl(num_(0), {num_(1)});
    SymmetryGenerator ttrans(num_(1), {num_(0)});
    SymmetryGenerator decay(num_(0), {parse("exp(-lambda*t)")});
    // Delta x = eps keeps exactly the xi1-free family.
    for (const char* g : {"1", "xi2", "xi2^2"}) compat_pass(g, transl, true);
    for (const char* g : {"xi1", "xi1*xi2"}) compat_pass(g, transl, false);
    // Delta t = eps keeps exactly the xi2-free family.
    for (const char* g : {"1", "xi1"}) compat_pass(g, ttrans, true);
    for (const char* g : {"xi2", "xi1*xi2", "xi2^2"}) compat_pass(g, ttrans, false);
    // Delta x = e^{-lambda t} eps keeps exactly G = xi2 Phi(xi1).
    for (const char* g : {"xi2", "xi1*xi2"}) compat_pass(g, decay, true);
    for (const char* g : {"1", "xi1", "xi2^2"}) compat_pass(g, decay, false);
}

void criterion5(Checker& c) {
    auto start = std::chrono::steady_clock::now();
    DynamicalSystem osc(2, {parse("-omega^2*q1"), parse("-omega^2*q2")});
    SolverConfig cfg;
    cfg.domain = SampleDomain({{"omega", 1.7}});
    AnsatzFamily ansatz = oscillator_q_ansatz();
    c.require(ansatz.unknowns() >= 18, "ansatz smaller than 18 unknowns");
    SymmetryGroupAction G{{SymmetryGenerator(num_(0), {q_(2), -q_(1)})}};
    SolutionFamily fam = method1(osc, G, ansatz, cfg);
    c.require(fam.status == SolveStatus::Ok, "solver status not Ok");
    c.require(fam.dimension == 1,
              "kernel dimension " + std::to_string(fam.dimension) + " != 1");
    if (fam.dimension == 1) {
        const FamilyMember& m = fam.members[0];
        c.require(m.M.at(0, 0) == num_(1) && m.M.at(1, 1) == num_(1) &&
                      m.M.at(0, 1).is_literal_zero(),
                  "member is not c*Identity");
        // Off-diagonal block = unknowns 6..11 in entry order (1,1),(1,2),(2,2).
        for (int u = 6; u < 12; ++u)
            c.require(std::fabs(m.raw_coefficients[u]) < 1e-8,
                      "off-diagonal coefficient above 1e-8");
        c.require(m.verified && !m.degenerate, "member failed re-verification");
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    c.require(secs < 30.0, "runtime exceeded 30 s");
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2fs", secs);
    c.note(buf);
}

void criterion6(Checker& c) {
    SolverConfig cfg;
    cfg.domain = dom();
    SymmetryGenerator transl(num_(0), {num_(1)});
    Method2Direct ok = method2_direct(damped(), transl, {parse("m*v1*exp(lambda*t)")}, cfg);
    c.require(ok.exists, "M = m e^{lambda t} should exist");
    c.require(ok.M.at(0, 0) == parse("m*exp(lambda*t)"), "direct formula M mismatch");
    c.require(ok.helmholtz.pass, "Helmholtz should pass");

    Method2Direct bad = method2_direct(damped(), transl, {parse("m*v1")}, cfg);
    c.require(!bad.exists, "C = m v1 should be rejected");
    const LabeledVerdict* fail = bad.helmholtz.first_failure();
    c.require(fail != nullptr && fail->label == "H1[1,1]", "rejection should come from H1");
    if (fail && fail->result.witness) {
        double w = fail->result.witness->value;
        c.require(std::fabs(w - (-kLambda)) <= 1e-9 * kLambda,
                  "H1 witness value " + std::to_string(w) + " != -lambda m");
    } else {
        c.require(false, "H1 failure carries no witness");
    }
}

void criterion7(Checker& c) {
    ReconstructionConfig rc;
    rc.solver.domain = dom();
    for (const auto& [m11, ref] : {std::pair{"m*exp(lambda*t)", L1()},
                                   {"m/v1", L2()},
                                   {"m*(1 + lambda*q1/v1)", Lxi1()}}) {
        HessianCandidate M(1);
        M.set(0, 0, parse(m11));
        Lagrangian L = reconstruct_lagrangian_1d(M, damped(), rc);
        c.require(equivalent_mod_total_derivative(L, ref),
                  std::string("reconstruction of ") + m11 +
                      " not equivalent to the reference");
    }
}

void criterion8(Checker& c) {
    Trajectory traj = integrate(damped(), {1.0}, {1.0}, 0.0, 2.0, 1e-3, kParams);
    FiniteTransformation ft(parse("-1/lambda*ln(exp(-lambda*t) + alpha*lambda)"), {q_(1)},
                            kParams);
    VariationCheck chk =
        action_variation_check(L1(), ft, num_(0), traj, {1e-2, 1e-3, 1e-4});
    c.require(chk.order_at_least(1.9), "variation order below 1.9");
    c.note(chk.exact ? "exact to round-off" : "slope " + std::to_string(chk.slope));
}

std::vector<Lagrangian> random_regular_lagrangians() {
    std::vector<Lagrangian> out;
    std::uint64_t seed = 2024;
    std::uint64_t ctr = 0;
    auto next = [&](int n) {
        return static_cast<int>(splitmix64::at(seed, ctr++) % static_cast<std::uint64_t>(n));
    };
    const double sigmas[] = {0.0, 0.3, -0.3};
    for (int i = 0; i < 12; ++i) {  // n = 1
        double sigma = sigmas[next(3)];
        Expr envelope = sigma == 0.0 ? num_(1) : Expr::exp(frac_(llround(sigma * 10), 10) * t_());
        Expr kinetic = frac_(next(3) + 1, 2) * Expr::pow(v_(1), 2) * envelope;
        Expr cubic = next(2) ? frac_(1, 50) * Expr::pow(v_(1), 3) : Expr::integer(0);
        Expr linear = frac_(next(5) - 2, 2) * q_(1) * v_(1);
        Expr potential = frac_(next(5) - 2, 2) * Expr::pow(q_(1), 2) + num_(next(3) - 1) * q_(1);
        out.emplace_back(kinetic + cubic + linear - potential, kParams, 1);
    }
    for (int i = 0; i < 8; ++i) {  // n = 2
        double sigma = sigmas[next(3)];
        Expr envelope = sigma == 0.0 ? num_(1) : Expr::exp(frac_(llround(sigma * 10), 10) * t_());
        long long c1 = next(2) + 2, c2 = next(2) + 2, c3 = next(2);
        Expr kinetic = (frac_(c1, 2) * Expr::pow(v_(1), 2) + frac_(c2, 2) * Expr::pow(v_(2), 2) +
                        num_(c3) * v_(1) * v_(2)) *
                       envelope;
        Expr magnetic = frac_(next(5) - 2, 2) * (q_(2) * v_(1) - q_(1) * v_(2));
        Expr potential = frac_(next(5) - 2, 2) * Expr::pow(q_(1), 2) +
                         frac_(next(5) - 2, 2) * Expr::pow(q_(2), 2) +
                         num_(next(3) - 1) * q_(1) * q_(2);
        out.emplace_back(kinetic + magnetic - potential, kParams, 2);
    }
    return out;
}

void criterion9(Checker& c) {
    auto start = std::chrono::steady_clock::now();

    // Helmholtz necessity and the dependence of the determinant relation.
    std::vector<Lagrangian> pool{L1(), L2(), Lxi1()};
    for (Lagrangian& L : random_regular_lagrangians()) pool.push_back(L);
    int checked = 0;
    for (const Lagrangian& L : pool) {
        DynamicalSystem sys = extract_eom(L);
        HelmholtzReport rep = helmholtz_residuals(hessian_of(L), sys, L.domain());
        c.require(rep.pass, "necessity failed for a regular Lagrangian (#" +
                                std::to_string(checked) + ")");
        c.require(rep.det_relation.is_zero(),
                  "determinant relation not Zero for #" + std::to_string(checked));
        ++checked;
    }

    // Noether identity implies conservation (drift on RK4) and compatibility.
    for (const Triple& tr : corpus_triples()) {
        c.require(is_zero(noether_identity_residual(tr.L, tr.g), dom()).is_zero(),
                  std::string(tr.name) + " identity not Zero");
        DynamicalSystem sys = extract_eom(tr.L);
        Trajectory traj = integrate(sys, {1.0}, {1.0}, 0.0, 5.0, 1e-3, kParams);
        auto nc = noether_constant(tr.L, tr.g);
        double drift = conservation_drift(nc.constant, traj);
        c.require(drift < 1e-7,
                  std::string(tr.name) + " drift " + std::to_string(drift) + " >= 1e-7");
        c.require(is_zero(compatibility_residual(hessian_of(tr.L), tr.g).at(0, 0), dom())
                      .is_zero(),
                  std::string(tr.name) + " compatibility not Zero");
    }

    // Seed invariance of method-1 kernels.
    auto projector_distance = [](const SolutionFamily& a, const SolutionFamily& b) {
        Eigen::MatrixXd Pa = a.orthonormal_basis * a.orthonormal_basis.transpose();
        Eigen::MatrixXd Pb = b.orthonormal_basis * b.orthonormal_basis.transpose();
        return (Pa - Pb).norm();
    };
    SolverConfig cfg1;
    cfg1.domain = dom();
    SolverConfig cfg2 = cfg1;
    cfg1.seed = 1001;
    cfg2.seed = 900913;
    SymmetryGroupAction transl{{SymmetryGenerator(num_(0), {num_(1)})}};
    double dist1 = projector_distance(method1(damped(), transl, damped_ansatz(), cfg1),
                                      method1(damped(), transl, damped_ansatz(), cfg2));
    c.require(dist1 < 1e-6, "damped kernel projector seed-dependent");

    DynamicalSystem osc(2, {parse("-omega^2*q1"), parse("-omega^2*q2")});
    SymmetryGroupAction rot{{SymmetryGenerator(num_(0), {q_(2), -q_(1)})}};
    SolverConfig ocfg1;
    ocfg1.domain = SampleDomain({{"omega", 1.7}});
    SolverConfig ocfg2 = ocfg1;
    ocfg1.seed = 31337;
    ocfg2.seed = 271828;
    double dist2 = projector_distance(method1(osc, rot, oscillator_q_ansatz(), ocfg1),
                                      method1(osc, rot, oscillator_q_ansatz(), ocfg2));
    c.require(dist2 < 1e-6, "oscillator kernel projector seed-dependent");

    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    c.require(secs < 60.0, "runtime exceeded 60 s");
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2fs", secs);
    c.note(buf);
}

}  // namespace

int main() {
    struct Entry {
        int id;
        const char* name;
        std::function<void(Checker&)> run;
    };
    const std::vector<Entry> criteria{
        {1, "damped-particle corpus: EL, Hessians, Helmholtz", criterion1},
        {2, "Noether constants and boundary term", criterion2},
        {3, "new-relation suite over the four corpus triples", criterion3},
        {4, "example 1: H1 family and per-symmetry compatibility", criterion4},
        {5, "example 2: rotation-symmetric oscillator solved uniquely", criterion5},
        {6, "example 3: direct Method-2 formula accepts/rejects", criterion6},
        {7, "reconstruction modulo total derivatives", criterion7},
        {8, "finite transformation leaves the action invariant", criterion8},
        {9, "property suites: necessity, conservation, seed invariance", criterion9},
    };

    int failed = 0;
    for (const Entry& e : criteria) {
        Checker c;
        try {
            e.run(c);
        } catch (const std::exception& ex) {
            c.ok = false;
            c.note(std::string("exception: ") + ex.what());
        }
        std::printf("[%s] criterion %d: %s%s%s\n", c.ok ? "PASS" : "FAIL", e.id, e.name,
                    c.detail.empty() ? "" : " — ", c.detail.c_str());
        if (!c.ok) ++failed;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
                criteria.size());
    return failed;
}
