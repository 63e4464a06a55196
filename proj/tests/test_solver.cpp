#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "lf/errors.hpp"
#include "lf/parser.hpp"
#include "lf/solver.hpp"
#include "testutil.hpp"

using namespace lf;

namespace {

const std::map<std::string, double> kDampedParams{{"m", 1.0}, {"lambda", 0.3}};

DynamicalSystem damped() { return DynamicalSystem(1, {parse("-lambda*v1")}); }
DynamicalSystem oscillator() {
    return DynamicalSystem(2, {parse("-omega^2*q1"), parse("-omega^2*q2")});
}

SolverConfig damped_cfg(std::uint64_t seed = kDefaultSeed) {
    SolverConfig cfg;
    cfg.seed = seed;
    cfg.domain = SampleDomain(kDampedParams);
    return cfg;
}

SolverConfig osc_cfg(std::uint64_t seed = kDefaultSeed) {
    SolverConfig cfg;
    cfg.seed = seed;
    cfg.domain = SampleDomain({{"omega", 1.7}, {"c", 1.4}});
    return cfg;
}

AnsatzFamily damped_ansatz() {
    AnsatzFamily a(1);
    a.add(0, 0, parse("exp(lambda*t)"));
    a.add(0, 0, parse("1/v1"));
    a.add(0, 0, parse("1 + lambda*q1/v1"));
    return a;
}

// Monomials of degree <= 2 for every symmetric entry; optionally including
// velocities.
AnsatzFamily oscillator_ansatz(bool with_velocities = false) {
    std::vector<Expr> vars{q_(1), q_(2)};
    if (with_velocities) {
        vars.push_back(v_(1));
        vars.push_back(v_(2));
    }
    std::vector<Expr> monomials{num_(1)};
    for (std::size_t i = 0; i < vars.size(); ++i) {
        monomials.push_back(vars[i]);
        for (std::size_t j = i; j < vars.size(); ++j) monomials.push_back(vars[i] * vars[j]);
    }
    AnsatzFamily a(2);
    for (auto [i, j] : {std::pair{0, 0}, {0, 1}, {1, 1}})
        for (const Expr& m : monomials) a.add(i, j, m);
    return a;
}

}  // namespace

TEST_CASE("nullspace unit cases") {
    Eigen::MatrixXd A(2, 2);
    A << 1, 0, 0, 0;
    NullspaceResult r = nullspace(A, 1e-10);
    REQUIRE(r.basis.cols() == 1);
    CHECK(r.basis(0, 0) == doctest::Approx(0.0));
    CHECK(r.basis(1, 0) == doctest::Approx(1.0));

    Eigen::MatrixXd B(8, 2);
    for (int i = 0; i < 8; ++i) {
        B(i, 0) = std::sin(1.0 + i);
        B(i, 1) = std::cos(2.0 + 3 * i);
    }
    CHECK(nullspace(B, 1e-10).basis.cols() == 0);

    Eigen::MatrixXd C(4, 2);
    for (int i = 0; i < 4; ++i) {
        double w = 0.5 + i;
        C(i, 0) = w;
        C(i, 1) = -w;
    }
    NullspaceResult rc = nullspace(C, 1e-10);
    REQUIRE(rc.basis.cols() == 1);
    CHECK(rc.basis(0, 0) == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(rc.basis(1, 0) == doctest::Approx(1.0 / std::sqrt(2.0)));
}

TEST_CASE("snap_rational") {
    CHECK(snap_rational(0.5) == Rational(1, 2));
    CHECK(snap_rational(-0.3) == Rational(-3, 10));
    CHECK(snap_rational(1.0 + 1e-12) == Rational(1));
    CHECK(snap_rational(0.0) == Rational(0));
    Rational r = snap_rational(1.0 / std::sqrt(2.0));
    CHECK(std::fabs(r.to_double() - 1.0 / std::sqrt(2.0)) < 1e-6);
}

TEST_CASE("method1 on the damped particle: translation symmetry") {
    // Delta t = 0, Delta x = eps keeps G(xi2) only: the xi1 basis element drops.
    SymmetryGroupAction G{{SymmetryGenerator(num_(0), {num_(1)})}};
    SolutionFamily fam = method1(damped(), G, damped_ansatz(), damped_cfg());
    CHECK(fam.status == SolveStatus::Ok);
    REQUIRE(fam.dimension == 2);
    REQUIRE(fam.members.size() == 2);
    CHECK(fam.members[0].coefficients == std::vector<double>{1.0, 0.0, 0.0});
    CHECK(fam.members[1].coefficients == std::vector<double>{0.0, 1.0, 0.0});
    for (const FamilyMember& m : fam.members) {
        CHECK(m.verified);
        CHECK_FALSE(m.degenerate);
        CHECK(m.helmholtz.pass);
    }
}

TEST_CASE("method1 on the damped particle: time translation") {
    // Delta t = eps, Delta x = 0 keeps G(xi1) only: exp(lambda t) drops.
    SymmetryGroupAction G{{SymmetryGenerator(num_(1), {num_(0)})}};
    SolutionFamily fam = method1(damped(), G, damped_ansatz(), damped_cfg());
    CHECK(fam.status == SolveStatus::Ok);
    REQUIRE(fam.dimension == 2);
    REQUIRE(fam.members.size() == 2);
    CHECK(fam.members[0].coefficients == std::vector<double>{0.0, 1.0, 0.0});
    CHECK(fam.members[1].coefficients == std::vector<double>{0.0, 0.0, 1.0});
}

TEST_CASE("method1 kernel is a seed-independent subspace") {
    SymmetryGroupAction G{{SymmetryGenerator(num_(0), {num_(1)})}};
    SolutionFamily f1 = method1(damped(), G, damped_ansatz(), damped_cfg(1001));
    SolutionFamily f2 = method1(damped(), G, damped_ansatz(), damped_cfg(77777));
    REQUIRE(f1.dimension == f2.dimension);
    Eigen::MatrixXd P1 = f1.orthonormal_basis * f1.orthonormal_basis.transpose();
    Eigen::MatrixXd P2 = f2.orthonormal_basis * f2.orthonormal_basis.transpose();
    CHECK((P1 - P2).norm() < 1e-6);
}

TEST_CASE("method1 solves the rotation-symmetric oscillator uniquely in the (q,t) class") {
    SymmetryGroupAction G{{SymmetryGenerator(num_(0), {q_(2), -q_(1)})}};
    AnsatzFamily ansatz = oscillator_ansatz();
    CHECK(ansatz.unknowns() == 18);
    SolutionFamily fam = method1(oscillator(), G, ansatz, osc_cfg());
    CHECK(fam.status == SolveStatus::Ok);
    REQUIRE(fam.dimension == 1);
    const FamilyMember& m = fam.members[0];
    CHECK(m.verified);
    CHECK_FALSE(m.degenerate);
    // M = c * Identity: entries are the constant 1 after normalization.
    CHECK(m.M.at(0, 0) == num_(1));
    CHECK(m.M.at(1, 1) == num_(1));
    CHECK(m.M.at(0, 1).is_literal_zero());
    for (double c : m.coefficients) CHECK(std::fabs(c - std::round(c)) < 1e-8);
}

TEST_CASE("velocity monomials surface the tensor-built second oscillator family") {
    // Uniqueness is ansatz-relative: with degree-2 velocity monomials allowed,
    // E_ij = v_i v_j + omega^2 q_i q_j (conserved along the flow) generates a
    // second compatible Hessian, M = 2E + tr(E) Identity. Both members must
    // re-verify against every imposed residual.
    SymmetryGroupAction G{{SymmetryGenerator(num_(0), {q_(2), -q_(1)})}};
    AnsatzFamily ansatz = oscillator_ansatz(true);
    CHECK(ansatz.unknowns() == 45);
    SolutionFamily fam = method1(oscillator(), G, ansatz, osc_cfg());
    CHECK(fam.status == SolveStatus::Ok);
    REQUIRE(fam.dimension == 2);
    for (const FamilyMember& m : fam.members) {
        CHECK(m.verified);
        CHECK(m.helmholtz.pass);
    }
    // The identity solution is still in the span.
    CHECK(fam.members[0].M.at(0, 0) == num_(1));
    CHECK(fam.members[0].M.at(0, 1).is_literal_zero());
}

TEST_CASE("method1 reports empty and dependent ansatz families") {
    SymmetryGroupAction G{{SymmetryGenerator(num_(0), {num_(1)})}};
    AnsatzFamily empty(1);
    CHECK(method1(damped(), G, empty, damped_cfg()).status == SolveStatus::EmptySolution);

    AnsatzFamily dependent(1);
    dependent.add(0, 0, v_(1));
    dependent.add(0, 0, num_(2) * v_(1));
    CHECK_THROWS_AS(method1(damped(), G, dependent, damped_cfg()), AnsatzError);

    // No nontrivial solution: a single basis element violating compatibility.
    AnsatzFamily bad(1);
    bad.add(0, 0, parse("1 + lambda*q1/v1"));
    CHECK(method1(damped(), G, bad, damped_cfg()).status == SolveStatus::EmptySolution);
}

TEST_CASE("method2 direct formula on the damped particle") {
    SymmetryGenerator transl(num_(0), {num_(1)});
    Method2Direct r1 =
        method2_direct(damped(), transl, {parse("m*v1*exp(lambda*t)")}, damped_cfg());
    CHECK(r1.exists);
    CHECK(r1.M.at(0, 0) == parse("m*exp(lambda*t)"));
    CHECK(r1.helmholtz.pass);
    REQUIRE(r1.lagrangian.has_value());
    CHECK(equivalent_mod_total_derivative(
        *r1.lagrangian, Lagrangian(parse("1/2*m*v1^2*exp(lambda*t)"), kDampedParams)));

    // C = m v1 is not conserved under damping; H1 rejects with value -lambda*m.
    Method2Direct r2 = method2_direct(damped(), transl, {parse("m*v1")}, damped_cfg());
    CHECK_FALSE(r2.exists);
    REQUIRE(r2.helmholtz.first_failure() != nullptr);
    CHECK(r2.helmholtz.first_failure()->label == "H1[1,1]");
    CHECK(r2.helmholtz.first_failure()->result.witness->value ==
          doctest::Approx(-0.3).epsilon(1e-9));

    SymmetryGenerator tmap(parse("-exp(lambda*t)"), {num_(0)});
    Method2Direct r3 =
        method2_direct(damped(), tmap, {parse("1/2*m*v1^2*exp(2*lambda*t)")}, damped_cfg());
    CHECK(r3.exists);
    CHECK(r3.M.at(0, 0) == parse("m*exp(lambda*t)"));

    SymmetryGenerator degenerate(num_(0), {num_(0)});
    CHECK_THROWS_AS(method2_direct(damped(), degenerate, {v_(1)}, damped_cfg()),
                    DegenerateVariationError);
}

TEST_CASE("method2 with an ansatz pins the scale through the constant") {
    SymmetryGenerator rot(num_(0), {q_(2), -q_(1)});
    ConstantOfMotion C{parse("2*(v1*q2 - v2*q1)")};
    AnsatzFamily a(2);
    a.add(0, 0, num_(1));
    a.add(0, 1, num_(1));
    a.add(1, 1, num_(1));
    SolutionFamily fam = method2(oscillator(), rot, C, a, osc_cfg());
    CHECK(fam.status == SolveStatus::Ok);
    CHECK(fam.has_particular);
    REQUIRE(fam.dimension == 1);
    const FamilyMember& m = fam.members[0];
    CHECK_FALSE(m.homogeneous);
    CHECK(m.verified);
    CHECK(m.M.at(0, 0) == num_(2));
    CHECK(m.M.at(1, 1) == num_(2));
    CHECK(m.M.at(0, 1).is_literal_zero());

    // A constant that no symmetric ansatz member can produce: empty.
    ConstantOfMotion wrong{parse("v1*q2 + v2*q1")};
    SolutionFamily none = method2(oscillator(), rot, wrong, a, osc_cfg());
    CHECK(none.status == SolveStatus::EmptySolution);
    CHECK_FALSE(none.has_particular);
}

TEST_CASE("method2 members also satisfy method1 residuals") {
    SymmetryGenerator transl(num_(0), {num_(1)});
    ConstantOfMotion C{parse("m*v1*exp(lambda*t)")};
    SolutionFamily fam = method2(damped(), transl, C, damped_ansatz(), damped_cfg());
    REQUIRE(fam.has_particular);
    for (const FamilyMember& mem : fam.members) {
        if (mem.homogeneous) continue;
        SymmetryGroupAction G{{transl}};
        // Re-run the member's M through method1's checks via a one-element ansatz.
        AnsatzFamily single(1);
        single.add(0, 0, mem.M.at(0, 0));
        SolutionFamily again = method1(damped(), G, single, damped_cfg());
        CHECK(again.dimension == 1);
        CHECK(again.members[0].verified);
    }
}

TEST_CASE("reconstruct_lagrangian_1d recovers the paper Lagrangians") {
    ReconstructionConfig rc;
    rc.solver = damped_cfg();

    HessianCandidate Mexp(1);
    Mexp.set(0, 0, parse("m*exp(lambda*t)"));
    Lagrangian L1 = reconstruct_lagrangian_1d(Mexp, damped(), rc);
    CHECK(equivalent_mod_total_derivative(
        L1, Lagrangian(parse("1/2*m*v1^2*exp(lambda*t)"), kDampedParams)));

    HessianCandidate Mlog(1);
    Mlog.set(0, 0, parse("m/v1"));
    Lagrangian L2 = reconstruct_lagrangian_1d(Mlog, damped(), rc);
    CHECK(equivalent_mod_total_derivative(
        L2, Lagrangian(parse("m*(v1*ln(abs(v1)) - lambda*q1)"), kDampedParams)));

    HessianCandidate Mxi(1);
    Mxi.set(0, 0, parse("m*(1 + lambda*q1/v1)"));
    Lagrangian L3 = reconstruct_lagrangian_1d(Mxi, damped(), rc);
    CHECK(equivalent_mod_total_derivative(
        L3, Lagrangian(parse("1/2*m*v1^2 + m*lambda*q1*v1*(ln(abs(v1)) - 1) "
                             "- 1/2*m*lambda^2*q1^2"),
                       kDampedParams)));
}

TEST_CASE("reconstruction round-trips through the Hessian and the motion") {
    ReconstructionConfig rc;
    rc.solver = damped_cfg();
    SampleDomain dom(kDampedParams);
    for (const char* m11 : {"m*exp(lambda*t)", "m/v1", "m*(1 + lambda*q1/v1)"}) {
        HessianCandidate M(1);
        M.set(0, 0, parse(m11));
        Lagrangian L = reconstruct_lagrangian_1d(M, damped(), rc);
        CHECK(is_zero(hessian_of(L).at(0, 0) - M.at(0, 0), dom).is_zero());
        DynamicalSystem sys = extract_eom(L);
        CHECK(is_zero(sys.f[0] - parse("-lambda*v1"), dom).is_zero());
    }
}

TEST_CASE("reconstruction rejects unsupported Hessian classes") {
    ReconstructionConfig rc;
    rc.solver = damped_cfg();
    HessianCandidate M(1);
    M.set(0, 0, parse("exp(v1)"));
    CHECK_THROWS_AS(reconstruct_lagrangian_1d(M, damped(), rc), UnsupportedClassError);

    HessianCandidate M2(1);
    M2.set(0, 0, parse("ln(abs(v1))*q1"));
    CHECK_THROWS_AS(reconstruct_lagrangian_1d(M2, damped(), rc), UnsupportedClassError);
}
