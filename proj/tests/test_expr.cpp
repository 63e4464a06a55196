#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "lf/errors.hpp"
#include "lf/parser.hpp"
#include "testutil.hpp"

using namespace lf;

namespace {

Expr half_mv2_exp() {  // 1/2*m*v1^2*exp(lambda*t)
    return frac_(1, 2) * par_("m") * Expr::pow(v_(1), 2) * Expr::exp(par_("lambda") * t_());
}

SampleDomain damped_domain() {
    return SampleDomain({{"m", 1.0}, {"lambda", 0.3}});
}

}  // namespace

TEST_CASE("parse builds the expected structures") {
    Expr e = parse("1/2*m*v1^2*exp(lambda*t)");
    CHECK(e == half_mv2_exp());
    CHECK(e.kind() == NodeKind::Product);

    Expr xi1 = parse("v1 + lambda*q1");
    CHECK(xi1 == v_(1) + par_("lambda") * q_(1));
    CHECK(xi1.kind() == NodeKind::Sum);

    Expr xi2 = parse("v1*exp(lambda*t)");
    CHECK(xi2 == v_(1) * Expr::exp(par_("lambda") * t_()));
}

TEST_CASE("parse handles decimals, rationals, precedence and unary minus") {
    CHECK(parse("0.5") == frac_(1, 2));
    CHECK(parse("3/4") == frac_(3, 4));
    CHECK(parse("2^3^2") == num_(512));  // right-associative
    CHECK(parse("-v1^2") == -(Expr::pow(v_(1), 2)));
    CHECK(parse("v1^-2") == Expr::pow(v_(1), Rational(-2)));
    CHECK(parse("v1^(3/2)") == Expr::pow(v_(1), Rational(3, 2)));
    CHECK(parse("a1 - -q1") == a_(1) + q_(1));
    CHECK(parse("m/v1/2") == frac_(1, 2) * par_("m") / v_(1));
}

TEST_CASE("parse errors carry positions and kinds") {
    CHECK_THROWS_AS(parse("v1 +"), SyntaxError);
    CHECK_THROWS_AS(parse("tan(q1)"), UnknownFunctionError);
    CHECK_THROWS_AS(parse("q3", 2), IndexOutOfRangeError);
    CHECK_THROWS_AS(parse("v1^q1"), SyntaxError);  // symbolic exponent rejected
    CHECK_THROWS_AS(parse("(v1"), SyntaxError);
    try {
        parse("q1 + $");
    } catch (const SyntaxError& err) {
        CHECK(err.offset == 5);
    }
}

TEST_CASE("canonicalization catches syntactic zeros and basic identities") {
    Expr lam = par_("lambda");
    // (v1+lambda*q1)^2 - v1^2 - 2*lambda*q1*v1 - lambda^2*q1^2 -> 0
    Expr sq = Expr::pow(v_(1) + lam * q_(1), 2);
    Expr rest = Expr::pow(v_(1), 2) + num_(2) * lam * q_(1) * v_(1) +
                Expr::pow(lam, 2) * Expr::pow(q_(1), 2);
    CHECK((sq - rest).is_literal_zero());

    CHECK(Expr::pow(v_(1), 0) == num_(1));
    CHECK(Expr::pow(v_(1), 1) == v_(1));
    CHECK((num_(0) * Expr::ln(v_(1))).is_literal_zero());
    CHECK(v_(1) * v_(1) == Expr::pow(v_(1), 2));
    CHECK((v_(1) / v_(1)) == num_(1));
    CHECK(Expr::exp(lam * t_()) * Expr::exp(lam * t_()) == Expr::exp(num_(2) * lam * t_()));
    CHECK(Expr::abs(Expr::pow(v_(1), -2)) == Expr::pow(v_(1), -2));
    CHECK(Expr::ln(Expr::exp(q_(1))) == q_(1));
    CHECK(Expr::abs(num_(-3) * v_(1)) == num_(3) * Expr::abs(v_(1)));
}

TEST_CASE("printer round-trips through the parser") {
    const char* corpus[] = {
        "1/2*m*v1^2*exp(lambda*t)",
        "m*(v1*ln(abs(v1)) - lambda*q1)",
        "v1 + lambda*q1",
        "v1*exp(lambda*t)",
        "1 + lambda*q1/v1",
        "c/2*(v1^2 + v2^2 - omega^2*q1^2 - omega^2*q2^2)",
        "-1/(lambda*v1)",
        "(v1 + q1)^(-3)",
        "sin(omega*t)*cos(q1)",
        "abs(v1)^(1/2)",
        "q1^2 - 1/2",
    };
    for (const char* s : corpus) {
        Expr e = parse(s);
        Expr back = parse(e.str());
        INFO(s, " printed as ", e.str());
        CHECK(back == e);
    }
}

TEST_CASE("printer round-trips on random trees") {
    lftest::TreeGen gen(7);
    for (int i = 0; i < 200; ++i) {
        Expr e = gen.tree();
        Expr back = parse(e.str());
        INFO(e.str());
        CHECK(back == e);
    }
}

TEST_CASE("diff matches hand results") {
    Expr lam = par_("lambda"), m = par_("m");
    CHECK(diff(half_mv2_exp(), Symbol::vel(1)) ==
          m * v_(1) * Expr::exp(lam * t_()));
    // d/dv1 of m*(v1*ln|v1| - lambda*q1) = m*ln|v1| + m
    Expr L2 = m * (v_(1) * Expr::ln(Expr::abs(v_(1))) - lam * q_(1));
    CHECK(diff(L2, Symbol::vel(1)) == m * Expr::ln(Expr::abs(v_(1))) + m);
    CHECK(diff(par_("c"), Symbol::coord(1)).is_literal_zero());
}

TEST_CASE("diff agrees with central finite differences") {
    // Oracle: central difference of eval, rel. err < 1e-6 at 10 random points.
    const Expr exprs[] = {
        half_mv2_exp(),
        par_("m") * (v_(1) * Expr::ln(Expr::abs(v_(1))) - par_("lambda") * q_(1)),
        parse("1 + lambda*q1/v1"),
        parse("sin(lambda*t)*q1 + cos(v1)"),
        parse("abs(v1)^(3/2)"),
    };
    const Symbol vars[] = {Symbol::vel(1), Symbol::coord(1), Symbol::time()};
    SampleDomain dom = damped_domain();
    for (const Expr& e : exprs) {
        for (const Symbol& s : vars) {
            Expr d = diff(e, s);
            std::set<Symbol> syms = free_symbols(e);
            syms.insert(s);
            std::vector<Symbol> slots(syms.begin(), syms.end());
            for (int k = 0; k < 10; ++k) {
                EvalPoint p = sample_point(slots, dom, 99, k);
                double got = eval(d, p);
                double want = lftest::central_difference(e, s, p, 1e-6);
                CHECK(std::fabs(got - want) <= 1e-6 * std::max(1.0, std::fabs(want)));
            }
        }
    }
}

TEST_CASE("diff is linear, structurally") {
    lftest::TreeGen gen(11);
    for (int i = 0; i < 80; ++i) {
        Expr e1 = gen.tree(2), e2 = gen.tree(2);
        Expr a = par_("m"), b = num_(3);
        Symbol s = Symbol::vel(1);
        CHECK(diff(a * e1 + b * e2, s) == a * diff(e1, s) + b * diff(e2, s));
    }
}

TEST_CASE("product rule and Clairaut hold under the zero test") {
    lftest::TreeGen gen(23);
    SampleDomain dom = lftest::TreeGen::domain();
    for (int i = 0; i < 60; ++i) {
        Expr e1 = gen.tree(2), e2 = gen.tree(2);
        Symbol s = Symbol::coord(1);
        Expr r = diff(e1 * e2, s) - e1 * diff(e2, s) - e2 * diff(e1, s);
        CHECK(is_zero(r, dom).kind != ZeroKind::NonZero);

        Expr mixed = diff(diff(e1, Symbol::coord(1)), Symbol::vel(1)) -
                     diff(diff(e1, Symbol::vel(1)), Symbol::coord(1));
        CHECK(is_zero(mixed, dom).kind != ZeroKind::NonZero);
    }
}

TEST_CASE("substitute examples") {
    Expr lam = par_("lambda");
    std::map<Symbol, Expr> eom{{Symbol::accel(1), -(lam * v_(1))}};
    CHECK(substitute(a_(1) + lam * v_(1), eom).is_literal_zero());
    CHECK(substitute(v_(1), {}) == v_(1));
    std::map<Symbol, Expr> swap{{Symbol::coord(1), q_(2)}, {Symbol::coord(2), q_(1)}};
    CHECK(substitute(q_(1) * q_(2), swap) == q_(1) * q_(2));
}

TEST_CASE("eval examples and domain errors") {
    EvalPoint p;
    p.v = {2.0};
    p.params["lambda"] = 0.3;
    CHECK(eval(parse("v1*exp(lambda*t)"), p) == doctest::Approx(2.0));

    EvalPoint pm;
    pm.v = {-1.0};
    CHECK(eval(parse("ln(abs(v1))"), pm) == doctest::Approx(0.0));

    EvalPoint pz;
    pz.v = {0.0};
    CHECK_THROWS_AS(eval(parse("1/v1"), pz), DomainError);
    CHECK_THROWS_AS(eval(parse("ln(q1)"), EvalPoint{}), UnboundSymbolError);
    EvalPoint pneg;
    pneg.v = {-2.0};
    CHECK_THROWS_AS(eval(parse("v1^(1/2)"), pneg), DomainError);
}

TEST_CASE("is_zero: structural zero, conserved quantity, and witness") {
    SampleDomain dom = damped_domain();

    // d/dt of C = m*v1*exp(lambda*t) along a1 = -lambda*v1, composed by hand.
    Expr lam = par_("lambda"), m = par_("m");
    Expr C = m * v_(1) * Expr::exp(lam * t_());
    Expr dC = diff(C, Symbol::time()) + v_(1) * diff(C, Symbol::coord(1)) +
              (-(lam * v_(1))) * diff(C, Symbol::vel(1));
    ZeroResult r = is_zero(dC, dom);
    CHECK(r.kind == ZeroKind::Zero);

    SampleDomain dom2({{"lambda", 0.3}});
    ZeroResult nz = is_zero(par_("lambda") / v_(1), dom2);
    REQUIRE(nz.kind == ZeroKind::NonZero);
    REQUIRE(nz.witness.has_value());
    CHECK(nz.witness->value >= 0.15);  // 0.3/v1 with v1 in [0.5, 2]
    CHECK(nz.witness->point.count("v1") == 1);
}

TEST_CASE("is_zero is deterministic for a fixed seed") {
    SampleDomain dom({{"lambda", 0.3}});
    ZeroTestConfig cfg;
    cfg.seed = 555;
    Expr e = par_("lambda") / v_(1) - frac_(1, 100) * Expr::sin(t_());
    ZeroResult r1 = is_zero(e, dom, cfg);
    ZeroResult r2 = is_zero(e, dom, cfg);
    REQUIRE(r1.kind == r2.kind);
    REQUIRE(r1.witness.has_value());
    CHECK(r1.witness->value == r2.witness->value);
    CHECK(r1.witness->point == r2.witness->point);
}

TEST_CASE("is_zero reports Inconclusive when the domain mostly fails") {
    // ln(q1 - 10) is undefined on the whole default box.
    SampleDomain dom;
    ZeroResult r = is_zero(Expr::ln(q_(1) - num_(10)), dom);
    CHECK(r.kind == ZeroKind::Inconclusive);
}
