#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "opcalc/oracle.hpp"
#include "test_util.hpp"

#include <cmath>

using namespace opcalc;

TEST_CASE("exponential application") {
    DiffOperator p2(1);
    p2.add_term(MultiIndex{2}, one_expr());
    CHECK(apply_to_exponential(p2, {3}, {0.37}) == doctest::Approx(9));

    DiffOperator a(1);
    a.add_term(MultiIndex{1}, make_var(1));
    a.add_term(MultiIndex{0}, one_expr());
    CHECK(apply_to_exponential(a, {2}, {5}) == doctest::Approx(11));
}

TEST_CASE("exponential application equals symbol evaluation") {
    testutil::Rng rng(17);
    for (int t = 0; t < 20; ++t) {
        DiffOperator a = testutil::random_operator(rng, 2, 3);
        std::vector<double> x = {rng.real(-2, 2), rng.real(-2, 2)};
        std::vector<double> lam = {rng.real(-2, 2), rng.real(-2, 2)};
        double lhs = apply_to_exponential(a, lam, x);
        double rhs = symbol_eval(a, x, lam);
        CHECK(std::fabs(lhs - rhs) <= 1e-9 * std::max(1.0, std::fabs(rhs)));
    }
}

TEST_CASE("symbolic application") {
    DiffOperator p2(1);
    p2.add_term(MultiIndex{2}, one_expr());
    Expr r = apply_symbolic(p2, make_pow(make_var(1), 3));
    CHECK(expr_eq(r, simplify(mul(make_const(6), make_var(1)))));

    DiffOperator a(1);
    a.add_term(MultiIndex{1}, make_var(1));
    a.add_term(MultiIndex{0}, one_expr());
    Expr r2 = apply_symbolic(a, make_apply(Func::Sin, make_var(1)));
    Expr expect = add(mul(make_var(1), make_apply(Func::Cos, make_var(1))),
                      make_apply(Func::Sin, make_var(1)));
    CHECK(expr_eq(r2, simplify(expect)));
}

TEST_CASE("composition acts as iterated application") {
    testutil::Rng rng(23);
    for (int t = 0; t < 30; ++t) {
        DiffOperator a = testutil::random_operator(rng, 2, 2, 2);
        DiffOperator b = testutil::random_operator(rng, 2, 2, 2);
        Expr psi = testutil::random_poly(rng, 2, 3);
        Expr lhs = apply_symbolic(compose(a, b), psi);
        Expr rhs = apply_symbolic(a, apply_symbolic(b, psi));
        std::vector<double> x = {rng.real(-2, 2), rng.real(-2, 2)};
        double vl = evaluate(lhs, x), vr = evaluate(rhs, x);
        CHECK(std::fabs(vl - vr) <= 1e-9 * std::max(1.0, std::fabs(vr)));
    }
}

TEST_CASE("operator equality verdicts") {
    DomainSpec dom = DomainSpec::box_domain(1);
    DiffOperator left = normalize_factors(
        1, {PrimitiveFactor::momentum(1), PrimitiveFactor::coeff(make_var(1))});
    DiffOperator right(1);
    right.add_term(MultiIndex{1}, make_var(1));
    right.add_term(MultiIndex{0}, one_expr());
    CHECK(operator_equal(left, right, dom).equal);

    DiffOperator p2(1);
    p2.add_term(MultiIndex{2}, one_expr());
    DiffOperator p2p1 = p2;
    p2p1.add_term(MultiIndex{0}, one_expr());
    EqualityVerdict v = operator_equal(p2, p2p1, dom);
    CHECK_FALSE(v.equal);
    CHECK(v.max_residual > 1e-3);

    // dual path: symbol-formula composition vs leibniz chains
    testutil::Rng rng(31);
    DomainSpec dom2 = DomainSpec::box_domain(2);
    for (int t = 0; t < 50; ++t) {
        std::vector<PrimitiveFactor> factors;
        int nf = 1 + rng.below(4);
        std::vector<DiffOperator> chain;
        for (int i = 0; i < nf; ++i) {
            if (rng.below(2)) {
                int j = 1 + rng.below(2);
                factors.push_back(PrimitiveFactor::momentum(j));
                chain.push_back(DiffOperator::momentum(2, j));
            } else {
                Expr c = testutil::random_poly(rng, 2, 2, 2);
                factors.push_back(PrimitiveFactor::coeff(c));
                chain.push_back(DiffOperator::constant(2, c));
            }
        }
        DiffOperator byleibniz = normalize_factors(2, factors);
        DiffOperator byformula = DiffOperator::constant(2, Rational(1));
        for (const auto& f : chain) byformula = compose(byformula, f);
        CHECK(operator_equal(byleibniz, byformula, dom2).equal);
    }
}
