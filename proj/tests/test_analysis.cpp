#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "opcalc/analysis.hpp"
#include "test_util.hpp"

#include <cmath>

using namespace opcalc;

namespace {

DiffOperator psq(int n, int i) {
    MultiIndex a(std::vector<int>(static_cast<size_t>(n), 0));
    a.e[static_cast<size_t>(i - 1)] = 2;
    DiffOperator r(n);
    r.add_term(a, one_expr());
    return r;
}

// (p_i^2 + x_i^2) / 2
DiffOperator oscillator_block(int n, int i) {
    DiffOperator r = psq(n, i);
    r.add_term(MultiIndex(std::vector<int>(static_cast<size_t>(n), 0)),
               make_pow(make_var(i), 2));
    return op_scale(r, Rational(1, 2));
}

DiffOperator p_plus(const Expr& f) {
    DiffOperator r = DiffOperator::momentum(1, 1);
    r.add_term(MultiIndex{0}, f);
    return r;
}

} // namespace

TEST_CASE("phase sampling is deterministic and respects the domain") {
    DomainSpec dom = DomainSpec::box_domain(2);
    PhaseSample a = draw_phase_sample(dom, 12);
    PhaseSample b = draw_phase_sample(dom, 12);
    CHECK(a.x == b.x);
    CHECK(a.p == b.p);
    CHECK(a.sampled);
    for (double v : a.x) CHECK(std::fabs(v) <= 2.0);
}

TEST_CASE("main dimension of the standard set is 2n") {
    int n = 2;
    std::vector<DiffOperator> w;
    for (int i = 1; i <= n; ++i) w.push_back(DiffOperator::coordinate(n, i));
    for (int i = 1; i <= n; ++i) w.push_back(DiffOperator::momentum(n, i));
    RankReport rep = quasi_independence(w, DomainSpec::box_domain(n));
    CHECK(rep.globally_quasi_independent);
    CHECK(rep.full_rank_fraction == doctest::Approx(1.0));
    for (const auto& e : rep.entries) CHECK(e.rank == 2 * n);
}

TEST_CASE("oscillator blocks are quasi-independent, duplicates are not") {
    int n = 2;
    std::vector<DiffOperator> w = {oscillator_block(n, 1), oscillator_block(n, 2)};
    CHECK(quasi_independence(w, DomainSpec::box_domain(n)).globally_quasi_independent);

    PhaseSample pt{{0.3, -0.7}, {1.1, 0.6}, false};
    CHECK(main_dimension(w, pt).rank == 2);

    std::vector<DiffOperator> dup = {DiffOperator::momentum(n, 1), DiffOperator::momentum(n, 1)};
    RankReport rep = quasi_independence(dup, DomainSpec::box_domain(n));
    CHECK_FALSE(rep.globally_quasi_independent);
    for (const auto& e : rep.entries) CHECK(e.rank == 1);
}

TEST_CASE("first-order pairs share a main part, hence rank 1") {
    std::vector<DiffOperator> w = {p_plus(make_pow(make_var(1), 2)),
                                   p_plus(make_pow(make_var(1), 3))};
    RankReport rep = quasi_independence(w, DomainSpec::box_domain(1));
    CHECK_FALSE(rep.globally_quasi_independent);
    for (const auto& e : rep.entries) CHECK(e.rank == 1);
}

TEST_CASE("commutation checks") {
    int n = 2;
    DomainSpec dom = DomainSpec::box_domain(n);
    std::vector<DiffOperator> osc = {oscillator_block(n, 1), oscillator_block(n, 2)};
    CHECK(check_commutation(osc, 2, dom).all_zero);

    std::vector<DiffOperator> bad = {DiffOperator::momentum(n, 1),
                                     DiffOperator::coordinate(n, 1)};
    CommutationReport rep = check_commutation(bad, 1, dom);
    CHECK_FALSE(rep.all_zero);
    REQUIRE(rep.entries.size() == 1);
    CHECK(rep.entries[0].i == 0);
    CHECK(rep.entries[0].j == 1);
    CHECK_FALSE(rep.entries[0].verdict.zero);
}

TEST_CASE("integrability verdicts") {
    int n = 2;
    DomainSpec dom = DomainSpec::box_domain(n);

    std::vector<DiffOperator> osc = {oscillator_block(n, 1), oscillator_block(n, 2)};
    IntegrableReport ok = check_integrable_set(osc, 2, dom);
    CHECK(ok.verdict == IntegrableVerdict::IntegrableAtSampledPoints);
    CHECK(ok.size_matches);
    CHECK(ok.classical.all_zero);  // {MW_i, MW_j} = 0 follows

    std::vector<DiffOperator> bad = {DiffOperator::momentum(n, 1),
                                     DiffOperator::coordinate(n, 1)};
    CHECK(check_integrable_set(bad, 2, dom).verdict == IntegrableVerdict::NotCommuting);

    std::vector<DiffOperator> dup = {DiffOperator::momentum(n, 1), DiffOperator::momentum(n, 1)};
    CHECK(check_integrable_set(dup, 2, dom).verdict ==
          IntegrableVerdict::NotQuasiIndependent);
}

TEST_CASE("regular correlation witnesses") {
    DomainSpec dom = DomainSpec::box_domain(1);
    PhaseSample pt{{0.4}, {1.2}, false};

    // W = (p + f, p + f - 3), S = F1 - F2 - 3
    Expr f = make_pow(make_var(1), 2);
    std::vector<DiffOperator> w = {p_plus(f), p_plus(sub(f, make_const(3)))};
    NCPolynomial s = nc_sub(nc_sub(NCPolynomial::symbol(0, 2, 1), NCPolynomial::symbol(0, 2, 2)),
                            NCPolynomial::coeff(0, 2, make_const(3)));
    CorrelationReport rep = check_regular_correlation(s, w, pt, dom);
    CHECK(rep.valid);
    CHECK(rep.nonzero_polynomial);
    CHECK(rep.gradient_nonzero);
    CHECK(rep.substitution_zero);

    // W = (x, p), S = G F - F G + 1: substitution vanishes but the
    // abelianization is constant, so the gradient degenerates
    std::vector<DiffOperator> xp = {DiffOperator::coordinate(1, 1), DiffOperator::momentum(1, 1)};
    NCPolynomial gf = nc_mul(NCPolynomial::coeff(1, 1, make_var(1)), NCPolynomial::symbol(1, 1, 1));
    NCPolynomial fg = nc_mul(NCPolynomial::symbol(1, 1, 1), NCPolynomial::coeff(1, 1, make_var(1)));
    NCPolynomial s2 = nc_add(nc_sub(gf, fg), NCPolynomial::coeff(1, 1, one_expr()));
    CorrelationReport rep2 = check_regular_correlation(s2, xp, pt, dom);
    CHECK(rep2.substitution_zero);
    CHECK_FALSE(rep2.gradient_nonzero);
    CHECK_FALSE(rep2.valid);

    // the zero polynomial never certifies anything
    NCPolynomial z = nc_sub(NCPolynomial::symbol(0, 2, 1), NCPolynomial::symbol(0, 2, 1));
    CorrelationReport rep3 = check_regular_correlation(z, w, pt, dom);
    CHECK_FALSE(rep3.nonzero_polynomial);
    CHECK_FALSE(rep3.valid);
}

TEST_CASE("algebraic dependence witnesses") {
    DomainSpec dom = DomainSpec::box_domain(1);
    PhaseSample pt{{0.5}, {1.3}, false};

    // W1 = p^2 + x is a polynomial in Y = (x, p): S1 = F1 - F2^2 - G1
    DiffOperator w1 = psq(1, 1);
    w1.add_term(MultiIndex{0}, make_var(1));
    std::vector<DiffOperator> y = {DiffOperator::coordinate(1, 1), DiffOperator::momentum(1, 1)};
    NCPolynomial s1 = nc_sub(nc_sub(NCPolynomial::symbol(1, 2, 1),
                                    nc_pow(NCPolynomial::symbol(1, 2, 2), 2)),
                             NCPolynomial::coeff(1, 2, make_var(1)));
    DependenceReport rep = check_algebraic_dependence({s1}, {w1}, y, pt, dom);
    CHECK(rep.valid);
    CHECK(rep.det_nonzero);
    CHECK(rep.det == doctest::Approx(1.0));
    CHECK(rep.substitutions_zero);
    CHECK(rep.span_contained);

    // W = (x) against Y = (p): the candidate relation G1 - F1 fails both gates
    NCPolynomial s2 = nc_sub(NCPolynomial::coeff(1, 1, make_var(1)), NCPolynomial::symbol(1, 1, 1));
    DependenceReport rep2 = check_algebraic_dependence({s2}, {DiffOperator::coordinate(1, 1)},
                                                       {DiffOperator::momentum(1, 1)}, pt, dom);
    CHECK_FALSE(rep2.valid);
    CHECK_FALSE(rep2.substitutions_zero);
    CHECK(rep2.failing_index == 0);
}

TEST_CASE("span containment of main differentials") {
    PhaseSample pt{{0.6}, {1.4}, false};
    SpanReport in = check_span_containment({psq(1, 1)}, {DiffOperator::momentum(1, 1)}, pt);
    CHECK(in.contained);
    CHECK(in.rank_bound_holds);
    CHECK(in.max_residual < 1e-10);

    SpanReport out = check_span_containment({DiffOperator::coordinate(1, 1)},
                                            {DiffOperator::momentum(1, 1)}, pt);
    CHECK_FALSE(out.contained);
    CHECK(out.max_residual > 0.5);
}

TEST_CASE("necessary condition for regular dependence") {
    PhaseSample pt{{0.7}, {1.1}, false};
    Expr f = make_pow(make_var(1), 2);

    // f and g differ by a constant: the condition holds
    std::vector<DiffOperator> good = {p_plus(f), p_plus(sub(f, make_const(5)))};
    NecReport rep = check_necessary_dependence_condition(good, pt);
    CHECK(rep.verdict == NecVerdict::PassesNecessaryCondition);
    CHECK(rep.rank == 1);
    CHECK(rep.residual < 1e-9);

    // f = x^2, g = x^3: v has a dx component outside span{dp}
    std::vector<DiffOperator> bad = {p_plus(f), p_plus(make_pow(make_var(1), 3))};
    NecReport rep2 = check_necessary_dependence_condition(bad, pt);
    CHECK(rep2.verdict == NecVerdict::ViolatesNecessaryCondition);
    CHECK(rep2.residual > 1e-3);

    // full main rank: the criterion does not apply
    std::vector<DiffOperator> full = {DiffOperator::coordinate(1, 1),
                                      DiffOperator::momentum(1, 1)};
    CHECK(check_necessary_dependence_condition(full, pt).verdict == NecVerdict::NotApplicable);
}

TEST_CASE("kernel covector and v match the first-order closed form") {
    // W = (p + f, p + g): gamma ~ (1, -1), v ~ (f' - g') dx
    PhaseSample pt{{0.8}, {1.5}, false};
    Expr f = make_pow(make_var(1), 2), g = make_pow(make_var(1), 3);
    std::vector<DiffOperator> w = {p_plus(f), p_plus(g)};
    NecReport rep = check_necessary_dependence_condition(w, pt);
    REQUIRE(rep.gamma.size() == 2);
    double scale = rep.gamma[0];  // closed form uses gamma = (1, -1)
    CHECK(rep.gamma[1] == doctest::Approx(-scale));
    double x = pt.x[0];
    REQUIRE(rep.v.size() == 2);
    CHECK(rep.v[0] == doctest::Approx(scale * (2 * x - 3 * x * x)));
    CHECK(rep.v[1] == doctest::Approx(0.0));
}

TEST_CASE("shared-coefficient relations between differentials") {
    PhaseSample pt{{0.4}, {1.2}, false};

    // W a subset of Y always satisfies the relations with a = (selector rows)
    std::vector<DiffOperator> y = {psq(1, 1), DiffOperator::coordinate(1, 1)};
    Preind2Report sub = check_preind2_relations({psq(1, 1)}, y, pt);
    CHECK(sub.passes);
    REQUIRE(sub.a.size() == 1);
    CHECK(sub.a[0][0] == doctest::Approx(1.0));
    CHECK(sub.a[0][1] == doctest::Approx(0.0).epsilon(1e-9));

    // W1 = p^2 + x against Y = (p^2, x)
    DiffOperator w1 = psq(1, 1);
    w1.add_term(MultiIndex{0}, make_var(1));
    Preind2Report ok = check_preind2_relations({w1}, y, pt);
    CHECK(ok.passes);
    CHECK(ok.a1_residual < 1e-9);
    CHECK(ok.a3_residual < 1e-9);

    // W = (p + x^2, p + x^3) against Y = (p): the second relation cannot hold
    std::vector<DiffOperator> w = {p_plus(make_pow(make_var(1), 2)),
                                   p_plus(make_pow(make_var(1), 3))};
    Preind2Report fail = check_preind2_relations(w, {DiffOperator::momentum(1, 1)}, pt);
    CHECK_FALSE(fail.passes);
    CHECK(fail.a1_residual < 1e-9);
    CHECK(fail.a2_residual > 1e-3);
}
