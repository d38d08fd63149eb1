#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "opcalc/analysis.hpp"
#include "opcalc/catalog.hpp"
#include "opcalc/oracle.hpp"

#include <cmath>
#include <set>

using namespace opcalc;

TEST_CASE("kepler") {
    System sys = kepler(1.0);
    REQUIRE(sys.ops.size() == 4);

    // H at x = (0,0,2), p = (1,0,0): kinetic 1/2 cancels -1/r = -1/2
    CHECK(std::fabs(symbol_eval(sys.ops[0], {0, 0, 2}, {1, 0, 0})) < 1e-12);

    // [H, M_i] = 0 for every angular momentum component
    CHECK(check_commutation(sys.ops, sys.k, sys.dom).all_zero);

    // (H, Mx, My, Mz) has main dimension 4 at generic samples
    RankReport rank = quasi_independence(sys.ops, sys.dom);
    CHECK(rank.globally_quasi_independent);
    CHECK(rank.s == 4);
}

TEST_CASE("rigid body") {
    System sys = rigid_body(1.0, 2.0, 3.0);
    REQUIRE(sys.ops.size() == 4);
    CHECK(sys.k == 2);

    // M_z = p_phi
    DiffOperator mz = rigid_m(3);
    CHECK(is_one_const(mz.coeff(MultiIndex::unit(3, 1))));
    CHECK(mz.order() == 1);

    // {M Gamma_1, M Gamma_2} against the commutator bridge
    DiffOperator g1 = rigid_gamma(1), g2 = rigid_gamma(2);
    DiffOperator lhs = homogeneous_part(commutator(g1, g2), 1);
    DiffOperator rhs = poisson_bracket(main_part(g1), main_part(g2));
    CHECK(operator_zero_verdict(op_sub(lhs, rhs), sys.dom).zero);

    IntegrableReport rep = check_integrable_set(sys.ops, sys.k, sys.dom);
    CHECK(rep.verdict == IntegrableVerdict::IntegrableAtSampledPoints);
    CHECK(rep.size_matches);
}

TEST_CASE("symmetric top in a field") {
    System sym = symmetric_top(1.0, 3.0, 0.5);
    REQUIRE(sym.ops.size() == 3);
    CHECK(sym.k == 3);
    IntegrableReport rep = check_integrable_set(sym.ops, sym.k, sym.dom);
    CHECK(rep.verdict == IntegrableVerdict::IntegrableAtSampledPoints);

    // field 0 reduces to a free symmetric body and still passes
    System free = symmetric_top(1.0, 3.0, 0.0);
    CHECK(check_commutation(free.ops, free.k, free.dom).all_zero);

    // asymmetric top: [H, Gamma_3] != 0
    System asym = top(1.0, 2.0, 3.0, 0.5);
    CommutationReport comm = check_commutation(asym.ops, asym.k, asym.dom);
    CHECK_FALSE(comm.all_zero);
    bool hg3_fails = false;
    for (const auto& e : comm.entries)
        if (e.i == 0 && e.j == 2 && !e.verdict.zero) hg3_fails = true;
    CHECK(hg3_fails);
}

TEST_CASE("harmonic oscillator for n = 1..3") {
    for (int n = 1; n <= 3; ++n) {
        System sys = oscillator(std::vector<double>(static_cast<size_t>(n), 1.0));
        CHECK(sys.k == n);
        REQUIRE(static_cast<int>(sys.ops.size()) == n);
        IntegrableReport rep = check_integrable_set(sys.ops, sys.k, sys.dom);
        CHECK(rep.verdict == IntegrableVerdict::IntegrableAtSampledPoints);
        CHECK(rep.size_matches);  // |W| = 2n - k with k = n
    }
}

TEST_CASE("heat operator with separable potential") {
    System sys = heat_operator({make_pow(make_var(1), 2), make_apply(Func::Sin, make_var(1))});
    REQUIRE(sys.ops.size() == 4);  // H, Pt, B1, B2
    CHECK(sys.k == 3);

    // the Liouville blocks (Pt, B1, B2) commute pairwise and with H
    std::vector<DiffOperator> blocks(sys.ops.begin() + 1, sys.ops.end());
    CHECK(check_commutation(blocks, 3, sys.dom).all_zero);
    CHECK(check_commutation(sys.ops, 1, sys.dom).all_zero);

    // H = Pt + sum B_i
    DiffOperator total = sys.ops[1];
    for (size_t i = 2; i < sys.ops.size(); ++i) total = op_add(total, sys.ops[i]);
    for (const auto& [k, c] : op_sub(sys.ops[0], total).coeffs())
        CHECK(is_zero_const(simplify(expand(c))));
}

TEST_CASE("appendix pairs and the f - g = const criterion") {
    PhaseSample pt{{0.7}, {1.1}, false};
    Expr x2 = make_pow(make_var(1), 2);

    System pass = appendix_pair_first_order(x2, add(x2, make_const(3)));
    CHECK(check_necessary_dependence_condition(pass.ops, pt).verdict ==
          NecVerdict::PassesNecessaryCondition);

    System fail = appendix_pair_first_order(x2, make_pow(make_var(1), 3));
    CHECK(check_necessary_dependence_condition(fail.ops, pt).verdict ==
          NecVerdict::ViolatesNecessaryCondition);

    System trig = appendix_pair_first_order(make_apply(Func::Sin, make_var(1)),
                                            sub(make_apply(Func::Sin, make_var(1)), one_expr()));
    CHECK(check_necessary_dependence_condition(trig.ops, pt).verdict ==
          NecVerdict::PassesNecessaryCondition);

    CHECK_THROWS_AS(appendix_pair({make_var(1)}, {one_expr()}), std::invalid_argument);
}

TEST_CASE("default catalog is well formed") {
    std::vector<System> all = default_catalog();
    CHECK(all.size() >= 6);
    std::set<std::string> names;
    for (const auto& sys : all) {
        CHECK(names.insert(sys.name).second);
        CHECK(sys.ops.size() == sys.op_names.size());
        CHECK_FALSE(sys.ops.empty());
        for (const auto& op : sys.ops) CHECK(op.dim() == sys.dom.n);
    }
}
