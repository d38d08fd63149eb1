#include "opcalc/catalog.hpp"

#include <stdexcept>

namespace opcalc {

namespace {

constexpr double kPi = 3.14159265358979323846;

Expr rconst(double v) { return make_const(rational_from_double(v)); }

DiffOperator first_order(int n, const std::vector<Expr>& coeff_p, Expr coeff_0) {
    DiffOperator op(n);
    for (int i = 1; i <= n; ++i) op.add_term(MultiIndex::unit(n, i), coeff_p[static_cast<size_t>(i - 1)]);
    op.add_term(MultiIndex(n), std::move(coeff_0));
    return op;
}

DomainSpec euler_domain() {
    DomainSpec dom = DomainSpec::box_domain(3);
    dom.box[1] = {0.1, kPi - 0.1};  // keep theta away from the sin poles
    dom.exclusions.push_back(make_apply(Func::Sin, make_var(2)));
    return dom;
}

} // namespace

System kepler(double alpha) {
    System sys;
    sys.name = "kepler";
    sys.dom = DomainSpec::box_domain(3);
    Expr r2 = add(add(make_pow(make_var(1), 2), make_pow(make_var(2), 2)),
                  make_pow(make_var(3), 2));
    sys.dom.exclusions.push_back(r2);

    DiffOperator h(3);
    for (int i = 1; i <= 3; ++i)
        h.add_term(MultiIndex::unit(3, i).bump(i), make_const(Rational(1, 2)));
    Expr inv_r = recip(make_apply(Func::Sqrt, r2));
    h.add_term(MultiIndex(3), neg(mul(rconst(alpha), inv_r)));

    auto angular = [&](int a, int b) {  // x_a p_b - x_b p_a
        DiffOperator m(3);
        m.add_term(MultiIndex::unit(3, b), make_var(a));
        m.add_term(MultiIndex::unit(3, a), neg(make_var(b)));
        return m;
    };
    sys.op_names = {"H", "Mx", "My", "Mz"};
    sys.ops = {h, angular(2, 3), angular(3, 1), angular(1, 2)};
    sys.k = 1;
    return sys;
}

DiffOperator rigid_gamma(int i) {
    // Euler angles (phi, theta, psi) = (x1, x2, x3)
    Expr sth = make_apply(Func::Sin, make_var(2));
    Expr cot_th = make_apply(Func::Cot, make_var(2));
    Expr spsi = make_apply(Func::Sin, make_var(3));
    Expr cpsi = make_apply(Func::Cos, make_var(3));
    switch (i) {
        case 1:
            return first_order(3, {div(spsi, sth), cpsi, neg(mul(cot_th, spsi))}, zero_expr());
        case 2:
            return first_order(3, {div(cpsi, sth), neg(spsi), neg(mul(cot_th, cpsi))},
                               zero_expr());
        case 3:
            return DiffOperator::momentum(3, 3);
    }
    throw std::invalid_argument("gamma index must be 1..3");
}

DiffOperator rigid_m(int i) {
    Expr sth = make_apply(Func::Sin, make_var(2));
    Expr cot_th = make_apply(Func::Cot, make_var(2));
    Expr sphi = make_apply(Func::Sin, make_var(1));
    Expr cphi = make_apply(Func::Cos, make_var(1));
    switch (i) {
        case 1:
            return first_order(3, {neg(mul(sphi, cot_th)), cphi, div(sphi, sth)}, zero_expr());
        case 2:
            return first_order(3, {mul(cphi, cot_th), sphi, neg(div(cphi, sth))}, zero_expr());
        case 3:
            return DiffOperator::momentum(3, 1);
    }
    throw std::invalid_argument("angular momentum index must be 1..3");
}

namespace {

DiffOperator top_hamiltonian(double i1, double i2, double i3, double field) {
    double inertia[3] = {i1, i2, i3};
    DiffOperator h(3);
    for (int i = 1; i <= 3; ++i) {
        DiffOperator g = rigid_gamma(i);
        h = op_add(h, op_scale(compose(g, g), rconst(0.5 / inertia[i - 1])));
    }
    if (field != 0.0)
        h.add_term(MultiIndex(3), mul(rconst(field), make_apply(Func::Cos, make_var(2))));
    return h;
}

} // namespace

System rigid_body(double i1, double i2, double i3) {
    System sys;
    sys.name = "rigid_body";
    sys.dom = euler_domain();
    DiffOperator h = top_hamiltonian(i1, i2, i3, 0.0);
    DiffOperator m2(3);
    for (int i = 1; i <= 3; ++i) {
        DiffOperator m = rigid_m(i);
        m2 = op_add(m2, compose(m, m));
    }
    sys.op_names = {"H", "M2", "Mx", "My"};
    sys.ops = {h, m2, rigid_m(1), rigid_m(2)};
    sys.k = 2;
    return sys;
}

System top(double i1, double i2, double i3, double field) {
    System sys;
    sys.name = "top";
    sys.dom = euler_domain();
    sys.op_names = {"H", "Mz", "Gamma3"};
    sys.ops = {top_hamiltonian(i1, i2, i3, field), rigid_m(3), rigid_gamma(3)};
    sys.k = 3;
    return sys;
}

System symmetric_top(double i1, double i3, double field) {
    System sys = top(i1, i1, i3, field);
    sys.name = "symmetric_top";
    return sys;
}

System oscillator(const std::vector<double>& omega) {
    const int n = static_cast<int>(omega.size());
    System sys;
    sys.name = "oscillator";
    sys.dom = DomainSpec::box_domain(n);
    auto block = [&](int i) {
        DiffOperator b(n);
        b.add_term(MultiIndex::unit(n, i).bump(i), make_const(Rational(1, 2)));
        b.add_term(MultiIndex(n), mul(make_const(Rational(1, 2)), make_pow(make_var(i), 2)));
        return b;
    };
    for (int i = 1; i <= n; ++i) {
        sys.op_names.push_back("B" + std::to_string(i));
        sys.ops.push_back(block(i));
    }
    sys.k = n;
    return sys;
}

System heat_operator(const std::vector<Expr>& u_terms) {
    const int n = static_cast<int>(u_terms.size());
    const int nt = n + 1;  // (t, xi_1..xi_n)
    System sys;
    sys.name = "heat";
    sys.dom = DomainSpec::box_domain(nt);

    DiffOperator h(nt);
    h.add_term(MultiIndex::unit(nt, 1), one_expr());
    for (int i = 2; i <= nt; ++i)
        h.add_term(MultiIndex::unit(nt, i).bump(i), make_const(Rational(-1)));
    for (int i = 0; i < n; ++i) h.add_term(MultiIndex(nt), shift_vars(u_terms[static_cast<size_t>(i)], i + 1));
    sys.op_names.push_back("H");
    sys.ops.push_back(h);

    sys.op_names.push_back("Pt");
    sys.ops.push_back(DiffOperator::momentum(nt, 1));
    for (int i = 0; i < n; ++i) {
        DiffOperator b(nt);
        b.add_term(MultiIndex::unit(nt, i + 2).bump(i + 2), make_const(Rational(-1)));
        b.add_term(MultiIndex(nt), shift_vars(u_terms[static_cast<size_t>(i)], i + 1));
        sys.op_names.push_back("B" + std::to_string(i + 1));
        sys.ops.push_back(b);
    }
    sys.k = n + 1;
    return sys;
}

System appendix_pair(const std::vector<Expr>& f, const std::vector<Expr>& g) {
    if (f.empty() || g.empty()) throw std::invalid_argument("coefficient lists must be nonempty");
    if (!is_one_const(simplify(f.back())) || !is_one_const(simplify(g.back())))
        throw std::invalid_argument("leading coefficients must be 1");
    System sys;
    sys.name = "appendix_pair";
    sys.dom = DomainSpec::box_domain(1);
    auto build = [](const std::vector<Expr>& c) {
        DiffOperator op(1);
        for (size_t i = 0; i < c.size(); ++i) op.add_term(MultiIndex{static_cast<int>(i)}, c[i]);
        return op;
    };
    sys.op_names = {"W1", "W2"};
    sys.ops = {build(f), build(g)};
    sys.k = 1;
    return sys;
}

System appendix_pair_first_order(const Expr& f, const Expr& g) {
    return appendix_pair({f, one_expr()}, {g, one_expr()});
}

std::vector<System> default_catalog() {
    std::vector<System> all;
    all.push_back(kepler(1.0));
    all.push_back(rigid_body(1.0, 2.0, 3.0));
    all.push_back(symmetric_top(1.0, 3.0, 0.5));
    all.push_back(oscillator({1.0, 1.0}));
    all.push_back(heat_operator({make_pow(make_var(1), 2), make_apply(Func::Cos, make_var(1))}));
    all.push_back(appendix_pair_first_order(make_pow(make_var(1), 2),
                                            add(make_pow(make_var(1), 2), make_const(3))));
    return all;
}

} // namespace opcalc
