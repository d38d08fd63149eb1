#include "opcalc/homog.hpp"

#include "opcalc/oracle.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace opcalc {

namespace {

// domain for the lifted variables (x0, x1..xn)
DomainSpec lift_domain(const DomainSpec& dom) {
    DomainSpec d;
    d.n = dom.n + 1;
    d.box.push_back({-2.0, 2.0});
    for (int i = 1; i <= dom.n; ++i) d.box.push_back(dom.var_box(i));
    d.p_box.push_back({-2.0, 2.0});
    for (int i = 1; i <= dom.n; ++i) d.p_box.push_back(dom.mom_box(i));
    for (const auto& e : dom.exclusions) d.exclusions.push_back(shift_vars(e, 1));
    d.params = dom.params;
    d.exclusion_tol = dom.exclusion_tol;
    return d;
}

} // namespace

DiffOperator phi_pad(const DiffOperator& a, int degree) {
    DiffOperator r(a.dim() + 1);
    for (const auto& [alpha, c] : a.coeffs()) {
        if (alpha.order() > degree)
            throw std::invalid_argument("padding degree below operator order");
        std::vector<int> beta;
        beta.push_back(degree - alpha.order());
        beta.insert(beta.end(), alpha.e.begin(), alpha.e.end());
        r.add_term(MultiIndex(std::move(beta)), shift_vars(c, 1));
    }
    return r;
}

DiffOperator phi_embed(const DiffOperator& a) {
    if (a.is_zero_op()) throw std::invalid_argument("cannot homogenize the zero operator");
    return phi_pad(a, a.order());
}

PhiLawReport verify_phi_laws(const DiffOperator& a, const DiffOperator& b, const DomainSpec& dom,
                             int samples, std::uint64_t seed) {
    PhiLawReport rep;
    DomainSpec ldom = lift_domain(dom);
    DiffOperator pa = phi_embed(a), pb = phi_embed(b);
    DiffOperator lhs = commutator(pa, pb);
    DiffOperator ab = commutator(a, b);
    int d = a.order() + b.order() - 1;
    DiffOperator rhs = ab.is_zero_op() ? DiffOperator::zero(a.dim() + 1) : phi_pad(ab, d);
    rep.degree_matched = ab.is_zero_op() || ab.order() == d;
    rep.commutation_residual = operator_zero_verdict(op_sub(lhs, rhs), ldom, samples, seed);
    rep.commutation_ok = rep.commutation_residual.zero;

    DiffOperator p0 = DiffOperator::momentum(a.dim() + 1, 1);
    rep.central_residual = operator_zero_verdict(commutator(pa, p0), ldom, samples, seed);
    rep.central_ok = rep.central_residual.zero;
    return rep;
}

EigenReport verify_eigen_correspondence(const DiffOperator& a, double lambda, const Expr& u,
                                        const DomainSpec& dom, int samples, std::uint64_t seed,
                                        double tol) {
    EigenReport rep;
    Expr lam = make_const(rational_from_double(lambda));
    Expr resid = sub(apply_symbolic(a, u), mul(lam, u));

    Sampler sampler(dom, seed);
    int evaluated = 0, attempts = 0;
    while (evaluated < samples && attempts < 50 * samples + 100) {
        ++attempts;
        std::vector<double> x = sampler.draw_x();
        try {
            double r = evaluate(resid, x, dom.params);
            double scale = std::max(1.0, std::fabs(lambda * evaluate(u, x, dom.params)));
            rep.eigen_residual = std::max(rep.eigen_residual, std::fabs(r) / scale);
        } catch (const EvalError&) {
            continue;
        }
        ++evaluated;
    }
    if (evaluated == 0) throw SamplingExhaustedError("no evaluable points for eigenpair check");
    rep.eigenpair_ok = rep.eigen_residual < tol;

    // lifted equation (Phi_A - lambda p0^m) U = 0 with U = e^{x0} u(x)
    const int m = a.order();
    DiffOperator p0m(a.dim() + 1);
    MultiIndex alpha(a.dim() + 1);
    alpha.e[0] = m;
    p0m.add_term(alpha, lam);
    DiffOperator lifted = op_sub(phi_embed(a), p0m);
    Expr bigu = mul(make_apply(Func::Exp, make_var(1)), shift_vars(u, 1));
    Expr lresid = apply_symbolic(lifted, bigu);

    DomainSpec ldom = lift_domain(dom);
    Sampler lsampler(ldom, seed);
    evaluated = attempts = 0;
    while (evaluated < samples && attempts < 50 * samples + 100) {
        ++attempts;
        std::vector<double> x = lsampler.draw_x();
        try {
            double r = evaluate(lresid, x, ldom.params);
            double scale = std::max(1.0, std::fabs(lambda * evaluate(bigu, x, ldom.params)));
            rep.lifted_residual = std::max(rep.lifted_residual, std::fabs(r) / scale);
        } catch (const EvalError&) {
            continue;
        }
        ++evaluated;
    }
    if (evaluated == 0) throw SamplingExhaustedError("no evaluable points for lifted check");
    rep.lifted_ok = rep.lifted_residual < tol;
    return rep;
}

LiftReport build_quasi_integrable_lift(const std::vector<DiffOperator>& f, int k,
                                       const DomainSpec& dom, int samples, std::uint64_t seed) {
    LiftReport rep;
    rep.commutation = check_commutation(f, k, dom, samples, seed);

    // independence of the full symbols (not the main parts)
    rep.symbol_rank.s = static_cast<int>(f.size());
    rep.symbol_rank.seed = seed;
    Sampler sampler(dom, seed);
    int evaluated = 0, attempts = 0, full = 0;
    while (evaluated < samples && attempts < 50 * samples + 100) {
        ++attempts;
        PhaseSample pt;
        pt.x = sampler.draw_x();
        pt.p = sampler.draw_p();
        pt.sampled = true;
        RankEntry e;
        e.pt = pt;
        Eigen::MatrixXd j(f.size(), 2 * dom.n);
        try {
            for (size_t i = 0; i < f.size(); ++i) {
                std::vector<double> g = symbol_gradient(f[i], pt.x, pt.p, dom.params);
                for (int c = 0; c < 2 * dom.n; ++c)
                    j(static_cast<Eigen::Index>(i), c) = g[static_cast<size_t>(c)];
            }
        } catch (const EvalError&) {
            continue;
        }
        ++evaluated;
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(j);
        const auto& sv = svd.singularValues();
        e.singular_values.assign(sv.data(), sv.data() + sv.size());
        double thresh = sv.size() ? kRankCutoff * sv(0) : 0.0;
        for (Eigen::Index i = 0; i < sv.size(); ++i)
            if (sv(i) > thresh) ++e.rank;
        if (e.rank == rep.symbol_rank.s) ++full;
        rep.symbol_rank.entries.push_back(std::move(e));
    }
    if (evaluated == 0) throw SamplingExhaustedError("no evaluable points for symbol rank");
    rep.symbol_rank.full_rank_fraction = static_cast<double>(full) / evaluated;
    rep.symbol_rank.globally_quasi_independent = rep.symbol_rank.full_rank_fraction >= 0.9;

    rep.preconditions_ok =
        rep.commutation.all_zero && rep.symbol_rank.globally_quasi_independent;

    rep.lifted.push_back(DiffOperator::momentum(dom.n + 1, 1));
    for (const auto& op : f) rep.lifted.push_back(phi_embed(op));
    rep.integrable = check_integrable_set(rep.lifted, k + 1, lift_domain(dom), samples, seed);
    return rep;
}

} // namespace opcalc
