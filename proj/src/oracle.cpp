#include "opcalc/oracle.hpp"

#include <cmath>

namespace opcalc {

double apply_to_exponential(const DiffOperator& a, const std::vector<double>& lambda,
                            const std::vector<double>& x,
                            const std::map<std::string, double>& params) {
    double s = 0;
    for (const auto& [alpha, c] : a.coeffs()) {
        double mono = 1;
        for (size_t i = 0; i < alpha.e.size(); ++i)
            for (int j = 0; j < alpha.e[i]; ++j) mono *= lambda[i];
        s += evaluate(c, x, params) * mono;
    }
    return s;
}

Expr apply_symbolic(const DiffOperator& a, const Expr& psi) {
    Expr out = zero_expr();
    for (const auto& [alpha, c] : a.coeffs()) {
        Expr d = psi;
        for (int i = 1; i <= a.dim(); ++i)
            for (int k = 0; k < alpha.e[static_cast<size_t>(i - 1)]; ++k)
                d = differentiate(d, i);
        out = add(out, mul(c, d));
    }
    return out;
}

namespace {

// Lambda grid per axis: 1, -1, 2, -2, ... truncated so the tensor grid stays
// small; supplemented by random draws from the momentum box.
std::vector<double> axis_values(int per_axis) {
    std::vector<double> v;
    for (int k = 1; v.size() < static_cast<size_t>(per_axis); ++k) {
        v.push_back(static_cast<double>(k));
        if (v.size() < static_cast<size_t>(per_axis)) v.push_back(static_cast<double>(-k));
    }
    return v;
}

std::vector<std::vector<double>> lambda_grid(const DomainSpec& dom, Sampler& sampler) {
    const int n = dom.n;
    int per_axis = 4;
    while (per_axis > 1 && std::pow(static_cast<double>(per_axis), n) > 64.0) --per_axis;
    std::vector<double> axis = axis_values(per_axis);

    std::vector<std::vector<double>> grid;
    std::vector<size_t> idx(static_cast<size_t>(n), 0);
    while (true) {
        std::vector<double> lam(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) lam[static_cast<size_t>(i)] = axis[idx[static_cast<size_t>(i)]];
        grid.push_back(std::move(lam));
        int i = 0;
        for (; i < n; ++i) {
            if (++idx[static_cast<size_t>(i)] < axis.size()) break;
            idx[static_cast<size_t>(i)] = 0;
        }
        if (i == n) break;
    }
    for (int k = 0; k < 16; ++k) grid.push_back(sampler.draw_p());
    return grid;
}

} // namespace

EqualityVerdict operator_equal(const DiffOperator& a, const DiffOperator& b,
                               const DomainSpec& dom, int samples, std::uint64_t seed,
                               double tol) {
    EqualityVerdict out;
    const int n = dom.n;
    Sampler sampler(dom, seed);
    std::vector<std::vector<double>> lambdas = lambda_grid(dom, sampler);

    int max_ord = std::max(a.order(), b.order());
    std::vector<MultiIndex> monos = multi_indices_order_upto(n, std::max(0, max_ord) + 1);

    auto record = [&](double va, double vb, const std::vector<double>& x,
                      const char* family) {
        double scale = std::max({1.0, std::fabs(va), std::fabs(vb)});
        double resid = std::fabs(va - vb) / scale;
        if (resid > out.max_residual) {
            out.max_residual = resid;
            out.witness_x = x;
            out.witness_family = family;
        }
        if (resid > tol) out.equal = false;
    };

    int evaluated = 0;
    int attempts = 0;
    while (evaluated < samples && attempts < 50 * samples + 100) {
        ++attempts;
        std::vector<double> x = sampler.draw_x();
        try {
            for (const auto& lam : lambdas)
                record(apply_to_exponential(a, lam, x, dom.params),
                       apply_to_exponential(b, lam, x, dom.params), x, "exponential");
            for (const auto& g : monos) {
                Expr psi = one_expr();
                for (int i = 1; i <= n; ++i)
                    if (g.e[static_cast<size_t>(i - 1)] > 0)
                        psi = mul(psi, make_pow(make_var(i), g.e[static_cast<size_t>(i - 1)]));
                record(evaluate(apply_symbolic(a, psi), x, dom.params),
                       evaluate(apply_symbolic(b, psi), x, dom.params), x, "monomial");
            }
        } catch (const EvalError&) {
            continue;  // near a pole; redraw
        }
        ++evaluated;
    }
    if (evaluated == 0)
        throw SamplingExhaustedError("no evaluable points found for operator equality test");
    return out;
}

} // namespace opcalc
