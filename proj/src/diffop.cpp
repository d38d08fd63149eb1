#include "opcalc/diffop.hpp"

#include <cmath>
#include <stdexcept>

namespace opcalc {

namespace {

void check_dims(const DiffOperator& a, const DiffOperator& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("operator dimension mismatch");
}

long long binom_mi(const MultiIndex& g, const MultiIndex& b) {
    long long r = 1;
    for (size_t i = 0; i < g.e.size(); ++i) {
        long long c = 1;
        for (int k = 0; k < b.e[i]; ++k) c = c * (g.e[i] - k) / (k + 1);
        r *= c;
    }
    return r;
}

} // namespace

DiffOperator::DiffOperator(int n, std::map<MultiIndex, Expr> coeffs) : n_(n) {
    for (auto& [a, c] : coeffs) {
        if (a.dim() != n) throw std::invalid_argument("multi-index dimension mismatch");
        Expr s = simplify(c);
        if (!is_zero_const(s)) coeffs_.emplace(a, std::move(s));
    }
}

int DiffOperator::order() const {
    int m = kZeroOrder;
    for (const auto& [a, c] : coeffs_) m = std::max(m, a.order());
    return m;
}

Expr DiffOperator::coeff(const MultiIndex& a) const {
    auto it = coeffs_.find(a);
    return it == coeffs_.end() ? zero_expr() : it->second;
}

void DiffOperator::add_term(const MultiIndex& a, const Expr& c) {
    if (a.dim() != n_) throw std::invalid_argument("multi-index dimension mismatch");
    auto it = coeffs_.find(a);
    Expr s = it == coeffs_.end() ? simplify(c) : add(it->second, c);
    if (is_zero_const(s))
        coeffs_.erase(a);
    else
        coeffs_[a] = std::move(s);
}

DiffOperator DiffOperator::constant(int n, Expr c) {
    DiffOperator r(n);
    r.add_term(MultiIndex(n), std::move(c));
    return r;
}

DiffOperator DiffOperator::constant(int n, const Rational& c) {
    return constant(n, make_const(c));
}

DiffOperator DiffOperator::momentum(int n, int i) {
    DiffOperator r(n);
    r.add_term(MultiIndex::unit(n, i), one_expr());
    return r;
}

DiffOperator DiffOperator::coordinate(int n, int i) {
    return constant(n, make_var(i));
}

DiffOperator op_add(const DiffOperator& a, const DiffOperator& b) {
    check_dims(a, b);
    DiffOperator r = a;
    for (const auto& [k, c] : b.coeffs()) r.add_term(k, c);
    return r;
}

DiffOperator op_sub(const DiffOperator& a, const DiffOperator& b) {
    check_dims(a, b);
    DiffOperator r = a;
    for (const auto& [k, c] : b.coeffs()) r.add_term(k, neg(c));
    return r;
}

DiffOperator op_scale(const DiffOperator& a, const Expr& f) {
    DiffOperator r(a.dim());
    for (const auto& [k, c] : a.coeffs()) r.add_term(k, mul(f, c));
    return r;
}

DiffOperator op_scale(const DiffOperator& a, const Rational& c) {
    return op_scale(a, make_const(c));
}

DiffOperator compose(const DiffOperator& a, const DiffOperator& b) {
    check_dims(a, b);
    const int n = a.dim();
    DiffOperator r(n);
    if (a.is_zero_op() || b.is_zero_op()) return r;

    MultiIndex cap(n);
    for (const auto& [g, c] : a.coeffs())
        for (int i = 0; i < n; ++i)
            cap.e[static_cast<size_t>(i)] =
                std::max(cap.e[static_cast<size_t>(i)], g.e[static_cast<size_t>(i)]);

    for (const auto& alpha : multi_indices_upto(cap)) {
        // d^alpha B / dx^alpha
        std::map<MultiIndex, Expr> db;
        for (const auto& [d, c] : b.coeffs()) {
            Expr dc = c;
            for (int i = 1; i <= n; ++i)
                for (int k = 0; k < alpha.e[static_cast<size_t>(i - 1)]; ++k)
                    dc = differentiate(dc, i);
            if (!is_zero_const(dc)) db.emplace(d, std::move(dc));
        }
        if (db.empty()) continue;
        Rational inv_fact = Rational(1) / Rational(alpha.factorial());
        for (const auto& [g, c] : a.coeffs()) {
            if (!alpha.leq(g)) continue;
            Rational w = Rational(g.falling(alpha)) * inv_fact;
            if (w == 0) continue;
            Expr ca = mul(make_const(w), c);
            MultiIndex left = g.minus(alpha);
            for (const auto& [d, dc] : db) r.add_term(left.plus(d), mul(ca, dc));
        }
    }
    return r;
}

DiffOperator commutator(const DiffOperator& a, const DiffOperator& b) {
    return op_sub(compose(a, b), compose(b, a));
}

DiffOperator normalize_factors(int n, const std::vector<PrimitiveFactor>& factors) {
    DiffOperator r = DiffOperator::constant(n, Rational(1));
    for (const auto& f : factors) {
        DiffOperator next(n);
        if (f.type == PrimitiveFactor::Type::Momentum) {
            for (const auto& [g, c] : r.coeffs()) next.add_term(g.bump(f.i), c);
        } else {
            // p^g f = sum_{b <= g} binom(g,b) (d^{g-b} f) p^b
            for (const auto& [g, c] : r.coeffs()) {
                for (const auto& beta : multi_indices_upto(g)) {
                    MultiIndex d = g.minus(beta);
                    Expr df = f.c;
                    for (int i = 1; i <= n; ++i)
                        for (int k = 0; k < d.e[static_cast<size_t>(i - 1)]; ++k)
                            df = differentiate(df, i);
                    if (is_zero_const(df)) continue;
                    next.add_term(beta, mul(mul(make_const(Rational(binom_mi(g, beta))), c), df));
                }
            }
        }
        r = std::move(next);
    }
    return r;
}

DiffOperator homogeneous_part(const DiffOperator& a, int g) {
    DiffOperator r(a.dim());
    for (const auto& [k, c] : a.coeffs())
        if (k.order() == g) r.add_term(k, c);
    return r;
}

DiffOperator main_part(const DiffOperator& a) {
    if (a.is_zero_op()) return DiffOperator::zero(a.dim());
    return homogeneous_part(a, a.order());
}

DiffOperator second_main_part(const DiffOperator& a) {
    int m = a.order();
    if (m <= 0) return DiffOperator::zero(a.dim());
    return homogeneous_part(a, m - 1);
}

OpZeroVerdict operator_zero_verdict(const DiffOperator& a, const DomainSpec& dom, int samples,
                                    std::uint64_t seed) {
    OpZeroVerdict out;
    out.worst = {ZeroKind::SymbolicZero, 0.0, {}};
    for (const auto& [k, c] : a.coeffs()) {
        ZeroVerdict v = is_zero(c, dom, samples, seed);
        if (v.kind == ZeroKind::NonZero) {
            out.zero = false;
            out.witness_alpha = k;
            out.worst = v;
            return out;
        }
        if (v.max_abs > out.worst.max_abs) {
            out.worst = v;
            out.witness_alpha = k;
        }
    }
    return out;
}

DiffOperator prune(const DiffOperator& a, const DomainSpec& dom, int samples,
                   std::uint64_t seed) {
    DiffOperator r(a.dim());
    for (const auto& [k, c] : a.coeffs())
        if (!is_zero(c, dom, samples, seed).is_zero()) r.add_term(k, c);
    return r;
}

DiffOperator symbol_product(const DiffOperator& a, const DiffOperator& b) {
    check_dims(a, b);
    DiffOperator r(a.dim());
    for (const auto& [g, c] : a.coeffs())
        for (const auto& [d, e] : b.coeffs()) r.add_term(g.plus(d), mul(c, e));
    return r;
}

DiffOperator symbol_pow(const DiffOperator& a, int k) {
    if (k < 0) throw std::invalid_argument("negative symbol power");
    DiffOperator r = DiffOperator::constant(a.dim(), Rational(1));
    for (int i = 0; i < k; ++i) r = symbol_product(r, a);
    return r;
}

DiffOperator d_dx(const DiffOperator& a, int i) {
    DiffOperator r(a.dim());
    for (const auto& [k, c] : a.coeffs()) r.add_term(k, differentiate(c, i));
    return r;
}

DiffOperator d_dp(const DiffOperator& a, int i) {
    DiffOperator r(a.dim());
    for (const auto& [k, c] : a.coeffs()) {
        int gi = k.e[static_cast<size_t>(i - 1)];
        if (gi == 0) continue;
        r.add_term(k.bump(i, -1), mul(make_const(Rational(gi)), c));
    }
    return r;
}

double symbol_eval(const DiffOperator& a, const std::vector<double>& x,
                   const std::vector<double>& p, const std::map<std::string, double>& params) {
    double s = 0;
    for (const auto& [k, c] : a.coeffs()) {
        double mono = 1;
        for (size_t i = 0; i < k.e.size(); ++i)
            for (int j = 0; j < k.e[i]; ++j) mono *= p[i];
        s += evaluate(c, x, params) * mono;
    }
    return s;
}

std::vector<double> symbol_gradient(const DiffOperator& a, const std::vector<double>& x,
                                    const std::vector<double>& p,
                                    const std::map<std::string, double>& params) {
    const int n = a.dim();
    std::vector<double> g(static_cast<size_t>(2 * n), 0.0);
    for (int i = 1; i <= n; ++i) {
        g[static_cast<size_t>(i - 1)] = symbol_eval(d_dx(a, i), x, p, params);
        g[static_cast<size_t>(n + i - 1)] = symbol_eval(d_dp(a, i), x, p, params);
    }
    return g;
}

DiffOperator poisson_bracket(const DiffOperator& a, const DiffOperator& b) {
    check_dims(a, b);
    DiffOperator r(a.dim());
    for (int i = 1; i <= a.dim(); ++i) {
        r = op_add(r, symbol_product(d_dp(a, i), d_dx(b, i)));
        r = op_sub(r, symbol_product(d_dp(b, i), d_dx(a, i)));
    }
    return r;
}

DiffOperator poisson_semibracket(const DiffOperator& a, const DiffOperator& b) {
    check_dims(a, b);
    DiffOperator r(a.dim());
    for (int i = 1; i <= a.dim(); ++i)
        r = op_add(r, symbol_product(d_dp(a, i), d_dx(b, i)));
    return r;
}

} // namespace opcalc
