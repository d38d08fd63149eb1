#include "opcalc/ncpoly.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace opcalc {

namespace {

void check_arity(const NCPolynomial& a, const NCPolynomial& b) {
    if (a.l != b.l || a.r != b.r) throw std::invalid_argument("nc polynomial arity mismatch");
}

bool mono_trivial(const NCMonomial& m) {
    for (const auto& z : m.z)
        if (is_zero_const(z)) return true;
    return false;
}

NCMonomial simplify_mono(NCMonomial m) {
    for (auto& z : m.z) z = simplify(z);
    return m;
}

} // namespace

NCPolynomial NCPolynomial::symbol(int l, int r, int i) {
    if (i < 1 || i > r) throw std::invalid_argument("F index out of range");
    NCPolynomial s{l, r, {}};
    s.monos.push_back({{i}, {one_expr(), one_expr()}});
    return s;
}

NCPolynomial NCPolynomial::coeff(int l, int r, Expr z) {
    NCPolynomial s{l, r, {}};
    NCMonomial m{{}, {simplify(std::move(z))}};
    if (!mono_trivial(m)) s.monos.push_back(std::move(m));
    return s;
}

NCPolynomial nc_add(const NCPolynomial& a, const NCPolynomial& b) {
    check_arity(a, b);
    NCPolynomial s = a;
    s.monos.insert(s.monos.end(), b.monos.begin(), b.monos.end());
    return s;
}

NCPolynomial nc_neg(const NCPolynomial& a) {
    NCPolynomial s = a;
    for (auto& m : s.monos)
        if (!m.z.empty()) m.z[0] = neg(m.z[0]);
    return s;
}

NCPolynomial nc_sub(const NCPolynomial& a, const NCPolynomial& b) {
    return nc_add(a, nc_neg(b));
}

NCPolynomial nc_mul(const NCPolynomial& a, const NCPolynomial& b) {
    check_arity(a, b);
    NCPolynomial s{a.l, a.r, {}};
    for (const auto& ma : a.monos)
        for (const auto& mb : b.monos) {
            NCMonomial m;
            m.beta = ma.beta;
            m.beta.insert(m.beta.end(), mb.beta.begin(), mb.beta.end());
            m.z.assign(ma.z.begin(), ma.z.end() - 1);
            m.z.push_back(mul(ma.z.back(), mb.z.front()));
            m.z.insert(m.z.end(), mb.z.begin() + 1, mb.z.end());
            if (!mono_trivial(m)) s.monos.push_back(simplify_mono(std::move(m)));
        }
    return s;
}

NCPolynomial nc_scale(const NCPolynomial& a, const Expr& z) {
    NCPolynomial s = a;
    std::vector<NCMonomial> kept;
    for (auto& m : s.monos) {
        if (!m.z.empty()) m.z[0] = mul(z, m.z[0]);
        if (!mono_trivial(m)) kept.push_back(std::move(m));
    }
    s.monos = std::move(kept);
    return s;
}

NCPolynomial nc_pow(const NCPolynomial& a, int k) {
    if (k < 0) throw std::invalid_argument("negative nc power");
    NCPolynomial s = NCPolynomial::coeff(a.l, a.r, one_expr());
    for (int i = 0; i < k; ++i) s = nc_mul(s, a);
    return s;
}

NCZeroVerdict nc_zero_test(const NCPolynomial& s, int samples, std::uint64_t seed) {
    std::map<std::vector<int>, Expr> groups;
    for (const auto& m : s.monos) {
        if (mono_trivial(m)) continue;
        // slot j written in its own block of l variables
        Expr word = one_expr();
        for (int j = 0; j <= m.q(); ++j)
            word = mul(word, shift_vars(m.z[static_cast<size_t>(j)], j * s.l));
        auto it = groups.find(m.beta);
        if (it == groups.end())
            groups.emplace(m.beta, word);
        else
            it->second = add(it->second, word);
    }
    NCZeroVerdict out;
    out.worst = {ZeroKind::SymbolicZero, 0.0, {}};
    for (const auto& [beta, e] : groups) {
        int q = static_cast<int>(beta.size());
        DomainSpec dom = DomainSpec::box_domain(s.l * (q + 1));
        ZeroVerdict v = is_zero(e, dom, samples, seed);
        if (v.kind == ZeroKind::NonZero) {
            out.zero = false;
            out.witness_beta = beta;
            out.worst = v;
            return out;
        }
        if (v.max_abs > out.worst.max_abs) {
            out.worst = v;
            out.witness_beta = beta;
        }
    }
    return out;
}

void CommPoly::add_term(const MultiIndex& fexp, const Expr& c) {
    auto it = terms.find(fexp);
    Expr s = it == terms.end() ? simplify(c) : add(it->second, c);
    if (is_zero_const(s))
        terms.erase(fexp);
    else
        terms[fexp] = std::move(s);
}

CommPoly abelianize(const NCPolynomial& s) {
    CommPoly out{s.l, s.r, {}};
    for (const auto& m : s.monos) {
        MultiIndex fexp(s.r);
        for (int b : m.beta) ++fexp.e[static_cast<size_t>(b - 1)];
        Expr c = one_expr();
        for (const auto& z : m.z) c = mul(c, z);
        out.add_term(fexp, c);
    }
    return out;
}

CommPoly comm_add(const CommPoly& a, const CommPoly& b) {
    if (a.l != b.l || a.r != b.r) throw std::invalid_argument("comm polynomial arity mismatch");
    CommPoly s = a;
    for (const auto& [e, c] : b.terms) s.add_term(e, c);
    return s;
}

CommPoly comm_sub(const CommPoly& a, const CommPoly& b) {
    if (a.l != b.l || a.r != b.r) throw std::invalid_argument("comm polynomial arity mismatch");
    CommPoly s = a;
    for (const auto& [e, c] : b.terms) s.add_term(e, neg(c));
    return s;
}

CommPoly comm_mul(const CommPoly& a, const CommPoly& b) {
    if (a.l != b.l || a.r != b.r) throw std::invalid_argument("comm polynomial arity mismatch");
    CommPoly s{a.l, a.r, {}};
    for (const auto& [ea, ca] : a.terms)
        for (const auto& [eb, cb] : b.terms) s.add_term(ea.plus(eb), mul(ca, cb));
    return s;
}

CommPoly comm_d_dF(const CommPoly& a, int i) {
    CommPoly s{a.l, a.r, {}};
    for (const auto& [e, c] : a.terms) {
        int ei = e.e[static_cast<size_t>(i - 1)];
        if (ei == 0) continue;
        s.add_term(e.bump(i, -1), mul(make_const(Rational(ei)), c));
    }
    return s;
}

DiffOperator comm_substitute(const CommPoly& a, const std::vector<Expr>& g_exprs,
                             const std::vector<DiffOperator>& f_syms) {
    if (static_cast<int>(g_exprs.size()) != a.l || static_cast<int>(f_syms.size()) != a.r)
        throw std::invalid_argument("comm substitution arity mismatch");
    int n = f_syms.empty() ? 0 : f_syms.front().dim();
    for (const auto& f : f_syms)
        if (f.dim() != n) throw std::invalid_argument("operator dimension mismatch");
    DiffOperator out(n);
    for (const auto& [e, c] : a.terms) {
        DiffOperator t = DiffOperator::constant(n, substitute_vars(c, g_exprs));
        for (int i = 0; i < a.r; ++i)
            t = symbol_product(t, symbol_pow(f_syms[static_cast<size_t>(i)],
                                             e.e[static_cast<size_t>(i)]));
        out = op_add(out, t);
    }
    return out;
}

double comm_eval(const CommPoly& a, const std::vector<double>& w,
                 const std::map<std::string, double>& params) {
    std::vector<double> g(w.begin(), w.begin() + a.l);
    double s = 0;
    for (const auto& [e, c] : a.terms) {
        double t = evaluate(c, g, params);
        for (int i = 0; i < a.r; ++i)
            for (int k = 0; k < e.e[static_cast<size_t>(i)]; ++k)
                t *= w[static_cast<size_t>(a.l + i)];
        s += t;
    }
    return s;
}

std::vector<double> comm_gradient(const CommPoly& a, const std::vector<double>& w,
                                  const std::map<std::string, double>& params) {
    std::vector<double> g(w.begin(), w.begin() + a.l);
    std::vector<double> grad(static_cast<size_t>(a.l + a.r), 0.0);
    for (const auto& [e, c] : a.terms) {
        double fmono = 1;
        for (int i = 0; i < a.r; ++i)
            for (int k = 0; k < e.e[static_cast<size_t>(i)]; ++k)
                fmono *= w[static_cast<size_t>(a.l + i)];
        for (int j = 1; j <= a.l; ++j)
            grad[static_cast<size_t>(j - 1)] += evaluate(differentiate(c, j), g, params) * fmono;
        double cval = evaluate(c, g, params);
        for (int i = 0; i < a.r; ++i) {
            int ei = e.e[static_cast<size_t>(i)];
            if (ei == 0) continue;
            double part = cval * ei;
            for (int i2 = 0; i2 < a.r; ++i2) {
                int k0 = (i2 == i) ? 1 : 0;
                for (int k = k0; k < e.e[static_cast<size_t>(i2)]; ++k)
                    part *= w[static_cast<size_t>(a.l + i2)];
            }
            grad[static_cast<size_t>(a.l + i)] += part;
        }
    }
    return grad;
}

int word_weight(const NCMonomial& m, const WeightVector& w) {
    int d = 0;
    for (int b : m.beta) d += w[static_cast<size_t>(b - 1)];
    return d;
}

NCPolynomial quasi_homogeneous_part(const NCPolynomial& s, int d, const WeightVector& w) {
    NCPolynomial out{s.l, s.r, {}};
    for (const auto& m : s.monos)
        if (word_weight(m, w) == d) out.monos.push_back(m);
    return out;
}

DegreeMain degree_and_main(const NCPolynomial& s, const WeightVector& w, int samples,
                           std::uint64_t seed) {
    if (static_cast<int>(w.size()) != s.r) throw std::invalid_argument("weight arity mismatch");
    std::set<int, std::greater<int>> degrees;
    for (const auto& m : s.monos)
        if (!mono_trivial(m)) degrees.insert(word_weight(m, w));
    DegreeMain out;
    for (int d : degrees) {
        NCPolynomial cd = quasi_homogeneous_part(s, d, w);
        if (!nc_zero_test(cd, samples, seed).zero) {
            out.deg = d;
            out.main = std::move(cd);
            out.second = out.deg > 0 ? quasi_homogeneous_part(s, d - 1, w)
                                     : NCPolynomial::zero(s.l, s.r);
            return out;
        }
    }
    out.main = NCPolynomial::zero(s.l, s.r);
    out.second = NCPolynomial::zero(s.l, s.r);
    return out;
}

WeightVector weights_of(const std::vector<DiffOperator>& f_ops) {
    WeightVector w;
    for (const auto& f : f_ops) w.push_back(std::max(0, f.order()));
    return w;
}

namespace {

std::vector<Expr> g_symbols_of(const std::vector<DiffOperator>& g_ops) {
    std::vector<Expr> g_exprs;
    for (const auto& g : g_ops) {
        if (g.order() > 0) throw std::invalid_argument("G operator must have order 0");
        g_exprs.push_back(g.coeff(MultiIndex(g.dim())));
    }
    return g_exprs;
}

} // namespace

DiffOperator substitute(const NCPolynomial& s, const std::vector<DiffOperator>& g_ops,
                        const std::vector<DiffOperator>& f_ops) {
    if (static_cast<int>(g_ops.size()) != s.l || static_cast<int>(f_ops.size()) != s.r)
        throw std::invalid_argument("substitution arity mismatch");
    int n = -1;
    for (const auto& o : g_ops) n = o.dim();
    for (const auto& o : f_ops) n = o.dim();
    if (n < 0) throw std::invalid_argument("substitution needs at least one operator");
    for (const auto& o : g_ops)
        if (o.dim() != n) throw std::invalid_argument("operator dimension mismatch");
    for (const auto& o : f_ops)
        if (o.dim() != n) throw std::invalid_argument("operator dimension mismatch");
    std::vector<Expr> g_exprs = g_symbols_of(g_ops);

    DiffOperator out(n);
    for (const auto& m : s.monos) {
        DiffOperator t = DiffOperator::constant(n, substitute_vars(m.z[0], g_exprs));
        for (int j = 1; j <= m.q(); ++j) {
            t = compose(t, f_ops[static_cast<size_t>(m.beta[static_cast<size_t>(j - 1)] - 1)]);
            t = compose(t, DiffOperator::constant(
                               n, substitute_vars(m.z[static_cast<size_t>(j)], g_exprs)));
        }
        out = op_add(out, t);
    }
    return out;
}

TopReport verify_top_identity(const NCPolynomial& s, const std::vector<DiffOperator>& g_ops,
                              const std::vector<DiffOperator>& f_ops, const DomainSpec& dom,
                              int samples, std::uint64_t seed, double tol) {
    TopReport rep;
    WeightVector w = weights_of(f_ops);
    DegreeMain dm = degree_and_main(s, w, samples, seed);
    rep.dbar = dm.deg;
    if (dm.deg == DegreeMain::kZeroDegree) return rep;  // S = 0: both sides vanish

    const int n = dom.n;
    std::vector<Expr> g_exprs = g_symbols_of(g_ops);
    std::vector<DiffOperator> mf;
    for (const auto& f : f_ops) mf.push_back(main_part(f));

    DiffOperator sub = substitute(s, g_ops, f_ops);

    // order-dbar identity
    CommPoly stilde = abelianize(dm.main);
    DiffOperator top_lhs = homogeneous_part(sub, dm.deg);
    DiffOperator top_rhs = comm_substitute(stilde, g_exprs, mf);
    rep.top_residual = operator_zero_verdict(op_sub(top_lhs, top_rhs), dom, samples, seed);
    rep.top_ok = rep.top_residual.zero;
    rep.top_symbolic = rep.top_residual.zero &&
                       rep.top_residual.worst.kind == ZeroKind::SymbolicZero;

    // order-(dbar-1) identity
    DiffOperator lhs = homogeneous_part(sub, dm.deg - 1);
    DiffOperator rhs = comm_substitute(abelianize(dm.second), g_exprs, mf);
    for (int i = 1; i <= s.r; ++i) {
        DiffOperator mfp = second_main_part(f_ops[static_cast<size_t>(i - 1)]);
        if (mfp.is_zero_op()) continue;
        rhs = op_add(rhs, symbol_product(comm_substitute(comm_d_dF(stilde, i), g_exprs, mf), mfp));
    }
    // semi-bracket corrections, monomial by monomial of the main part
    for (const auto& m : dm.main.monos) {
        Expr zprod = one_expr();
        for (const auto& z : m.z) zprod = mul(zprod, substitute_vars(z, g_exprs));
        const int q = m.q();
        auto mf_at = [&](int slot) -> const DiffOperator& {
            return mf[static_cast<size_t>(m.beta[static_cast<size_t>(slot - 1)] - 1)];
        };
        // pair terms: omit the two bracketed factors from the word's product
        for (int h = 1; h <= q; ++h)
            for (int k = h + 1; k <= q; ++k) {
                DiffOperator c = DiffOperator::constant(n, zprod);
                for (int j = 1; j <= q; ++j)
                    if (j != h && j != k) c = symbol_product(c, mf_at(j));
                rhs = op_add(rhs, symbol_product(c, poisson_semibracket(mf_at(h), mf_at(k))));
            }
        // mixed terms: F factor at slot h against the Z factor at slot k >= h
        for (int h = 1; h <= q; ++h)
            for (int k = h; k <= q; ++k)
                for (int j = 1; j <= s.l; ++j) {
                    Expr dz = differentiate(m.z[static_cast<size_t>(k)], j);
                    if (is_zero_const(dz)) continue;
                    Expr zmod = one_expr();
                    for (int t = 0; t <= q; ++t)
                        zmod = mul(zmod, substitute_vars(
                                             t == k ? dz : m.z[static_cast<size_t>(t)], g_exprs));
                    DiffOperator c = DiffOperator::constant(n, zmod);
                    for (int t = 1; t <= q; ++t)
                        if (t != h) c = symbol_product(c, mf_at(t));
                    DiffOperator gj = DiffOperator::constant(n, g_exprs[static_cast<size_t>(j - 1)]);
                    rhs = op_add(rhs, symbol_product(c, poisson_semibracket(mf_at(h), gj)));
                }
    }

    Sampler sampler(dom, seed);
    int evaluated = 0;
    int attempts = 0;
    while (evaluated < samples && attempts < 50 * samples + 100) {
        ++attempts;
        std::vector<double> x = sampler.draw_x();
        std::vector<double> p = sampler.draw_p();
        double vl, vr;
        try {
            vl = symbol_eval(lhs, x, p, dom.params);
            vr = symbol_eval(rhs, x, p, dom.params);
        } catch (const EvalError&) {
            continue;
        }
        ++evaluated;
        double resid = std::fabs(vl - vr) / std::max({1.0, std::fabs(vl), std::fabs(vr)});
        rep.top2_max_residual = std::max(rep.top2_max_residual, resid);
    }
    if (evaluated == 0)
        throw SamplingExhaustedError("no evaluable points found for the order-(d-1) identity");
    rep.top2_ok = rep.top2_max_residual < tol;
    return rep;
}

} // namespace opcalc
