#include "opcalc/expr.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>

namespace opcalc {

Rational rational_from_double(double v) {
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite value");
    return Rational(v);
}

std::string rational_to_string(const Rational& q) {
    std::ostringstream os;
    os << q;
    return os.str();
}

namespace {

using Kind = ExprNode::Kind;

Expr node(ExprNode n) { return std::make_shared<const ExprNode>(std::move(n)); }

int kind_rank(Kind k) { return static_cast<int>(k); }

} // namespace

Expr make_const(Rational q) {
    ExprNode n;
    n.kind = Kind::Constant;
    n.value = std::move(q);
    return node(std::move(n));
}

Expr make_const(long long v) { return make_const(Rational(v)); }

Expr make_var(int i) {
    if (i < 1) throw std::invalid_argument("variable index must be >= 1");
    ExprNode n;
    n.kind = Kind::Var;
    n.var = i;
    return node(std::move(n));
}

Expr make_param(std::string name) {
    ExprNode n;
    n.kind = Kind::Param;
    n.param = std::move(name);
    return node(std::move(n));
}

Expr make_sum(std::vector<Expr> terms) {
    ExprNode n;
    n.kind = Kind::Sum;
    n.kids = std::move(terms);
    return node(std::move(n));
}

Expr make_product(std::vector<Expr> factors) {
    ExprNode n;
    n.kind = Kind::Product;
    n.kids = std::move(factors);
    return node(std::move(n));
}

Expr make_pow(Expr base, long long e) {
    ExprNode n;
    n.kind = Kind::Pow;
    n.base = std::move(base);
    n.expo = e;
    return node(std::move(n));
}

Expr make_apply(Func fn, Expr arg) {
    ExprNode n;
    n.kind = Kind::Apply;
    n.fn = fn;
    n.arg = std::move(arg);
    return node(std::move(n));
}

Expr zero_expr() {
    static const Expr z = make_const(0);
    return z;
}

Expr one_expr() {
    static const Expr o = make_const(1);
    return o;
}

int expr_cmp(const Expr& a, const Expr& b) {
    if (a.get() == b.get()) return 0;
    if (kind_rank(a->kind) != kind_rank(b->kind))
        return kind_rank(a->kind) < kind_rank(b->kind) ? -1 : 1;
    switch (a->kind) {
        case Kind::Constant:
            return a->value == b->value ? 0 : (a->value < b->value ? -1 : 1);
        case Kind::Var:
            return a->var == b->var ? 0 : (a->var < b->var ? -1 : 1);
        case Kind::Param:
            return a->param.compare(b->param) < 0 ? -1 : (a->param == b->param ? 0 : 1);
        case Kind::Sum:
        case Kind::Product: {
            size_t na = a->kids.size(), nb = b->kids.size();
            for (size_t i = 0; i < std::min(na, nb); ++i) {
                int c = expr_cmp(a->kids[i], b->kids[i]);
                if (c != 0) return c;
            }
            return na == nb ? 0 : (na < nb ? -1 : 1);
        }
        case Kind::Pow: {
            int c = expr_cmp(a->base, b->base);
            if (c != 0) return c;
            return a->expo == b->expo ? 0 : (a->expo < b->expo ? -1 : 1);
        }
        case Kind::Apply: {
            if (a->fn != b->fn) return a->fn < b->fn ? -1 : 1;
            return expr_cmp(a->arg, b->arg);
        }
    }
    return 0;
}

bool expr_eq(const Expr& a, const Expr& b) { return expr_cmp(a, b) == 0; }

bool is_const(const Expr& e) { return e->kind == Kind::Constant; }
bool is_zero_const(const Expr& e) { return is_const(e) && e->value == 0; }
bool is_one_const(const Expr& e) { return is_const(e) && e->value == 1; }
const Rational& const_value(const Expr& e) { return e->value; }

namespace {

struct ExprLess {
    bool operator()(const Expr& a, const Expr& b) const { return expr_cmp(a, b) < 0; }
};

// Splits a simplified term into (rational coefficient, remaining product).
std::pair<Rational, Expr> split_coeff(const Expr& t) {
    if (t->kind == Kind::Constant) return {t->value, one_expr()};
    if (t->kind == Kind::Product && !t->kids.empty() && is_const(t->kids.front())) {
        Rational c = t->kids.front()->value;
        if (t->kids.size() == 2) return {c, t->kids[1]};
        std::vector<Expr> rest(t->kids.begin() + 1, t->kids.end());
        return {c, make_product(std::move(rest))};
    }
    return {Rational(1), t};
}

// Rebuilds coefficient * rest with rest already canonical.
Expr with_coeff(const Rational& c, const Expr& rest) {
    if (c == 0) return zero_expr();
    if (is_one_const(rest)) return make_const(c);
    if (c == 1) return rest;
    std::vector<Expr> kids;
    kids.push_back(make_const(c));
    if (rest->kind == Kind::Product)
        kids.insert(kids.end(), rest->kids.begin(), rest->kids.end());
    else
        kids.push_back(rest);
    return make_product(std::move(kids));
}

Rational rational_pow(const Rational& q, long long e) {
    if (e == 0) return Rational(1);
    Rational base = e > 0 ? q : Rational(1) / q;
    unsigned long long k = static_cast<unsigned long long>(e > 0 ? e : -e);
    Rational acc(1);
    while (k) {
        if (k & 1) acc *= base;
        base *= base;
        k >>= 1;
    }
    return acc;
}

Expr simplify_product(std::vector<Expr> kids);
Expr simplify_sum(std::vector<Expr> kids);

Expr simplify_pow(Expr base, long long e) {
    if (e == 0) return one_expr();
    if (e == 1) return base;
    if (base->kind == Kind::Constant) {
        if (base->value == 0) {
            if (e > 0) return zero_expr();
            return make_pow(base, e);  // singular; caught at evaluation
        }
        return make_const(rational_pow(base->value, e));
    }
    if (base->kind == Kind::Pow) return simplify_pow(base->base, base->expo * e);
    if (base->kind == Kind::Product) {
        std::vector<Expr> kids;
        kids.reserve(base->kids.size());
        for (const auto& k : base->kids) kids.push_back(simplify_pow(k, e));
        return simplify_product(std::move(kids));
    }
    if (base->kind == Kind::Apply && base->fn == Func::Sqrt && e % 2 == 0)
        return simplify_pow(base->arg, e / 2);
    return make_pow(std::move(base), e);
}

Expr simplify_product(std::vector<Expr> kids) {
    Rational coeff(1);
    std::map<Expr, long long, ExprLess> bases;
    std::vector<Expr> pending(std::move(kids));
    while (!pending.empty()) {
        Expr f = std::move(pending.back());
        pending.pop_back();
        switch (f->kind) {
            case Kind::Constant:
                coeff *= f->value;
                break;
            case Kind::Product:
                for (const auto& k : f->kids) pending.push_back(k);
                break;
            case Kind::Pow:
                bases[f->base] += f->expo;
                break;
            default:
                bases[f] += 1;
        }
    }
    if (coeff == 0) return zero_expr();
    std::vector<Expr> factors;
    for (const auto& [b, e] : bases) {
        if (e == 0) continue;
        Expr f = simplify_pow(b, e);
        if (f->kind == Kind::Constant)
            coeff *= f->value;
        else if (f->kind == Kind::Product) {
            for (const auto& k : f->kids) {
                if (k->kind == Kind::Constant)
                    coeff *= k->value;
                else
                    factors.push_back(k);
            }
        } else
            factors.push_back(f);
    }
    if (coeff == 0) return zero_expr();
    std::sort(factors.begin(), factors.end(), ExprLess{});
    if (factors.empty()) return make_const(coeff);
    if (coeff == 1 && factors.size() == 1) return factors.front();
    // distribute the rational coefficient over a lone sum, so that sums of
    // such products can collect and cancel term by term
    if (factors.size() == 1 && factors.front()->kind == Kind::Sum) {
        std::vector<Expr> ts;
        for (const auto& t : factors.front()->kids)
            ts.push_back(simplify_product({make_const(coeff), t}));
        return simplify_sum(std::move(ts));
    }
    if (coeff != 1) factors.insert(factors.begin(), make_const(coeff));
    if (factors.size() == 1) return factors.front();
    return make_product(std::move(factors));
}

Expr simplify_sum(std::vector<Expr> kids) {
    Rational cacc(0);
    std::map<Expr, Rational, ExprLess> terms;
    std::vector<Expr> pending(std::move(kids));
    while (!pending.empty()) {
        Expr t = std::move(pending.back());
        pending.pop_back();
        if (t->kind == Kind::Sum) {
            for (const auto& k : t->kids) pending.push_back(k);
            continue;
        }
        if (t->kind == Kind::Constant) {
            cacc += t->value;
            continue;
        }
        auto [c, rest] = split_coeff(t);
        terms[rest] += c;
    }
    std::vector<Expr> out;
    if (cacc != 0) out.push_back(make_const(cacc));
    for (const auto& [rest, c] : terms) {
        if (c == 0) continue;
        out.push_back(with_coeff(c, rest));
    }
    if (out.empty()) return zero_expr();
    if (out.size() == 1) return out.front();
    std::sort(out.begin(), out.end(), ExprLess{});
    return make_sum(std::move(out));
}

Expr simplify_apply(Func fn, Expr a) {
    if (is_const(a)) {
        const Rational& v = a->value;
        switch (fn) {
            case Func::Sin:
            case Func::Tan:
                if (v == 0) return zero_expr();
                break;
            case Func::Cos:
                if (v == 0) return one_expr();
                break;
            case Func::Exp:
                if (v == 0) return one_expr();
                break;
            case Func::Sqrt: {
                if (v >= 0) {
                    Integer nr = boost::multiprecision::sqrt(numerator(v));
                    Integer dr = boost::multiprecision::sqrt(denominator(v));
                    if (nr * nr == numerator(v) && dr * dr == denominator(v))
                        return make_const(Rational(nr, dr));
                }
                break;
            }
            case Func::Cot:
                break;
        }
    }
    return make_apply(fn, std::move(a));
}

} // namespace

Expr simplify(const Expr& e) {
    switch (e->kind) {
        case Kind::Constant:
        case Kind::Var:
        case Kind::Param:
            return e;
        case Kind::Apply:
            return simplify_apply(e->fn, simplify(e->arg));
        case Kind::Pow:
            return simplify_pow(simplify(e->base), e->expo);
        case Kind::Product: {
            std::vector<Expr> kids;
            kids.reserve(e->kids.size());
            for (const auto& k : e->kids) kids.push_back(simplify(k));
            return simplify_product(std::move(kids));
        }
        case Kind::Sum: {
            std::vector<Expr> kids;
            kids.reserve(e->kids.size());
            for (const auto& k : e->kids) kids.push_back(simplify(k));
            return simplify_sum(std::move(kids));
        }
    }
    return e;
}

Expr add(Expr a, Expr b) { return simplify_sum({std::move(a), std::move(b)}); }
Expr sub(Expr a, Expr b) { return add(std::move(a), neg(std::move(b))); }
Expr mul(Expr a, Expr b) { return simplify_product({std::move(a), std::move(b)}); }
Expr neg(Expr a) { return mul(make_const(-1), std::move(a)); }
Expr recip(Expr a) { return simplify_pow(simplify(std::move(a)), -1); }
Expr div(Expr a, Expr b) { return mul(std::move(a), recip(std::move(b))); }

namespace {

std::vector<Expr> sum_terms(const Expr& e) {
    if (e->kind == Kind::Sum) return e->kids;
    return {e};
}

} // namespace

Expr expand(const Expr& e) {
    switch (e->kind) {
        case Kind::Constant:
        case Kind::Var:
        case Kind::Param:
            return e;
        case Kind::Apply:
            return simplify_apply(e->fn, expand(e->arg));
        case Kind::Sum: {
            std::vector<Expr> kids;
            for (const auto& k : e->kids) kids.push_back(expand(k));
            return simplify_sum(std::move(kids));
        }
        case Kind::Product: {
            std::vector<Expr> acc{one_expr()};
            for (const auto& f : e->kids) {
                Expr fe = expand(f);
                std::vector<Expr> next;
                for (const auto& t : sum_terms(fe))
                    for (const auto& a : acc) next.push_back(mul(a, t));
                acc = std::move(next);
            }
            return simplify_sum(std::move(acc));
        }
        case Kind::Pow: {
            Expr b = expand(e->base);
            if (b->kind == Kind::Sum && e->expo >= 2) {
                Expr acc = b;
                for (long long i = 1; i < e->expo; ++i) {
                    std::vector<Expr> next;
                    for (const auto& t : sum_terms(acc))
                        for (const auto& u : sum_terms(b)) next.push_back(mul(t, u));
                    acc = simplify_sum(std::move(next));
                }
                return acc;
            }
            return simplify_pow(std::move(b), e->expo);
        }
    }
    return e;
}

Expr differentiate(const Expr& e, int i) {
    switch (e->kind) {
        case Kind::Constant:
        case Kind::Param:
            return zero_expr();
        case Kind::Var:
            return e->var == i ? one_expr() : zero_expr();
        case Kind::Sum: {
            std::vector<Expr> kids;
            for (const auto& k : e->kids) kids.push_back(differentiate(k, i));
            return simplify_sum(std::move(kids));
        }
        case Kind::Product: {
            std::vector<Expr> terms;
            for (size_t j = 0; j < e->kids.size(); ++j) {
                std::vector<Expr> fs = e->kids;
                fs[j] = differentiate(fs[j], i);
                terms.push_back(simplify_product(std::move(fs)));
            }
            return simplify_sum(std::move(terms));
        }
        case Kind::Pow: {
            Expr db = differentiate(e->base, i);
            return simplify_product(
                {make_const(e->expo), simplify_pow(e->base, e->expo - 1), std::move(db)});
        }
        case Kind::Apply: {
            Expr du = differentiate(e->arg, i);
            Expr outer;
            switch (e->fn) {
                case Func::Sin:
                    outer = make_apply(Func::Cos, e->arg);
                    break;
                case Func::Cos:
                    outer = neg(make_apply(Func::Sin, e->arg));
                    break;
                case Func::Tan:
                    outer = simplify_pow(make_apply(Func::Cos, e->arg), -2);
                    break;
                case Func::Cot:
                    outer = neg(simplify_pow(make_apply(Func::Sin, e->arg), -2));
                    break;
                case Func::Exp:
                    outer = e;
                    break;
                case Func::Sqrt:
                    outer = mul(make_const(Rational(1, 2)), simplify_pow(e, -1));
                    break;
            }
            return mul(std::move(outer), std::move(du));
        }
    }
    return zero_expr();
}

namespace {

double eval_impl(const Expr& e, const std::vector<double>& x,
                 const std::map<std::string, double>& params, const EvalOptions& opt,
                 bool abs_mode) {
    switch (e->kind) {
        case Kind::Constant:
            return abs_mode ? std::fabs(to_double(e->value)) : to_double(e->value);
        case Kind::Var:
            if (e->var > static_cast<int>(x.size()))
                throw UnboundSymbolError("unbound variable x" + std::to_string(e->var));
            return abs_mode ? std::fabs(x[e->var - 1]) : x[e->var - 1];
        case Kind::Param: {
            auto it = params.find(e->param);
            if (it == params.end())
                throw UnboundSymbolError("unbound parameter " + e->param);
            return abs_mode ? std::fabs(it->second) : it->second;
        }
        case Kind::Sum: {
            double s = 0;
            for (const auto& k : e->kids) s += eval_impl(k, x, params, opt, abs_mode);
            return s;
        }
        case Kind::Product: {
            double s = 1;
            for (const auto& k : e->kids) s *= eval_impl(k, x, params, opt, abs_mode);
            return s;
        }
        case Kind::Pow: {
            double b = eval_impl(e->base, x, params, opt, abs_mode);
            if (e->expo < 0 && std::fabs(b) < opt.singular_tol)
                throw SingularEvalError("reciprocal near pole");
            double r = std::pow(b, static_cast<double>(e->expo));
            return abs_mode ? std::fabs(r) : r;
        }
        case Kind::Apply: {
            // the argument itself is evaluated exactly even in abs mode
            double v = eval_impl(e->arg, x, params, opt, false);
            double r = 0;
            switch (e->fn) {
                case Func::Sin:
                    r = std::sin(v);
                    break;
                case Func::Cos:
                    r = std::cos(v);
                    break;
                case Func::Tan:
                    if (std::fabs(std::cos(v)) < opt.singular_tol)
                        throw SingularEvalError("tan near pole");
                    r = std::tan(v);
                    break;
                case Func::Cot:
                    if (std::fabs(std::sin(v)) < opt.singular_tol)
                        throw SingularEvalError("cot near pole");
                    r = std::cos(v) / std::sin(v);
                    break;
                case Func::Exp:
                    r = std::exp(v);
                    break;
                case Func::Sqrt:
                    if (v < 0) throw EvalError("sqrt of negative value");
                    r = std::sqrt(v);
                    break;
            }
            return abs_mode ? std::fabs(r) : r;
        }
    }
    return 0;
}

} // namespace

double evaluate(const Expr& e, const std::vector<double>& x,
                const std::map<std::string, double>& params, const EvalOptions& opt) {
    return eval_impl(e, x, params, opt, false);
}

double evaluate_abs(const Expr& e, const std::vector<double>& x,
                    const std::map<std::string, double>& params, const EvalOptions& opt) {
    return eval_impl(e, x, params, opt, true);
}

Expr substitute_vars(const Expr& e, const std::vector<Expr>& subs) {
    switch (e->kind) {
        case Kind::Constant:
        case Kind::Param:
            return e;
        case Kind::Var:
            if (e->var > static_cast<int>(subs.size()))
                throw std::out_of_range("substitute_vars: no substitution for x" +
                                        std::to_string(e->var));
            return subs[e->var - 1];
        case Kind::Sum: {
            std::vector<Expr> kids;
            for (const auto& k : e->kids) kids.push_back(substitute_vars(k, subs));
            return simplify_sum(std::move(kids));
        }
        case Kind::Product: {
            std::vector<Expr> kids;
            for (const auto& k : e->kids) kids.push_back(substitute_vars(k, subs));
            return simplify_product(std::move(kids));
        }
        case Kind::Pow:
            return simplify_pow(substitute_vars(e->base, subs), e->expo);
        case Kind::Apply:
            return simplify_apply(e->fn, substitute_vars(e->arg, subs));
    }
    return e;
}

Expr shift_vars(const Expr& e, int offset) {
    switch (e->kind) {
        case Kind::Constant:
        case Kind::Param:
            return e;
        case Kind::Var:
            return make_var(e->var + offset);
        case Kind::Sum: {
            std::vector<Expr> kids;
            for (const auto& k : e->kids) kids.push_back(shift_vars(k, offset));
            return make_sum(std::move(kids));
        }
        case Kind::Product: {
            std::vector<Expr> kids;
            for (const auto& k : e->kids) kids.push_back(shift_vars(k, offset));
            return make_product(std::move(kids));
        }
        case Kind::Pow:
            return make_pow(shift_vars(e->base, offset), e->expo);
        case Kind::Apply:
            return make_apply(e->fn, shift_vars(e->arg, offset));
    }
    return e;
}

int max_var_index(const Expr& e) {
    switch (e->kind) {
        case Kind::Constant:
        case Kind::Param:
            return 0;
        case Kind::Var:
            return e->var;
        case Kind::Sum:
        case Kind::Product: {
            int m = 0;
            for (const auto& k : e->kids) m = std::max(m, max_var_index(k));
            return m;
        }
        case Kind::Pow:
            return max_var_index(e->base);
        case Kind::Apply:
            return max_var_index(e->arg);
    }
    return 0;
}

namespace {

// precedence levels: 1 sum, 2 product, 3 pow, 4 atom
int precedence(const Expr& e) {
    switch (e->kind) {
        case Kind::Sum:
            return 1;
        case Kind::Product:
            return 2;
        case Kind::Pow:
            return 3;
        case Kind::Constant:
            if (e->value < 0) return 1;
            if (denominator(e->value) != 1) return 2;
            return 4;
        default:
            return 4;
    }
}

void print(std::ostream& os, const Expr& e, int parent_prec);

void print_wrapped(std::ostream& os, const Expr& e, int parent_prec) {
    if (precedence(e) < parent_prec) {
        os << '(';
        print(os, e, 0);
        os << ')';
    } else {
        print(os, e, parent_prec);
    }
}

const char* func_name(Func f) {
    switch (f) {
        case Func::Sin:
            return "sin";
        case Func::Cos:
            return "cos";
        case Func::Tan:
            return "tan";
        case Func::Cot:
            return "cot";
        case Func::Exp:
            return "exp";
        case Func::Sqrt:
            return "sqrt";
    }
    return "?";
}

void print(std::ostream& os, const Expr& e, int) {
    switch (e->kind) {
        case Kind::Constant:
            os << e->value;
            break;
        case Kind::Var:
            os << 'x' << e->var;
            break;
        case Kind::Param:
            os << e->param;
            break;
        case Kind::Sum:
            for (size_t i = 0; i < e->kids.size(); ++i) {
                Expr t = e->kids[i];
                auto [c, rest] = split_coeff(t);
                if (i == 0) {
                    print_wrapped(os, t, 1);
                } else if (c < 0) {
                    os << " - ";
                    print_wrapped(os, with_coeff(-c, rest), 2);
                } else {
                    os << " + ";
                    print_wrapped(os, t, 2);
                }
            }
            break;
        case Kind::Product:
            for (size_t i = 0; i < e->kids.size(); ++i) {
                if (i) os << '*';
                print_wrapped(os, e->kids[i], 3);
            }
            break;
        case Kind::Pow:
            print_wrapped(os, e->base, 4);
            os << '^';
            if (e->expo < 0)
                os << '(' << e->expo << ')';
            else
                os << e->expo;
            break;
        case Kind::Apply:
            os << func_name(e->fn) << '(';
            print(os, e->arg, 0);
            os << ')';
            break;
    }
}

} // namespace

std::string to_string(const Expr& e) {
    std::ostringstream os;
    print(os, e, 0);
    return os.str();
}

} // namespace opcalc
