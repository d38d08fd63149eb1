#include "opcalc/parser.hpp"

#include <cctype>
#include <iomanip>
#include <sstream>

namespace opcalc {

namespace {

struct Token {
    enum class Kind { Ident, Number, Punct, Newline, End };
    Kind kind;
    std::string text;
    int line = 1;
    int col = 1;
};

std::vector<Token> lex(const std::string& text) {
    std::vector<Token> out;
    int line = 1, col = 1;
    size_t i = 0;
    auto push = [&](Token::Kind k, std::string s, int c) {
        out.push_back({k, std::move(s), line, c});
    };
    while (i < text.size()) {
        char c = text[i];
        if (c == '#') {
            while (i < text.size() && text[i] != '\n') ++i;
            continue;
        }
        if (c == '\n') {
            push(Token::Kind::Newline, "\n", col);
            ++i;
            ++line;
            col = 1;
            continue;
        }
        if (c == ' ' || c == '\t' || c == '\r') {
            ++i;
            ++col;
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            int start_col = col;
            size_t j = i;
            while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) ||
                                       text[j] == '_')) {
                ++j;
                ++col;
            }
            push(Token::Kind::Ident, text.substr(i, j - i), start_col);
            i = j;
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            int start_col = col;
            size_t j = i;
            bool dot = false;
            while (j < text.size() && (std::isdigit(static_cast<unsigned char>(text[j])) ||
                                       (!dot && text[j] == '.'))) {
                if (text[j] == '.') dot = true;
                ++j;
                ++col;
            }
            push(Token::Kind::Number, text.substr(i, j - i), start_col);
            i = j;
            continue;
        }
        if (std::string("+-*/^()[]=:,").find(c) != std::string::npos) {
            push(Token::Kind::Punct, std::string(1, c), col);
            ++i;
            ++col;
            continue;
        }
        throw ParseError(std::string("unexpected character '") + c + "'", line, col);
    }
    out.push_back({Token::Kind::End, "", line, col});
    return out;
}

class Cursor {
public:
    explicit Cursor(const std::vector<Token>& toks) : toks_(toks) {}

    const Token& peek() const { return toks_[pos_]; }
    const Token& next() { return toks_[pos_++]; }
    bool at_end() const {
        return peek().kind == Token::Kind::End || peek().kind == Token::Kind::Newline;
    }

    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(msg, peek().line, peek().col);
    }

    bool accept_punct(char c) {
        if (peek().kind == Token::Kind::Punct && peek().text[0] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    void expect_punct(char c) {
        if (!accept_punct(c)) fail(std::string("expected '") + c + "'");
    }
    std::string expect_ident(const char* what) {
        if (peek().kind != Token::Kind::Ident) fail(std::string("expected ") + what);
        return next().text;
    }
    long long expect_integer(const char* what) {
        if (peek().kind != Token::Kind::Number || peek().text.find('.') != std::string::npos)
            fail(std::string("expected integer ") + what);
        return std::stoll(next().text);
    }
    double expect_real(const char* what) {
        bool negate = accept_punct('-');
        if (peek().kind != Token::Kind::Number) fail(std::string("expected number ") + what);
        double v = std::stod(next().text);
        return negate ? -v : v;
    }
    void expect_line_end() {
        if (!at_end()) fail("unexpected trailing input");
        if (peek().kind == Token::Kind::Newline) ++pos_;
    }
    void skip_blank_lines() {
        while (peek().kind == Token::Kind::Newline) ++pos_;
    }

private:
    const std::vector<Token>& toks_;
    size_t pos_ = 0;
};

bool indexed_name(const std::string& s, char prefix, int* index) {
    if (s.size() < 2 || s[0] != prefix) return false;
    for (size_t i = 1; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    if (index) *index = std::stoi(s.substr(1));
    return true;
}

bool lookup_func(const std::string& s, Func* fn) {
    static const std::pair<const char*, Func> table[] = {
        {"sin", Func::Sin}, {"cos", Func::Cos},   {"tan", Func::Tan},
        {"cot", Func::Cot}, {"exp", Func::Exp},   {"sqrt", Func::Sqrt},
    };
    for (const auto& [name, f] : table)
        if (s == name) {
            if (fn) *fn = f;
            return true;
        }
    return false;
}

bool reserved_name(const std::string& s) {
    if (lookup_func(s, nullptr)) return true;
    if (indexed_name(s, 'x', nullptr) || indexed_name(s, 'p', nullptr) ||
        indexed_name(s, 'F', nullptr) || indexed_name(s, 'G', nullptr))
        return true;
    static const char* keywords[] = {"vars", "param", "box", "exclude", "op",
                                     "set",  "ncpoly", "central"};
    for (const char* k : keywords)
        if (s == k) return true;
    return false;
}

// ---- operator expressions ----------------------------------------------------

class OpExprParser {
public:
    OpExprParser(Cursor& cur, int n, const std::vector<std::string>& params)
        : cur_(cur), n_(n), params_(params) {}

    DiffOperator parse_sum() {
        DiffOperator acc = parse_term();
        while (true) {
            if (cur_.accept_punct('+'))
                acc = op_add(acc, parse_term());
            else if (cur_.accept_punct('-'))
                acc = op_sub(acc, parse_term());
            else
                return acc;
        }
    }

private:
    DiffOperator parse_term() {
        DiffOperator acc = parse_unary();
        while (true) {
            if (cur_.accept_punct('*')) {
                acc = compose(acc, parse_unary());
            } else if (cur_.accept_punct('/')) {
                DiffOperator rhs = parse_unary();
                acc = compose(acc, DiffOperator::constant(n_, recip(coeff_of(rhs, "divisor"))));
            } else {
                return acc;
            }
        }
    }

    DiffOperator parse_unary() {
        if (cur_.accept_punct('-')) return op_scale(parse_unary(), Rational(-1));
        return parse_power();
    }

    DiffOperator parse_power() {
        DiffOperator base = parse_primary();
        if (!cur_.accept_punct('^')) return base;
        long long e = parse_exponent();
        if (base.order() <= 0) {
            Expr c = base.is_zero_op() ? zero_expr() : base.coeff(MultiIndex(n_));
            return DiffOperator::constant(n_, simplify(make_pow(c, e)));
        }
        if (e < 0) cur_.fail("negative power of a differential operator");
        DiffOperator acc = DiffOperator::constant(n_, Rational(1));
        for (long long k = 0; k < e; ++k) acc = compose(acc, base);
        return acc;
    }

    long long parse_exponent() {
        if (cur_.accept_punct('(')) {
            bool negate = cur_.accept_punct('-');
            long long v = cur_.expect_integer("exponent");
            cur_.expect_punct(')');
            return negate ? -v : v;
        }
        return cur_.expect_integer("exponent");
    }

    DiffOperator parse_primary() {
        const Token& t = cur_.peek();
        if (t.kind == Token::Kind::Number) {
            if (t.text.find('.') != std::string::npos)
                cur_.fail("decimal literals are not allowed in expressions; use rationals");
            return DiffOperator::constant(n_, Rational(std::stoll(cur_.next().text)));
        }
        if (cur_.accept_punct('(')) {
            DiffOperator inner = parse_sum();
            cur_.expect_punct(')');
            return inner;
        }
        if (t.kind != Token::Kind::Ident) cur_.fail("expected expression");
        std::string name = cur_.next().text;
        int idx = 0;
        if (indexed_name(name, 'x', &idx)) {
            check_var(idx, name);
            return DiffOperator::coordinate(n_, idx);
        }
        if (indexed_name(name, 'p', &idx)) {
            check_var(idx, name);
            return DiffOperator::momentum(n_, idx);
        }
        Func fn;
        if (lookup_func(name, &fn)) {
            cur_.expect_punct('(');
            DiffOperator arg = parse_sum();
            cur_.expect_punct(')');
            return DiffOperator::constant(
                n_, simplify(make_apply(fn, coeff_of(arg, "function argument"))));
        }
        for (const auto& p : params_)
            if (p == name) return DiffOperator::constant(n_, make_param(name));
        cur_.fail("unknown identifier '" + name + "'");
    }

    void check_var(int idx, const std::string& name) {
        if (idx < 1 || idx > n_) cur_.fail("variable index out of range: " + name);
    }

    Expr coeff_of(const DiffOperator& a, const char* what) {
        if (a.is_zero_op()) return zero_expr();
        if (a.order() > 0) cur_.fail(std::string(what) + " must be a coefficient expression");
        return a.coeff(MultiIndex(n_));
    }

    Cursor& cur_;
    int n_;
    const std::vector<std::string>& params_;
};

// ---- noncommutative polynomial expressions -------------------------------------

class NCExprParser {
public:
    NCExprParser(Cursor& cur, int l, int r) : cur_(cur), l_(l), r_(r) {}

    NCPolynomial parse_sum() {
        NCPolynomial acc = parse_term();
        while (true) {
            if (cur_.accept_punct('+'))
                acc = nc_add(acc, parse_term());
            else if (cur_.accept_punct('-'))
                acc = nc_sub(acc, parse_term());
            else
                return acc;
        }
    }

private:
    NCPolynomial parse_term() {
        NCPolynomial acc = parse_unary();
        while (true) {
            if (cur_.accept_punct('*')) {
                acc = nc_mul(acc, parse_unary());
            } else if (cur_.accept_punct('/')) {
                NCPolynomial rhs = parse_unary();
                acc = nc_scale(acc, recip(coeff_of(rhs, "divisor")));
            } else {
                return acc;
            }
        }
    }

    NCPolynomial parse_unary() {
        if (cur_.accept_punct('-')) return nc_neg(parse_unary());
        return parse_power();
    }

    NCPolynomial parse_power() {
        NCPolynomial base = parse_primary();
        if (!cur_.accept_punct('^')) return base;
        long long e;
        if (cur_.accept_punct('(')) {
            bool negate = cur_.accept_punct('-');
            e = cur_.expect_integer("exponent");
            cur_.expect_punct(')');
            if (negate) e = -e;
        } else {
            e = cur_.expect_integer("exponent");
        }
        if (e < 0) {
            Expr c = coeff_of(base, "base of a negative power");
            return NCPolynomial::coeff(l_, r_, simplify(make_pow(c, e)));
        }
        return nc_pow(base, static_cast<int>(e));
    }

    NCPolynomial parse_primary() {
        const Token& t = cur_.peek();
        if (t.kind == Token::Kind::Number) {
            if (t.text.find('.') != std::string::npos)
                cur_.fail("decimal literals are not allowed in expressions; use rationals");
            return NCPolynomial::coeff(l_, r_, make_const(Rational(std::stoll(cur_.next().text))));
        }
        if (cur_.accept_punct('(')) {
            NCPolynomial inner = parse_sum();
            cur_.expect_punct(')');
            return inner;
        }
        if (t.kind != Token::Kind::Ident) cur_.fail("expected expression");
        std::string name = cur_.next().text;
        int idx = 0;
        if (indexed_name(name, 'F', &idx)) {
            if (idx < 1 || idx > r_) cur_.fail("F index out of range: " + name);
            return NCPolynomial::symbol(l_, r_, idx);
        }
        if (indexed_name(name, 'G', &idx)) {
            if (idx < 1 || idx > l_) cur_.fail("G index out of range: " + name);
            return NCPolynomial::coeff(l_, r_, make_var(idx));
        }
        Func fn;
        if (lookup_func(name, &fn)) {
            cur_.expect_punct('(');
            NCPolynomial arg = parse_sum();
            cur_.expect_punct(')');
            return NCPolynomial::coeff(
                l_, r_, simplify(make_apply(fn, coeff_of(arg, "function argument"))));
        }
        cur_.fail("unknown identifier '" + name + "'");
    }

    Expr coeff_of(const NCPolynomial& a, const char* what) {
        std::vector<Expr> terms;
        for (const auto& m : a.monos) {
            if (m.q() != 0) cur_.fail(std::string(what) + " must be free of F symbols");
            terms.push_back(m.z[0]);
        }
        return terms.empty() ? zero_expr() : simplify(make_sum(std::move(terms)));
    }

    Cursor& cur_;
    int l_;
    int r_;
};

std::string format_real(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

// Renames x<i> to G<i> in a printed coefficient: an 'x' immediately followed
// by a digit and not preceded by an alphanumeric is a variable reference.
std::string rename_vars_to_g(const std::string& s) {
    std::string out;
    for (size_t i = 0; i < s.size(); ++i) {
        bool var = s[i] == 'x' && i + 1 < s.size() &&
                   std::isdigit(static_cast<unsigned char>(s[i + 1])) &&
                   (i == 0 || !(std::isalnum(static_cast<unsigned char>(s[i - 1])) ||
                                s[i - 1] == '_'));
        out += var ? 'G' : s[i];
    }
    return out;
}

} // namespace

const DiffOperator* SystemFile::find_op(const std::string& name) const {
    for (const auto& [n, op] : ops)
        if (n == name) return &op;
    return nullptr;
}

const SetDef* SystemFile::find_set(const std::string& name) const {
    for (const auto& [n, s] : sets)
        if (n == name) return &s;
    return nullptr;
}

std::vector<DiffOperator> SystemFile::resolve(const SetDef& set) const {
    std::vector<DiffOperator> out;
    for (const auto& name : set.members) {
        const DiffOperator* op = find_op(name);
        if (!op) throw std::invalid_argument("set references unknown operator " + name);
        out.push_back(*op);
    }
    return out;
}

SystemFile parse_system(const std::string& text) {
    std::vector<Token> toks = lex(text);
    Cursor cur(toks);
    SystemFile sf;
    bool vars_seen = false;

    auto require_vars = [&]() {
        if (!vars_seen) cur.fail("a 'vars' statement must come first");
    };

    while (true) {
        cur.skip_blank_lines();
        if (cur.peek().kind == Token::Kind::End) break;
        std::string kw = cur.expect_ident("statement keyword");
        if (kw == "vars") {
            if (vars_seen) cur.fail("duplicate 'vars' statement");
            int n = 0;
            while (!cur.at_end()) {
                std::string v = cur.expect_ident("variable name");
                int idx = 0;
                if (!indexed_name(v, 'x', &idx) || idx != n + 1)
                    cur.fail("variables must be named x1, x2, ... in order");
                ++n;
            }
            if (n == 0) cur.fail("empty variable list");
            sf.n = n;
            sf.dom = DomainSpec::box_domain(n);
            vars_seen = true;
        } else if (kw == "param") {
            require_vars();
            std::string name = cur.expect_ident("parameter name");
            if (reserved_name(name)) cur.fail("reserved parameter name '" + name + "'");
            double value = 1.0;
            if (cur.accept_punct('=')) {
                value = cur.expect_real("parameter value");
                if (cur.accept_punct('/')) value /= cur.expect_real("denominator");
            }
            sf.params.push_back(name);
            sf.dom.params[name] = value;
        } else if (kw == "box") {
            require_vars();
            long long i = cur.expect_integer("variable index");
            if (i < 1 || i > sf.n) cur.fail("box index out of range");
            double lo = cur.expect_real("lower bound");
            double hi = cur.expect_real("upper bound");
            if (!(lo < hi)) cur.fail("box bounds must satisfy lo < hi");
            sf.dom.box[static_cast<size_t>(i - 1)] = {lo, hi};
        } else if (kw == "exclude") {
            require_vars();
            OpExprParser p(cur, sf.n, sf.params);
            DiffOperator e = p.parse_sum();
            if (e.order() > 0) cur.fail("exclusions must be coefficient expressions");
            sf.dom.exclusions.push_back(e.is_zero_op() ? zero_expr()
                                                       : e.coeff(MultiIndex(sf.n)));
        } else if (kw == "op") {
            require_vars();
            std::string name = cur.expect_ident("operator name");
            if (reserved_name(name)) cur.fail("reserved operator name '" + name + "'");
            if (sf.find_op(name)) cur.fail("duplicate operator name '" + name + "'");
            cur.expect_punct('=');
            OpExprParser p(cur, sf.n, sf.params);
            sf.ops.emplace_back(name, p.parse_sum());
        } else if (kw == "set") {
            require_vars();
            std::string name = cur.expect_ident("set name");
            if (sf.find_set(name)) cur.fail("duplicate set name '" + name + "'");
            cur.expect_punct('=');
            cur.expect_punct('[');
            SetDef def;
            while (!cur.accept_punct(']')) {
                std::string member = cur.expect_ident("operator name");
                if (!sf.find_op(member)) cur.fail("set references unknown operator " + member);
                def.members.push_back(member);
            }
            std::string central = cur.expect_ident("'central'");
            if (central != "central") cur.fail("expected 'central'");
            long long k = cur.expect_integer("central count");
            if (k < 1 || k > static_cast<long long>(def.members.size()))
                cur.fail("central count out of range");
            def.central = static_cast<int>(k);
            sf.sets.emplace_back(name, def);
        } else if (kw == "ncpoly") {
            require_vars();
            std::string name = cur.expect_ident("ncpoly name");
            cur.expect_punct('(');
            std::string fkw = cur.expect_ident("'F'");
            if (fkw != "F") cur.fail("expected 'F'");
            cur.expect_punct(':');
            long long r = cur.expect_integer("F arity");
            cur.expect_punct(',');
            std::string gkw = cur.expect_ident("'G'");
            if (gkw != "G") cur.fail("expected 'G'");
            cur.expect_punct(':');
            long long l = cur.expect_integer("G arity");
            cur.expect_punct(')');
            cur.expect_punct('=');
            if (r < 0 || l < 0) cur.fail("arities must be nonnegative");
            NCExprParser p(cur, static_cast<int>(l), static_cast<int>(r));
            NCDef def{static_cast<int>(r), static_cast<int>(l), p.parse_sum()};
            sf.ncpolys.emplace_back(name, def);
        } else {
            cur.fail("unknown statement '" + kw + "'");
        }
        cur.expect_line_end();
    }
    return sf;
}

DiffOperator parse_operator(const std::string& text, int n,
                            const std::vector<std::string>& params) {
    std::vector<Token> toks = lex(text);
    Cursor cur(toks);
    OpExprParser p(cur, n, params);
    DiffOperator r = p.parse_sum();
    cur.expect_line_end();
    return r;
}

Expr parse_coeff(const std::string& text, int n, const std::vector<std::string>& params) {
    DiffOperator op = parse_operator(text, n, params);
    if (op.is_zero_op()) return zero_expr();
    if (op.order() > 0) throw ParseError("expected a coefficient expression", 1, 1);
    return op.coeff(MultiIndex(n));
}

NCPolynomial parse_ncpoly(const std::string& text, int l, int r) {
    std::vector<Token> toks = lex(text);
    Cursor cur(toks);
    NCExprParser p(cur, l, r);
    NCPolynomial s = p.parse_sum();
    cur.expect_line_end();
    return s;
}

std::string operator_to_text(const DiffOperator& a) {
    if (a.is_zero_op()) return "0";
    std::string out;
    for (const auto& [alpha, c] : a.coeffs()) {
        if (!out.empty()) out += " + ";
        out += "(" + to_string(c) + ")";
        for (int i = 1; i <= a.dim(); ++i) {
            int e = alpha.e[static_cast<size_t>(i - 1)];
            if (e == 0) continue;
            out += "*p" + std::to_string(i);
            if (e > 1) out += "^" + std::to_string(e);
        }
    }
    return out;
}

std::string ncpoly_to_text(const NCPolynomial& s) {
    if (s.monos.empty()) return "0";
    std::string out;
    for (const auto& m : s.monos) {
        if (!out.empty()) out += " + ";
        out += "(" + rename_vars_to_g(to_string(m.z[0])) + ")";
        for (int j = 0; j < m.q(); ++j) {
            out += "*F" + std::to_string(m.beta[static_cast<size_t>(j)]);
            out += "*(" + rename_vars_to_g(to_string(m.z[static_cast<size_t>(j + 1)])) + ")";
        }
    }
    return out;
}

std::string export_system(const SystemFile& sf) {
    std::string out = "vars";
    for (int i = 1; i <= sf.n; ++i) out += " x" + std::to_string(i);
    out += "\n";
    for (const auto& p : sf.params) {
        auto it = sf.dom.params.find(p);
        out += "param " + p;
        if (it != sf.dom.params.end()) out += " = " + format_real(it->second);
        out += "\n";
    }
    for (int i = 1; i <= sf.n; ++i) {
        auto [lo, hi] = sf.dom.var_box(i);
        out += "box " + std::to_string(i) + " " + format_real(lo) + " " + format_real(hi) + "\n";
    }
    for (const auto& e : sf.dom.exclusions) out += "exclude " + to_string(e) + "\n";
    for (const auto& [name, op] : sf.ops) out += "op " + name + " = " + operator_to_text(op) + "\n";
    for (const auto& [name, set] : sf.sets) {
        out += "set " + name + " = [";
        for (const auto& m : set.members) out += " " + m;
        out += " ] central " + std::to_string(set.central) + "\n";
    }
    for (const auto& [name, def] : sf.ncpolys) {
        out += "ncpoly " + name + " (F: " + std::to_string(def.r) + ", G: " +
               std::to_string(def.l) + ") = " + ncpoly_to_text(def.poly) + "\n";
    }
    return out;
}

} // namespace opcalc
