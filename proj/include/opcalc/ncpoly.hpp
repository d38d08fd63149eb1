#pragma once

#include "opcalc/diffop.hpp"

namespace opcalc {

// Noncommutative polynomials over commuting variables G_1..G_l and
// noncommuting symbols F_1..F_r: formal sums of words
//   Z_0 F_{b1} Z_1 ... F_{bq} Z_q,
// with each Z_j a coefficient expression in the G variables (Var(1..l)).

struct NCMonomial {
    std::vector<int> beta;  // F indices, 1-based, size q
    std::vector<Expr> z;    // size q+1, expressions in g_1..g_l

    int q() const { return static_cast<int>(beta.size()); }
};

struct NCPolynomial {
    int l = 0;  // number of commuting variables G
    int r = 0;  // number of noncommuting symbols F
    std::vector<NCMonomial> monos;

    static NCPolynomial zero(int l, int r) { return {l, r, {}}; }
    // the monomial F_i
    static NCPolynomial symbol(int l, int r, int i);
    // the monomial Z(G) with empty word
    static NCPolynomial coeff(int l, int r, Expr z);
};

NCPolynomial nc_add(const NCPolynomial& a, const NCPolynomial& b);
NCPolynomial nc_sub(const NCPolynomial& a, const NCPolynomial& b);
NCPolynomial nc_neg(const NCPolynomial& a);
// word concatenation; the touching Z factors multiply
NCPolynomial nc_mul(const NCPolynomial& a, const NCPolynomial& b);
NCPolynomial nc_scale(const NCPolynomial& a, const Expr& z);
NCPolynomial nc_pow(const NCPolynomial& a, int k);

// Zero test in canonical form: group monomials by beta; within a group each
// word Z_0 F Z_1 ... Z_q is reduced to the product of the Z_j written in
// disjoint variable blocks (slot j shifted by j*l), so that distinct Z
// placements cannot cancel; each group's sum must then be zero as an
// expression in l*(q+1) variables.
struct NCZeroVerdict {
    bool zero = true;
    std::vector<int> witness_beta;  // offending word when nonzero
    ZeroVerdict worst;
};
NCZeroVerdict nc_zero_test(const NCPolynomial& s, int samples = 20, std::uint64_t seed = 0);

// Commutative image: polynomial in (G_1..G_l, F_1..F_r), stored as a map from
// the F exponent vector to a coefficient expression in the G variables.
struct CommPoly {
    int l = 0;
    int r = 0;
    std::map<MultiIndex, Expr> terms;  // F exponent (dim r) -> expr in g_1..g_l

    bool is_zero_poly() const { return terms.empty(); }
    void add_term(const MultiIndex& fexp, const Expr& c);
};

CommPoly abelianize(const NCPolynomial& s);

CommPoly comm_add(const CommPoly& a, const CommPoly& b);
CommPoly comm_sub(const CommPoly& a, const CommPoly& b);
CommPoly comm_mul(const CommPoly& a, const CommPoly& b);
CommPoly comm_d_dF(const CommPoly& a, int i);  // 1-based F variable

// Substitutes G_j -> g_exprs[j] (expressions in x) and F_i -> f_syms[i]
// (symbols, i.e. operators read commutatively); the result is a symbol.
DiffOperator comm_substitute(const CommPoly& a, const std::vector<Expr>& g_exprs,
                             const std::vector<DiffOperator>& f_syms);

// Value and gradient of the commutative polynomial at a numeric point
// (G_1..G_l, F_1..F_r) in R^{l+r}.
double comm_eval(const CommPoly& a, const std::vector<double>& w,
                 const std::map<std::string, double>& params = {});
std::vector<double> comm_gradient(const CommPoly& a, const std::vector<double>& w,
                                  const std::map<std::string, double>& params = {});

// ---- weighted filtration ----------------------------------------------------

using WeightVector = std::vector<int>;  // size r, w_i = ord F_i

int word_weight(const NCMonomial& m, const WeightVector& w);

NCPolynomial quasi_homogeneous_part(const NCPolynomial& s, int d, const WeightVector& w);

struct DegreeMain {
    static constexpr int kZeroDegree = -1;  // sentinel for S = 0
    int deg = kZeroDegree;
    NCPolynomial main;
    NCPolynomial second;  // 0 when deg <= 0
};

DegreeMain degree_and_main(const NCPolynomial& s, const WeightVector& w, int samples = 20,
                           std::uint64_t seed = 0);

// Weights induced by an operator set (w_i = ord F_i; zero operator weights 0).
WeightVector weights_of(const std::vector<DiffOperator>& f_ops);

// ---- substitution into operators ---------------------------------------------

// Replaces each F_i by f_ops[i] and each Z(G) by the multiplication operator
// Z(G_1(x),..,G_l(x)); expands words with compose. All g_ops must have order 0.
DiffOperator substitute(const NCPolynomial& s, const std::vector<DiffOperator>& g_ops,
                        const std::vector<DiffOperator>& f_ops);

// ---- top-order identities -----------------------------------------------------

struct TopReport {
    int dbar = DegreeMain::kZeroDegree;
    // order-dbar identity: H_dbar(S(G,F))^smb vs (M_W S)_C(G, MF)
    bool top_ok = true;
    bool top_symbolic = true;      // residual vanished without numeric fallback
    OpZeroVerdict top_residual;
    // order-(dbar-1) identity, checked at sampled phase points
    bool top2_ok = true;
    double top2_max_residual = 0.0;
};

TopReport verify_top_identity(const NCPolynomial& s, const std::vector<DiffOperator>& g_ops,
                              const std::vector<DiffOperator>& f_ops, const DomainSpec& dom,
                              int samples = 20, std::uint64_t seed = 0, double tol = 1e-8);

} // namespace opcalc
