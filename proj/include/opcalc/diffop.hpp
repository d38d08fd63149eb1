#pragma once

#include "opcalc/domain.hpp"
#include "opcalc/expr.hpp"
#include "opcalc/multi_index.hpp"

#include <map>
#include <vector>

namespace opcalc {

// A linear differential operator in standard representation
//   sum_{|alpha| <= m} A_alpha(x) p^alpha,  p_i = d/dx_i,
// with coefficients kept simplified and exact-zero entries dropped. The same
// coefficient map read as the polynomial F(x,p) = sum A_alpha(x) p^alpha is
// the operator's symbol; the symbol-side free functions below treat it that
// way (commutative product, partials in x and p, pointwise evaluation).
class DiffOperator {
public:
    static constexpr int kZeroOrder = -1;

    explicit DiffOperator(int n) : n_(n) {}
    DiffOperator(int n, std::map<MultiIndex, Expr> coeffs);

    int dim() const { return n_; }
    int order() const;  // kZeroOrder for the zero operator
    bool is_zero_op() const { return coeffs_.empty(); }

    const std::map<MultiIndex, Expr>& coeffs() const { return coeffs_; }
    Expr coeff(const MultiIndex& a) const;
    void add_term(const MultiIndex& a, const Expr& c);

    static DiffOperator zero(int n) { return DiffOperator(n); }
    static DiffOperator constant(int n, Expr c);
    static DiffOperator constant(int n, const Rational& c);
    static DiffOperator momentum(int n, int i);    // p_i
    static DiffOperator coordinate(int n, int i);  // multiplication by x_i

private:
    int n_;
    std::map<MultiIndex, Expr> coeffs_;
};

DiffOperator op_add(const DiffOperator& a, const DiffOperator& b);
DiffOperator op_sub(const DiffOperator& a, const DiffOperator& b);
DiffOperator op_scale(const DiffOperator& a, const Expr& f);
DiffOperator op_scale(const DiffOperator& a, const Rational& c);

// Operator product via the symbol composition formula
//   (AB)^smb = sum_{|alpha| <= ord A} (1/alpha!) d^alpha A/dp^alpha d^alpha B/dx^alpha.
DiffOperator compose(const DiffOperator& a, const DiffOperator& b);

DiffOperator commutator(const DiffOperator& a, const DiffOperator& b);

// A primitive factor of a composition chain: either multiplication by a
// coefficient function or a momentum p_i.
struct PrimitiveFactor {
    enum class Type { Coeff, Momentum };
    Type type;
    Expr c;     // Coeff
    int i = 0;  // Momentum, 1-based

    static PrimitiveFactor coeff(Expr e) { return {Type::Coeff, std::move(e), 0}; }
    static PrimitiveFactor momentum(int i) { return {Type::Momentum, nullptr, i}; }
};

// Normalization by the Leibniz rewrite p_i f = f p_i + df/dx_i, pushing all
// momenta right of all coefficients. Independent of compose(); the two paths
// cross-check each other.
DiffOperator normalize_factors(int n, const std::vector<PrimitiveFactor>& factors);

DiffOperator homogeneous_part(const DiffOperator& a, int g);
DiffOperator main_part(const DiffOperator& a);
DiffOperator second_main_part(const DiffOperator& a);

struct OpZeroVerdict {
    bool zero = true;
    MultiIndex witness_alpha;   // offending exponent when nonzero
    ZeroVerdict worst;          // verdict of the offending/largest coefficient
};

// Per-coefficient zero test (symbolic, then numeric sampling).
OpZeroVerdict operator_zero_verdict(const DiffOperator& a, const DomainSpec& dom,
                                    int samples = 20, std::uint64_t seed = 0);

// Drops coefficients that test numeric-zero over the given domain.
DiffOperator prune(const DiffOperator& a, const DomainSpec& dom, int samples = 20,
                   std::uint64_t seed = 0);

// ---- symbol side -----------------------------------------------------------

DiffOperator symbol_product(const DiffOperator& a, const DiffOperator& b);
DiffOperator symbol_pow(const DiffOperator& a, int k);
DiffOperator d_dx(const DiffOperator& a, int i);
DiffOperator d_dp(const DiffOperator& a, int i);

double symbol_eval(const DiffOperator& a, const std::vector<double>& x,
                   const std::vector<double>& p,
                   const std::map<std::string, double>& params = {});

// Gradient of the symbol in the 2n phase-space variables (x_1..x_n, p_1..p_n),
// computed by exact differentiation and then evaluated.
std::vector<double> symbol_gradient(const DiffOperator& a, const std::vector<double>& x,
                                    const std::vector<double>& p,
                                    const std::map<std::string, double>& params = {});

// Poisson bracket, in the orientation
//   {A,B} = sum_i (dA/dp_i dB/dx_i - dB/dp_i dA/dx_i).
DiffOperator poisson_bracket(const DiffOperator& a, const DiffOperator& b);

// Poisson semi-bracket {A,B}+ = sum_i dA/dp_i dB/dx_i.
DiffOperator poisson_semibracket(const DiffOperator& a, const DiffOperator& b);

} // namespace opcalc
