#pragma once

#include "opcalc/rational.hpp"

#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace opcalc {

// Smooth coefficient functions on an open subset of R^n, as finite expression
// trees over rational constants, variables x1..xn, named parameters, sums,
// products, integer powers and the unary functions below.

enum class Func { Sin, Cos, Tan, Cot, Exp, Sqrt };

struct ExprNode;
using Expr = std::shared_ptr<const ExprNode>;

struct ExprNode {
    enum class Kind { Constant, Var, Param, Sum, Product, Pow, Apply };
    Kind kind;

    Rational value;          // Constant
    int var = 0;             // Var, 1-based
    std::string param;       // Param
    std::vector<Expr> kids;  // Sum / Product operands
    Expr base;               // Pow
    long long expo = 0;      // Pow, integer exponent (may be negative)
    Func fn = Func::Sin;     // Apply
    Expr arg;                // Apply
};

struct EvalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct UnboundSymbolError : EvalError {
    using EvalError::EvalError;
};
struct SingularEvalError : EvalError {
    using EvalError::EvalError;
};

// Construction (raw; use simplify() for canonical form).
Expr make_const(Rational q);
Expr make_const(long long v);
Expr make_var(int i);
Expr make_param(std::string name);
Expr make_sum(std::vector<Expr> terms);
Expr make_product(std::vector<Expr> factors);
Expr make_pow(Expr base, long long e);
Expr make_apply(Func fn, Expr arg);

// Convenience arithmetic; results are simplified.
Expr add(Expr a, Expr b);
Expr sub(Expr a, Expr b);
Expr mul(Expr a, Expr b);
Expr div(Expr a, Expr b);
Expr neg(Expr a);
Expr recip(Expr a);

Expr zero_expr();
Expr one_expr();

// Total structural order; defines the canonical form used by simplify.
int expr_cmp(const Expr& a, const Expr& b);
bool expr_eq(const Expr& a, const Expr& b);

bool is_const(const Expr& e);
bool is_zero_const(const Expr& e);
bool is_one_const(const Expr& e);
const Rational& const_value(const Expr& e);

// Canonical simplification: rational folding, flattening, like-term and
// like-factor collection, x^0 -> 1, 0*e -> 0. Idempotent.
Expr simplify(const Expr& e);

// Distributes products and nonnegative integer powers over sums, so that
// polynomial combinations of atoms cancel structurally under simplify.
Expr expand(const Expr& e);

// Exact partial derivative with respect to x_i (1-based); result simplified.
Expr differentiate(const Expr& e, int i);

struct EvalOptions {
    double singular_tol = 1e-6;  // reject reciprocal/tan/cot this close to a pole
};

double evaluate(const Expr& e, const std::vector<double>& x,
                const std::map<std::string, double>& params = {},
                const EvalOptions& opt = {});

// Evaluates with every sum/product taken over absolute values; used as the
// conditioning scale for the numeric zero test.
double evaluate_abs(const Expr& e, const std::vector<double>& x,
                    const std::map<std::string, double>& params = {},
                    const EvalOptions& opt = {});

// Replaces Var(i) by subs[i-1]; subs expressions live in the target space.
Expr substitute_vars(const Expr& e, const std::vector<Expr>& subs);

// Var(i) -> Var(i + offset).
Expr shift_vars(const Expr& e, int offset);

int max_var_index(const Expr& e);

std::string to_string(const Expr& e);

} // namespace opcalc
