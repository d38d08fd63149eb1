#pragma once

#include "opcalc/diffop.hpp"

namespace opcalc {

// Independent numerical ground truth: operators applied to explicit test
// function families (exponentials e^{lambda.x} and monomials x^alpha).

// F e^{lambda.x} = sum A_alpha(x) lambda^alpha e^{lambda.x}; returns the sum,
// i.e. the application divided by the exponential.
double apply_to_exponential(const DiffOperator& a, const std::vector<double>& lambda,
                            const std::vector<double>& x,
                            const std::map<std::string, double>& params = {});

// sum A_alpha(x) d^alpha psi, by exact differentiation.
Expr apply_symbolic(const DiffOperator& a, const Expr& psi);

struct EqualityVerdict {
    bool equal = true;
    double max_residual = 0.0;
    std::vector<double> witness_x;      // point of worst disagreement
    std::string witness_family;         // "exponential" or "monomial"
};

// Tests A = B by application to exponentials over a lambda grid and to
// monomials x^alpha with |alpha| <= ord+1, at sampled domain points. Sound
// for operators of this class because the standard representation is
// determined by the action on exponentials.
EqualityVerdict operator_equal(const DiffOperator& a, const DiffOperator& b,
                               const DomainSpec& dom, int samples = 10,
                               std::uint64_t seed = 0, double tol = 1e-9);

} // namespace opcalc
