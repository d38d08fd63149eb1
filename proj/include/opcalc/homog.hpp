#pragma once

#include "opcalc/analysis.hpp"

namespace opcalc {

// Homogenization into n+1 variables: variable 1 of the image is the auxiliary
// x0 and p1 is p0; the original x_i/p_i shift to positions i+1.

// A_alpha p^alpha -> A_alpha p0^{m-|alpha|} p^alpha, m = ord A. The image is
// homogeneous of order m with coefficients independent of x0.
DiffOperator phi_embed(const DiffOperator& a);

// Pads every term of a (possibly inhomogeneous) operator in n variables with
// p0 powers up to the given degree; phi_embed(a) = phi_pad(a, ord a).
DiffOperator phi_pad(const DiffOperator& a, int degree);

struct PhiLawReport {
    // [Phi_A, Phi_B] vs the padding of [A,B] to degree ord A + ord B - 1
    bool commutation_ok = true;
    bool degree_matched = true;  // ord [A,B] actually sits at the padded degree
    OpZeroVerdict commutation_residual;
    // [Phi_A, p0] = 0
    bool central_ok = true;
    OpZeroVerdict central_residual;
};

PhiLawReport verify_phi_laws(const DiffOperator& a, const DiffOperator& b, const DomainSpec& dom,
                             int samples = 20, std::uint64_t seed = 0);

struct EigenReport {
    bool eigenpair_ok = true;      // (A - lambda) u = 0 on samples
    double eigen_residual = 0.0;
    bool lifted_ok = true;         // (Phi_A - lambda p0^m) U = 0, U = e^{x0} u
    double lifted_residual = 0.0;
};

// Verifies A u = lambda u, then the homogenized form on U(x0, x) = e^{x0} u(x).
EigenReport verify_eigen_correspondence(const DiffOperator& a, double lambda, const Expr& u,
                                        const DomainSpec& dom, int samples = 20,
                                        std::uint64_t seed = 0, double tol = 1e-9);

struct LiftReport {
    bool preconditions_ok = true;
    CommutationReport commutation;      // [F_i, F_j] = 0 for i <= k
    RankReport symbol_rank;             // independence of the full symbols F
    std::vector<DiffOperator> lifted;   // (p0, Phi_F1, ...)
    IntegrableReport integrable;        // checked in n+1 variables, k+1 central
};

// Lifts a commuting, symbol-independent family to the quasi-integrable set
// (p0, Phi_F1, ..., Phi_Fs) in n+1 variables.
LiftReport build_quasi_integrable_lift(const std::vector<DiffOperator>& f, int k,
                                       const DomainSpec& dom, int samples = 20,
                                       std::uint64_t seed = 0);

} // namespace opcalc
