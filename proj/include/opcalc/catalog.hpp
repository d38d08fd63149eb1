#pragma once

#include "opcalc/diffop.hpp"

#include <string>

namespace opcalc {

// A named operator family together with its domain and central count.
struct System {
    std::string name;
    DomainSpec dom;
    std::vector<std::string> op_names;
    std::vector<DiffOperator> ops;
    int k = 1;
};

// Kepler problem in cartesian coordinates (x1,x2,x3), K = R^3 minus the
// origin: H = (p1^2+p2^2+p3^2)/2 - alpha/r and the angular momentum
// components; k = 1.
System kepler(double alpha = 1.0);

// Free rigid body in Euler angles (phi,theta,psi) = (x1,x2,x3):
// H = (G1^2/I1 + G2^2/I2 + G3^2/I3)/2 with the body-frame angular momenta
// G_i and space-frame M_x, M_y, M_z; invariants (H, M^2; M_x, M_y), k = 2.
System rigid_body(double i1, double i2, double i3);

// Generic heavy top: rigid-body kinetic part plus field * cos(theta). Not
// integrable when i1 != i2; used as the negative control.
System top(double i1, double i2, double i3, double field);

// Symmetric top in a gravitational field (i1 = i2): set (H, M_z, G3), n=k=3.
System symmetric_top(double i1, double i3, double field);

// Body-frame angular momentum operators of the rigid body.
DiffOperator rigid_gamma(int i);
// Space-frame angular momentum operators (1=x, 2=y, 3=z).
DiffOperator rigid_m(int i);

// Harmonic oscillator: H = sum omega_i (p_i^2 + x_i^2)/2 and the n commuting
// blocks (p_i^2 + x_i^2)/2; the set is the blocks, k = n.
System oscillator(const std::vector<double>& omega);

// Heat operator in variables (t, xi_1..xi_n) = (x1, x2..x_{n+1}):
// H = p_t - Laplacian_xi + U(xi) with separable U = sum u_terms[i](xi_{i+1});
// each u_terms[i] is written in the single variable x1 and shifted into
// place. The set is the Liouville blocks (p_t, -p_{xi_i}^2 + U_i), k = n+1.
System heat_operator(const std::vector<Expr>& u_terms);

// Appendix pair in n = 1: W1 = sum f[i] p^i, W2 = sum g[i] p^i, with leading
// coefficients 1 (f.back() and g.back() must be the constant 1).
System appendix_pair(const std::vector<Expr>& f, const std::vector<Expr>& g);

// Convenience first-order pair (p + f, p + g).
System appendix_pair_first_order(const Expr& f, const Expr& g);

// All systems exercised by the verification driver, under default parameters.
std::vector<System> default_catalog();

} // namespace opcalc
