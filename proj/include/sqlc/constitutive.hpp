#pragma once

#include <optional>

#include "sqlc/tensor.hpp"

namespace sqlc {

// Pointwise constitutive operators of the coupled flow / order-parameter
// model. All functions are pure; nothing here touches grids or boundaries.

// q (n x n - I/d) for a unit director n.
QTensor uniaxial(const Vec& n, double q, int d);

// H^(Q) = a Q - c Q Tr(Q^2), the negative gradient of the bulk potential.
QTensor hat_H(const QTensor& Q, double a, double c);

// Slope of the bulk potential in ||Q|| at radius M: c M^3 - a M.
double trunc_slope(double a, double c, double M);

// Sup-norm bound of the truncated molecular field over all of Q-space.
double trunc_sup_bound(double a, double c, double M);

// Truncated H^: equals hat_H inside ||Q|| <= M and continues with constant
// magnitude |trunc_slope| along -Q/||Q|| outside, continuously at the radius.
QTensor hat_H_trunc(const QTensor& Q, double a, double c, double M);

// Bulk potential (c/4)||Q||^4 - (a/2)||Q||^2, or its C^1 affine
// continuation past radius M when a truncation radius is given.
double landau_potential(const QTensor& Q, double a, double c,
                        std::optional<double> M = std::nullopt);

// Co-rotation / stretching of Q by a velocity gradient G = grad u,
// convention G_ij = du_i/dx_j:
//   (xi D + A)(Q + I/d) + (Q + I/d)(xi D - A) - 2 xi (Q + I/d) tr(Q G)
// Result is symmetric; traceless whenever Tr G = 0.
QTensor s_term(const Mat& grad_u, const QTensor& Q, double xi);

// Antisymmetric stress Q H - H Q.
Mat sigma_a(const QTensor& Q, const QTensor& H);

// (grad Q . grad Q)_{kl} = sum_ij d_k Q_ij d_l Q_ij; symmetric PSD.
Mat grad_q_outer(const QGrad& gradQ, int d);

// Elastic stress
//   K [ (Q lap Q - lap Q Q) - grad Q . grad Q ]
//   - xi [ H (Q + I/d) + (Q + I/d) H - 2 (Q + I/d) Tr(Q H) ]
// The caller supplies H = K lap Q + hat_H(Q) consistently.
Mat sigma_ela(const QTensor& Q, const QTensor& H, const QGrad& gradQ,
              const QTensor& lapQ, double K, double xi);

// External alignment field. d = 2: -zeta Q R_{pi/2} Tr[Q Q_inf R_{pi/2}];
// d = 3: zeta (tr(Q^2) Q_inf - tr(Q Q_inf) Q). With a truncation radius the
// value is rescaled to norm M whenever it exceeds M.
QTensor f_ext(const QTensor& Q, const QTensor& Q_inf, double zeta,
              std::optional<double> M = std::nullopt);

// Elastic torque density mu_ij = -2 K sum_{m,l,k} eps_{ilk} Q_lm d_j Q_mk.
// 2D inputs are zero-padded; only row i = 2 (the z row) survives then.
Mat torque_mu(const QTensor& Q, const QGrad& gradQ, double K);

// ell = mu nu for a surface normal nu.
Vec torque_ell(const Mat& mu, const Vec& nu);

// Pointwise integrand of the linear-in-Q surface torque,
//   lambda_i = -2 W sum eps_{ilk} Q_lm Qpref_mk,
// which equals the full elastic torque flux once the anchoring condition
// K d_nu Q = W (Q_pref - Q) is substituted (the quadratic part drops by the
// symmetric Levi-Civita identity).
Vec surface_torque_density(const QTensor& Q, const QTensor& Q_pref, double W);

struct Bounds {
    double q_star;       // smallest radius past which the bulk field is restoring
    double alpha_bound;  // max(|Q_pref|, q_star), the sup-norm a priori bound
};

// q_star = sqrt(a/c) (the alignment field is trace-orthogonal to Q, so only
// the bulk cubic matters); alpha = max(Q_pref_max_norm, q_star).
Bounds compute_bounds(double a, double c, double zeta, double q_pref_max_norm);

}  // namespace sqlc
