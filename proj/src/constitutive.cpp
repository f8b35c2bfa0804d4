#include "sqlc/constitutive.hpp"

#include <cmath>
#include <stdexcept>

namespace sqlc {

QTensor uniaxial(const Vec& n, double q, int d) {
    if (d != 2 && d != 3) throw std::invalid_argument("uniaxial: d must be 2 or 3");
    double nn = n.norm();
    if (std::abs(nn - 1.0) > 1e-10)
        throw std::invalid_argument("uniaxial: director must be a unit vector, |n| = " + std::to_string(nn));
    Mat m = outer(n, n, d) - Mat::identity(d) * (1.0 / d);
    return QTensor::from_symmetric(m * q);
}

QTensor hat_H(const QTensor& Q, double a, double c) {
    double tr2 = contract(Q, Q);  // Tr(Q^2) = ||Q||_F^2 for symmetric Q
    return Q * (a - c * tr2);
}

double trunc_slope(double a, double c, double M) { return c * M * M * M - a * M; }

double trunc_sup_bound(double a, double c, double M) {
    // max over ||Q|| <= M of |a - c s^2| s, then compare with the outer slope.
    double inner = 0.0;
    double s_crit = std::sqrt(a / (3.0 * c));
    if (s_crit <= M) inner = (2.0 * a / 3.0) * s_crit;
    double at_m = std::abs(a - c * M * M) * M;
    return std::max({inner, at_m, std::abs(trunc_slope(a, c, M))});
}

QTensor hat_H_trunc(const QTensor& Q, double a, double c, double M) {
    if (M <= 0.0) throw std::invalid_argument("hat_H_trunc: truncation radius must be positive");
    double s = Q.norm();
    if (s <= M) return hat_H(Q, a, c);
    return Q * (-trunc_slope(a, c, M) / s);
}

double landau_potential(const QTensor& Q, double a, double c, std::optional<double> M) {
    double s2 = contract(Q, Q);
    auto f = [&](double t2) { return 0.25 * c * t2 * t2 - 0.5 * a * t2; };
    if (!M || s2 <= (*M) * (*M)) return f(s2);
    // affine continuation: F(M) + gamma_M (s - M), C^1 at the radius
    double m = *M;
    double gm = trunc_slope(a, c, m);
    return f(m * m) + gm * (std::sqrt(s2) - m);
}

QTensor s_term(const Mat& grad_u, const QTensor& Q, double xi) {
    int d = Q.dim();
    if (grad_u.d != d) throw std::invalid_argument("s_term: gradient dimension mismatch");
    Mat D = grad_u.sym();
    Mat A = grad_u.antisym();
    Mat P = Q.mat() + Mat::identity(d) * (1.0 / d);
    Mat r = mul(D * xi + A, P) + mul(P, D * xi - A) - P * (2.0 * xi * trace_prod(Q.mat(), grad_u));
    return QTensor::from_symmetric(r);
}

Mat sigma_a(const QTensor& Q, const QTensor& H) {
    return mul(Q.mat(), H.mat()) - mul(H.mat(), Q.mat());
}

Mat grad_q_outer(const QGrad& gradQ, int d) {
    Mat r(d);
    for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) {
            double s = 0.0;
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) s += gradQ[static_cast<std::size_t>(k)](i, j) * gradQ[static_cast<std::size_t>(l)](i, j);
            r(k, l) = s;
        }
    return r;
}

Mat sigma_ela(const QTensor& Q, const QTensor& H, const QGrad& gradQ,
              const QTensor& lapQ, double K, double xi) {
    int d = Q.dim();
    Mat r = (mul(Q.mat(), lapQ.mat()) - mul(lapQ.mat(), Q.mat()) - grad_q_outer(gradQ, d)) * K;
    if (xi != 0.0) {
        Mat P = Q.mat() + Mat::identity(d) * (1.0 / d);
        Mat shape = mul(H.mat(), P) + mul(P, H.mat()) - P * (2.0 * trace_prod(Q.mat(), H.mat()));
        r -= shape * xi;
    }
    return r;
}

QTensor f_ext(const QTensor& Q, const QTensor& Q_inf, double zeta, std::optional<double> M) {
    int d = Q.dim();
    if (Q_inf.dim() != d) throw std::invalid_argument("f_ext: Q and Q_inf dimensions differ");
    QTensor r(d);
    if (d == 2) {
        Mat R(2);  // counterclockwise rotation by pi/2
        R(0, 1) = -1.0;
        R(1, 0) = 1.0;
        double phase = trace_prod(mul(Q.mat(), Q_inf.mat()), R);
        r = QTensor::from_symmetric(mul(Q.mat(), R) * (-zeta * phase));
    } else {
        double tr2 = contract(Q, Q);
        double mix = trace_prod(Q.mat(), Q_inf.mat());
        r = QTensor::from_symmetric(Q_inf.mat() * (zeta * tr2) - Q.mat() * (zeta * mix));
    }
    if (M) {
        double n = r.norm();
        if (n > *M) r = r * (*M / n);
    }
    return r;
}

Mat torque_mu(const QTensor& Q, const QGrad& gradQ, double K) {
    Mat mu(3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double s = 0.0;
            for (int l = 0; l < 3; ++l)
                for (int k = 0; k < 3; ++k) {
                    double eps = levi_civita(i, l, k);
                    if (eps == 0.0) continue;
                    for (int m = 0; m < 3; ++m)
                        s += eps * Q(l, m) * gradQ[static_cast<std::size_t>(j)](m, k);
                }
            mu(i, j) = -2.0 * K * s;
        }
    return mu;
}

Vec torque_ell(const Mat& mu, const Vec& nu) { return mul(mu, nu); }

Vec surface_torque_density(const QTensor& Q, const QTensor& Q_pref, double W) {
    Vec lam;
    lam.d = 3;
    for (int i = 0; i < 3; ++i) {
        double s = 0.0;
        for (int l = 0; l < 3; ++l)
            for (int k = 0; k < 3; ++k) {
                double eps = levi_civita(i, l, k);
                if (eps == 0.0) continue;
                for (int m = 0; m < 3; ++m) s += eps * Q(l, m) * Q_pref(m, k);
            }
        lam[i] = -2.0 * W * s;
    }
    return lam;
}

Bounds compute_bounds(double a, double c, double zeta, double q_pref_max_norm) {
    (void)zeta;  // the alignment field satisfies F_ext : Q = 0, so it drops out
    if (c <= 0.0) throw std::invalid_argument("compute_bounds: c <= 0 leaves the potential unbounded");
    if (a <= 0.0) throw std::invalid_argument("compute_bounds: a must be positive");
    Bounds b;
    b.q_star = std::sqrt(a / c);
    b.alpha_bound = std::max(q_pref_max_norm, b.q_star);
    return b;
}

}  // namespace sqlc
