#pragma once

#include <stdexcept>
#include <string>

#include "sqlc/constitutive.hpp"
#include "sqlc/tensor.hpp"

namespace sqlc {

// Desk-scale material constants of the coupled model.
struct MaterialParams {
    double rho = 1.0;    // fluid density
    double eta = 1.0;    // viscosity
    double K = 0.1;      // elastic constant
    double xi = 0.0;     // shape / tumbling parameter
    double Gamma = 1.0;  // relaxation rate
    double a = 0.4;      // bulk potential, quadratic coefficient
    double c = 0.8;      // bulk potential, quartic coefficient
    double zeta = 2.0;   // alignment rate
    double W = 1.0;      // anchoring strength
    double rho_body = 1.0;  // squirmer density (mass = rho_body |P|)

    void validate() const {
        auto req = [](bool ok, const char* what) {
            if (!ok) throw std::invalid_argument(std::string("MaterialParams: ") + what);
        };
        req(a > 0.0, "a must be positive");
        req(c > 0.0, "c must be positive");
        req(eta > 0.0, "eta must be positive");
        req(Gamma > 0.0, "Gamma must be positive");
        req(K > 0.0, "K must be positive");
        req(rho > 0.0, "rho must be positive");
        req(W >= 0.0, "W must be non-negative");
        req(zeta >= 0.0, "zeta must be non-negative");
        req(rho_body > 0.0, "rho_body must be positive");
    }

    // equilibrium order sqrt(a/c)
    double q_inf() const { return std::sqrt(a / c); }

    // far-field tensor q_inf (e_x x e_x - I/d), as written
    QTensor Q_inf(int d) const {
        Vec ex = d == 2 ? Vec(1.0, 0.0) : Vec(1.0, 0.0, 0.0);
        return uniaxial(ex, q_inf(), d);
    }

    // Bulk-equilibrium far field: the multiple of Q_inf whose Frobenius norm
    // is sqrt(a/c), i.e. the actual minimizer of the potential along e_x.
    // In 2D the plain Q_inf has norm q_inf/sqrt(2) and is not a minimizer.
    QTensor Q_equilibrium(int d) const {
        QTensor q = Q_inf(d);
        return q * (q_inf() / q.norm());
    }
};

// Truncation of the bulk nonlinearities at radius M.
struct TruncationParams {
    double M;
    double gamma_M;  // slope of the bulk potential in ||Q|| at the radius
    double Gamma_M;  // sup bound for the truncated molecular field

    static TruncationParams make(double a, double c, double M) {
        if (M <= 0.0) throw std::invalid_argument("TruncationParams: M must be positive");
        TruncationParams t;
        t.M = M;
        t.gamma_M = trunc_slope(a, c, M);
        t.Gamma_M = trunc_sup_bound(a, c, M);
        return t;
    }
};

}  // namespace sqlc
