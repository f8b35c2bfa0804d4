#include "sqlc/geometry.hpp"

#include "sqlc/constitutive.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sqlc {

namespace {
constexpr double kPi = std::numbers::pi;

// theta and the front-to-back unit tangent (alpha x nu) x nu / sin(theta)
// for a surface point with unit radial direction rhat = -nu.
void angle_and_tangent(const Vec& rhat, const Vec& alpha, double& theta, Vec& tau) {
    double ca = dot(rhat, alpha);
    ca = std::max(-1.0, std::min(1.0, ca));
    theta = std::acos(ca);
    Vec nu = rhat * -1.0;
    Vec t = cross(cross(alpha, nu), nu);  // magnitude sin(theta)
    double n = t.norm();
    if (n < 1e-14) {
        tau = Vec::with_dim({0.0, 0.0, 0.0}, rhat.d);
    } else {
        tau = Vec::with_dim({t[0] / n, t[1] / n, t[2] / n}, rhat.d);
    }
}
}  // namespace

double SlipProfile::magnitude(double theta) const {
    double s = std::sin(theta);
    double c = std::cos(theta);
    if (!g_coeffs.empty()) {
        double g = 0.0;
        for (std::size_t k = g_coeffs.size(); k-- > 0;) g = g * c + g_coeffs[k];
        return s * g;
    }
    return v_prop * s * (1.0 + beta * c);
}

void BoundaryMesh::orient(const Vec& alpha) {
    if (std::abs(alpha.norm() - 1.0) > 1e-10)
        throw std::invalid_argument("BoundaryMesh::orient: alpha must be a unit vector");
    theta.resize(points.size());
    tau_unit.resize(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        Vec rhat = points[i] * (1.0 / R);
        angle_and_tangent(rhat, alpha, theta[i], tau_unit[i]);
    }
}

BoundaryMesh build_boundary(const SquirmerShape& shape, const Domain& dom, int n_pts, const Vec& alpha) {
    if (n_pts < 16) throw std::invalid_argument("build_boundary: need at least 16 quadrature points");
    if (shape.R <= 0.0) throw std::invalid_argument("build_boundary: radius must be positive");
    check_embedding(dom, shape);

    BoundaryMesh mesh;
    mesh.R = shape.R;
    mesh.points.resize(static_cast<std::size_t>(n_pts));
    mesh.nu.resize(static_cast<std::size_t>(n_pts));
    mesh.weights.assign(static_cast<std::size_t>(n_pts), 2.0 * kPi * shape.R / n_pts);
    for (int i = 0; i < n_pts; ++i) {
        double phi = 2.0 * kPi * i / n_pts;
        double cx = std::cos(phi), cy = std::sin(phi);
        mesh.points[static_cast<std::size_t>(i)] = Vec(shape.R * cx, shape.R * cy);
        mesh.nu[static_cast<std::size_t>(i)] = Vec(-cx, -cy);
    }
    mesh.orient(alpha);
    return mesh;
}

Vec slip_velocity(const Vec& alpha, const BoundaryMesh& mesh, std::size_t i, const SlipProfile& slip) {
    (void)alpha;  // already baked into theta/tau by orient()
    return mesh.tau_unit[i] * slip.magnitude(mesh.theta[i]);
}

Vec slip_velocity_at(const Vec& x, const Vec& alpha, const SlipProfile& slip) {
    double r = x.norm();
    if (r < 1e-14) return Vec(0.0, 0.0);
    Vec rhat = x * (1.0 / r);
    double theta;
    Vec tau;
    angle_and_tangent(rhat, alpha, theta, tau);
    return tau * slip.magnitude(theta);
}

std::vector<QTensor> q_pref_field(const BoundaryMesh& mesh, const AnchoringSpec& anchoring) {
    std::vector<QTensor> q(mesh.size());
    for (std::size_t i = 0; i < mesh.size(); ++i) {
        Vec n = mesh.nu[i];
        if (anchoring.kind == AnchoringSpec::Kind::planar) n = Vec(-n[1], n[0]);  // geometric tangent
        q[i] = uniaxial(n, anchoring.q_inf, 2);
    }
    return q;
}

QTensor q_pref_at(const Vec& x, const AnchoringSpec& anchoring) {
    double r = x.norm();
    if (r < 1e-14) return QTensor(2);
    Vec n(x[0] / r, x[1] / r);
    if (anchoring.kind == AnchoringSpec::Kind::planar) n = Vec(-n[1], n[0]);
    return uniaxial(n, anchoring.q_inf, 2);
}

QTensor initial_q(const Vec& x, const AnchoringSpec& anchoring, const QTensor& Q_far,
                  double R, double r_star) {
    double s = x.norm() - R;  // signed distance from the surface
    double w;
    if (s <= r_star) {
        w = 1.0;
    } else if (s >= 2.0 * r_star) {
        w = 0.0;
    } else {
        double t = (s - r_star) / r_star;
        w = 1.0 - t * t * (3.0 - 2.0 * t);  // C^1 blend
    }
    if (w == 0.0) return Q_far;
    QTensor qp = q_pref_at(x, anchoring);
    return qp * w + Q_far * (1.0 - w);
}

MaskPair smoothed_mask(const Domain& dom, const SquirmerShape& shape, double eps_s) {
    check_embedding(dom, shape);
    if (eps_s < 1.5 * dom.h())
        throw std::invalid_argument("smoothed_mask: interface width below 1.5 h is under-resolved");
    Grid g = dom.grid();
    MaskPair mp{g.make_field(), g.make_field()};
    for (int iy = 0; iy < g.N; ++iy)
        for (int ix = 0; ix < g.N; ++ix) {
            double x = g.x(ix), y = g.y(iy);
            double r = std::sqrt(x * x + y * y);
            double t = (r - shape.R) / eps_s;
            std::size_t i = g.idx(ix, iy);
            mp.chi[i] = 0.5 * (1.0 - std::tanh(t));
            double sech = 1.0 / std::cosh(t);
            mp.delta_s[i] = sech * sech / (2.0 * eps_s);
        }
    return mp;
}

void check_embedding(const Domain& dom, const SquirmerShape& shape) {
    if (!(shape.R + 2.0 * dom.h() < dom.L))
        throw std::invalid_argument("geometry: squirmer must close strictly inside the box (R + 2h < L)");
}

}  // namespace sqlc
