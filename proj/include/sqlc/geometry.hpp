#pragma once

#include <vector>

#include "sqlc/grid.hpp"
#include "sqlc/tensor.hpp"

namespace sqlc {

// Periodic computational box (-L, L)^d; the field solvers run d = 2.
struct Domain {
    double L = 1.0;
    int N = 128;
    int d = 2;

    double h() const { return 2.0 * L / N; }
    Grid grid() const { return Grid(N, L); }
};

// Circular squirmer fixed at the origin of the co-moving frame.
struct SquirmerShape {
    double R = 0.25;
};

struct AnchoringSpec {
    enum class Kind { homeotropic, planar };
    Kind kind = Kind::homeotropic;
    double q_inf = 0.0;  // surface order
    double W = 0.0;      // anchoring strength
};

// Tangential slip magnitude u_sq(theta) = sin(theta) g(theta) where
// g(theta) = sum_k g_k cos^k(theta). The default profile
// v_prop sin(theta)(1 + beta cos(theta)) is g = {v_prop, v_prop beta}.
struct SlipProfile {
    double v_prop = 0.0;
    double beta = 0.0;
    std::vector<double> g_coeffs;  // overrides (v_prop, beta) when non-empty

    double magnitude(double theta) const;
};

// Quadrature mesh on the squirmer circle. Points, inward normals (toward
// the squirmer center) and weights depend only on the shape; the azimuthal
// angle theta and the slip tangent depend on the orientation alpha and are
// refreshed through orient().
struct BoundaryMesh {
    double R = 0.0;
    std::vector<Vec> points;
    std::vector<Vec> nu;        // unit normals, pointing into the squirmer
    std::vector<Vec> tau_unit;  // unit slip tangents, front-to-back; zero at the poles
    std::vector<double> weights;
    std::vector<double> theta;  // azimuthal angle relative to alpha, in [0, pi]

    std::size_t size() const { return points.size(); }
    void orient(const Vec& alpha);
};

BoundaryMesh build_boundary(const SquirmerShape& shape, const Domain& dom, int n_pts,
                            const Vec& alpha = Vec(1.0, 0.0));

// Slip velocity vector at mesh point i: magnitude along tau_unit.
Vec slip_velocity(const Vec& alpha, const BoundaryMesh& mesh, std::size_t i,
                  const SlipProfile& slip);

// Slip velocity extension at an arbitrary point x != 0 (radial extension of
// the surface profile); used by the penalized boundary embedding.
Vec slip_velocity_at(const Vec& x, const Vec& alpha, const SlipProfile& slip);

// Preferred boundary tensor q_inf (n n - I/d) with n = nu (homeotropic) or
// the geometric tangent (planar).
std::vector<QTensor> q_pref_field(const BoundaryMesh& mesh, const AnchoringSpec& anchoring);

// Same preference evaluated at an arbitrary point (radial geometry).
QTensor q_pref_at(const Vec& x, const AnchoringSpec& anchoring);

// Initial order parameter: the boundary preference held fixed within r_star
// of the surface, blended C^1 into Q_far across the band [r_star, 2 r_star].
QTensor initial_q(const Vec& x, const AnchoringSpec& anchoring, const QTensor& Q_far,
                  double R, double r_star);

// Smoothed solid indicator (tanh profile of width eps_s) and the matching
// surface delta |grad chi|, both evaluated analytically on the grid.
struct MaskPair {
    Field chi;
    Field delta_s;
};
MaskPair smoothed_mask(const Domain& dom, const SquirmerShape& shape, double eps_s);

void check_embedding(const Domain& dom, const SquirmerShape& shape);

}  // namespace sqlc
