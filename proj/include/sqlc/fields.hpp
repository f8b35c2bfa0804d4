#pragma once

#include "sqlc/grid.hpp"
#include "sqlc/tensor.hpp"

namespace sqlc {

// Discrete state of the coupled system on one periodic grid. The order
// parameter is stored in the symmetric traceless basis
//   Q = [[q1, q2], [q2, -q1]],
// so symmetry and tracelessness hold exactly at every node. The pressure
// is the periodic part; any linear part m . x is carried explicitly in
// p_slope (zero unless an external force is imposed).
struct FieldSet {
    Grid grid;
    Field ux, uy;
    Field p;
    Vec p_slope{0.0, 0.0};
    Field q1, q2;
    double time = 0.0;

    FieldSet() = default;
    explicit FieldSet(const Grid& g)
        : grid(g), ux(g.make_field()), uy(g.make_field()), p(g.make_field()),
          q1(g.make_field()), q2(g.make_field()) {}

    QTensor q_at(std::size_t i) const { return QTensor::plane(q1[i], q2[i]); }
    void set_q(std::size_t i, const QTensor& q) {
        q1[i] = q(0, 0);
        q2[i] = q(0, 1);
    }
};

// Rigid squirmer state in the co-moving frame.
struct RigidBody {
    Vec V{0.0, 0.0};
    double omega = 0.0;
    Vec alpha{1.0, 0.0};
    double mass = 1.0;
    double inertia = 1.0;
    Vec dVdt{0.0, 0.0};  // lagged frame acceleration, zero on the first step

    static RigidBody disk(double rho_body, double R) {
        RigidBody b;
        const double pi = 3.14159265358979323846;
        b.mass = rho_body * pi * R * R;
        b.inertia = 0.5 * rho_body * pi * R * R * R * R;
        return b;
    }
};

}  // namespace sqlc
