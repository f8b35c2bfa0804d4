#pragma once

#include <functional>
#include <optional>
#include <string>

#include "sqlc/fields.hpp"
#include "sqlc/geometry.hpp"
#include "sqlc/params.hpp"
#include "sqlc/spectral.hpp"

namespace sqlc {

// Numerical knobs of the time stepper.
struct Numerics {
    double dt = 0.0;            // 0 selects the automatic CFL/reaction limit
    double cfl = 0.5;           // advective CFL fraction
    double reaction_safety = 0.25;
    double eps_s_over_h = 3.0;  // smoothed-interface width in grid spacings
    double pen_factor = 1.0;    // penalization strength = pen_factor / dt
    int n_boundary = 256;       // quadrature points on the squirmer circle
    bool dealias = true;
    bool truncate = false;      // use the truncated bulk operators
    double trunc_radius_factor = 5.0;  // M = factor * alpha_bound
    bool body_free = true;      // evolve V, omega, alpha from the balances
};

struct EnergyReport {
    double E = 0.0;         // total energy
    double D = 0.0;         // dissipation
    double input = 0.0;     // surface slip power + alignment-field input
    double dEdt = 0.0;      // finite-difference energy rate
    double residual = 0.0;  // |dE/dt + D - input|
};

struct TractionResult {
    Vec force{0.0, 0.0};    // on the body
    double torque = 0.0;    // on the body, z component, includes the elastic ell term
    double torque_hydro = 0.0;
    double torque_ell = 0.0;
    double torque_scale = 0.0;  // quadrature L1 scale of the integrand
};

struct StepError : std::runtime_error {
    long step_index;
    StepError(long idx, const std::string& what) : std::runtime_error(what), step_index(idx) {}
};

// One squirmer in one periodic box: owns the state, the spectral workspace,
// the embedded-boundary fields, and the time stepper. A single logical owner
// mutates an instance; diagnostics read the current state.
class Simulation {
  public:
    Simulation(const Domain& dom, const SquirmerShape& shape, const MaterialParams& mat,
               const AnchoringSpec& anchoring, const SlipProfile& slip, const Numerics& num);

    const FieldSet& fields() const { return f_; }
    FieldSet& fields() { return f_; }
    const RigidBody& body() const { return body_; }
    RigidBody& body() { return body_; }
    const BoundaryMesh& mesh() const { return mesh_; }
    const MaterialParams& material() const { return mat_; }
    const Numerics& numerics() const { return num_; }
    const Grid& grid() const { return f_.grid; }
    const MaskPair& masks() const { return masks_; }
    Spectral& spectral() { return sp_; }
    long step_count() const { return step_count_; }

    // Initial data helpers.
    void set_uniform_q(const QTensor& q);
    void set_equilibrium_blend();  // anchored near the body, bulk equilibrium far away
    void add_random_q(unsigned seed, double rel_amplitude);  // keeps max||Q|| <= alpha
    void filter_state();  // restrict the state to the stepper's dealiased subspace

    // Optional volume forcings (manufactured-solution harness and imposed
    // body forces). force_q returns the symmetric traceless forcing tensor.
    std::function<Vec(double x, double y, double t)> force_u;
    std::function<QTensor(double x, double y, double t)> force_q;

    // Uniformly distributed external force on the squirmer, balanced by the
    // explicit pressure slope F / |Pi|.
    void set_external_force(const Vec& F);

    double auto_dt() const;
    void step(double dt = 0.0);  // dt = 0 uses auto_dt()

    TractionResult traction();
    EnergyReport energy_report(double E_prev, double dt);  // rate from the previous energy
    double total_energy();
    double dissipation();
    double input_power();
    double max_q_norm() const;
    bool max_q_violated(double tol_disc = 0.05) const;
    Bounds bounds() const { return bounds_; }

    // Mean force residual of the latest step expressed as a pressure slope;
    // the full slope estimate is p_slope + this.
    Vec mean_force_residual() const { return mean_force_residual_; }

    // Relative one-step update max-norm over dt, for steady-state detection.
    double last_update_norm() const { return last_update_norm_; }

    // Interpolated total stress at an arbitrary point (periodic bicubic).
    Mat stress_at(double x, double y);

  private:
    void refresh_derived();
    void refresh_slip_target();
    void check_finite(const char* where) const;

    Domain dom_;
    SquirmerShape shape_;
    MaterialParams mat_;
    AnchoringSpec anchoring_;
    SlipProfile slip_;
    Numerics num_;
    Bounds bounds_;
    double trunc_M_ = 0.0;

    FieldSet f_;
    RigidBody body_;
    Spectral sp_;
    BoundaryMesh mesh_;
    MaskPair masks_;
    Field qp1_, qp2_;          // preferred-tensor extension components
    std::vector<QTensor> qpref_mesh_;
    Field slip_x_, slip_y_;    // slip target extension, for the current alpha
    Vec slip_alpha_{1.0, 0.0};
    bool slip_dirty_ = true;

    Vec fext_force_{0.0, 0.0};

    // derived fields of the current state
    bool derived_dirty_ = true;
    Field dux_dx_, dux_dy_, duy_dx_, duy_dy_;
    Field dq1_dx_, dq1_dy_, dq2_dx_, dq2_dy_;
    Field lap_q1_, lap_q2_;
    Field h1_, h2_;                    // molecular field components
    Field se11_, se12_, se21_, se22_;  // elastic stress
    Field div_se_x_, div_se_y_;

    Vec mean_force_residual_{0.0, 0.0};
    double last_update_norm_ = 0.0;
    long step_count_ = 0;
};

// Bicubic periodic interpolation on the grid.
double interp_field(const Grid& g, const Field& f, double x, double y);

// Explicit rigid-body update: Euler on V and omega, exact rotation on alpha.
RigidBody rigid_update(const RigidBody& body, const Vec& force, double torque, double dt);

}  // namespace sqlc
