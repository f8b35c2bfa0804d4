#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "sqlc/constitutive.hpp"
#include "sqlc/dynamics.hpp"

using namespace sqlc;
namespace {
constexpr double kPi = std::numbers::pi;

Simulation make_sim(int N, double W = 1.0, double v_prop = 0.0, double zeta = 2.0,
                    bool body_free = true, double xi = 0.0) {
    Domain dom;
    dom.L = 1.0;
    dom.N = N;
    SquirmerShape shape{0.25};
    MaterialParams mat;
    mat.zeta = zeta;
    mat.xi = xi;
    AnchoringSpec anch;
    anch.kind = AnchoringSpec::Kind::homeotropic;
    anch.q_inf = mat.q_inf();
    anch.W = W;
    SlipProfile slip;
    slip.v_prop = v_prop;
    Numerics num;
    num.body_free = body_free;
    num.n_boundary = 128;
    return Simulation(dom, shape, mat, anch, slip, num);
}

// quintic smoothstep, C^2
double smooth01(double t) {
    t = std::clamp(t, 0.0, 1.0);
    return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}
}  // namespace

TEST_CASE("rigid update") {
    RigidBody b = RigidBody::disk(1.0, 0.25);
    CHECK(b.mass == doctest::Approx(kPi * 0.0625));
    CHECK(b.inertia == doctest::Approx(0.5 * kPi * 0.25 * 0.25 * 0.25 * 0.25));

    // zero loads: only alpha rotates
    RigidBody r = b;
    r.omega = 0.3;
    RigidBody r2 = rigid_update(r, Vec(0.0, 0.0), 0.0, 0.1);
    CHECK(r2.V.norm() == 0.0);
    CHECK(r2.omega == doctest::Approx(0.3));
    CHECK(r2.alpha[0] == doctest::Approx(std::cos(0.03)).epsilon(1e-14));

    // constant force over T: dV = F T / m
    RigidBody f = RigidBody::disk(1.0, 0.25);
    f.mass = 1.0;
    const double T = 1.0;
    const int steps = 200;
    for (int i = 0; i < steps; ++i) f = rigid_update(f, Vec(0.5, 0.0), 0.0, T / steps);
    CHECK(f.V[0] == doctest::Approx(0.5 * T).epsilon(1e-12));

    // omega = pi/(2T) turns alpha from e_x to e_y exactly
    RigidBody w = RigidBody::disk(1.0, 0.25);
    w.omega = kPi / (2.0 * T);
    for (int i = 0; i < steps; ++i) w = rigid_update(w, Vec(0.0, 0.0), 0.0, T / steps);
    CHECK(w.alpha[0] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(w.alpha[1] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(w.alpha.norm() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("stress assembly matches the tensor-core operators") {
    // random band-limited state; the hand-written plane-basis kernels must
    // reproduce sigma_hydro + sigma_ela assembled from the reference ops
    for (double xi : {0.0, 0.4}) {
        Simulation sim = make_sim(32, 0.0, 0.0, 2.0, false, xi);
        Grid g = sim.grid();
        const double k = kPi / g.L;
        FieldSet& f = sim.fields();
        for (int iy = 0; iy < g.N; ++iy)
            for (int ix = 0; ix < g.N; ++ix) {
                double x = g.x(ix), y = g.y(iy);
                std::size_t i = g.idx(ix, iy);
                f.ux[i] = 0.3 * std::cos(k * x) * std::sin(2.0 * k * y);
                f.uy[i] = -0.2 * std::sin(2.0 * k * x) * std::cos(k * y);
                f.q1[i] = 0.25 * std::sin(k * x) * std::sin(k * y);
                f.q2[i] = 0.15 * std::cos(2.0 * k * x) + 0.1 * std::sin(k * y);
            }

        Spectral& sp = sim.spectral();
        Field q1x, q1y, q2x, q2y, l1, l2, uxx, uxy, uyx, uyy;
        sp.deriv_x(f.q1, q1x);
        sp.deriv_y(f.q1, q1y);
        sp.deriv_x(f.q2, q2x);
        sp.deriv_y(f.q2, q2y);
        sp.laplacian(f.q1, l1);
        sp.laplacian(f.q2, l2);
        sp.deriv_x(f.ux, uxx);
        sp.deriv_y(f.ux, uxy);
        sp.deriv_x(f.uy, uyx);
        sp.deriv_y(f.uy, uyy);

        const MaterialParams& mp = sim.material();
        double maxerr = 0.0;
        for (int iy = 3; iy < g.N; iy += 7)
            for (int ix = 1; ix < g.N; ix += 5) {
                std::size_t i = g.idx(ix, iy);
                QTensor Q = QTensor::plane(f.q1[i], f.q2[i]);
                QTensor lap = QTensor::plane(l1[i], l2[i]);
                QGrad grad{Mat(2), Mat(2), Mat(2)};
                grad[0] = QTensor::plane(q1x[i], q2x[i]).mat();
                grad[1] = QTensor::plane(q1y[i], q2y[i]).mat();
                QTensor H = QTensor::project(lap.mat() * mp.K + hat_H(Q, mp.a, mp.c).mat());
                Mat se = sigma_ela(Q, H, grad, lap, mp.K, mp.xi);
                Mat sig(2);
                sig(0, 0) = 2.0 * mp.eta * uxx[i] + se(0, 0);
                sig(0, 1) = mp.eta * (uxy[i] + uyx[i]) + se(0, 1);
                sig(1, 0) = mp.eta * (uyx[i] + uxy[i]) + se(1, 0);
                sig(1, 1) = 2.0 * mp.eta * uyy[i] + se(1, 1);
                Mat got = sim.stress_at(g.x(ix), g.y(iy));  // p = 0 here
                // the xi != 0 kernel moves a pure-trace part into the pressure;
                // compare the deviatoric parts and the antisymmetric part
                double tr_got = 0.5 * (got(0, 0) + got(1, 1));
                double tr_ref = 0.5 * (sig(0, 0) + sig(1, 1));
                maxerr = std::max(maxerr, std::abs((got(0, 0) - tr_got) - (sig(0, 0) - tr_ref)));
                maxerr = std::max(maxerr, std::abs((got(1, 1) - tr_got) - (sig(1, 1) - tr_ref)));
                maxerr = std::max(maxerr, std::abs(got(0, 1) - sig(0, 1)));
                maxerr = std::max(maxerr, std::abs(got(1, 0) - sig(1, 0)));
                if (xi == 0.0) maxerr = std::max(maxerr, std::abs(tr_got - tr_ref));
            }
        CHECK(maxerr <= 1e-11);
    }
}

TEST_CASE("constant state gives zero traction") {
    Simulation sim = make_sim(64, 1.0, 0.0, 2.0, false);
    sim.set_uniform_q(QTensor::plane(0.21, -0.13));
    TractionResult tr = sim.traction();
    CHECK(tr.force.norm() <= 1e-11);
    CHECK(std::abs(tr.torque_hydro) <= 1e-11);
    // constant Q against the circle mean of Q_pref vanishes analytically
    CHECK(std::abs(tr.torque_ell) <= 1e-11);
}

TEST_CASE("couette torque against the annulus formula") {
    Simulation sim = make_sim(128, 0.0, 0.0, 0.0, false);
    Grid g = sim.grid();
    FieldSet& f = sim.fields();
    sim.set_uniform_q(QTensor(2));

    const double R1 = 0.25, R2 = 0.8, Om = 1.0;
    const double B = Om * R1 * R1 * R2 * R2 / (R2 * R2 - R1 * R1);
    const double A = -B / (R2 * R2);
    for (int iy = 0; iy < g.N; ++iy)
        for (int ix = 0; ix < g.N; ++ix) {
            double x = g.x(ix), y = g.y(iy);
            double r = std::sqrt(x * x + y * y);
            double utheta;
            if (r < 1e-12) {
                utheta = 0.0;
            } else {
                double couette = A * r + B / r;
                double rigid = Om * r;
                double sin_core = smooth01((r - 0.15) / 0.07);       // rigid core below 0.15
                double cut = 1.0 - smooth01((r - 0.55) / 0.25);      // fade out by 0.8
                utheta = (rigid * (1.0 - sin_core) + couette * sin_core) * cut;
            }
            std::size_t i = g.idx(ix, iy);
            if (r < 1e-12) {
                f.ux[i] = 0.0;
                f.uy[i] = 0.0;
            } else {
                f.ux[i] = -utheta * y / r;
                f.uy[i] = utheta * x / r;
            }
        }

    TractionResult tr = sim.traction();
    const double T_exact = -4.0 * kPi * sim.material().eta * B;
    CHECK(tr.torque_hydro == doctest::Approx(T_exact).epsilon(0.05));
    CHECK(tr.torque_hydro < 0.0);  // retarding for Om > 0
    CHECK(tr.force.norm() <= 0.05 * std::abs(T_exact) / R1);
}

TEST_CASE("equilibrium fixed point is preserved") {
    Simulation sim = make_sim(32, 0.0, 0.0, 2.0, true);
    MaterialParams mp = sim.material();
    sim.set_uniform_q(mp.Q_equilibrium(2));
    double q1_0 = sim.fields().q1[0];
    for (int s = 0; s < 20; ++s) sim.step();
    CHECK(Spectral::max_abs(sim.fields().ux) <= 1e-13);
    CHECK(Spectral::max_abs(sim.fields().uy) <= 1e-13);
    double dq = 0.0;
    for (double v : sim.fields().q1) dq = std::max(dq, std::abs(v - q1_0));
    CHECK(dq <= 1e-13);
    CHECK(sim.body().V.norm() <= 1e-13);
    CHECK(std::abs(sim.body().omega) <= 1e-13);
}

TEST_CASE("cfl guard") {
    Simulation sim = make_sim(32);
    CHECK_THROWS_AS(sim.step(1e3), StepError);
}

TEST_CASE("passive dissipation and maximum principle, short run") {
    Simulation sim = make_sim(64, 1.0, 0.0, 0.0, false);
    sim.set_equilibrium_blend();
    sim.add_random_q(1234, 0.35);
    double E = sim.total_energy();
    const double E0 = E;
    bool mono = true;
    for (int s = 0; s < 60; ++s) {
        sim.step(0.9 * sim.auto_dt());
        double En = sim.total_energy();
        if (En > E + 1e-3 * std::abs(E0)) mono = false;
        E = En;
        CHECK(!sim.max_q_violated(0.05));
    }
    CHECK(mono);
    CHECK(E < E0);
}

TEST_CASE("energy identity residual, passive run") {
    Simulation sim = make_sim(64, 1.0, 0.0, 0.0, false);
    sim.set_equilibrium_blend();
    sim.add_random_q(77, 0.3);
    sim.filter_state();
    double dt = 0.1 * sim.auto_dt();
    // let the stiffest grid-scale content of the blend relax first
    while (sim.fields().time < 0.3) sim.step(dt);
    double Eprev = sim.total_energy();
    double Dprev = sim.dissipation();
    double worst = 0.0;
    for (int s = 0; s < 40; ++s) {
        sim.step(dt);
        double En = sim.total_energy();
        double Dn = sim.dissipation();
        double dEdt = (En - Eprev) / dt;
        double Dmid = 0.5 * (Dn + Dprev);
        double resid = std::abs(dEdt + Dmid);
        worst = std::max(worst, resid / std::max(std::abs(dEdt), Dmid));
        Eprev = En;
        Dprev = Dn;
    }
    CHECK(worst <= 0.02);
}
