#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "sqlc/constitutive.hpp"
#include "sqlc/geometry.hpp"
#include "sqlc/spectral.hpp"

using namespace sqlc;
namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("boundary mesh invariants") {
    Domain dom;
    dom.L = 1.0;
    dom.N = 128;
    SquirmerShape shape{0.25};

    CHECK_THROWS_AS(build_boundary(shape, dom, 8), std::invalid_argument);

    BoundaryMesh mesh = build_boundary(shape, dom, 64);
    double wsum = 0.0;
    for (double w : mesh.weights) wsum += w;
    CHECK(wsum == doctest::Approx(2.0 * kPi * 0.25).epsilon(1e-12));

    // inward normal at theta = 0 is (-1, 0); nu . tau = 0 pointwise
    CHECK(mesh.nu[0][0] == doctest::Approx(-1.0));
    CHECK(mesh.nu[0][1] == doctest::Approx(0.0));
    for (std::size_t i = 0; i < mesh.size(); ++i) {
        CHECK(std::abs(dot(mesh.nu[i], mesh.tau_unit[i])) <= 1e-14);
        CHECK(mesh.nu[i].norm() == doctest::Approx(1.0).epsilon(1e-14));
    }

    // spectral accuracy of the circle quadrature on a smooth integrand
    auto integrate = [&](const BoundaryMesh& m) {
        double s = 0.0;
        for (std::size_t i = 0; i < m.size(); ++i) {
            double phi = std::atan2(m.points[i][1], m.points[i][0]);
            s += m.weights[i] * std::exp(std::cos(phi)) * std::sin(phi) * std::sin(phi);
        }
        return s;
    };
    double coarse = integrate(build_boundary(shape, dom, 32));
    double fine = integrate(build_boundary(shape, dom, 256));
    CHECK(std::abs(coarse - fine) <= 1e-12 * std::max(1.0, std::abs(fine)));

    // embedding violation
    Domain tiny;
    tiny.L = 0.3;
    tiny.N = 16;
    CHECK_THROWS_AS(build_boundary(shape, tiny, 64), std::invalid_argument);
}

TEST_CASE("slip profile") {
    Domain dom;
    SquirmerShape shape{0.25};
    BoundaryMesh mesh = build_boundary(shape, dom, 128);
    SlipProfile slip;
    slip.v_prop = 1.0;
    slip.beta = 0.0;

    Vec alpha(1.0, 0.0);
    Vec sum(0.0, 0.0);
    for (std::size_t i = 0; i < mesh.size(); ++i) {
        Vec u = slip_velocity(alpha, mesh, i, slip);
        CHECK(std::abs(dot(u, mesh.nu[i])) <= 1e-14);  // tangency
        sum = sum + u * mesh.weights[i];
    }
    // front-back symmetric profile: net slip is collinear with alpha
    CHECK(std::abs(sum[1]) <= 1e-12);

    // poles: theta = 0 and pi give zero slip
    CHECK(slip_velocity(alpha, mesh, 0, slip).norm() <= 1e-13);
    CHECK(slip_velocity(alpha, mesh, mesh.size() / 2, slip).norm() <= 1e-13);

    // theta = pi/2: magnitude v_prop; beta does not matter there
    std::size_t quarter = mesh.size() / 4;
    CHECK(mesh.theta[quarter] == doctest::Approx(kPi / 2).epsilon(1e-12));
    CHECK(slip_velocity(alpha, mesh, quarter, slip).norm() == doctest::Approx(1.0).epsilon(1e-12));
    SlipProfile slip5;
    slip5.v_prop = 1.0;
    slip5.beta = 5.0;
    CHECK(slip_velocity(alpha, mesh, quarter, slip5).norm() == doctest::Approx(1.0).epsilon(1e-12));

    // polynomial profile: g = {1, 0.5} equals v_prop = 1, beta = 0.5
    SlipProfile poly;
    poly.g_coeffs = {1.0, 0.5};
    SlipProfile ref;
    ref.v_prop = 1.0;
    ref.beta = 0.5;
    for (double th : {0.3, 1.1, 2.7}) CHECK(poly.magnitude(th) == doctest::Approx(ref.magnitude(th)).epsilon(1e-14));
}

TEST_CASE("preferred anchoring tensors") {
    Domain dom;
    SquirmerShape shape{0.25};
    BoundaryMesh mesh = build_boundary(shape, dom, 64);
    const double q_inf = std::sqrt(0.5);

    AnchoringSpec homeo;
    homeo.kind = AnchoringSpec::Kind::homeotropic;
    homeo.q_inf = q_inf;
    auto qh = q_pref_field(mesh, homeo);
    // nu = (-1, 0) gives q_inf diag(1/2, -1/2); sign of the director is irrelevant
    CHECK(qh[0](0, 0) == doctest::Approx(q_inf * 0.5).epsilon(1e-13));
    CHECK(qh[0](1, 1) == doctest::Approx(-q_inf * 0.5).epsilon(1e-13));

    AnchoringSpec plan;
    plan.kind = AnchoringSpec::Kind::planar;
    plan.q_inf = q_inf;
    auto qp = q_pref_field(mesh, plan);
    CHECK(qp[0](0, 0) == doctest::Approx(-q_inf * 0.5).epsilon(1e-13));
    CHECK(qp[0](1, 1) == doctest::Approx(q_inf * 0.5).epsilon(1e-13));

    for (std::size_t i = 0; i < mesh.size(); ++i) {
        CHECK(qh[i].norm() == doctest::Approx(q_inf / std::sqrt(2.0)).epsilon(1e-13));
        CHECK(qp[i].norm() == doctest::Approx(q_inf / std::sqrt(2.0)).epsilon(1e-13));
    }
}

TEST_CASE("initial blend") {
    AnchoringSpec anch;
    anch.kind = AnchoringSpec::Kind::homeotropic;
    anch.q_inf = std::sqrt(0.5);
    QTensor far = uniaxial(Vec(1.0, 0.0), 1.0, 2);
    const double R = 0.25, rs = 0.1875;

    // on the surface: the preferred tensor
    Vec xs(0.0, R);
    CHECK((initial_q(xs, anch, far, R, rs) - q_pref_at(xs, anch)).norm() <= 1e-14);

    // far away: the far field
    Vec xf(0.0, R + 2.5 * rs);
    CHECK((initial_q(xf, anch, far, R, rs) - far).norm() == 0.0);

    // radial derivative vanishes at the surface (blend is 1 inside r_star)
    Vec x1(0.0, R + 1e-4), x2(0.0, R + 2e-4);
    CHECK((initial_q(x1, anch, far, R, rs) - initial_q(x2, anch, far, R, rs)).norm() <= 1e-12);
}

TEST_CASE("smoothed masks") {
    Domain dom;
    dom.L = 1.0;
    dom.N = 128;
    SquirmerShape shape{0.25};
    const double h = dom.h();

    CHECK_THROWS_AS(smoothed_mask(dom, shape, 1.0 * h), std::invalid_argument);

    MaskPair mp = smoothed_mask(dom, shape, 3.0 * h);
    Grid g = dom.grid();
    // far field: open fluid
    CHECK(mp.chi[g.idx(0, 0)] <= 1e-10);
    CHECK(mp.delta_s[g.idx(0, 0)] <= 1e-10);
    // center: solid
    CHECK(mp.chi[g.idx(g.N / 2, g.N / 2)] == doctest::Approx(1.0).epsilon(1e-3));

    double area = Spectral::mean(mp.chi) * g.box_area();
    double perim = Spectral::mean(mp.delta_s) * g.box_area();
    CHECK(area == doctest::Approx(kPi * 0.25 * 0.25).epsilon(0.02));
    CHECK(perim == doctest::Approx(2.0 * kPi * 0.25).epsilon(0.02));
}
