#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "scqc/errors.hpp"
#include "scqc/geometry.hpp"
#include "test_util.hpp"

using namespace scqc;

namespace {

SpaceCurve circle_curve(double radius, int order = 16) {
    auto path = [&](double u) {
        const double th = 2.0 * M_PI * u;
        return Vec3(radius * std::cos(th), radius * std::sin(th), 0.0);
    };
    SpaceCurve c = fit_bezier(path, order, 256);
    c.control_points.back() = c.control_points.front();
    c.closed = true;
    return c;
}

SpaceCurve helix_curve(double a, double b, double turns = 1.0, int order = 18) {
    auto path = [&](double u) {
        const double th = 2.0 * M_PI * turns * u;
        return Vec3(a * std::cos(th), a * std::sin(th), b * th);
    };
    return fit_bezier(path, order, 256);
}

} // namespace

TEST_CASE("arc length of a straight segment") {
    const SpaceCurve c = SpaceCurve::create({{0, 0, 0}, {2, 0, 0}});
    const ArcLengthMap map = arclength_map(c, 64);
    CHECK(map.total_length() == doctest::Approx(2.0).epsilon(1e-12));
    for (double x : {0.0, 0.25, 0.5, 1.0})
        CHECK(map.s_of_x(x) == doctest::Approx(2.0 * x).epsilon(1e-10));
}

TEST_CASE("arc length of a degree-16 circle fit matches the circumference") {
    const SpaceCurve c = circle_curve(1.0);
    const ArcLengthMap map = arclength_map(c);
    CHECK(std::abs(map.total_length() - 2.0 * M_PI) < 1e-3);
}

TEST_CASE("inverse arc-length map round trip") {
    std::mt19937_64 rng(17);
    const SpaceCurve c = test::random_smooth_curve(rng, 12, false);
    const ArcLengthMap map = arclength_map(c);
    std::uniform_real_distribution<double> us(0.0, map.total_length());
    for (int i = 0; i < 100; ++i) {
        const double s = us(rng);
        CHECK(std::abs(map.s_of_x(map.x_of_s(s)) - s) < 1e-8);
    }
}

TEST_CASE("unit speed after arc-length reparameterization") {
    std::mt19937_64 rng(19);
    const SpaceCurve c = test::random_smooth_curve(rng, 12, false);
    const ArcLengthMap map = arclength_map(c);
    detail::CurveEvaluator ev(c);
    const double L = map.total_length();
    // |dr/ds| from central differences of positions sampled uniformly in s
    const double h = L / 16384.0;
    for (int k = 1; k <= 63; ++k) {
        const double s = L * k / 64.0;
        const Vec3 fwd = ev.position(map.x_of_s(s + h));
        const Vec3 bwd = ev.position(map.x_of_s(s - h));
        CHECK(std::abs((fwd - bwd).norm() / (2 * h) - 1.0) < 1e-6);
    }
}

TEST_CASE("degenerate parameterization is rejected") {
    const SpaceCurve c = SpaceCurve::create({{0, 0, 0}, {0, 0, 0}, {0, 0, 0}});
    CHECK_THROWS_AS(arclength_map(c, 64), error);
}

TEST_CASE("circle frame: kappa = 1/R, tau = 0") {
    const SpaceCurve c = circle_curve(1.0);
    const GeometryTrace tr = frenet_trace(c, 512);
    for (int k = 0; k < tr.samples; ++k) {
        CHECK(std::abs(tr.curvature[k] - 1.0) < 1e-4);
        CHECK(std::abs(tr.torsion[k]) < 1e-4);
    }
}

TEST_CASE("helix frame matches textbook formulas") {
    // kappa = a/(a^2+b^2) = 0.8, tau = b/(a^2+b^2) = 0.4 for a=1, b=0.5
    const SpaceCurve c = helix_curve(1.0, 0.5);
    const GeometryTrace tr = frenet_trace(c, 512);
    for (int k = 8; k < tr.samples - 8; ++k) {
        CHECK(std::abs(tr.curvature[k] - 0.8) < 1e-3);
        CHECK(std::abs(tr.torsion[k] - 0.4) < 1e-3);
    }
}

TEST_CASE("frame orthonormality invariants") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 5; ++trial) {
        const SpaceCurve c = test::random_smooth_curve(rng, 12);
        const GeometryTrace tr = frenet_trace(c, 256);
        for (int k = 0; k < tr.samples; ++k) {
            CHECK(std::abs(tr.tangent[k].norm() - 1.0) < 1e-8);
            CHECK(std::abs(tr.normal[k].norm() - 1.0) < 1e-8);
            CHECK(std::abs(tr.binormal[k].norm() - 1.0) < 1e-8);
            CHECK(std::abs(tr.tangent[k].dot(tr.normal[k])) < 1e-8);
            CHECK(std::abs(tr.tangent[k].dot(tr.binormal[k])) < 1e-8);
            CHECK(std::abs(tr.normal[k].dot(tr.binormal[k])) < 1e-8);
            CHECK((tr.binormal[k] - tr.tangent[k].cross(tr.normal[k])).norm() < 1e-8);
            CHECK(tr.curvature[k] >= 0.0);
        }
    }
}

TEST_CASE("rotation equivariance and translation invariance") {
    std::mt19937_64 rng(29);
    const SpaceCurve c = test::random_smooth_curve(rng, 12);
    const Mat3 rot = test::random_rotation(rng);
    const SpaceCurve moved = rotated(translated(c, Vec3(0.3, -0.7, 1.1)), rot);

    const GeometryTrace a = frenet_trace(c, 256);
    const GeometryTrace b = frenet_trace(moved, 256);
    for (int k = 0; k < a.samples; k += 16) {
        CHECK(std::abs(a.curvature[k] - b.curvature[k]) < 1e-8);
        CHECK(std::abs(a.torsion[k] - b.torsion[k]) < 1e-7);
        CHECK((rot * a.tangent[k] - b.tangent[k]).norm() < 1e-8);
        CHECK((rot * a.normal[k] - b.normal[k]).norm() < 1e-8);
        CHECK((rot * a.binormal[k] - b.binormal[k]).norm() < 1e-8);
    }
    CHECK((rot * a.closure_residual - b.closure_residual).norm() < 1e-9);
    CHECK((rot * a.tangent_area - b.tangent_area).norm() < 1e-8);
}

TEST_CASE("integrated tangent reconstructs the endpoint displacement") {
    std::mt19937_64 rng(31);
    const SpaceCurve c = test::random_smooth_curve(rng, 12, false);
    const GeometryTrace tr = frenet_trace(c, 4096);
    Vec3 acc = Vec3::Zero();
    const double dt = tr.total_length / (tr.samples - 1);
    for (int k = 0; k < tr.samples; ++k) {
        const double w = (k == 0 || k == tr.samples - 1) ? 0.5 : 1.0;
        acc += w * dt * tr.tangent[k];
    }
    const Vec3 expected = c.control_points.back() - c.control_points.front();
    CHECK((acc - expected).norm() < 1e-6);
}

TEST_CASE("Frenet-Serret ODE round trip reproduces the tangent") {
    std::mt19937_64 rng(37);
    const SpaceCurve c = test::random_smooth_curve(rng, 10);
    const int m = 2048;
    const GeometryTrace tr = frenet_trace(c, m);
    const double dt = tr.total_length / (m - 1);

    // Integrate T' = kappa N, N' = -kappa T + tau B, B' = -tau N with RK4,
    // sampling kappa/tau linearly between trace nodes.
    using Frame = Eigen::Matrix3d; // columns T, N, B
    auto kappa_at = [&](double t) {
        const double u = std::clamp(t / dt, 0.0, double(m - 1));
        const int i = std::min(int(u), m - 2);
        const double f = u - i;
        return (1 - f) * tr.curvature[i] + f * tr.curvature[i + 1];
    };
    auto tau_at = [&](double t) {
        const double u = std::clamp(t / dt, 0.0, double(m - 1));
        const int i = std::min(int(u), m - 2);
        const double f = u - i;
        return (1 - f) * tr.torsion[i] + f * tr.torsion[i + 1];
    };
    Frame f0;
    f0.col(0) = tr.tangent[0];
    f0.col(1) = tr.normal[0];
    f0.col(2) = tr.binormal[0];

    double max_err = 0.0;
    Frame f = f0;
    for (int k = 0; k + 1 < m; ++k) {
        const double t0 = k * dt;
        f = test::rk4_integrate(f, t0, t0 + dt, 2, [&](double t, const Frame& y) {
            Frame d;
            d.col(0) = kappa_at(t) * y.col(1);
            d.col(1) = -kappa_at(t) * y.col(0) + tau_at(t) * y.col(2);
            d.col(2) = -tau_at(t) * y.col(1);
            return d;
        });
        max_err = std::max(max_err, (f.col(0) - tr.tangent[k + 1]).norm());
    }
    CHECK(max_err < 1e-4);
}

TEST_CASE("closure residual: closed circle and half circle") {
    const SpaceCurve circle = circle_curve(1.0);
    CHECK(closure_residual(frenet_trace(circle, 128)).norm() < 1e-9);

    auto half = [&](double u) {
        const double th = M_PI * u;
        return Vec3(std::cos(th), std::sin(th), 0.0);
    };
    const SpaceCurve arc = fit_bezier(half, 14);
    const Vec3 res = closure_residual(frenet_trace(arc, 128));
    CHECK(std::abs(res.norm() - 2.0) < 1e-6); // diameter
}

TEST_CASE("square-pi-pulse curve has closure magnitude 2/Omega") {
    // constant kappa = Omega, tau = 0, length pi/Omega: half circle of radius 1/Omega
    const double omega = 4.0;
    auto path = [&](double u) {
        const double th = M_PI * u;
        return Vec3(0.0, (1.0 - std::cos(th)) / omega, std::sin(th) / omega);
    };
    const SpaceCurve c = fit_bezier(path, 14);
    const GeometryTrace tr = frenet_trace(c, 512);
    CHECK(std::abs(tr.total_length - M_PI / omega) < 1e-6);
    CHECK(std::abs(closure_residual(tr).norm() - 2.0 / omega) < 1e-6);
}

TEST_CASE("tangent area of a circle traversed once is 2*pi * plane normal") {
    // Direct quadrature oracle on the analytic circle: T x T' has magnitude
    // kappa = 1/R and points along +z; the arc length is 2 pi R.
    const double radius = 0.7;
    Vec3 oracle = Vec3::Zero();
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
        const double s = 2.0 * M_PI * radius * (i + 0.5) / n;
        const double th = s / radius;
        const Vec3 t(-std::sin(th), std::cos(th), 0.0);
        const Vec3 tp(-std::cos(th) / radius, -std::sin(th) / radius, 0.0);
        oracle += t.cross(tp) * (2.0 * M_PI * radius / n);
    }
    CHECK((oracle - Vec3(0, 0, 2.0 * M_PI)).norm() < 1e-6);

    const SpaceCurve c = circle_curve(radius);
    const Vec3 area = tangent_area(frenet_trace(c, 2048));
    CHECK((area - oracle).norm() < 1e-3);
}

TEST_CASE("tangent that retraces its path sweeps zero area") {
    // Planar curve built from the tangent angle theta(s) = sin(2 pi s): the
    // tangent sweeps out along an arc and retraces it exactly, so the swept
    // oriented area integral of theta'(s) dz vanishes.
    const int table = 32768;
    std::vector<Vec3> positions(table + 1, Vec3::Zero());
    for (int i = 0; i < table; ++i) {
        const double s = (i + 0.5) / table;
        const double th = std::sin(2.0 * M_PI * s);
        positions[i + 1] = positions[i] + Vec3(std::cos(th), std::sin(th), 0.0) / table;
    }
    auto path = [&](double u) {
        const double idx = u * table;
        const int i = std::min(int(idx), table - 1);
        const double f = idx - i;
        return Vec3((1 - f) * positions[i] + f * positions[i + 1]);
    };
    const SpaceCurve c = fit_bezier(path, 18, 800);
    const GeometryTrace tr = frenet_trace(c, 2048);
    CHECK(tangent_area(tr).norm() < 2e-3);
}

TEST_CASE("inflection handling: frame stays continuous, pi jump recorded") {
    auto path = [](double u) {
        // planar cubic-like S shape with one inflection near u = 0.5
        const double x = 2.0 * u - 1.0;
        return Vec3(x, x * x * x, 0.0);
    };
    const SpaceCurve c = fit_bezier(path, 12, 256);
    const GeometryTrace tr = frenet_trace(c, 1024);
    for (int k = 1; k < tr.samples; ++k)
        CHECK(tr.normal[k].dot(tr.normal[k - 1]) > 0.0); // continuity
    CHECK(tr.phase_offset.back() == doctest::Approx(M_PI));
}

TEST_CASE("long zero-curvature span raises frame ambiguity") {
    // straight lead-in followed by a bend: kappa ~ 0 over a long span
    std::vector<Vec3> pts;
    for (int i = 0; i <= 9; ++i) pts.push_back(Vec3(i * 0.1, 0, 0));
    pts.push_back(Vec3(1.0, 0.2, 0));
    pts.push_back(Vec3(1.0, 0.6, 0));
    const SpaceCurve c = SpaceCurve::create(pts);
    CHECK_THROWS_AS(frenet_trace(c, 512), error);
}

TEST_CASE("canonicalized curve starts at the origin with frame (z, y, -x)") {
    std::mt19937_64 rng(41);
    const SpaceCurve c = test::random_smooth_curve(rng, 12);
    const SpaceCurve canon = canonicalized(c);
    const GeometryTrace tr = frenet_trace(canon, 128);
    CHECK(tr.start_point.norm() < 1e-12);
    CHECK((tr.tangent.front() - Vec3::UnitZ()).norm() < 1e-9);
    CHECK((tr.normal.front() - Vec3::UnitY()).norm() < 1e-9);
    CHECK((tr.binormal.front() + Vec3::UnitX()).norm() < 1e-9);
}

TEST_CASE("normalized_arclength yields unit length") {
    std::mt19937_64 rng(43);
    const SpaceCurve c = test::random_smooth_curve(rng, 12);
    const SpaceCurve unit = normalized_arclength(c);
    CHECK(std::abs(arclength_map(unit).total_length() - 1.0) < 1e-9);
}
