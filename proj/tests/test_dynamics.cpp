#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "scqc/dynamics.hpp"
#include "scqc/errors.hpp"
#include "test_util.hpp"

using namespace scqc;

namespace {

PulseWaveform pulse_from_curve(const SpaceCurve& curve, double delta = 0.0, int samples = 4096) {
    const SpaceCurve canon = canonicalized(curve);
    return fields_from_geometry(frenet_trace(canon, samples), delta);
}

} // namespace

TEST_CASE("zero drive, zero detuning propagates to the identity") {
    PulseWaveform p;
    p.name = "idle";
    p.tg = 1.0;
    p.dt = 1.0 / 64;
    p.omega.assign(65, 0.0);
    p.phi.assign(65, 0.0);
    p.omega_max = 0.0;
    p.dimless_omega_max = 0.0;
    const Propagator u = propagate(p, NoisePoint{0.3, 0.0}); // amplitude noise on zero drive
    CHECK(operator_norm(u.u - Mat2c::Identity()) < 1e-12);
}

TEST_CASE("resonant square pi pulse is an X gate up to phase") {
    const PulseWaveform p = square_pulse_for(gate_x(), 1.0, 256);
    const Propagator u = propagate(p);
    const Mat2c expected = cd(0, -1) * pauli_x();
    CHECK(operator_norm(u.u - expected) < 1e-12);
    CHECK(phase_invariant_distance(u.u, gate_x()) < 1e-12);
}

TEST_CASE("detuned Rabi closed form") {
    // constant Omega=1, Phi=0, Delta=0, dz=0.3, Tg=pi:
    // U = exp(-i (dz sigma_z + Omega sigma_x) Tg / 2)
    PulseWaveform p;
    p.name = "rabi";
    p.tg = M_PI;
    p.dt = M_PI / 2048;
    p.omega.assign(2049, 1.0);
    p.phi.assign(2049, 0.0);
    p.omega_max = 1.0;
    p.dimless_tg = M_PI;
    p.dimless_omega_max = 1.0;
    const double dz = 0.3;
    const Propagator u = propagate(p, NoisePoint{0.0, dz});
    const Mat2c expected = su2_exp(Vec3(1.0, 0.0, dz) * (M_PI / 2.0));
    CHECK(operator_norm(u.u - expected) < 1e-8);
}

TEST_CASE("propagator unitarity and composition") {
    std::mt19937_64 rng(101);
    const PulseWaveform p = pulse_from_curve(test::random_smooth_curve(rng, 12), 0.17, 2048);
    const NoisePoint noise{0.02, 0.3};
    const Propagator full = propagate(p, noise);
    CHECK(is_unitary(full.u, 1e-9));
    CHECK(std::abs(std::abs(full.u.determinant()) - 1.0) < 1e-9);

    const int half = p.steps() / 2;
    const Propagator a = propagate(p, noise, 0, half);
    const Propagator b = propagate(p, noise, half, p.steps());
    CHECK(operator_norm(b.u * a.u - full.u) < 1e-9);
}

TEST_CASE("step halving: integrator error per step below 1e-10") {
    std::mt19937_64 rng(103);
    const PulseWaveform p =
        pulse_from_curve(test::random_smooth_curve(rng, 12, true, 0.15), 0.1, 4096);
    const PulseWaveform fine = resample(p, p.dt / 2);
    const Propagator u1 = propagate(p);
    const Propagator u2 = propagate(fine);
    CHECK(operator_norm(u1.u - u2.u) / p.steps() < 1e-10);
}

TEST_CASE("magnus blocks of the square pi pulse match the analytic integrals") {
    const double omega = 4.0;
    PulseWaveform p;
    p.name = "sq";
    p.tg = M_PI / omega;
    p.dt = p.tg / 2048;
    p.omega.assign(2049, omega);
    p.phi.assign(2049, 0.0);
    p.omega_max = omega;
    p.dimless_tg = p.tg;
    p.dimless_omega_max = omega;

    const MagnusBlocks blocks = magnus_pi1(p);
    // dephasing: integral of U0^dag sz U0 = (2/Omega) sigma_y; amplitude: pi sigma_x
    CHECK(operator_norm(blocks.dephasing - (2.0 / omega) * pauli_y()) < 1e-8);
    CHECK(operator_norm(blocks.amplitude - M_PI * pauli_x()) < 1e-8);
}

TEST_CASE("geometry-dynamics identity: dephasing block equals closure . sigma") {
    std::mt19937_64 rng(107);
    for (int trial = 0; trial < 8; ++trial) {
        const SpaceCurve raw = test::random_smooth_curve(rng, 12, trial % 2 == 0);
        const SpaceCurve canon = canonicalized(raw);
        const GeometryTrace tr = frenet_trace(canon, 4096);
        const PulseWaveform p = fields_from_geometry(tr, 0.0);
        const MagnusBlocks blocks = magnus_pi1(p);
        const Mat2c expected = pauli_vec(tr.closure_residual);
        CHECK(operator_norm(blocks.dephasing - expected) < 1e-6);
    }
}

TEST_CASE("amplitude block equals -(tangent area) . sigma") {
    std::mt19937_64 rng(109);
    for (int trial = 0; trial < 6; ++trial) {
        const SpaceCurve canon = canonicalized(test::random_smooth_curve(rng, 12));
        const GeometryTrace tr = frenet_trace(canon, 4096);
        const PulseWaveform p = fields_from_geometry(tr, 0.0);
        const MagnusBlocks blocks = magnus_pi1(p);
        const double area = tr.tangent_area.norm();
        CHECK(operator_norm(blocks.amplitude + pauli_vec(tr.tangent_area)) <
              std::max(1e-5, 1e-3 * area));
        // both sides large together for non-robust curves (zero-area equivalence)
        CHECK(area > 1e-3);
        CHECK(operator_norm(blocks.amplitude) > 1e-3);
        CHECK(std::abs(operator_norm(blocks.amplitude) - area) < std::max(1e-5, 1e-3 * area));
    }
}

TEST_CASE("identity holds with nonzero detuning folded into the phase") {
    std::mt19937_64 rng(113);
    const SpaceCurve canon = canonicalized(test::random_smooth_curve(rng, 12, true));
    const GeometryTrace tr = frenet_trace(canon, 4096);
    const PulseWaveform p = fields_from_geometry(tr, -0.37);
    const MagnusBlocks blocks = magnus_pi1(p);
    CHECK(operator_norm(blocks.dephasing - pauli_vec(tr.closure_residual)) < 1e-6);
}

TEST_CASE("gate fidelity properties") {
    std::mt19937_64 rng(127);
    const Mat2c v = gate_hadamard();
    CHECK(gate_fidelity(v, v) == doctest::Approx(1.0));
    CHECK(gate_fidelity(std::exp(cd(0, M_PI / 7)) * v, v) == doctest::Approx(1.0));
    CHECK(gate_fidelity(pauli_x(), Mat2c::Identity()) == doctest::Approx(1.0 / 3.0));
    Mat2c bad = v;
    bad(0, 0) += 0.01;
    CHECK_THROWS_AS(gate_fidelity(bad, v), error);
}

TEST_CASE("square pulse infidelity scans have slope 2 on both axes") {
    const PulseWaveform p = square_pulse_for(gate_x(), 1.0, 512);
    std::vector<double> eps_mags, dz_mags;
    for (int i = 0; i < 7; ++i) {
        const double f = 1e-3 * std::pow(10.0, i / 6.0);
        eps_mags.push_back(f);
        dz_mags.push_back(f * p.omega_max);
    }
    const auto eps_scan = infidelity_scan(p, gate_x(), NoiseAxis::amplitude, eps_mags);
    const auto dz_scan = infidelity_scan(p, gate_x(), NoiseAxis::detuning, dz_mags);

    std::vector<double> x1, y1, x2, y2;
    for (const auto& s : eps_scan) { x1.push_back(s.magnitude); y1.push_back(s.infidelity); }
    for (const auto& s : dz_scan) { x2.push_back(s.magnitude); y2.push_back(s.infidelity); }
    CHECK(test::loglog_slope(x1, y1) == doctest::Approx(2.0).epsilon(0.1));
    CHECK(test::loglog_slope(x2, y2) == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("gate-fixed pulse has vanishing infidelity at zero noise") {
    const PulseWaveform p = square_pulse_for(gate_sqrt_x(), 1.0, 512);
    const auto scan = infidelity_scan(p, gate_sqrt_x(), NoiseAxis::detuning, {0.0});
    CHECK(scan[0].infidelity <= 1e-9);
}

TEST_CASE("noise point validation") {
    const NoisePoint flipped{-1.5, 0.0};
    CHECK_THROWS_AS(flipped.validate(), error);
    const NoisePoint ok{0.2, 1e6};
    CHECK_NOTHROW(ok.validate());
    const NoisePoint np = NoisePoint::from_percent(4.5, 2.0);
    CHECK(np.eps == doctest::Approx(0.045));
    CHECK(np.dz == doctest::Approx(2 * M_PI * 342e3).epsilon(1e-3));
}
