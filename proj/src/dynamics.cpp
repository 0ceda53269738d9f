#include "scqc/dynamics.hpp"

#include <cmath>

#include "scqc/errors.hpp"

namespace scqc {

void NoisePoint::validate() const {
    if (!std::isfinite(eps) || !std::isfinite(dz))
        raise(errc::input, "NoisePoint: non-finite noise value");
    if (eps <= -1.0)
        raise(errc::input, "NoisePoint: eps must be > -1 (drive sign must not flip)");
}

namespace {

inline Vec3 field_vector(double omega, double phi, double delta, const NoisePoint& noise) {
    const double amp = 0.5 * (1.0 + noise.eps) * omega;
    return {amp * std::cos(phi), amp * std::sin(phi), 0.5 * (delta + noise.dz)};
}

} // namespace

Propagator propagate(const PulseWaveform& pulse, const NoisePoint& noise, int step_begin,
                     int step_end) {
    pulse.validate();
    noise.validate();
    const int n = pulse.steps();
    if (step_end < 0) step_end = n;
    if (step_begin < 0 || step_end > n || step_begin > step_end)
        raise(errc::input, "propagate: invalid step range");

    Mat2c u = Mat2c::Identity();
    for (int k = step_begin; k < step_end; ++k) {
        const double omega = 0.5 * (pulse.omega[k] + pulse.omega[k + 1]);
        const double phi = 0.5 * (pulse.phi[k] + pulse.phi[k + 1]);
        const Vec3 h = field_vector(omega, phi, pulse.delta, noise);
        u = su2_exp(h * pulse.dt) * u;
    }
    return {u, (step_end - step_begin) * pulse.dt};
}

MagnusBlocks magnus_pi1(const PulseWaveform& pulse) {
    pulse.validate();
    const int n = pulse.steps();
    const Mat2c sz = pauli_z();
    const NoisePoint quiet{};

    auto drive_op = [](double omega, double phi) {
        Mat2c m;
        m << cd(0, 0), omega * std::exp(cd(0, -phi)),
             omega * std::exp(cd(0, phi)), cd(0, 0);
        return m;
    };

    MagnusBlocks blocks;
    Mat2c u = Mat2c::Identity();
    for (int k = 0; k < n; ++k) {
        const double om_mid = 0.5 * (pulse.omega[k] + pulse.omega[k + 1]);
        const double ph_mid = 0.5 * (pulse.phi[k] + pulse.phi[k + 1]);
        const Vec3 h = field_vector(om_mid, ph_mid, pulse.delta, quiet);

        const Mat2c u_mid = su2_exp(h * (0.5 * pulse.dt)) * u;
        const Mat2c u_next = su2_exp(h * pulse.dt) * u;

        // Composite Simpson per interval, consistent with the propagation grid.
        const Mat2c fz_a = u.adjoint() * sz * u;
        const Mat2c fz_m = u_mid.adjoint() * sz * u_mid;
        const Mat2c fz_b = u_next.adjoint() * sz * u_next;
        blocks.dephasing += (pulse.dt / 6.0) * (fz_a + 4.0 * fz_m + fz_b);

        const Mat2c fa_a = u.adjoint() * drive_op(pulse.omega[k], pulse.phi[k]) * u;
        const Mat2c fa_m = u_mid.adjoint() * drive_op(om_mid, ph_mid) * u_mid;
        const Mat2c fa_b = u_next.adjoint() * drive_op(pulse.omega[k + 1], pulse.phi[k + 1]) * u_next;
        blocks.amplitude += (pulse.dt / 6.0) * (fa_a + 4.0 * fa_m + fa_b);

        u = u_next;
    }
    return blocks;
}

double gate_fidelity(const Mat2c& u, const Mat2c& target) {
    if (!is_unitary(u, 1e-6) || !is_unitary(target, 1e-6))
        raise(errc::input, "gate_fidelity: inputs must be unitary to 1e-6");
    const double tr = std::abs((target.adjoint() * u).trace());
    return (tr * tr + 2.0) / 6.0;
}

std::vector<ScanPoint> infidelity_scan(const PulseWaveform& pulse, const Mat2c& target,
                                       NoiseAxis axis, const std::vector<double>& magnitudes) {
    std::vector<ScanPoint> out;
    out.reserve(magnitudes.size());
    for (double mag : magnitudes) {
        NoisePoint np;
        (axis == NoiseAxis::amplitude ? np.eps : np.dz) = mag;
        const Propagator prop = propagate(pulse, np);
        out.push_back({mag, 1.0 - gate_fidelity(prop.u, target)});
    }
    return out;
}

Mat2c gate_identity() { return Mat2c::Identity(); }

Mat2c gate_x() { return pauli_x(); }

Mat2c gate_sqrt_x() {
    Mat2c m;
    m << cd(0.5, 0.5), cd(0.5, -0.5), cd(0.5, -0.5), cd(0.5, 0.5);
    return m;
}

Mat2c gate_hadamard() {
    const double s = 1.0 / std::sqrt(2.0);
    Mat2c m;
    m << cd(s, 0), cd(s, 0), cd(s, 0), cd(-s, 0);
    return m;
}

} // namespace scqc
