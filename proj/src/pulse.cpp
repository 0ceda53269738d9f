#include "scqc/pulse.hpp"

#include <algorithm>
#include <cmath>

#include "scqc/errors.hpp"

namespace scqc {

std::vector<cd> PulseWaveform::envelope() const {
    std::vector<cd> env(omega.size());
    const double scale = omega_max > 0.0 ? 1.0 / omega_max : 0.0;
    for (size_t k = 0; k < omega.size(); ++k)
        env[k] = scale * omega[k] * std::exp(cd(0, phi[k]));
    return env;
}

void PulseWaveform::validate() const {
    if (omega.size() < 2 || omega.size() != phi.size())
        raise(errc::input, "PulseWaveform: need matching omega/phi with >= 2 samples");
    if (!(tg > 0.0) || !(dt > 0.0)) raise(errc::input, "PulseWaveform: nonpositive tg or dt");
    if (std::abs(tg - steps() * dt) > dt)
        raise(errc::input, "PulseWaveform: tg inconsistent with sample grid");
    double peak = 0.0;
    for (double w : omega) {
        if (!std::isfinite(w) || w < 0.0) raise(errc::input, "PulseWaveform: invalid omega sample");
        peak = std::max(peak, w);
    }
    for (double p : phi)
        if (!std::isfinite(p)) raise(errc::input, "PulseWaveform: invalid phi sample");
    if (peak > 0.0 && std::abs(peak - omega_max) > 1e-9 * peak)
        raise(errc::input, "PulseWaveform: omega_max does not match samples");
    if (!std::isfinite(delta)) raise(errc::input, "PulseWaveform: invalid delta");
    const double lhs = tg * omega_max;
    const double rhs = dimless_tg * dimless_omega_max;
    if (rhs > 0.0 && std::abs(lhs - rhs) > 1e-9 * rhs)
        raise(errc::input, "PulseWaveform: Tg*Omega_max != dimensionless product");
}

void QubitSpec::validate() const {
    const double d = omega_d - omega_q;
    if (std::abs(delta() - d) > 1e-12 * std::max(1.0, std::abs(d)))
        raise(errc::input, "QubitSpec: inconsistent detuning");
    if (!(omega_max_dev > 0.0) || !(dt_min > 0.0))
        raise(errc::input, "QubitSpec: nonpositive drive cap or dt_min");
}

PulseWaveform fields_from_geometry(const GeometryTrace& trace, double delta_dimless,
                                   const std::string& name) {
    trace.validate();
    const int m = trace.samples;
    const double length = trace.total_length;
    if (!(length > 0.0)) raise(errc::domain_error, "fields_from_geometry: nonpositive length");

    PulseWaveform p;
    p.name = name;
    p.tg = length;
    p.dt = length / (m - 1);
    p.delta = delta_dimless;
    p.omega.resize(m);
    p.phi.resize(m);

    // Phi(0) = 0: initial normal along +y in the canonical drive frame.
    double acc = 0.0;
    double peak = 0.0;
    for (int k = 0; k < m; ++k) {
        const double time = trace.t[k] * length;
        if (k > 0)
            acc += 0.5 * p.dt * (trace.torsion[k - 1] + trace.torsion[k]);
        p.omega[k] = trace.curvature[k];
        p.phi[k] = acc + delta_dimless * time + trace.phase_offset[k];
        peak = std::max(peak, p.omega[k]);
    }
    p.omega_max = peak;
    p.dimensionless = true;
    p.dimless_tg = length;
    p.dimless_omega_max = peak;
    return p;
}

PulseWaveform scale_pulse(const PulseWaveform& pulse, const ScaleTarget& target,
                          const QubitSpec& spec) {
    pulse.validate();
    spec.validate();
    const double product = pulse.tg * pulse.omega_max; // invariant under scaling
    if (!(product > 0.0)) raise(errc::input, "scale_pulse: zero-area pulse cannot be scaled");

    double tg_phys = 0.0;
    if (target.kind == ScaleTarget::Kind::gate_time) {
        tg_phys = target.value;
    } else {
        if (!(target.value > 0.0)) raise(errc::input, "scale_pulse: nonpositive omega_max target");
        tg_phys = product / target.value;
    }
    if (!(tg_phys > 0.0)) raise(errc::input, "scale_pulse: nonpositive gate time");

    PulseWaveform out = pulse;
    out.warnings.clear();
    const double units = std::round(tg_phys / spec.dt_min);
    const double snapped = (units < 1.0 ? 1.0 : units) * spec.dt_min;
    double final_tg = snapped;
    if (std::abs(snapped - tg_phys) > 1e-9 * tg_phys) {
        final_tg = std::ceil(tg_phys / spec.dt_min - 1e-9) * spec.dt_min;
        out.warnings.push_back("gate time snapped up to " + std::to_string(final_tg) +
                               " s (multiple of dt_min)");
    }

    const double omega_peak = product / final_tg;
    if (omega_peak > spec.omega_max_dev * (1.0 + 1e-12))
        raise(errc::capacity, "scale_pulse: required drive " + std::to_string(omega_peak) +
                                  " rad/s exceeds device cap");

    // All frequency-like quantities scale by tg_old / tg_new; Phi is untouched.
    const double field_scale = pulse.tg / final_tg;
    out.tg = final_tg;
    out.dt = final_tg / pulse.steps();
    for (double& w : out.omega) w *= field_scale;
    out.omega_max = pulse.omega_max * field_scale;
    out.delta = pulse.delta * field_scale;
    out.dimensionless = false;
    out.dimless_tg = pulse.dimless_tg;
    out.dimless_omega_max = pulse.dimless_omega_max;
    return out;
}

PulseWaveform to_dimensionless(const PulseWaveform& pulse) {
    pulse.validate();
    if (pulse.dimensionless) return pulse;
    PulseWaveform out = pulse;
    out.warnings.clear();
    const double tg_d = pulse.dimless_tg;
    const double field_scale = pulse.tg / tg_d;
    out.tg = tg_d;
    out.dt = tg_d / pulse.steps();
    for (double& w : out.omega) w *= field_scale;
    out.omega_max = pulse.omega_max * field_scale;
    out.delta = pulse.delta * field_scale;
    out.dimensionless = true;
    return out;
}

PulseWaveform resample(const PulseWaveform& pulse, double new_dt) {
    pulse.validate();
    if (!(new_dt > 0.0)) raise(errc::input, "resample: nonpositive dt");
    if (new_dt > pulse.tg / 16.0)
        raise(errc::resolution, "resample: dt too coarse (need dt <= Tg/16)");

    const int n_new = std::max<int>(16, static_cast<int>(std::round(pulse.tg / new_dt)));
    PulseWaveform out = pulse;
    out.dt = pulse.tg / n_new;
    out.omega.assign(n_new + 1, 0.0);
    out.phi.assign(n_new + 1, 0.0);
    const int n_old = pulse.steps();
    double peak = 0.0;
    for (int k = 0; k <= n_new; ++k) {
        // Rational grid position keeps shared nodes exact.
        const double u = double(k) * double(n_old) / double(n_new);
        int i = std::min(static_cast<int>(u), n_old - 1);
        double frac = u - i;
        if (k == n_new) { i = n_old - 1; frac = 1.0; }
        out.omega[k] = (1.0 - frac) * pulse.omega[i] + frac * pulse.omega[i + 1];
        out.phi[k] = (1.0 - frac) * pulse.phi[i] + frac * pulse.phi[i + 1];
        peak = std::max(peak, out.omega[k]);
    }
    out.omega[0] = pulse.omega.front();
    out.phi[0] = pulse.phi.front();
    out.omega[n_new] = pulse.omega.back();
    out.phi[n_new] = pulse.phi.back();
    peak = std::max({peak, out.omega[0], out.omega[n_new]});
    out.omega_max = peak;
    // Resampling can shave the interior peak; keep the scaling invariant consistent.
    out.dimless_omega_max = peak * out.tg / out.dimless_tg;
    return out;
}

PulseWaveform square_pulse_for(const Mat2c& target, double tg, int intervals,
                               const std::string& name) {
    if (!is_unitary(target, 1e-9)) raise(errc::input, "square_pulse_for: target not unitary");
    if (!(tg > 0.0) || intervals < 16) raise(errc::input, "square_pulse_for: bad tg or intervals");
    const Mat2c u = to_su2(target);
    // U = cos(theta/2) I - i sin(theta/2) n.sigma
    const double c = std::clamp(std::real(u.trace()) / 2.0, -1.0, 1.0);
    Vec3 axis = bloch_of_hermitian(cd(0, 1) * (u - cd(c, 0) * Mat2c::Identity()));
    double s = axis.norm();
    double theta = 2.0 * std::atan2(s, c);
    if (s < 1e-12) {
        axis = Vec3::UnitX();
        theta = 0.0;
    } else {
        axis /= s;
    }
    if (std::abs(axis.y()) > 1e-9)
        raise(errc::domain_error, "square_pulse_for: rotation axis must lie in the xz-plane");
    if (theta < 1e-12) theta = 2 * M_PI; // identity: full loop rather than a zero-length pulse

    PulseWaveform p;
    p.name = name;
    p.tg = tg;
    p.dt = tg / intervals;
    p.delta = theta * axis.z() / tg;
    const double omega = std::abs(theta * axis.x()) / tg;
    const double phi0 = (theta * axis.x() >= 0.0) ? 0.0 : M_PI;
    p.omega.assign(intervals + 1, omega);
    p.phi.assign(intervals + 1, phi0);
    p.omega_max = omega;
    p.dimensionless = (tg == 1.0);
    p.dimless_tg = 1.0;
    p.dimless_omega_max = omega * tg;
    return p;
}

} // namespace scqc
