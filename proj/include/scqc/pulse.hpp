#pragma once

#include <string>
#include <vector>

#include "scqc/geometry.hpp"

namespace scqc {

// Sampled control fields. Samples live on nodes t_k = k*dt, k = 0..N, with
// gate time Tg = N*dt. A dimensionless pulse uses Tg in units of the curve
// length (1 for normalized curves) and fields in 1/length units.
struct PulseWaveform {
    std::string name;
    double tg = 0.0;    // seconds (or dimensionless time)
    double dt = 0.0;    // seconds per interval
    double delta = 0.0; // rad/s, constant detuning
    std::vector<double> omega; // rad/s, >= 0
    std::vector<double> phi;   // radians
    double omega_max = 0.0;
    bool dimensionless = true;
    double dimless_tg = 1.0;
    double dimless_omega_max = 0.0;
    std::vector<std::string> warnings; // e.g. gate-time snapping; not serialized

    int steps() const { return static_cast<int>(omega.size()) - 1; }
    // Omega_k * exp(i Phi_k) / Omega_max
    std::vector<cd> envelope() const;
    void validate() const;
};

struct QubitSpec {
    double omega_q = 2 * M_PI * 5.0e9;  // rad/s
    double omega_d = 2 * M_PI * 5.0e9;  // rad/s
    double omega_max_dev = 2 * M_PI * 50.0e6; // drive cap, rad/s
    double dt_min = 2.0e-9 / 9.0;       // hardware time granularity, seconds

    double delta() const { return omega_d - omega_q; }
    void validate() const;
};

// Omega(t) = kappa(t); Phi(t) = integral of tau + Delta*t + folded pi jumps,
// with Phi(0) = 0. Accepts any positive trace length L; the dimensionless
// gate time equals L (1 for normalized curves).
PulseWaveform fields_from_geometry(const GeometryTrace& trace, double delta_dimless,
                                   const std::string& name = "");

struct ScaleTarget {
    enum class Kind { gate_time, omega_max } kind = Kind::gate_time;
    double value = 0.0;
    static ScaleTarget gate_time(double seconds) { return {Kind::gate_time, seconds}; }
    static ScaleTarget omega_max(double rad_per_s) { return {Kind::omega_max, rad_per_s}; }
};

// Stretch/scale preserving Tg * Omega_max (sample grid preserved). Tg is
// snapped up to the next multiple of spec.dt_min with a warning when needed.
PulseWaveform scale_pulse(const PulseWaveform& pulse, const ScaleTarget& target,
                          const QubitSpec& spec);

// Inverse of scale_pulse: back to the dimensionless representation.
PulseWaveform to_dimensionless(const PulseWaveform& pulse);

// Linear resampling of Omega, Phi onto a new grid; endpoints preserved exactly.
PulseWaveform resample(const PulseWaveform& pulse, double new_dt);

// Naive comparator: constant drive (plus constant detuning for off-x/z axes)
// realizing the target rotation in one square segment. The rotation axis must
// lie in the xz-plane.
PulseWaveform square_pulse_for(const Mat2c& target, double tg, int intervals = 512,
                               const std::string& name = "square");

} // namespace scqc
