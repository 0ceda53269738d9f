#pragma once

#include <vector>

#include "scqc/pulse.hpp"

namespace scqc {

// Quasi-static noise pair: multiplicative amplitude error and additive
// detuning error (angular frequency, same time units as the pulse).
struct NoisePoint {
    double eps = 0.0;
    double dz = 0.0;

    // Percent grids quote detuning against this Rabi-rate reference.
    static constexpr double reference_field = 2 * M_PI * 0.0171e9; // rad/s
    static NoisePoint from_percent(double eps_pct, double dz_pct,
                                   double reference = reference_field) {
        return {eps_pct / 100.0, dz_pct / 100.0 * reference};
    }
    void validate() const;
};

struct Propagator {
    Mat2c u = Mat2c::Identity();
    double gate_time = 0.0;
};

// Time-ordered solution of i dU/dt = H(t) U with
// H = ((Delta+dz)/2) sigma_z + ((1+eps) Omega/2)(cos Phi sigma_x + sin Phi sigma_y),
// stepped with per-interval exponentials at midpoint field values.
// [step_begin, step_end) selects a sub-range of intervals; step_end = -1 means all.
Propagator propagate(const PulseWaveform& pulse, const NoisePoint& noise = {},
                     int step_begin = 0, int step_end = -1);

// First-order Magnus coefficients of the noise expansion:
// dephasing = integral of U0^dag sigma_z U0 dt, amplitude = integral of
// U0^dag Omega (cos Phi sigma_x + sin Phi sigma_y) U0 dt.
struct MagnusBlocks {
    Mat2c dephasing = Mat2c::Zero();
    Mat2c amplitude = Mat2c::Zero();
};
MagnusBlocks magnus_pi1(const PulseWaveform& pulse);

// Average gate fidelity F = (|tr(V^dag U)|^2 + 2)/6; global-phase invariant.
double gate_fidelity(const Mat2c& u, const Mat2c& target);

enum class NoiseAxis { amplitude, detuning };

struct ScanPoint {
    double magnitude = 0.0;
    double infidelity = 0.0;
};
std::vector<ScanPoint> infidelity_scan(const PulseWaveform& pulse, const Mat2c& target,
                                       NoiseAxis axis, const std::vector<double>& magnitudes);

// Standard gates.
Mat2c gate_identity();
Mat2c gate_x();
Mat2c gate_sqrt_x();
Mat2c gate_hadamard();

} // namespace scqc
