#pragma once

#include <vector>

#include "scqc/bezier.hpp"

namespace scqc {

// Monotone arc-length map s = sigma(x) with total length L, built from
// composite Gauss-Legendre quadrature of |r'(x)|. The inverse x(s) uses a
// monotone cubic (PCHIP) interpolant as the initial guess and is refined by
// Newton iterations against the exact quadrature.
class ArcLengthMap {
public:
    ArcLengthMap() = default;

    double total_length() const { return length_; }
    double s_of_x(double x) const; // panel cumulative + partial-panel quadrature
    double x_of_s(double s) const;
    double speed_at_x(double x) const; // |r'(x)|

    friend ArcLengthMap arclength_map(const SpaceCurve&, int);

private:
    std::vector<double> x_, s_, slope_; // knots and PCHIP slopes of x(s)
    std::vector<Vec3> hodograph_;       // control points of r'
    double length_ = 0.0;
    int panels_ = 0;
};

ArcLengthMap arclength_map(const SpaceCurve& curve, int quad_panels = 2048);

struct FrenetOptions {
    int quad_panels = 2048;
    double curvature_floor = 1e-6;
    // Contiguous sub-floor span longer than this fraction of the curve is an error.
    double max_floor_span_fraction = 0.01;
};

// Arc-length-sampled Frenet data. Frames are continued across curvature-floor
// regions so the normal is continuous; the pi jumps this absorbs are recorded
// per sample in phase_offset (multiples of pi, folded into Phi downstream).
struct GeometryTrace {
    int samples = 0;
    double total_length = 0.0;
    std::vector<double> t;        // normalized times in [0,1], uniform in arc length
    std::vector<Vec3> tangent;
    std::vector<Vec3> normal;
    std::vector<Vec3> binormal;
    std::vector<double> curvature; // unsigned, >= 0
    std::vector<double> torsion;
    std::vector<double> phase_offset;
    Vec3 start_point = Vec3::Zero();
    Vec3 closure_residual = Vec3::Zero(); // r(end) - r(0), exact from endpoints
    Vec3 tangent_area = Vec3::Zero();     // integral of T x dT over the curve

    void validate() const;
};

GeometryTrace frenet_trace(const SpaceCurve& curve, int samples = 4096,
                           const FrenetOptions& options = {});

Vec3 closure_residual(const GeometryTrace& trace);
Vec3 tangent_area(const GeometryTrace& trace);

// Rotation mapping the trace's initial frame (T0, N0, B0) onto the canonical
// drive frame (z, y, -x); applying it to the curve makes the error curve of
// the generated pulse coincide with the curve itself.
Mat3 canonical_frame_rotation(const GeometryTrace& trace);

// Rotate to the canonical frame and translate r(0) to the origin.
SpaceCurve canonicalized(const SpaceCurve& curve, const FrenetOptions& options = {});

// Scale so the total arc length is 1.
SpaceCurve normalized_arclength(const SpaceCurve& curve, int quad_panels = 2048);

} // namespace scqc
