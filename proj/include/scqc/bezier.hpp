#pragma once

#include <functional>
#include <vector>

#include "scqc/linalg.hpp"

namespace scqc {

// Bezier space curve r(x) = sum_j w_j C(n,j) x^j (1-x)^(n-j), x in [0,1].
// Control points are dimensionless; a curve used for pulse synthesis is
// normalized so that its total arc length is 1.
struct SpaceCurve {
    std::vector<Vec3> control_points; // size n+1
    bool closed = false;

    int order() const { return static_cast<int>(control_points.size()) - 1; }

    // Validates finiteness, n >= 1 and, when flagged closed, |r(1)-r(0)| <= 1e-9.
    static SpaceCurve create(std::vector<Vec3> points, bool closed = false);
    void validate() const;
};

double bernstein(int n, int j, double x);

Vec3 eval_curve(const SpaceCurve& curve, double x);

// d^k r / dx^k for k = 1..max_order via the hodograph (difference of control
// points) form. max_order in 1..3 and <= order.
std::vector<Vec3> eval_derivatives(const SpaceCurve& curve, double x, int max_order);

// Least-squares Bernstein fit of a parametric 3D path sampled at `samples`
// uniform parameters; endpoints are interpolated exactly.
SpaceCurve fit_bezier(const std::function<Vec3(double)>& path, int order, int samples = 256);

SpaceCurve translated(const SpaceCurve& curve, const Vec3& shift);
SpaceCurve rotated(const SpaceCurve& curve, const Mat3& rot);
SpaceCurve scaled(const SpaceCurve& curve, double factor);

namespace detail {

// Caches the hodograph control polygons of r', r'', r''' for repeated evaluation.
class CurveEvaluator {
public:
    explicit CurveEvaluator(const SpaceCurve& curve);

    Vec3 position(double x) const;
    Vec3 d1(double x) const;
    Vec3 d2(double x) const;
    Vec3 d3(double x) const;
    int order() const { return static_cast<int>(pts_[0].size()) - 1; }

private:
    // pts_[k] holds the control points of the k-th derivative curve.
    std::vector<Vec3> pts_[4];
    static Vec3 de_casteljau(const std::vector<Vec3>& w, double x);
};

} // namespace detail

} // namespace scqc
