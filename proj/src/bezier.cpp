#include "scqc/bezier.hpp"

#include <cmath>

#include "scqc/errors.hpp"

namespace scqc {

SpaceCurve SpaceCurve::create(std::vector<Vec3> points, bool closed) {
    SpaceCurve c;
    c.control_points = std::move(points);
    c.closed = closed;
    c.validate();
    return c;
}

void SpaceCurve::validate() const {
    if (control_points.size() < 2)
        raise(errc::domain_error, "SpaceCurve: need at least 2 control points");
    for (const Vec3& w : control_points)
        if (!w.allFinite())
            raise(errc::domain_error, "SpaceCurve: non-finite control point");
    if (closed) {
        const double gap = (control_points.back() - control_points.front()).norm();
        if (gap > 1e-9)
            raise(errc::domain_error, "SpaceCurve: flagged closed but |r(1)-r(0)| = " + std::to_string(gap));
    }
}

double bernstein(int n, int j, double x) {
    if (j < 0 || j > n) return 0.0;
    // binomial via running product; n stays small (<= a few tens)
    double binom = 1.0;
    for (int i = 0; i < j; ++i) binom *= double(n - i) / double(i + 1);
    return binom * std::pow(x, j) * std::pow(1.0 - x, n - j);
}

namespace detail {

Vec3 CurveEvaluator::de_casteljau(const std::vector<Vec3>& w, double x) {
    if (w.size() == 1) return w[0];
    std::vector<Vec3> tmp = w;
    for (size_t level = w.size() - 1; level > 0; --level)
        for (size_t j = 0; j < level; ++j)
            tmp[j] = (1.0 - x) * tmp[j] + x * tmp[j + 1];
    return tmp[0];
}

CurveEvaluator::CurveEvaluator(const SpaceCurve& curve) {
    pts_[0] = curve.control_points;
    const int n = curve.order();
    for (int k = 1; k <= 3; ++k) {
        const std::vector<Vec3>& prev = pts_[k - 1];
        const int m = static_cast<int>(prev.size()) - 1; // order of previous
        if (m < 1) break;
        std::vector<Vec3> d(m);
        for (int j = 0; j < m; ++j) d[j] = double(m) * (prev[j + 1] - prev[j]);
        pts_[k] = std::move(d);
    }
    (void)n;
}

Vec3 CurveEvaluator::position(double x) const { return de_casteljau(pts_[0], x); }
Vec3 CurveEvaluator::d1(double x) const {
    return pts_[1].empty() ? Vec3::Zero() : de_casteljau(pts_[1], x);
}
Vec3 CurveEvaluator::d2(double x) const {
    return pts_[2].empty() ? Vec3::Zero() : de_casteljau(pts_[2], x);
}
Vec3 CurveEvaluator::d3(double x) const {
    return pts_[3].empty() ? Vec3::Zero() : de_casteljau(pts_[3], x);
}

} // namespace detail

static void check_param(double x) {
    if (!(x >= 0.0 && x <= 1.0))
        raise(errc::domain_error, "curve parameter x outside [0,1]: " + std::to_string(x));
}

Vec3 eval_curve(const SpaceCurve& curve, double x) {
    check_param(x);
    curve.validate();
    return detail::CurveEvaluator(curve).position(x);
}

std::vector<Vec3> eval_derivatives(const SpaceCurve& curve, double x, int max_order) {
    check_param(x);
    curve.validate();
    if (max_order < 1 || max_order > 3)
        raise(errc::domain_error, "eval_derivatives: max_order must be in 1..3");
    if (max_order > curve.order())
        raise(errc::domain_error, "eval_derivatives: max_order exceeds curve order");
    detail::CurveEvaluator ev(curve);
    std::vector<Vec3> out;
    out.reserve(max_order);
    if (max_order >= 1) out.push_back(ev.d1(x));
    if (max_order >= 2) out.push_back(ev.d2(x));
    if (max_order >= 3) out.push_back(ev.d3(x));
    return out;
}

SpaceCurve fit_bezier(const std::function<Vec3(double)>& path, int order, int samples) {
    if (order < 1) raise(errc::domain_error, "fit_bezier: order must be >= 1");
    if (samples < order + 1) samples = 4 * (order + 1);

    const Vec3 p0 = path(0.0);
    const Vec3 p1 = path(1.0);

    // Interior points solved in least squares with the endpoints pinned.
    const int m = order - 1;
    Eigen::MatrixXd basis(samples, std::max(m, 1));
    Eigen::MatrixXd rhs(samples, 3);
    for (int i = 0; i < samples; ++i) {
        const double x = (i + 0.5) / samples;
        const Vec3 target = path(x) - p0 * bernstein(order, 0, x) - p1 * bernstein(order, order, x);
        rhs.row(i) = target.transpose();
        for (int j = 1; j <= order - 1; ++j) basis(i, j - 1) = bernstein(order, j, x);
    }

    std::vector<Vec3> pts(order + 1);
    pts[0] = p0;
    pts[order] = p1;
    if (m > 0) {
        Eigen::MatrixXd sol = basis.colPivHouseholderQr().solve(rhs);
        for (int j = 1; j <= order - 1; ++j) pts[j] = sol.row(j - 1).transpose();
    }
    SpaceCurve c;
    c.control_points = std::move(pts);
    c.closed = (p1 - p0).norm() <= 1e-9;
    return c;
}

SpaceCurve translated(const SpaceCurve& curve, const Vec3& shift) {
    SpaceCurve out = curve;
    for (Vec3& w : out.control_points) w += shift;
    return out;
}

SpaceCurve rotated(const SpaceCurve& curve, const Mat3& rot) {
    SpaceCurve out = curve;
    for (Vec3& w : out.control_points) w = rot * w;
    return out;
}

SpaceCurve scaled(const SpaceCurve& curve, double factor) {
    SpaceCurve out = curve;
    for (Vec3& w : out.control_points) w *= factor;
    return out;
}

} // namespace scqc
