#include "scqc/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "scqc/errors.hpp"

namespace scqc {

namespace {

// 4-point Gauss-Legendre nodes/weights on [-1, 1].
constexpr double kGLNode[4] = {-0.8611363115940526, -0.3399810435848563,
                               0.3399810435848563, 0.8611363115940526};
constexpr double kGLWeight[4] = {0.3478548451374538, 0.6521451548625461,
                                 0.6521451548625461, 0.3478548451374538};

// Fritsch-Carlson monotone slopes for knots (u, v), v monotone in u.
std::vector<double> pchip_slopes(const std::vector<double>& u, const std::vector<double>& v) {
    const size_t n = u.size();
    std::vector<double> d(n, 0.0), h(n - 1), delta(n - 1);
    for (size_t i = 0; i + 1 < n; ++i) {
        h[i] = u[i + 1] - u[i];
        delta[i] = (v[i + 1] - v[i]) / h[i];
    }
    d[0] = delta[0];
    d[n - 1] = delta[n - 2];
    for (size_t i = 1; i + 1 < n; ++i) {
        if (delta[i - 1] * delta[i] <= 0.0) {
            d[i] = 0.0;
        } else {
            const double w1 = 2.0 * h[i] + h[i - 1];
            const double w2 = h[i] + 2.0 * h[i - 1];
            d[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
        }
    }
    return d;
}

double hermite_eval(double u0, double u1, double v0, double v1, double d0, double d1, double u) {
    const double h = u1 - u0;
    const double q = (u - u0) / h;
    const double q2 = q * q, q3 = q2 * q;
    return v0 * (2 * q3 - 3 * q2 + 1) + h * d0 * (q3 - 2 * q2 + q) +
           v1 * (-2 * q3 + 3 * q2) + h * d1 * (q3 - q2);
}

size_t bracket(const std::vector<double>& knots, double u) {
    auto it = std::upper_bound(knots.begin(), knots.end(), u);
    size_t i = (it == knots.begin()) ? 0 : static_cast<size_t>(it - knots.begin()) - 1;
    if (i + 1 >= knots.size()) i = knots.size() - 2;
    return i;
}

} // namespace

double ArcLengthMap::speed_at_x(double x) const {
    std::vector<Vec3> tmp = hodograph_;
    for (size_t level = tmp.size() - 1; level > 0; --level)
        for (size_t j = 0; j < level; ++j)
            tmp[j] = (1.0 - x) * tmp[j] + x * tmp[j + 1];
    return tmp[0].norm();
}

double ArcLengthMap::s_of_x(double x) const {
    x = std::clamp(x, 0.0, 1.0);
    const double hx = 1.0 / panels_;
    const int p = std::min(static_cast<int>(x * panels_), panels_ - 1);
    const double a = p * hx;
    double partial = 0.0;
    const double half = 0.5 * (x - a);
    for (int g = 0; g < 4; ++g)
        partial += kGLWeight[g] * speed_at_x(a + half * (1.0 + kGLNode[g]));
    return s_[p] + half * partial;
}

double ArcLengthMap::x_of_s(double s) const {
    s = std::clamp(s, 0.0, length_);
    const size_t i = bracket(s_, s);
    double x = std::clamp(
        hermite_eval(s_[i], s_[i + 1], x_[i], x_[i + 1], slope_[i], slope_[i + 1], s), 0.0, 1.0);
    // Newton refinement against the exact quadrature; sigma' = |r'| > 0.
    for (int iter = 0; iter < 3; ++iter) {
        const double f = s_of_x(x) - s;
        const double df = speed_at_x(x);
        const double step = f / df;
        x = std::clamp(x - step, 0.0, 1.0);
        if (std::abs(step) < 1e-15) break;
    }
    return x;
}

ArcLengthMap arclength_map(const SpaceCurve& curve, int quad_panels) {
    curve.validate();
    if (quad_panels < 8) quad_panels = 8;

    ArcLengthMap map;
    map.panels_ = quad_panels;
    const std::vector<Vec3>& w = curve.control_points;
    const int n = curve.order();
    map.hodograph_.resize(n);
    for (int j = 0; j < n; ++j) map.hodograph_[j] = double(n) * (w[j + 1] - w[j]);

    map.x_.resize(quad_panels + 1);
    map.s_.resize(quad_panels + 1);
    map.x_[0] = 0.0;
    map.s_[0] = 0.0;
    double acc = 0.0;
    const double hx = 1.0 / quad_panels;
    for (int p = 0; p < quad_panels; ++p) {
        const double a = p * hx;
        double panel = 0.0;
        for (int g = 0; g < 4; ++g) {
            const double x = a + 0.5 * hx * (1.0 + kGLNode[g]);
            const double speed = map.speed_at_x(x);
            if (speed < 1e-12)
                raise(errc::degenerate_parameterization,
                      "arclength_map: vanishing speed at x = " + std::to_string(x));
            panel += kGLWeight[g] * speed;
        }
        acc += 0.5 * hx * panel;
        map.x_[p + 1] = (p + 1) * hx;
        map.s_[p + 1] = acc;
    }
    map.x_.back() = 1.0;
    map.length_ = acc;
    map.slope_ = pchip_slopes(map.s_, map.x_);
    return map;
}

void GeometryTrace::validate() const {
    if (samples < 2 || static_cast<int>(t.size()) != samples)
        raise(errc::domain_error, "GeometryTrace: inconsistent sample count");
    for (int k = 0; k < samples; ++k) {
        if (std::abs(tangent[k].norm() - 1.0) > 1e-8 || std::abs(normal[k].norm() - 1.0) > 1e-8 ||
            std::abs(binormal[k].norm() - 1.0) > 1e-8)
            raise(errc::domain_error, "GeometryTrace: frame not unit-norm at sample " + std::to_string(k));
        if (curvature[k] < 0.0)
            raise(errc::domain_error, "GeometryTrace: negative curvature");
    }
}

namespace {

// Minimal rotation carrying unit vector a onto unit vector b, applied to v.
Vec3 transport(const Vec3& v, const Vec3& a, const Vec3& b) {
    const Vec3 axis = a.cross(b);
    const double s = axis.norm();
    const double c = std::clamp(a.dot(b), -1.0, 1.0);
    if (s < 1e-14) {
        if (c > 0.0) return v;  // no rotation
        // a and b anti-parallel: rotate by pi about any axis orthogonal to a.
        Vec3 ortho = std::abs(a.x()) < 0.9 ? Vec3::UnitX().cross(a) : Vec3::UnitY().cross(a);
        ortho.normalize();
        return 2.0 * ortho.dot(v) * ortho - v;
    }
    const Vec3 n = axis / s;
    const double angle = std::atan2(s, c);
    // Rodrigues
    return v * std::cos(angle) + n.cross(v) * std::sin(angle) +
           n * (n.dot(v)) * (1.0 - std::cos(angle));
}

Vec3 fallback_normal(const Vec3& t) {
    Vec3 n = Vec3::UnitY() - t * t.y();
    if (n.norm() < 1e-6) n = Vec3::UnitX() - t * t.x();
    return n.normalized();
}

} // namespace

GeometryTrace frenet_trace(const SpaceCurve& curve, int samples, const FrenetOptions& options) {
    if (samples < 16) raise(errc::domain_error, "frenet_trace: need at least 16 samples");
    const ArcLengthMap map = arclength_map(curve, options.quad_panels);
    detail::CurveEvaluator ev(curve);
    const double length = map.total_length();

    GeometryTrace tr;
    tr.samples = samples;
    tr.total_length = length;
    tr.t.resize(samples);
    tr.tangent.resize(samples);
    tr.normal.resize(samples);
    tr.binormal.resize(samples);
    tr.curvature.resize(samples);
    tr.torsion.resize(samples);
    tr.phase_offset.assign(samples, 0.0);

    const double floor = options.curvature_floor;
    double offset = 0.0;
    double frame_sign = 1.0; // sign of the continued normal vs the natural one
    double last_torsion = 0.0;
    bool have_torsion = false;
    int floor_run = 0, max_floor_run = 0;
    bool prev_defined = false;

    for (int k = 0; k < samples; ++k) {
        const double s = length * double(k) / double(samples - 1);
        const double x = (k == 0) ? 0.0 : (k == samples - 1 ? 1.0 : map.x_of_s(s));
        tr.t[k] = double(k) / double(samples - 1);

        const Vec3 r1 = ev.d1(x);
        const Vec3 r2 = ev.d2(x);
        const Vec3 r3 = ev.d3(x);
        const double speed = r1.norm();
        if (speed < 1e-12)
            raise(errc::degenerate_parameterization, "frenet_trace: vanishing speed");
        const Vec3 t_hat = r1 / speed;
        const Vec3 cross12 = r1.cross(r2);
        const double cross_norm = cross12.norm();
        const double kappa = cross_norm / (speed * speed * speed);

        tr.tangent[k] = t_hat;
        tr.curvature[k] = kappa;

        if (kappa >= floor) {
            floor_run = 0;
            const Vec3 b_nat = cross12 / cross_norm;
            const Vec3 n_nat = b_nat.cross(t_hat);
            double sign = 1.0;
            if (prev_defined) {
                const Vec3 n_pred = transport(tr.normal[k - 1], tr.tangent[k - 1], t_hat);
                sign = (n_nat.dot(n_pred) >= 0.0) ? 1.0 : -1.0;
            }
            if (sign != frame_sign) {
                offset += M_PI; // sign toggle: a pi jump is folded into Phi downstream
                frame_sign = sign;
            }
            tr.normal[k] = sign * n_nat;
            tr.torsion[k] = cross12.dot(r3) / (cross_norm * cross_norm);
            last_torsion = tr.torsion[k];
            have_torsion = true;
        } else {
            ++floor_run;
            max_floor_run = std::max(max_floor_run, floor_run);
            Vec3 n = prev_defined ? transport(tr.normal[k - 1], tr.tangent[k - 1], t_hat)
                                  : fallback_normal(t_hat);
            n -= t_hat * t_hat.dot(n);
            tr.normal[k] = n.normalized();
            tr.torsion[k] = have_torsion ? last_torsion : 0.0;
        }
        tr.binormal[k] = t_hat.cross(tr.normal[k]);
        tr.phase_offset[k] = offset;
        prev_defined = true;
    }

    const double span_fraction = double(max_floor_run) / double(samples);
    if (span_fraction > options.max_floor_span_fraction)
        raise(errc::frame_ambiguity,
              "frenet_trace: curvature below floor over " + std::to_string(100.0 * span_fraction) +
                  "% of the curve");

    tr.start_point = curve.control_points.front();
    tr.closure_residual = curve.control_points.back() - curve.control_points.front();

    // integral of T x dT is parameterization-independent; evaluate it in the
    // x-parameterization, where T x T' = (r' x r'') / |r'|^2 is smooth through
    // inflections, with composite Gauss-Legendre panels.
    Vec3 area = Vec3::Zero();
    const int panels = std::max(64, options.quad_panels / 4);
    const double hx = 1.0 / panels;
    for (int p = 0; p < panels; ++p) {
        for (int g = 0; g < 4; ++g) {
            const double x = p * hx + 0.5 * hx * (1.0 + kGLNode[g]);
            const Vec3 r1 = ev.d1(x);
            const Vec3 r2 = ev.d2(x);
            area += (0.5 * hx * kGLWeight[g] / r1.squaredNorm()) * r1.cross(r2);
        }
    }
    tr.tangent_area = area;
    return tr;
}

Vec3 closure_residual(const GeometryTrace& trace) { return trace.closure_residual; }
Vec3 tangent_area(const GeometryTrace& trace) { return trace.tangent_area; }

Mat3 canonical_frame_rotation(const GeometryTrace& trace) {
    Mat3 frame;
    frame.col(0) = trace.tangent.front();
    frame.col(1) = trace.normal.front();
    frame.col(2) = trace.binormal.front();
    Mat3 canon;
    canon.col(0) = Vec3::UnitZ();
    canon.col(1) = Vec3::UnitY();
    canon.col(2) = -Vec3::UnitX();
    return canon * frame.transpose();
}

SpaceCurve canonicalized(const SpaceCurve& curve, const FrenetOptions& options) {
    const GeometryTrace tr = frenet_trace(curve, 64, options);
    const Mat3 rot = canonical_frame_rotation(tr);
    return rotated(translated(curve, -curve.control_points.front()), rot);
}

SpaceCurve normalized_arclength(const SpaceCurve& curve, int quad_panels) {
    const double length = arclength_map(curve, quad_panels).total_length();
    return scaled(curve, 1.0 / length);
}

} // namespace scqc
