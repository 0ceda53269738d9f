#include "scqc/linalg.hpp"

#include <cmath>

#include "scqc/errors.hpp"

namespace scqc {

const char* errc_name(errc code) {
    switch (code) {
        case errc::domain_error: return "domain_error";
        case errc::degenerate_parameterization: return "degenerate_parameterization";
        case errc::frame_ambiguity: return "frame_ambiguity";
        case errc::capacity: return "capacity";
        case errc::resolution: return "resolution";
        case errc::convergence: return "convergence";
        case errc::input: return "input";
        case errc::reconstruction: return "reconstruction";
        case errc::fit: return "fit";
        case errc::config: return "config";
        case errc::io_error: return "io_error";
    }
    return "unknown";
}

Mat2c pauli_vec(const Vec3& v) {
    Mat2c m;
    m << cd(v.z(), 0), cd(v.x(), -v.y()),
         cd(v.x(), v.y()), cd(-v.z(), 0);
    return m;
}

Vec3 bloch_of_hermitian(const Mat2c& a) {
    Vec3 v;
    v.x() = 0.5 * std::real(a(0, 1) + a(1, 0));
    v.y() = 0.5 * std::real(cd(0, 1) * (a(0, 1) - a(1, 0)));
    v.z() = 0.5 * std::real(a(0, 0) - a(1, 1));
    return v;
}

Mat2c su2_exp(const Vec3& a) {
    const double t = a.norm();
    if (t < 1e-300) return Mat2c::Identity();
    const double c = std::cos(t);
    const double s = std::sin(t) / t;
    Mat2c m;
    m << cd(c, -s * a.z()), cd(-s * a.y(), -s * a.x()),
         cd(s * a.y(), -s * a.x()), cd(c, s * a.z());
    return m;
}

Mat2c rz(double theta) {
    Mat2c m = Mat2c::Zero();
    m(0, 0) = std::exp(cd(0, -theta / 2));
    m(1, 1) = std::exp(cd(0, theta / 2));
    return m;
}

Mat3 rotation_of_su2(const Mat2c& u) {
    const Mat2c s[3] = {pauli_x(), pauli_y(), pauli_z()};
    Mat3 r;
    for (int i = 0; i < 3; ++i) {
        const Mat2c ui = u * s[i] * u.adjoint();
        const Vec3 col = bloch_of_hermitian(ui);
        r.col(i) = col;
    }
    return r;
}

double operator_norm(const Mat2c& m) {
    Eigen::JacobiSVD<Mat2c> svd(m);
    return svd.singularValues()(0);
}

double phase_invariant_distance(const Mat2c& u, const Mat2c& v) {
    const cd tr = (v.adjoint() * u).trace();
    const double a = std::abs(tr);
    const cd phase = (a < 1e-300) ? cd(1, 0) : tr / a;
    return operator_norm(u - phase * v);
}

bool is_unitary(const Mat2c& u, double tol) {
    return operator_norm(u.adjoint() * u - Mat2c::Identity()) <= tol;
}

Mat2c to_su2(const Mat2c& u) {
    const cd det = u.determinant();
    const double mag = std::abs(det);
    if (mag < 1e-12) raise(errc::input, "to_su2: matrix is singular");
    // det(c*U) = c^2 det(U); divide by a square root of the phase.
    const cd root = std::sqrt(det / mag) * std::sqrt(mag);
    return u / root;
}

} // namespace scqc
