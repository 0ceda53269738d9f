#pragma once

#include <complex>
#include <Eigen/Dense>

namespace scqc {

using cd = std::complex<double>;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Mat2c = Eigen::Matrix2cd;
using Mat4c = Eigen::Matrix4cd;

inline Mat2c pauli_x() { Mat2c m; m << cd(0, 0), cd(1, 0), cd(1, 0), cd(0, 0); return m; }
inline Mat2c pauli_y() { Mat2c m; m << cd(0, 0), cd(0, -1), cd(0, 1), cd(0, 0); return m; }
inline Mat2c pauli_z() { Mat2c m; m << cd(1, 0), cd(0, 0), cd(0, 0), cd(-1, 0); return m; }

// v . sigma
Mat2c pauli_vec(const Vec3& v);

// Coefficients a of the traceless Hermitian part: A = a . sigma + (tr A / 2) I.
Vec3 bloch_of_hermitian(const Mat2c& a);

// exp(-i a . sigma), closed form.
Mat2c su2_exp(const Vec3& a);

// exp(-i theta sigma_z / 2)
Mat2c rz(double theta);

// Adjoint SO(3) rotation of an SU(2)-like unitary: R_ij = Re tr(sigma_i U sigma_j U^dag) / 2.
Mat3 rotation_of_su2(const Mat2c& u);

double operator_norm(const Mat2c& m);

// min over global phase of ||U - e^{i phi} V||_op
double phase_invariant_distance(const Mat2c& u, const Mat2c& v);

bool is_unitary(const Mat2c& u, double tol = 1e-9);

// Rescale so det = 1 (SU(2) representative); input must be unitary.
Mat2c to_su2(const Mat2c& u);

} // namespace scqc
