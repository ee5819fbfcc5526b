#pragma once

#include <Eigen/Core>
#include <Eigen/LU>
#include <array>
#include <complex>

namespace dsf {

using Complex = std::complex<double>;

// Two-component complex amplitude (u1, u2) = (v(0), v(1)).
using SpinorAmplitude = Eigen::Vector2cd;
using Matrix2 = Eigen::Matrix2cd;

inline SpinorAmplitude spinor(Complex u1, Complex u2) { return SpinorAmplitude(u1, u2); }

// <a, b>, antilinear in the first slot.
inline Complex inner(const SpinorAmplitude& a, const SpinorAmplitude& b) { return a.dot(b); }

inline Matrix2 sigma3() {
    Matrix2 s;
    s << 1.0, 0.0, 0.0, -1.0;
    return s;
}

bool all_finite(const SpinorAmplitude& v);

// Largest entrywise modulus of a - b.
double max_entry_diff(const Matrix2& a, const Matrix2& b);
// max |a_ij - conj(a_ji)|.
double hermiticity_defect(const Matrix2& a);

struct HermitianEigen {
    std::array<double, 2> values{};              // ascending
    std::array<SpinorAmplitude, 2> vectors{};    // orthonormal, matching values
};

// Eigen-decomposition of the Hermitian part of a 2x2 matrix.
HermitianEigen eigen_hermitian(const Matrix2& a);

}  // namespace dsf
