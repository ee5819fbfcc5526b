#include "dsf/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace dsf {

bool all_finite(const SpinorAmplitude& v) {
    for (int i = 0; i < 2; ++i) {
        if (!std::isfinite(v(i).real()) || !std::isfinite(v(i).imag())) return false;
    }
    return true;
}

double max_entry_diff(const Matrix2& a, const Matrix2& b) { return (a - b).cwiseAbs().maxCoeff(); }

double hermiticity_defect(const Matrix2& a) { return (a - a.adjoint()).cwiseAbs().maxCoeff(); }

HermitianEigen eigen_hermitian(const Matrix2& a) {
    const Matrix2 h = 0.5 * (a + a.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix2> solver(h);
    HermitianEigen out;
    for (int i = 0; i < 2; ++i) {
        out.values[i] = solver.eigenvalues()(i);
        out.vectors[i] = solver.eigenvectors().col(i);
    }
    return out;
}

}  // namespace dsf
