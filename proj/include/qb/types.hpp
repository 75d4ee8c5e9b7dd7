// types.hpp - shared linear-algebra aliases and the tagged density matrix

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>

namespace qb {

using Mat3 = Eigen::Matrix3d;
using Mat3c = Eigen::Matrix3cd;
using Vec3 = Eigen::Vector3d;
using Vec9c = Eigen::Matrix<std::complex<double>, 9, 1>;
using Mat9c = Eigen::Matrix<std::complex<double>, 9, 9>;

// States live either in the instantaneous eigenbasis of the driven
// Hamiltonian or in the bare level basis; mixing them is a caller bug,
// so the basis travels with the matrix.
enum class Basis { Eigen, Bare };

struct DensityMatrix {
    Mat3c m = Mat3c::Zero();
    Basis basis = Basis::Eigen;
};

inline const char* basis_name(Basis b) {
    return b == Basis::Eigen ? "eigen" : "bare";
}

// Row-major vectorization: vec(rho)[3*i + j] = rho(i, j).
inline Vec9c vectorize(const Mat3c& rho) {
    Vec9c v;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) v[3 * i + j] = rho(i, j);
    return v;
}

inline Mat3c unvectorize(const Vec9c& v) {
    Mat3c rho;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) rho(i, j) = v[3 * i + j];
    return rho;
}

inline double min_eigenvalue(const Mat3c& rho) {
    Eigen::SelfAdjointEigenSolver<Mat3c> es(rho, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

// Hermitian to 1e-10, unit trace to 1e-10, eigenvalues >= -1e-8.
inline void validate_state(const DensityMatrix& rho) {
    const Mat3c& m = rho.m;
    if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
        throw std::invalid_argument("density matrix is not Hermitian");
    if (std::abs(m.trace() - std::complex<double>(1.0)) > 1e-10)
        throw std::invalid_argument("density matrix trace is not 1");
    if (min_eigenvalue(m) < -1e-8)
        throw std::invalid_argument("density matrix has a negative eigenvalue");
}

}  // namespace qb
