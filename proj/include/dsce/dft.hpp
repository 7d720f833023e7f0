#pragma once

#include <complex>

#include <Eigen/Dense>

namespace dsce {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

// Every module shares one DFT convention, the unitary matrix
//   W[m,n] = exp(-i 2 pi m n / N) / sqrt(N),
// so forward/inverse transforms preserve the Euclidean norm exactly.

// Dense W for a given size (test and analysis paths).
CMatrix dft_matrix(int n);

// W * x. Radix-2 FFT when the length is a power of two, direct sum otherwise.
CVector unitary_dft(const CVector& x);

// W^H * x.
CVector unitary_idft(const CVector& x);

}  // namespace dsce
