// Copyright 2026 The qlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QLAB_LINALG_HPP
#define QLAB_LINALG_HPP

#include <Eigen/Dense>
#include <complex>
#include <utility>

#include "qlab/error.hpp"

namespace qlab {

using Complex = std::complex<double>;

// Dense row-major storage throughout. Dimensions stay desk-scale (<= 64),
// so there is no sparse or tuned path.
using ComplexMatrix =
    Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// Entrywise Hermiticity tolerance shared by every consumer of the kernel.
inline constexpr double kHermitianTol = 1e-10;

ComplexMatrix identity(int d);
ComplexMatrix dagger(const ComplexMatrix& m);
bool all_finite(const ComplexMatrix& m);
double max_abs(const ComplexMatrix& m);
bool is_hermitian(const ComplexMatrix& m, double tol = kHermitianTol);

// tr(a b) in O(d^2); both arguments square and of equal dimension.
Complex trace_product(const ComplexMatrix& a, const ComplexMatrix& b);

// Kronecker product; entry ((i*rb + p), (j*cb + q)) = a(i,j) * b(p,q).
ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b);

// Reduces an operator on a bipartite space of declared factor dimensions to
// one subsystem. keep = 0 keeps the first factor, keep = 1 the second.
// Throws "bad-factorization" when m is not square of size dims.first *
// dims.second.
ComplexMatrix partial_trace(const ComplexMatrix& m, std::pair<int, int> dims,
                            int keep);

struct EigResult {
  RealVector eigenvalues;    // ascending
  ComplexMatrix eigenvectors;  // columns, orthonormal
};

// Hermitian eigendecomposition. The input must be Hermitian within
// kHermitianTol ("not-hermitian" otherwise) and is symmetrized
// ((m + m^dag)/2) before factorization to absorb float drift accumulated by
// long map compositions.
EigResult eig_hermitian(const ComplexMatrix& m);

// Sum of absolute eigenvalues of a Hermitian matrix.
double trace_norm(const ComplexMatrix& m);

// ||a - b||_1 / 2 for Hermitian a, b.
double trace_distance(const ComplexMatrix& a, const ComplexMatrix& b);

// R with |R m R - I| < 1e-8 entrywise; every eigenvalue of m must be >= eps
// ("near-singular" otherwise).
ComplexMatrix inv_sqrt_psd(const ComplexMatrix& m, double eps);

ComplexVector basis_ket(int d, int k);
ComplexMatrix basis_projector(int d, int k);  // |k><k|
ComplexMatrix projector(const ComplexVector& v);

ComplexMatrix pauli_x();
ComplexMatrix pauli_y();
ComplexMatrix pauli_z();

// exp(-i t h) for Hermitian h, via spectral decomposition.
ComplexMatrix evolution_unitary(const ComplexMatrix& h, double t);

}  // namespace qlab

#endif  // QLAB_LINALG_HPP
