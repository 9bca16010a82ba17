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

#include "qlab/linalg.hpp"

#include <cmath>
#include <string>

namespace qlab {

ComplexMatrix identity(int d) {
  return ComplexMatrix::Identity(d, d);
}

ComplexMatrix dagger(const ComplexMatrix& m) {
  return m.adjoint();
}

bool all_finite(const ComplexMatrix& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const Complex& z = m(i, j);
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    }
  return true;
}

double max_abs(const ComplexMatrix& m) {
  double best = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      best = std::max(best, std::abs(m(i, j)));
  return best;
}

bool is_hermitian(const ComplexMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return max_abs(m - m.adjoint()) < tol;
}

Complex trace_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows())
    fail("dim-mismatch", "trace_product requires equal square matrices");
  Complex sum = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) sum += a(i, j) * b(j, i);
  return sum;
}

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, std::pair<int, int> dims,
                            int keep) {
  const int da = dims.first;
  const int db = dims.second;
  if (da <= 0 || db <= 0 || keep < 0 || keep > 1)
    fail("bad-factorization", "subsystem dims must be positive, keep in {0,1}");
  if (m.rows() != m.cols() ||
      m.rows() != static_cast<Eigen::Index>(da) * db)
    fail("bad-factorization",
         "matrix of dim " + std::to_string(m.rows()) +
             " does not factor as " + std::to_string(da) + "x" +
             std::to_string(db));

  if (keep == 0) {
    ComplexMatrix out = ComplexMatrix::Zero(da, da);
    for (int i = 0; i < da; ++i)
      for (int j = 0; j < da; ++j)
        for (int p = 0; p < db; ++p) out(i, j) += m(i * db + p, j * db + p);
    return out;
  }
  ComplexMatrix out = ComplexMatrix::Zero(db, db);
  for (int p = 0; p < db; ++p)
    for (int q = 0; q < db; ++q)
      for (int i = 0; i < da; ++i) out(p, q) += m(i * db + p, i * db + q);
  return out;
}

EigResult eig_hermitian(const ComplexMatrix& m) {
  if (m.rows() != m.cols())
    fail("not-hermitian", "matrix is not square");
  if (!is_hermitian(m))
    fail("not-hermitian",
         "max |m - m^dag| = " + std::to_string(max_abs(m - m.adjoint())));
  const ComplexMatrix sym = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym);
  if (solver.info() != Eigen::Success)
    fail("not-hermitian", "eigensolver did not converge");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

double trace_norm(const ComplexMatrix& m) {
  const EigResult eig = eig_hermitian(m);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < eig.eigenvalues.size(); ++i)
    sum += std::abs(eig.eigenvalues[i]);
  return sum;
}

double trace_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    fail("dim-mismatch", "trace_distance requires equal dimensions");
  return 0.5 * trace_norm(a - b);
}

ComplexMatrix inv_sqrt_psd(const ComplexMatrix& m, double eps) {
  if (!(eps > 0.0)) fail("near-singular", "eps must be positive");
  const EigResult eig = eig_hermitian(m);
  const int d = static_cast<int>(eig.eigenvalues.size());
  if (eig.eigenvalues[0] < eps)
    fail("near-singular", "eigenvalue " + std::to_string(eig.eigenvalues[0]) +
                              " below eps " + std::to_string(eps));
  RealVector scale(d);
  for (int i = 0; i < d; ++i) scale[i] = 1.0 / std::sqrt(eig.eigenvalues[i]);
  return eig.eigenvectors * scale.asDiagonal() * eig.eigenvectors.adjoint();
}

ComplexVector basis_ket(int d, int k) {
  ComplexVector v = ComplexVector::Zero(d);
  v[k] = 1.0;
  return v;
}

ComplexMatrix basis_projector(int d, int k) {
  ComplexMatrix p = ComplexMatrix::Zero(d, d);
  p(k, k) = 1.0;
  return p;
}

ComplexMatrix projector(const ComplexVector& v) {
  return v * v.adjoint();
}

ComplexMatrix pauli_x() {
  ComplexMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

ComplexMatrix pauli_y() {
  ComplexMatrix m(2, 2);
  m << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
  return m;
}

ComplexMatrix pauli_z() {
  ComplexMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

ComplexMatrix evolution_unitary(const ComplexMatrix& h, double t) {
  const EigResult eig = eig_hermitian(h);
  const int d = static_cast<int>(eig.eigenvalues.size());
  ComplexVector phases(d);
  for (int i = 0; i < d; ++i)
    phases[i] = std::exp(Complex(0.0, -t * eig.eigenvalues[i]));
  return eig.eigenvectors * phases.asDiagonal() * eig.eigenvectors.adjoint();
}

}  // namespace qlab
