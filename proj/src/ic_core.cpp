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

#include "src/ic_core.hpp"

#include <map>
#include <mutex>
#include <string>

#include "qlab/rng.hpp"

namespace qlab::detail {
namespace {

constexpr double kMaxCondition = 1e6;
constexpr std::uint64_t kCanonicalSeed = 20260101;

ComplexVector haar_ket(int dim, Rng& rng) {
  ComplexVector v(dim);
  for (int i = 0; i < dim; ++i) v[i] = rng.complex_normal();
  const double n = v.norm();
  if (n < 1e-12) return basis_ket(dim, 0);  // astronomically unlikely
  return v / n;
}

}  // namespace

std::pair<double, double> gram_extremes(
    const std::vector<ComplexMatrix>& effects) {
  const int n = static_cast<int>(effects.size());
  ComplexMatrix gram(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      // Hermitian effects make the HS inner product real.
      const double g = trace_product(effects[i], effects[j]).real();
      gram(i, j) = g;
      gram(j, i) = g;
    }
  const EigResult eig = eig_hermitian(gram);
  return {eig.eigenvalues[0], eig.eigenvalues[n - 1]};
}

IcFrame make_ic_frame(int dim, std::uint64_t seed, int max_retries,
                      bool check_conditioning) {
  if (dim < 2) fail("ic-construction-failed", "dimension must be >= 2");
  const int n = dim * dim;
  for (int attempt = 0; attempt <= max_retries; ++attempt) {
    Rng rng(seed + static_cast<std::uint64_t>(attempt));
    std::vector<ComplexMatrix> kets;
    kets.reserve(n);
    ComplexMatrix frame_op = ComplexMatrix::Zero(dim, dim);
    for (int i = 0; i < n; ++i) {
      kets.push_back(projector(haar_ket(dim, rng)));
      frame_op += kets.back();
    }

    ComplexMatrix dress;
    try {
      dress = inv_sqrt_psd(frame_op, 1e-9);
    } catch (const Error&) {
      continue;  // degenerate draw, try the next seed
    }

    IcFrame out;
    out.effects.reserve(n);
    for (const ComplexMatrix& k : kets) {
      ComplexMatrix e = dress * k * dress;
      out.effects.push_back(0.5 * (e + e.adjoint()));
    }
    if (check_conditioning) {
      const auto [lo, hi] = gram_extremes(out.effects);
      if (lo <= 0.0 || hi / lo >= kMaxCondition) continue;
      out.gram_min = lo;
      out.gram_max = hi;
    }
    return out;
  }
  fail("ic-construction-failed",
       "no informationally complete frame for dim " + std::to_string(dim) +
           " within retry budget");
}

const IcFrame& canonical_frame(int dim) {
  static std::mutex mutex;
  static std::map<int, IcFrame> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(dim);
  if (it == cache.end())
    it = cache.emplace(dim, make_ic_frame(dim, kCanonicalSeed, 16,
                                          /*check_conditioning=*/false))
             .first;
  return it->second;
}

double canonical_prob_gap(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows())
    fail("dim-mismatch", "cannot compare operators of unequal dimension");
  const IcFrame& frame = canonical_frame(static_cast<int>(a.rows()));
  double gap = 0.0;
  for (const ComplexMatrix& e : frame.effects) {
    const double pa = trace_product(a, e).real();
    const double pb = trace_product(b, e).real();
    gap = std::max(gap, std::abs(pa - pb));
  }
  return gap;
}

}  // namespace qlab::detail
