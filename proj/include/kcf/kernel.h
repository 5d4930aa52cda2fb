/*
 * Copyright 2026 The KCF Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef KCF_KERNEL_H_
#define KCF_KERNEL_H_

#include <string>
#include <string_view>
#include <vector>

namespace kcf {

enum class KernelFamily { kLinear, kPolynomial, kRbf, kTanimoto };

// A dot-product kernel k(x, y) = f(x . y) whose Maclaurin coefficients are
// all non-negative. With `reduced` set, the zero-degree coefficient a_0 is
// subtracted so that k(x, y) = 0 whenever x . y = 0, which gives the gram
// matrix the same sparsity pattern as the linear kernel.
//
// RBF is expressed on unit vectors: exp(-gamma |x - y|^2) =
// exp(-2 gamma) exp(2 gamma x.y). Tanimoto uses squared norms in the
// denominator, x.y / (|x|^2 + |y|^2 - x.y), i.e. x.y / (2 - x.y) on unit
// vectors.
struct KernelSpec {
  KernelFamily family = KernelFamily::kLinear;
  double offset = 1.0;  // polynomial c
  int degree = 2;       // polynomial d
  double gamma = 1.0;   // rbf
  bool reduced = true;

  static KernelSpec Linear() { return {}; }
  static KernelSpec Polynomial(double c, int d, bool reduced = true) {
    return {KernelFamily::kPolynomial, c, d, 1.0, reduced};
  }
  static KernelSpec Rbf(double gamma, bool reduced = true) {
    return {KernelFamily::kRbf, 1.0, 2, gamma, reduced};
  }
  static KernelSpec Tanimoto() {
    return {KernelFamily::kTanimoto, 1.0, 2, 1.0, true};
  }

  // Throws ConfigError for c < 0, d < 1, gamma <= 0 or non-finite values.
  void Validate() const;

  // Canonical text form, e.g. "polynomial(c=1,d=2,reduced)". Used as cache
  // key and in config echoes.
  std::string ToString() const;

  friend bool operator==(const KernelSpec&, const KernelSpec&) = default;
};

std::string_view FamilyName(KernelFamily family);
// Accepts "linear", "polynomial" (or "poly"), "rbf", "tanimoto".
KernelFamily ParseFamily(std::string_view name);

// Validated, precomputed evaluator for one spec. Cheap to call in inner loops.
class DotKernel {
 public:
  explicit DotKernel(const KernelSpec& spec);

  double operator()(double dot, double norm_i = 1.0,
                    double norm_j = 1.0) const;
  const KernelSpec& spec() const { return spec_; }

 private:
  KernelSpec spec_;
  // Polynomial s >= 1 coefficients, C(d, s) c^(d - s), index s - 1.
  std::vector<double> poly_terms_;
};

// f(dot), minus a_0 when spec.reduced. Norms only matter for rbf and
// tanimoto; they default to the unit-norm convention used for item vectors.
double KernelEval(const KernelSpec& spec, double dot, double norm_i = 1.0,
                  double norm_j = 1.0);

// a_0..a_order of the unit-norm Maclaurin expansion of f. The reduced flag
// does not change the returned series (a_0 is always the family's value).
std::vector<double> MaclaurinCoefficients(const KernelSpec& spec, int order);

// a_0, the constant that reduction removes.
double ZeroDegreeTerm(const KernelSpec& spec);

inline KernelSpec Reduce(KernelSpec spec) {
  spec.reduced = true;
  return spec;
}

}  // namespace kcf

#endif  // KCF_KERNEL_H_
