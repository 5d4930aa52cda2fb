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

#include "kcf/kernel.h"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "kcf/errors.h"

namespace kcf {

void KernelSpec::Validate() const {
  switch (family) {
    case KernelFamily::kLinear:
    case KernelFamily::kTanimoto:
      return;
    case KernelFamily::kPolynomial:
      if (!std::isfinite(offset) || offset < 0.0) {
        throw ConfigError("polynomial kernel needs a finite offset c >= 0");
      }
      if (degree < 1) throw ConfigError("polynomial kernel needs degree >= 1");
      return;
    case KernelFamily::kRbf:
      if (!std::isfinite(gamma) || gamma <= 0.0) {
        throw ConfigError("rbf kernel needs a finite gamma > 0");
      }
      return;
  }
}

std::string KernelSpec::ToString() const {
  char buffer[128];
  const char* suffix = reduced ? "reduced" : "full";
  switch (family) {
    case KernelFamily::kLinear:
      return "linear";
    case KernelFamily::kTanimoto:
      return "tanimoto";
    case KernelFamily::kPolynomial:
      std::snprintf(buffer, sizeof(buffer), "polynomial(c=%.17g,d=%d,%s)",
                    offset, degree, suffix);
      return buffer;
    case KernelFamily::kRbf:
      std::snprintf(buffer, sizeof(buffer), "rbf(gamma=%.17g,%s)", gamma,
                    suffix);
      return buffer;
  }
  return "unknown";
}

std::string_view FamilyName(KernelFamily family) {
  switch (family) {
    case KernelFamily::kLinear:
      return "linear";
    case KernelFamily::kPolynomial:
      return "polynomial";
    case KernelFamily::kRbf:
      return "rbf";
    case KernelFamily::kTanimoto:
      return "tanimoto";
  }
  return "unknown";
}

KernelFamily ParseFamily(std::string_view name) {
  if (name == "linear") return KernelFamily::kLinear;
  if (name == "polynomial" || name == "poly") return KernelFamily::kPolynomial;
  if (name == "rbf") return KernelFamily::kRbf;
  if (name == "tanimoto") return KernelFamily::kTanimoto;
  throw ConfigError("unknown kernel family '" + std::string(name) + "'");
}

namespace {

double Binomial(int n, int k) {
  double result = 1.0;
  for (int j = 1; j <= k; ++j) result = result * (n - k + j) / j;
  return result;
}

}  // namespace

DotKernel::DotKernel(const KernelSpec& spec) : spec_(spec) {
  spec_.Validate();
  if (spec_.family == KernelFamily::kPolynomial) {
    for (int s = 1; s <= spec_.degree; ++s) {
      poly_terms_.push_back(Binomial(spec_.degree, s) *
                            std::pow(spec_.offset, spec_.degree - s));
    }
  }
}

double DotKernel::operator()(double dot, double norm_i, double norm_j) const {
  switch (spec_.family) {
    case KernelFamily::kLinear:
      return dot;
    case KernelFamily::kPolynomial: {
      if (!spec_.reduced) return std::pow(dot + spec_.offset, spec_.degree);
      // Sum the s >= 1 terms directly so that dot = 0 gives an exact zero.
      double sum = 0.0;
      double power = 1.0;
      for (double term : poly_terms_) {
        power *= dot;
        sum += term * power;
      }
      return sum;
    }
    case KernelFamily::kRbf: {
      const double scale =
          std::exp(-spec_.gamma * (norm_i * norm_i + norm_j * norm_j));
      const double arg = 2.0 * spec_.gamma * dot;
      return spec_.reduced ? scale * std::expm1(arg) : scale * std::exp(arg);
    }
    case KernelFamily::kTanimoto: {
      const double denominator = norm_i * norm_i + norm_j * norm_j - dot;
      return denominator == 0.0 ? 0.0 : dot / denominator;
    }
  }
  return 0.0;
}

double KernelEval(const KernelSpec& spec, double dot, double norm_i,
                  double norm_j) {
  return DotKernel(spec)(dot, norm_i, norm_j);
}

std::vector<double> MaclaurinCoefficients(const KernelSpec& spec, int order) {
  spec.Validate();
  if (order < 0) throw ContractError("series order must be non-negative");
  std::vector<double> a(order + 1, 0.0);
  switch (spec.family) {
    case KernelFamily::kLinear:
      if (order >= 1) a[1] = 1.0;
      break;
    case KernelFamily::kPolynomial:
      for (int s = 0; s <= std::min(order, spec.degree); ++s) {
        a[s] = Binomial(spec.degree, s) * std::pow(spec.offset, spec.degree - s);
      }
      break;
    case KernelFamily::kRbf: {
      double term = std::exp(-2.0 * spec.gamma);
      for (int s = 0; s <= order; ++s) {
        a[s] = term;
        term *= 2.0 * spec.gamma / (s + 1);
      }
      break;
    }
    case KernelFamily::kTanimoto: {
      double term = 0.5;
      for (int s = 1; s <= order; ++s) {
        a[s] = term;
        term *= 0.5;
      }
      break;
    }
  }
  return a;
}

double ZeroDegreeTerm(const KernelSpec& spec) {
  return MaclaurinCoefficients(spec, 0)[0];
}

}  // namespace kcf
