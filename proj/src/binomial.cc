//
// Copyright 2026 The dpngram Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "dpngram/binomial.h"

#include <cmath>
#include <cstdint>
#include <random>

namespace dpngram {
namespace {

constexpr double kInversionMeanLimit = 30.0;

double Uniform(Rng& rng) { return std::generate_canonical<double, 64>(rng); }

// log(k!) - [(k + 1/2) log(k + 1) - (k + 1) + log(sqrt(2 pi))], the Stirling
// remainder used by BTRS.
double StirlingTail(double k) {
  static constexpr double kTail[] = {
      0.0810614667953272,  0.0413406959554092,  0.0276779256849983,
      0.02079067210376509, 0.0166446911898211,  0.0138761288230707,
      0.0118967099458917,  0.0104112652619720,  0.00925546218271273,
      0.00833056343336287};
  if (k <= 9) return kTail[static_cast<int>(k)];
  const double kp1sq = (k + 1) * (k + 1);
  return (1.0 / 12 - (1.0 / 360 - 1.0 / 1260 / kp1sq) / kp1sq) / (k + 1);
}

// Requires p <= 1/2 and n * p <= 30.
std::int64_t Inversion(std::int64_t n, double p, Rng& rng) {
  const double u = Uniform(rng);
  const double odds = p / (1.0 - p);
  double pmf = std::exp(static_cast<double>(n) * std::log1p(-p));
  double cdf = pmf;
  std::int64_t x = 0;
  while (u > cdf && x < n) {
    ++x;
    pmf *= odds * static_cast<double>(n - x + 1) / static_cast<double>(x);
    if (pmf == 0.0) break;  // the remaining mass is below double resolution
    cdf += pmf;
  }
  return x;
}

// Hormann (1993), "The generation of binomial random variates". Requires
// p <= 1/2 and n * p >= 10.
std::int64_t Btrs(std::int64_t count, double p, Rng& rng) {
  const double n = static_cast<double>(count);
  const double spq = std::sqrt(n * p * (1.0 - p));
  const double b = 1.15 + 2.53 * spq;
  const double a = -0.0873 + 0.0248 * b + 0.01 * p;
  const double c = n * p + 0.5;
  const double v_r = 0.92 - 4.2 / b;
  const double r = p / (1.0 - p);
  const double alpha = (2.83 + 5.1 / b) * spq;
  const double m = std::floor((n + 1) * p);
  while (true) {
    const double u = Uniform(rng) - 0.5;
    double v = Uniform(rng);
    const double us = 0.5 - std::fabs(u);
    const double k = std::floor((2 * a / us + b) * u + c);
    if (us >= 0.07 && v <= v_r) return static_cast<std::int64_t>(k);
    if (k < 0 || k > n) continue;
    v = std::log(v * alpha / (a / (us * us) + b));
    const double bound =
        (m + 0.5) * std::log((m + 1) / (r * (n - m + 1))) +
        (n + 1) * std::log((n - m + 1) / (n - k + 1)) +
        (k + 0.5) * std::log(r * (n - k + 1) / (k + 1)) + StirlingTail(m) +
        StirlingTail(n - m) - StirlingTail(k) - StirlingTail(n - k);
    if (v <= bound) return static_cast<std::int64_t>(k);
  }
}

}  // namespace

std::int64_t SampleBinomial(std::int64_t n, double p, Rng& rng) {
  if (n <= 0 || !(p > 0.0)) return 0;
  if (p >= 1.0) return n;
  if (p > 0.5) return n - SampleBinomial(n, 1.0 - p, rng);
  if (static_cast<double>(n) * p <= kInversionMeanLimit) {
    return Inversion(n, p, rng);
  }
  return Btrs(n, p, rng);
}

}  // namespace dpngram
