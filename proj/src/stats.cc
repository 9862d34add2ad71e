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

#include "dpngram/stats.h"

#include <algorithm>
#include <cstddef>
#include <vector>

#include "boost/math/special_functions/gamma.hpp"

namespace dpngram {

double ChiSquareSf(double statistic, int degrees_of_freedom) {
  if (degrees_of_freedom < 1) return 1.0;
  if (!(statistic > 0.0)) return 1.0;
  return boost::math::gamma_q(0.5 * degrees_of_freedom, 0.5 * statistic);
}

ChiSquareResult ChiSquareHomogeneity(std::span<const std::int64_t> a,
                                     std::span<const std::int64_t> b,
                                     double min_expected) {
  const std::size_t cells = std::min(a.size(), b.size());
  double total_a = 0.0;
  double total_b = 0.0;
  for (std::size_t i = 0; i < cells; ++i) {
    total_a += static_cast<double>(a[i]);
    total_b += static_cast<double>(b[i]);
  }
  ChiSquareResult out;
  if (total_a <= 0.0 || total_b <= 0.0) return out;
  const double total = total_a + total_b;

  // The smaller of the two expected counts decides whether a cell stands
  // alone; the rest are merged.
  const double smaller_share = std::min(total_a, total_b) / total;
  std::vector<std::pair<double, double>> kept;
  double pooled_a = 0.0;
  double pooled_b = 0.0;
  for (std::size_t i = 0; i < cells; ++i) {
    const double ai = static_cast<double>(a[i]);
    const double bi = static_cast<double>(b[i]);
    if ((ai + bi) * smaller_share >= min_expected) {
      kept.emplace_back(ai, bi);
    } else {
      pooled_a += ai;
      pooled_b += bi;
    }
  }
  if (pooled_a + pooled_b > 0.0) kept.emplace_back(pooled_a, pooled_b);
  if (kept.size() < 2) return out;

  double statistic = 0.0;
  for (const auto& [ai, bi] : kept) {
    const double row = ai + bi;
    const double ea = row * total_a / total;
    const double eb = row * total_b / total;
    statistic += (ai - ea) * (ai - ea) / ea + (bi - eb) * (bi - eb) / eb;
  }
  out.statistic = statistic;
  out.degrees_of_freedom = static_cast<int>(kept.size()) - 1;
  out.p_value = ChiSquareSf(statistic, out.degrees_of_freedom);
  return out;
}

}  // namespace dpngram
