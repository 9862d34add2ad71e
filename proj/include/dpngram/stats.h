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

#ifndef DPNGRAM_STATS_H_
#define DPNGRAM_STATS_H_

#include <cstdint>
#include <span>

namespace dpngram {

struct ChiSquareResult {
  double statistic = 0.0;
  int degrees_of_freedom = 0;
  double p_value = 1.0;
};

// Pearson chi-square test that two count vectors over the same cells come
// from one distribution. Cells whose combined expected count is below
// `min_expected` are pooled into a single cell. Fewer than two usable cells
// yields statistic 0 and p-value 1.
ChiSquareResult ChiSquareHomogeneity(std::span<const std::int64_t> a,
                                     std::span<const std::int64_t> b,
                                     double min_expected = 5.0);

// Upper tail of the chi-square distribution, Pr[X > statistic].
double ChiSquareSf(double statistic, int degrees_of_freedom);

}  // namespace dpngram

#endif  // DPNGRAM_STATS_H_
