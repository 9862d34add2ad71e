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

#ifndef DPNGRAM_BINOMIAL_H_
#define DPNGRAM_BINOMIAL_H_

#include <cstdint>

#include "dpngram/rng.h"

namespace dpngram {

// Draws from Binomial(n, p) exactly: sequential inversion when n * min(p, 1-p)
// is at most 30, Hormann's BTRS transformed rejection otherwise. Never uses a
// normal approximation, so it stays exact for n ~ 1e8 and p ~ 1e-20.
// n < 0 or p outside [0, 1] is treated as an empty draw and returns 0.
std::int64_t SampleBinomial(std::int64_t n, double p, Rng& rng);

}  // namespace dpngram

#endif  // DPNGRAM_BINOMIAL_H_
