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

#ifndef DPNGRAM_NORMAL_H_
#define DPNGRAM_NORMAL_H_

namespace dpngram {

// Standard normal CDF, Phi(x).
double NormalCdf(double x);

// Upper tail 1 - Phi(x), accurate for large positive x.
double NormalSf(double x);

// Phi^{-1}(p) for p in (0, 1). Returns -inf / +inf at the endpoints and NaN
// outside [0, 1]. Relative accuracy is near machine precision in both tails.
double NormalQuantile(double p);

// Phi^{-1}(1 - q), computed from q directly so that q down to the smallest
// normal double keeps full precision.
double NormalUpperQuantile(double q);

// 1 - (1 - delta)^{1/t} without cancellation.
double OneMinusRootOfComplement(double delta, double t);

}  // namespace dpngram

#endif  // DPNGRAM_NORMAL_H_
