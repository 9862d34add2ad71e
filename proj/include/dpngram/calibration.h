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

#ifndef DPNGRAM_CALIBRATION_H_
#define DPNGRAM_CALIBRATION_H_

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace dpngram {

// Privacy contract for a single run. The total delta is split between the
// Gaussian mechanism and the level-1 spillover event.
struct PrivacyParams {
  double epsilon = 1.0;
  double delta = 0.0;
  double sensitivity = 1.0;  // l2 sensitivity of each per-level histogram
  int levels = 1;
  double delta_mech = 0.0;
  double delta_spill = 0.0;

  // Builds params with delta_mech = mech_fraction * delta and
  // delta_spill = delta - delta_mech.
  static absl::StatusOr<PrivacyParams> Create(double epsilon, double delta,
                                              double sensitivity = 1.0,
                                              int levels = 1,
                                              double mech_fraction = 0.5);

  absl::Status Validate() const;
};

struct CalibrationResult {
  double sigma_star = 0.0;       // noise of the single equivalent mechanism
  double sigma_per_level = 0.0;  // sigma_star * sqrt(levels)
};

// Exact (epsilon, delta) curve of the Gaussian mechanism:
//   Phi(D/(2s) - eps*s/D) - e^eps * Phi(-D/(2s) - eps*s/D).
// Strictly decreasing in sigma.
absl::StatusOr<double> BwDelta(double sigma, double epsilon,
                               double sensitivity);

// Smallest sigma with BwDelta(sigma) <= delta_mech, by bisection on
// sigma / sensitivity over [1e-6, 1e6] to relative tolerance 1e-12.
absl::StatusOr<double> CalibrateSigma(double epsilon, double delta_mech,
                                      double sensitivity);

// Per-level noise for `levels` compositions so that sum 1/sigma_k^2 equals
// 1/sigma_star^2.
double ComposeSigma(double sigma_star, int levels);

absl::StatusOr<CalibrationResult> Calibrate(const PrivacyParams& params);

// Level-1 spillover threshold:
//   max_{1<=t<=max_contribution} 1/sqrt(t) + sigma * Phi^{-1}((1-d)^{1/t}).
absl::StatusOr<double> Rho1(double sigma, double delta_spill,
                            int max_contribution);

// Spurious-control threshold for levels k >= 2:
//   sigma_k * Phi^{-1}(1 - eta * min(prev_release_size / candidate_size, 1)).
absl::StatusOr<double> RhoKgramBase(double sigma_k, double eta,
                                    double prev_release_size,
                                    double candidate_size);

struct PolicyGaussianThresholds {
  double sigma = 0.0;
  double rho_pg = 0.0;    // worst case over contribution sizes t
  double rho_zero = 0.0;  // zero-mass benchmark at t = delta0
  int argmax_t = 1;

  double surcharge() const { return rho_pg - rho_zero; }
};

// Thresholds of the Policy Gaussian set-union mechanism with the even split
// delta_mech = delta_spill = delta / 2 and unit sensitivity.
absl::StatusOr<PolicyGaussianThresholds> RhoPolicyGaussian(double epsilon,
                                                           double delta,
                                                           int delta0);

}  // namespace dpngram

#endif  // DPNGRAM_CALIBRATION_H_
