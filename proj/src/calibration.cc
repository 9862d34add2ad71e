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

#include "dpngram/calibration.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "dpngram/normal.h"

namespace dpngram {
namespace {

constexpr double kBracketLow = 1e-6;
constexpr double kBracketHigh = 1e6;
constexpr int kMaxBisections = 200;
constexpr double kRelativeTolerance = 1e-12;

// Delta curve in units where the sensitivity is one.
double NormalizedBwDelta(double s, double epsilon) {
  const double a = 0.5 / s;
  const double b = epsilon * s;
  const double value = NormalCdf(a - b) - std::exp(epsilon) * NormalCdf(-a - b);
  return std::max(value, 0.0);
}

}  // namespace

absl::StatusOr<PrivacyParams> PrivacyParams::Create(double epsilon,
                                                    double delta,
                                                    double sensitivity,
                                                    int levels,
                                                    double mech_fraction) {
  if (!(mech_fraction > 0.0 && mech_fraction < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("mech_fraction must lie in (0, 1), got ", mech_fraction));
  }
  PrivacyParams params;
  params.epsilon = epsilon;
  params.delta = delta;
  params.sensitivity = sensitivity;
  params.levels = levels;
  params.delta_mech = mech_fraction * delta;
  params.delta_spill = delta - params.delta_mech;
  if (absl::Status status = params.Validate(); !status.ok()) return status;
  return params;
}

absl::Status PrivacyParams::Validate() const {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    return absl::InvalidArgumentError(
        absl::StrCat("epsilon must be positive and finite, got ", epsilon));
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("delta must lie in (0, 1), got ", delta));
  }
  if (!(sensitivity > 0.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("sensitivity must be positive, got ", sensitivity));
  }
  if (levels < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("levels must be at least 1, got ", levels));
  }
  if (!(delta_mech > 0.0) || !(delta_spill > 0.0) ||
      std::fabs(delta_mech + delta_spill - delta) > 1e-15 * delta) {
    return absl::InvalidArgumentError(
        "delta_mech and delta_spill must be positive and sum to delta");
  }
  return absl::OkStatus();
}

absl::StatusOr<double> BwDelta(double sigma, double epsilon,
                               double sensitivity) {
  if (!(sigma > 0.0)) {
    return absl::OutOfRangeError(
        absl::StrCat("sigma must be positive, got ", sigma));
  }
  if (!(sensitivity > 0.0)) {
    return absl::OutOfRangeError(
        absl::StrCat("sensitivity must be positive, got ", sensitivity));
  }
  if (!(epsilon >= 0.0)) {
    return absl::OutOfRangeError(
        absl::StrCat("epsilon must be non-negative, got ", epsilon));
  }
  return NormalizedBwDelta(sigma / sensitivity, epsilon);
}

absl::StatusOr<double> CalibrateSigma(double epsilon, double delta_mech,
                                      double sensitivity) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    return absl::InvalidArgumentError(
        absl::StrCat("epsilon must be positive and finite, got ", epsilon));
  }
  if (!(sensitivity > 0.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("sensitivity must be positive, got ", sensitivity));
  }
  if (!(delta_mech > 0.0 && delta_mech < 1.0)) {
    return absl::FailedPreconditionError(absl::StrCat(
        "calibration needs delta_mech in (0, 1), got ", delta_mech));
  }
  double lo = kBracketLow;
  double hi = kBracketHigh;
  if (NormalizedBwDelta(hi, epsilon) > delta_mech) {
    return absl::FailedPreconditionError(
        "calibration bracket exhausted: no sigma <= 1e6 * sensitivity meets "
        "the target delta");
  }
  if (NormalizedBwDelta(lo, epsilon) <= delta_mech) {
    return absl::FailedPreconditionError(
        "calibration bracket exhausted: target delta is met below "
        "sigma = 1e-6 * sensitivity");
  }
  for (int i = 0; i < kMaxBisections && hi - lo > kRelativeTolerance * hi;
       ++i) {
    const double mid = 0.5 * (lo + hi);
    if (NormalizedBwDelta(mid, epsilon) > delta_mech) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi * sensitivity;
}

double ComposeSigma(double sigma_star, int levels) {
  return sigma_star * std::sqrt(static_cast<double>(levels));
}

absl::StatusOr<CalibrationResult> Calibrate(const PrivacyParams& params) {
  if (absl::Status status = params.Validate(); !status.ok()) return status;
  absl::StatusOr<double> sigma =
      CalibrateSigma(params.epsilon, params.delta_mech, params.sensitivity);
  if (!sigma.ok()) return sigma.status();
  return CalibrationResult{*sigma, ComposeSigma(*sigma, params.levels)};
}

absl::StatusOr<double> Rho1(double sigma, double delta_spill,
                            int max_contribution) {
  if (max_contribution < 1) {
    return absl::OutOfRangeError(absl::StrCat(
        "max_contribution must be at least 1, got ", max_contribution));
  }
  if (!(sigma >= 0.0)) {
    return absl::OutOfRangeError(
        absl::StrCat("sigma must be non-negative, got ", sigma));
  }
  if (!(delta_spill > 0.0 && delta_spill < 1.0)) {
    return absl::OutOfRangeError(
        absl::StrCat("delta_spill must lie in (0, 1), got ", delta_spill));
  }
  double best = -std::numeric_limits<double>::infinity();
  for (int t = 1; t <= max_contribution; ++t) {
    const double tail = OneMinusRootOfComplement(delta_spill, t);
    const double value =
        1.0 / std::sqrt(static_cast<double>(t)) +
        sigma * NormalUpperQuantile(tail);
    best = std::max(best, value);
  }
  return best;
}

absl::StatusOr<double> RhoKgramBase(double sigma_k, double eta,
                                    double prev_release_size,
                                    double candidate_size) {
  if (!(candidate_size >= 1.0)) {
    return absl::OutOfRangeError(absl::StrCat(
        "candidate_size must be at least 1, got ", candidate_size));
  }
  if (!(eta > 0.0)) {
    return absl::OutOfRangeError(
        absl::StrCat("eta must be positive, got ", eta));
  }
  if (!(sigma_k >= 0.0)) {
    return absl::OutOfRangeError(
        absl::StrCat("sigma_k must be non-negative, got ", sigma_k));
  }
  const double tail =
      eta * std::min(prev_release_size / candidate_size, 1.0);
  if (!(tail > 0.0 && tail < 1.0)) {
    return absl::OutOfRangeError(absl::StrCat(
        "eta * min(|S_prev| / |V|, 1) must lie in (0, 1), got ", tail));
  }
  return sigma_k * NormalUpperQuantile(tail);
}

absl::StatusOr<PolicyGaussianThresholds> RhoPolicyGaussian(double epsilon,
                                                           double delta,
                                                           int delta0) {
  if (delta0 < 1) {
    return absl::OutOfRangeError(
        absl::StrCat("delta0 must be at least 1, got ", delta0));
  }
  absl::StatusOr<PrivacyParams> params = PrivacyParams::Create(epsilon, delta);
  if (!params.ok()) return params.status();
  absl::StatusOr<double> sigma =
      CalibrateSigma(epsilon, params->delta_mech, 1.0);
  if (!sigma.ok()) return sigma.status();

  PolicyGaussianThresholds out;
  out.sigma = *sigma;
  out.rho_pg = -std::numeric_limits<double>::infinity();
  for (int t = 1; t <= delta0; ++t) {
    const double value =
        1.0 / std::sqrt(static_cast<double>(t)) +
        *sigma * NormalUpperQuantile(
                     OneMinusRootOfComplement(params->delta_spill, t));
    if (value > out.rho_pg) {
      out.rho_pg = value;
      out.argmax_t = t;
    }
  }
  out.rho_zero = *sigma * NormalUpperQuantile(OneMinusRootOfComplement(
                              params->delta_spill, delta0));
  return out;
}

}  // namespace dpngram
