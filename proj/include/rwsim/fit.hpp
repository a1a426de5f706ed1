// Copyright 2026 The rwsim Authors
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

#pragma once

#include <span>
#include <vector>

namespace rwsim {

/// Fit of counts(x) = offset + amplitude * cos(k x + phase).
struct VisibilityEstimate {
    double visibility = 0.0;  // |amplitude| / offset, capped at 1
    double std_err = 0.0;
    double fit_amplitude = 0.0;
    double fit_offset = 0.0;
    double fit_phase = 0.0;
};

/// Poisson-weighted linear least squares on the cos/sin basis; weights are
/// refined from the fitted model. Throws GridTooCoarse for fewer than 8
/// points and FitFailure when the offset is not positive.
VisibilityEstimate fit_visibility(std::span<const double> x, std::span<const double> counts, double k);

/// (max - min) / (max + min) of the raw counts; 0 for an all-zero channel.
double minmax_visibility(std::span<const double> counts);

struct Estimate {
    double value = 0.0;
    double std_err = 0.0;
};

struct KinkPoint {
    double path_difference;  // K
    VisibilityEstimate visibility;
};

using KinkCurve = std::vector<KinkPoint>;

/// V(K) = v_max - (v_max - v_min) * Phi((K - center) / width).
struct KinkFit {
    Estimate v_max;
    Estimate v_min;
    Estimate center;
    Estimate width;
    Estimate amplitude;  // v_max - v_min, correlations included
    double chi2_per_dof = 0.0;

    double evaluate(double path_difference) const;
};

/// Difference between the mean visibility of the first and last third of the
/// curve (ordered by K). Used to decide whether a kink exists at all.
struct PlateauContrast {
    Estimate amplitude;
    double mean_level = 0.0;
};

PlateauContrast plateau_contrast(const KinkCurve &curve);

/// Throws FitFailure(NoKink) when the plateau contrast is below three
/// standard errors, FitFailure(NotConverged/Singular) on solver trouble.
KinkFit fit_kink(const KinkCurve &curve);

/// Standard normal cumulative distribution.
double normal_cdf(double x);

}  // namespace rwsim
