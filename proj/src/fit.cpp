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

#include "rwsim/fit.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <Eigen/Dense>
#include <unsupported/Eigen/NonLinearOptimization>

#include "rwsim/errors.hpp"

namespace rwsim {

namespace {

constexpr int kReweightPasses = 5;
constexpr double kMinPointError = 1e-6;

double normal_pdf(double x) {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
}

/// Weighted residuals of the kink model. Parameters: v_max, v_min, center,
/// log(width - floor).
struct KinkResiduals {
    const std::vector<double> &k;
    const std::vector<double> &v;
    const std::vector<double> &sigma;
    double width_floor;

    int inputs() const {
        return 4;
    }
    int values() const {
        return static_cast<int>(k.size());
    }

    double width(const Eigen::VectorXd &p) const {
        return width_floor + std::exp(p[3]);
    }

    int operator()(const Eigen::VectorXd &p, Eigen::VectorXd &fvec) const {
        double w = width(p);
        for (int i = 0; i < values(); ++i) {
            double model = p[0] - (p[0] - p[1]) * normal_cdf((k[i] - p[2]) / w);
            fvec[i] = (v[i] - model) / sigma[i];
        }
        return 0;
    }

    int df(const Eigen::VectorXd &p, Eigen::MatrixXd &fjac) const {
        double w = width(p);
        double drop = p[0] - p[1];
        for (int i = 0; i < values(); ++i) {
            double z = (k[i] - p[2]) / w;
            double phi = normal_cdf(z);
            double density = normal_pdf(z);
            fjac(i, 0) = -(1.0 - phi) / sigma[i];
            fjac(i, 1) = -phi / sigma[i];
            fjac(i, 2) = -drop * density / w / sigma[i];
            fjac(i, 3) = -drop * density * z / w * std::exp(p[3]) / sigma[i];
        }
        return 0;
    }
};

/// K at which the sorted curve first crosses `level` going downwards.
double crossing(const std::vector<double> &k, const std::vector<double> &v, double level) {
    for (std::size_t i = 0; i + 1 < k.size(); ++i) {
        if (v[i] >= level && v[i + 1] < level) {
            return k[i] + (k[i + 1] - k[i]) * (v[i] - level) / (v[i] - v[i + 1]);
        }
    }
    return 0.5 * (k.front() + k.back());
}

}  // namespace

double normal_cdf(double x) {
    return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

VisibilityEstimate fit_visibility(std::span<const double> x, std::span<const double> counts, double k) {
    if (x.size() != counts.size()) {
        throw std::invalid_argument("fit_visibility: x and counts differ in length");
    }
    if (x.size() < 8) {
        throw GridTooCoarse("fit_visibility needs at least 8 points");
    }
    const std::size_t n = x.size();
    Eigen::MatrixXd design(n, 3);
    Eigen::VectorXd y(n);
    for (std::size_t i = 0; i < n; ++i) {
        design(i, 0) = 1.0;
        design(i, 1) = std::cos(k * x[i]);
        design(i, 2) = std::sin(k * x[i]);
        y[i] = counts[i];
    }

    Eigen::VectorXd weights = Eigen::VectorXd::Ones(n);
    Eigen::Vector3d beta;
    Eigen::Matrix3d normal;
    for (int pass = 0; pass < kReweightPasses; ++pass) {
        normal = design.transpose() * weights.asDiagonal() * design;
        Eigen::Vector3d rhs = design.transpose() * weights.asDiagonal() * y;
        Eigen::LDLT<Eigen::Matrix3d> ldlt(normal);
        if (ldlt.info() != Eigen::Success || !ldlt.isPositive() || std::abs(normal.determinant()) < 1e-300) {
            throw FitFailure(FitFailureKind::Singular, "fit_visibility: singular normal equations");
        }
        beta = ldlt.solve(rhs);
        if (!(beta[0] > 0.0)) {
            throw FitFailure(FitFailureKind::NonPositiveOffset, "fit_visibility: fitted offset is not positive");
        }
        // Poisson variance of each point, taken from the current model.
        Eigen::VectorXd model = design * beta;
        for (std::size_t i = 0; i < n; ++i) {
            weights[i] = 1.0 / std::max(model[i], 1.0);
        }
    }
    normal = design.transpose() * weights.asDiagonal() * design;
    Eigen::Matrix3d cov = normal.inverse();

    double a = beta[0], c = beta[1], s = beta[2];
    double b = std::hypot(c, s);
    VisibilityEstimate est;
    est.fit_offset = a;
    est.fit_amplitude = b;
    est.fit_phase = std::atan2(-s, c);
    est.visibility = std::min(1.0, b / a);
    if (b > 0.0) {
        Eigen::Vector3d grad(-b / (a * a), c / (a * b), s / (a * b));
        est.std_err = std::sqrt(std::max(0.0, grad.dot(cov * grad)));
    } else {
        est.std_err = std::sqrt(0.5 * (cov(1, 1) + cov(2, 2))) / a;
    }
    return est;
}

double minmax_visibility(std::span<const double> counts) {
    if (counts.empty()) {
        return 0.0;
    }
    auto [lo, hi] = std::minmax_element(counts.begin(), counts.end());
    double sum = *hi + *lo;
    return sum > 0.0 ? (*hi - *lo) / sum : 0.0;
}

double KinkFit::evaluate(double path_difference) const {
    return v_max.value - (v_max.value - v_min.value) * normal_cdf((path_difference - center.value) / width.value);
}

PlateauContrast plateau_contrast(const KinkCurve &curve) {
    if (curve.size() < 2) {
        throw FitFailure(FitFailureKind::Singular, "plateau_contrast needs at least two points");
    }
    KinkCurve sorted = curve;
    std::sort(sorted.begin(), sorted.end(),
              [](const KinkPoint &l, const KinkPoint &r) { return l.path_difference < r.path_difference; });
    std::size_t third = std::max<std::size_t>(1, sorted.size() / 3);
    auto mean_of = [&](std::size_t begin) {
        double sum = 0.0, var = 0.0;
        for (std::size_t i = begin; i < begin + third; ++i) {
            sum += sorted[i].visibility.visibility;
            var += sorted[i].visibility.std_err * sorted[i].visibility.std_err;
        }
        return Estimate{sum / third, std::sqrt(var) / third};
    };
    Estimate early = mean_of(0);
    Estimate late = mean_of(sorted.size() - third);
    double level = 0.0;
    for (const auto &p : sorted) {
        level += p.visibility.visibility;
    }
    return {{early.value - late.value, std::hypot(early.std_err, late.std_err)}, level / sorted.size()};
}

KinkFit fit_kink(const KinkCurve &curve) {
    if (curve.size() < 5) {
        throw FitFailure(FitFailureKind::Singular, "fit_kink needs at least five K points");
    }
    PlateauContrast contrast = plateau_contrast(curve);
    if (std::abs(contrast.amplitude.value) <= 3.0 * contrast.amplitude.std_err) {
        throw FitFailure(FitFailureKind::NoKink, "fit_kink: visibility is flat in K (no kink)", contrast.mean_level);
    }
    if (contrast.amplitude.value < 0.0) {
        throw FitFailure(FitFailureKind::NotConverged, "fit_kink: visibility rises with K (inverted kink)");
    }

    KinkCurve sorted = curve;
    std::sort(sorted.begin(), sorted.end(),
              [](const KinkPoint &l, const KinkPoint &r) { return l.path_difference < r.path_difference; });
    std::vector<double> k, v, sigma;
    for (const auto &p : sorted) {
        k.push_back(p.path_difference);
        v.push_back(p.visibility.visibility);
        sigma.push_back(std::max(p.visibility.std_err, kMinPointError));
    }
    double span = k.back() - k.front();
    double min_spacing = span;
    for (std::size_t i = 0; i + 1 < k.size(); ++i) {
        min_spacing = std::min(min_spacing, k[i + 1] - k[i]);
    }

    std::size_t third = std::max<std::size_t>(1, k.size() / 3);
    double hi = std::accumulate(v.begin(), v.begin() + third, 0.0) / third;
    double lo = std::accumulate(v.end() - third, v.end(), 0.0) / third;
    double drop = hi - lo;
    double center0 = crossing(k, v, hi - 0.5 * drop);
    double spread = (crossing(k, v, hi - 0.75 * drop) - crossing(k, v, hi - 0.25 * drop)) / 1.349;
    double width_floor = 1e-6 * span;
    double width0 = std::max(spread, 0.5 * min_spacing);

    KinkResiduals residuals{k, v, sigma, width_floor};
    Eigen::VectorXd p(4);
    p << hi, lo, center0, std::log(std::max(width0 - width_floor, width_floor));
    Eigen::LevenbergMarquardt<KinkResiduals> lm(residuals);
    lm.parameters.maxfev = 2000;
    auto status = lm.minimize(p);
    if (status == Eigen::LevenbergMarquardtSpace::ImproperInputParameters ||
        status == Eigen::LevenbergMarquardtSpace::TooManyFunctionEvaluation || !p.allFinite()) {
        throw FitFailure(FitFailureKind::NotConverged, "fit_kink: solver did not converge");
    }

    const int n = static_cast<int>(k.size());
    Eigen::VectorXd fvec(n);
    residuals(p, fvec);
    Eigen::MatrixXd jac(n, 4);
    residuals.df(p, jac);
    double chi2_per_dof = fvec.squaredNorm() / std::max(1, n - 4);
    Eigen::Matrix4d cov = (jac.transpose() * jac).completeOrthogonalDecomposition().pseudoInverse();
    cov *= std::max(1.0, chi2_per_dof);

    // Jacobian of (v_max, v_min, center, width) with respect to the fit parameters.
    Eigen::Matrix4d to_physical = Eigen::Matrix4d::Identity();
    to_physical(3, 3) = std::exp(p[3]);
    cov = to_physical * cov * to_physical.transpose();

    KinkFit fit;
    fit.v_max = {p[0], std::sqrt(std::max(0.0, cov(0, 0)))};
    fit.v_min = {p[1], std::sqrt(std::max(0.0, cov(1, 1)))};
    fit.center = {p[2], std::sqrt(std::max(0.0, cov(2, 2)))};
    fit.width = {residuals.width(p), std::sqrt(std::max(0.0, cov(3, 3)))};
    fit.amplitude = {p[0] - p[1], std::sqrt(std::max(0.0, cov(0, 0) + cov(1, 1) - 2.0 * cov(0, 1)))};
    fit.chi2_per_dof = chi2_per_dof;
    // A transition sharper than the grid only locates the center to within a cell.
    if (fit.width.value < min_spacing) {
        double cell = min_spacing / std::sqrt(12.0);
        fit.center.std_err = std::max(fit.center.std_err, cell);
        fit.width.std_err = std::max(fit.width.std_err, cell);
    }
    if (fit.v_max.value < fit.v_min.value) {
        throw FitFailure(FitFailureKind::NotConverged, "fit_kink: fitted v_max below v_min");
    }
    return fit;
}

}  // namespace rwsim
