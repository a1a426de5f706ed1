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

#include "rwsim/hilbert.hpp"

#include <cmath>
#include <stdexcept>

#include "rwsim/errors.hpp"

namespace rwsim {

namespace {

double sum_norm(const PureState::Amplitudes &amplitudes) {
    double total = 0.0;
    for (const auto &a : amplitudes) {
        total += std::norm(a);
    }
    return total;
}

bool all_finite(const PureState::Amplitudes &amplitudes) {
    for (const auto &a : amplitudes) {
        if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
            return false;
        }
    }
    return true;
}

}  // namespace

PureState::PureState(const Amplitudes &amplitudes) : amplitudes_(amplitudes) {
    if (!all_finite(amplitudes)) {
        throw std::invalid_argument("PureState: non-finite amplitude");
    }
    if (std::abs(sum_norm(amplitudes) - 1.0) > kNormTolerance) {
        throw std::invalid_argument("PureState: amplitudes are not normalized");
    }
}

PureState PureState::normalized(const Amplitudes &amplitudes) {
    if (!all_finite(amplitudes)) {
        throw std::invalid_argument("PureState: non-finite amplitude");
    }
    double n = std::sqrt(sum_norm(amplitudes));
    if (n == 0.0) {
        throw std::invalid_argument("PureState: zero vector cannot be normalized");
    }
    Amplitudes scaled;
    for (int i = 0; i < 4; ++i) {
        scaled[i] = amplitudes[i] / n;
    }
    return PureState(scaled);
}

PureState PureState::basis(JointBasisLabel label) {
    Amplitudes a{};
    a[label.index()] = 1.0;
    return PureState(a);
}

double PureState::norm_squared() const {
    return sum_norm(amplitudes_);
}

Subspace::Subspace(std::initializer_list<JointBasisLabel> labels) {
    for (auto label : labels) {
        bits_.set(label.index());
    }
}

Subspace Subspace::full() {
    Subspace s;
    s.bits_.set();
    return s;
}

Subspace Subspace::alice(Pol pol) {
    return {{pol, Arm::U}, {pol, Arm::L}};
}

Subspace Subspace::bob(Arm arm) {
    return {{Pol::H, arm}, {Pol::V, arm}};
}

bool ArmDensity::valid() const {
    if (!std::isfinite(rho_uu) || !std::isfinite(rho_ll) || !std::isfinite(rho_ul.real()) ||
        !std::isfinite(rho_ul.imag())) {
        return false;
    }
    if (rho_uu < -kNormTolerance || rho_ll < -kNormTolerance) {
        return false;
    }
    if (std::abs(rho_uu + rho_ll - 1.0) > kNormTolerance) {
        return false;
    }
    return std::norm(rho_ul) <= rho_uu * rho_ll + kNormTolerance;
}

ComplexAmp inner_product(const PureState &a, const PureState &b) {
    ComplexAmp total{0.0, 0.0};
    for (int i = 0; i < 4; ++i) {
        total += std::conj(a.amplitudes()[i]) * b.amplitudes()[i];
    }
    return total;
}

double probability_of(const Subspace &subspace, const PureState &s) {
    double p = 0.0;
    for (int i = 0; i < 4; ++i) {
        if (subspace.contains(JointBasisLabel::from_index(i))) {
            p += std::norm(s.amplitudes()[i]);
        }
    }
    return p;
}

Projection project(const Subspace &subspace, const PureState &s) {
    if (subspace.empty()) {
        throw std::invalid_argument("project: empty subspace");
    }
    double p = probability_of(subspace, s);
    if (p < kZeroProbability) {
        throw ZeroProbabilityCollapse("project: outcome has zero probability");
    }
    PureState::Amplitudes restricted{};
    for (int i = 0; i < 4; ++i) {
        if (subspace.contains(JointBasisLabel::from_index(i))) {
            restricted[i] = s.amplitudes()[i];
        }
    }
    return {p, PureState::normalized(restricted)};
}

ArmDensity reduce_to_bob_arm(const PureState &s) {
    ArmDensity rho{0.0, 0.0, {0.0, 0.0}};
    for (Pol pol : {Pol::H, Pol::V}) {
        ComplexAmp u = s.amplitude({pol, Arm::U});
        ComplexAmp l = s.amplitude({pol, Arm::L});
        rho.rho_uu += std::norm(u);
        rho.rho_ll += std::norm(l);
        rho.rho_ul += u * std::conj(l);
    }
    return rho;
}

}  // namespace rwsim
