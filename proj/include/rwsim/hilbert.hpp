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

#include <array>
#include <bitset>
#include <complex>
#include <initializer_list>

namespace rwsim {

using ComplexAmp = std::complex<double>;

/// Alice's polarization: H is transmitted by her splitter, V reflected.
enum class Pol { H = 0, V = 1 };
/// Bob's interferometer arm.
enum class Arm { U = 0, L = 1 };

struct JointBasisLabel {
    Pol alice_pol;
    Arm bob_arm;

    constexpr int index() const {
        return 2 * static_cast<int>(alice_pol) + static_cast<int>(bob_arm);
    }
    static constexpr JointBasisLabel from_index(int i) {
        return {static_cast<Pol>(i / 2), static_cast<Arm>(i % 2)};
    }
    bool operator==(const JointBasisLabel &) const = default;
};

inline constexpr double kNormTolerance = 1e-10;
inline constexpr double kZeroProbability = 1e-14;

/// Normalized pure state of the four-dimensional Alice-polarization x Bob-arm space.
class PureState {
  public:
    using Amplitudes = std::array<ComplexAmp, 4>;

    /// Throws std::invalid_argument unless the amplitudes are finite and of unit norm.
    explicit PureState(const Amplitudes &amplitudes);

    /// Scales arbitrary (non-zero, finite) amplitudes to unit norm.
    static PureState normalized(const Amplitudes &amplitudes);
    static PureState basis(JointBasisLabel label);

    ComplexAmp amplitude(JointBasisLabel label) const {
        return amplitudes_[label.index()];
    }
    const Amplitudes &amplitudes() const {
        return amplitudes_;
    }
    double norm_squared() const;

    bool operator==(const PureState &) const = default;

  private:
    Amplitudes amplitudes_;
};

/// A set of joint basis labels.
class Subspace {
  public:
    Subspace() = default;
    Subspace(std::initializer_list<JointBasisLabel> labels);

    static Subspace full();
    static Subspace alice(Pol pol);
    static Subspace bob(Arm arm);

    bool contains(JointBasisLabel label) const {
        return bits_.test(label.index());
    }
    bool empty() const {
        return bits_.none();
    }

  private:
    std::bitset<4> bits_;
};

/// Bob's reduced 2x2 density operator in the arm basis. rho_LU is conj(rho_UL).
struct ArmDensity {
    double rho_uu = 1.0;
    double rho_ll = 0.0;
    ComplexAmp rho_ul{0.0, 0.0};

    /// Trace one and |rho_UL|^2 <= rho_UU rho_LL, both within kNormTolerance.
    bool valid() const;
    bool operator==(const ArmDensity &) const = default;
};

struct Projection {
    double probability;
    PureState collapsed;
};

/// <a|b>, conjugate-linear in `a`.
ComplexAmp inner_product(const PureState &a, const PureState &b);

/// Born probability of `subspace` without collapsing.
double probability_of(const Subspace &subspace, const PureState &s);

/// Born probability and renormalized restriction of `s` to `subspace`.
/// Throws ZeroProbabilityCollapse when the probability is below kZeroProbability.
Projection project(const Subspace &subspace, const PureState &s);

/// Partial trace over Alice's polarization.
ArmDensity reduce_to_bob_arm(const PureState &s);

}  // namespace rwsim
