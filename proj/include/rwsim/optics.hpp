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

#include <cmath>
#include <optional>
#include <variant>

#include "rwsim/hilbert.hpp"

namespace rwsim {

enum class MatchingType { TypeI, TypeII };

/// Twin-photon source with polarizers preset at `phi_deg` for Alice's photon.
struct SourceSpec {
    MatchingType matching_type = MatchingType::TypeI;
    double phi_deg = 45.0;

    /// Offset of Bob's preset plane: 0 for type-I, 90 for type-II.
    double theta_pol_deg() const {
        return matching_type == MatchingType::TypeI ? 0.0 : 90.0;
    }
    /// Throws std::invalid_argument unless phi_deg is in [0, 180).
    void validate() const;
    bool operator==(const SourceSpec &) const = default;
};

struct PolarizationPair {
    double alice_deg;
    double bob_deg;
};

/// Polarizing splitter: amplitude `tau` (H, transmitted) and `rho` (V, reflected).
struct BeamSplitterSpec {
    double tau = M_SQRT1_2;
    double rho = M_SQRT1_2;
    double phase_t = 0.0;
    double phase_r = 0.0;

    void validate() const;
    bool operator==(const BeamSplitterSpec &) const = default;
};

enum class StateModel {
    PaperReduced,        // two-term correlated state; Bob coherent until Alice collapses it
    ProductPreselected,  // literal product of the preselected single-photon states
    NonReducedBell,      // maximally entangled two-term state, ordinary partial-trace rules
};

/// Bob's Mach-Zehnder readout. Fringe phase is k * delta_r + theta_0.
struct InterferometerSpec {
    double k = 2.0 * M_PI / 800e-9;
    double delta_r = 0.0;
    double theta_0 = 0.0;
    double zeta = 0.0;
    double eta = 0.5;

    double theta() const {
        return k * delta_r + theta_0;
    }
    /// Requires zeta >= 0, eta > 0 and zeta + 2 eta <= 1, so every detection
    /// probability lies in [0, 1].
    void validate() const;
    bool operator==(const InterferometerSpec &) const = default;
};

enum class AliceDetector { ATD, ARD };

/// A split joint state tagged with the model and source it was built for.
struct SplitState {
    PureState state;
    StateModel model;
    MatchingType matching_type;
};

struct CoherentSplit {
    ComplexAmp amp_u;
    ComplexAmp amp_l;
};

struct DefiniteArm {
    Arm arm;
};

/// What Bob's photon looks like when it reaches the recombining splitter.
using BobLocalState = std::variant<CoherentSplit, DefiniteArm, ArmDensity>;

/// Polarization planes after the preset polarizers, in degrees mod 180.
PolarizationPair prepare_initial(const SourceSpec &src);

/// Joint state after both input splitters. Throws InvalidGeometry unless the
/// preset plane is 45 degrees from the splitter axes.
SplitState split_joint_state(const SourceSpec &src,
                             const BeamSplitterSpec &bs_a,
                             const BeamSplitterSpec &bs_b,
                             StateModel model);

/// zeta + eta (rho_UU + rho_LL + 2 |rho_UL| cos Theta).
double fd_probability(const ArmDensity &rho, const InterferometerSpec &ifm);

/// Detection probability for any local state. A definite arm keeps the
/// weight of that arm in Bob's splitter.
double fd_probability(const BobLocalState &local, const InterferometerSpec &ifm, const BeamSplitterSpec &bs_b);

/// Arm of Bob's photon that survives Alice's click.
Arm surviving_arm(MatchingType src_type, AliceDetector alice_click);

/// Bob's detection probability in coincidence with a given Alice click after
/// the collapse; independent of the fringe phase.
double conditional_fd_probability(MatchingType src_type,
                                  AliceDetector alice_click,
                                  const InterferometerSpec &ifm,
                                  const BeamSplitterSpec &bs_b);

/// Bob's local description, before (`alice_measured` empty) or after Alice's
/// click. Throws ModelMismatch if `joint` was built under another model.
BobLocalState bob_local_state(const SplitState &joint,
                              std::optional<AliceDetector> alice_measured,
                              StateModel model,
                              MatchingType src_type,
                              const BeamSplitterSpec &bs_b);

/// Density operator of a local state. DefiniteArm maps to a pure arm projector.
ArmDensity arm_density(const BobLocalState &local);

const char *to_string(StateModel model);
const char *to_string(MatchingType type);
const char *to_string(AliceDetector detector);

}  // namespace rwsim
