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

#include "rwsim/optics.hpp"

#include <stdexcept>
#include <string>

#include "rwsim/errors.hpp"

namespace rwsim {

namespace {

constexpr double kSplitterTolerance = 1e-12;
constexpr double kAngleToleranceDeg = 1e-6;

double wrap_180(double deg) {
    double w = std::fmod(deg, 180.0);
    return w < 0.0 ? w + 180.0 : w;
}

double sign_of(double x) {
    return x < 0.0 ? -1.0 : 1.0;
}

double deg_to_rad(double deg) {
    return deg * M_PI / 180.0;
}

/// Transmitted/reflected amplitudes of a linearly polarized photon at `angle_deg`.
std::pair<ComplexAmp, ComplexAmp> single_split(const BeamSplitterSpec &bs, double angle_deg) {
    double a = deg_to_rad(angle_deg);
    return {sign_of(std::cos(a)) * bs.tau * std::polar(1.0, bs.phase_t),
            sign_of(std::sin(a)) * bs.rho * std::polar(1.0, bs.phase_r)};
}

}  // namespace

void SourceSpec::validate() const {
    if (!(phi_deg >= 0.0 && phi_deg < 180.0)) {
        throw std::invalid_argument("phi_deg must lie in [0, 180)");
    }
}

void BeamSplitterSpec::validate() const {
    if (!std::isfinite(tau) || !std::isfinite(rho) || !std::isfinite(phase_t) || !std::isfinite(phase_r)) {
        throw std::invalid_argument("splitter parameters must be finite");
    }
    if (tau < 0.0 || rho < 0.0) {
        throw std::invalid_argument("tau and rho must be non-negative");
    }
    if (std::abs(tau * tau + rho * rho - 1.0) > kSplitterTolerance) {
        throw std::invalid_argument("tau^2 + rho^2 must equal 1 (got " + std::to_string(tau * tau + rho * rho) +
                                    ")");
    }
}

void InterferometerSpec::validate() const {
    if (!std::isfinite(k) || !std::isfinite(delta_r) || !std::isfinite(theta_0)) {
        throw std::invalid_argument("interferometer parameters must be finite");
    }
    if (!(zeta >= 0.0)) {
        throw std::invalid_argument("zeta must be >= 0");
    }
    if (!(eta > 0.0)) {
        throw std::invalid_argument("eta must be > 0");
    }
    if (zeta + 2.0 * eta > 1.0 + 1e-12) {
        throw std::invalid_argument("zeta + 2 eta must not exceed 1");
    }
}

PolarizationPair prepare_initial(const SourceSpec &src) {
    src.validate();
    return {src.phi_deg, wrap_180(src.phi_deg + src.theta_pol_deg())};
}

SplitState split_joint_state(const SourceSpec &src,
                             const BeamSplitterSpec &bs_a,
                             const BeamSplitterSpec &bs_b,
                             StateModel model) {
    bs_a.validate();
    bs_b.validate();
    PolarizationPair planes = prepare_initial(src);
    double off_axis = std::fmod(planes.alice_deg, 90.0);
    if (std::abs(off_axis - 45.0) > kAngleToleranceDeg) {
        throw InvalidGeometry("preset polarization must be 45 degrees from the splitter axes (phi = " +
                              std::to_string(src.phi_deg) + ")");
    }

    using L = JointBasisLabel;
    PureState::Amplitudes amps{};
    bool type_one = src.matching_type == MatchingType::TypeI;
    auto e = [](double phase) { return std::polar(1.0, phase); };

    switch (model) {
        case StateModel::PaperReduced:
            if (type_one) {
                amps[L{Pol::H, Arm::U}.index()] = bs_a.tau * bs_b.tau * e(bs_a.phase_t + bs_b.phase_t);
                amps[L{Pol::V, Arm::L}.index()] = bs_a.rho * bs_b.rho * e(bs_a.phase_r + bs_b.phase_r);
            } else {
                amps[L{Pol::H, Arm::L}.index()] = bs_a.tau * bs_b.rho * e(bs_a.phase_t + bs_b.phase_r);
                amps[L{Pol::V, Arm::U}.index()] = bs_a.rho * bs_b.tau * e(bs_a.phase_r + bs_b.phase_t);
            }
            break;
        case StateModel::NonReducedBell:
            if (type_one) {
                amps[L{Pol::H, Arm::U}.index()] = M_SQRT1_2 * e(bs_a.phase_t + bs_b.phase_t);
                amps[L{Pol::V, Arm::L}.index()] = M_SQRT1_2 * e(bs_a.phase_r + bs_b.phase_r);
            } else {
                amps[L{Pol::H, Arm::L}.index()] = M_SQRT1_2 * e(bs_a.phase_t + bs_b.phase_r);
                amps[L{Pol::V, Arm::U}.index()] = M_SQRT1_2 * e(bs_a.phase_r + bs_b.phase_t);
            }
            break;
        case StateModel::ProductPreselected: {
            auto [a_h, a_v] = single_split(bs_a, planes.alice_deg);
            auto [b_u, b_l] = single_split(bs_b, planes.bob_deg);
            amps[L{Pol::H, Arm::U}.index()] = a_h * b_u;
            amps[L{Pol::H, Arm::L}.index()] = a_h * b_l;
            amps[L{Pol::V, Arm::U}.index()] = a_v * b_u;
            amps[L{Pol::V, Arm::L}.index()] = a_v * b_l;
            break;
        }
    }
    return {PureState::normalized(amps), model, src.matching_type};
}

double fd_probability(const ArmDensity &rho, const InterferometerSpec &ifm) {
    return ifm.zeta + ifm.eta * (rho.rho_uu + rho.rho_ll + 2.0 * std::abs(rho.rho_ul) * std::cos(ifm.theta()));
}

double fd_probability(const BobLocalState &local, const InterferometerSpec &ifm, const BeamSplitterSpec &bs_b) {
    if (const auto *arm = std::get_if<DefiniteArm>(&local)) {
        double weight = arm->arm == Arm::U ? bs_b.tau * bs_b.tau : bs_b.rho * bs_b.rho;
        return ifm.zeta + ifm.eta * weight;
    }
    return fd_probability(arm_density(local), ifm);
}

Arm surviving_arm(MatchingType src_type, AliceDetector alice_click) {
    bool transmitted = alice_click == AliceDetector::ATD;
    if (src_type == MatchingType::TypeI) {
        return transmitted ? Arm::U : Arm::L;
    }
    return transmitted ? Arm::L : Arm::U;
}

double conditional_fd_probability(MatchingType src_type,
                                  AliceDetector alice_click,
                                  const InterferometerSpec &ifm,
                                  const BeamSplitterSpec &bs_b) {
    return fd_probability(DefiniteArm{surviving_arm(src_type, alice_click)}, ifm, bs_b);
}

BobLocalState bob_local_state(const SplitState &joint,
                              std::optional<AliceDetector> alice_measured,
                              StateModel model,
                              MatchingType src_type,
                              const BeamSplitterSpec &bs_b) {
    if (joint.model != model || joint.matching_type != src_type) {
        throw ModelMismatch(std::string("joint state was built for ") + to_string(joint.model) + "/" +
                            to_string(joint.matching_type) + ", requested " + to_string(model) + "/" +
                            to_string(src_type));
    }
    if (model == StateModel::PaperReduced) {
        if (!alice_measured) {
            return CoherentSplit{bs_b.tau * std::polar(1.0, bs_b.phase_t), bs_b.rho * std::polar(1.0, bs_b.phase_r)};
        }
        return DefiniteArm{surviving_arm(src_type, *alice_measured)};
    }
    if (!alice_measured) {
        return reduce_to_bob_arm(joint.state);
    }
    Pol pol = *alice_measured == AliceDetector::ATD ? Pol::H : Pol::V;
    return reduce_to_bob_arm(project(Subspace::alice(pol), joint.state).collapsed);
}

ArmDensity arm_density(const BobLocalState &local) {
    if (const auto *split = std::get_if<CoherentSplit>(&local)) {
        return {std::norm(split->amp_u), std::norm(split->amp_l), split->amp_u * std::conj(split->amp_l)};
    }
    if (const auto *arm = std::get_if<DefiniteArm>(&local)) {
        return arm->arm == Arm::U ? ArmDensity{1.0, 0.0, {}} : ArmDensity{0.0, 1.0, {}};
    }
    return std::get<ArmDensity>(local);
}

const char *to_string(StateModel model) {
    switch (model) {
        case StateModel::PaperReduced:
            return "PaperReduced";
        case StateModel::ProductPreselected:
            return "ProductPreselected";
        case StateModel::NonReducedBell:
            return "NonReducedBell";
    }
    return "?";
}

const char *to_string(MatchingType type) {
    return type == MatchingType::TypeI ? "TypeI" : "TypeII";
}

const char *to_string(AliceDetector detector) {
    return detector == AliceDetector::ATD ? "ATD" : "ARD";
}

}  // namespace rwsim
