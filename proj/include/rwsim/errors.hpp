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

#include <stdexcept>
#include <string>

namespace rwsim {

/// Base class of every error raised by the simulator.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Conditioning on an outcome whose probability is (numerically) zero.
class ZeroProbabilityCollapse : public Error {
  public:
    using Error::Error;
};

/// Polarization preset not at 45 degrees to the splitter axes.
class InvalidGeometry : public Error {
  public:
    using Error::Error;
};

/// A joint state was built under a different state model than requested.
class ModelMismatch : public Error {
  public:
    using Error::Error;
};

/// Delta-r grid too short or too sparse for a fringe fit.
class GridTooCoarse : public Error {
  public:
    using Error::Error;
};

class ConfigError : public Error {
  public:
    ConfigError(std::string field, int line, const std::string &message)
        : Error(format(field, line, message)), field_(std::move(field)), line_(line) {
    }
    explicit ConfigError(const std::string &message) : Error(message) {
    }

    /// Offending `section.key`, empty if not tied to one field.
    const std::string &field() const {
        return field_;
    }
    /// 1-based line of the offending entry, 0 if not tied to one line.
    int line() const {
        return line_;
    }

  private:
    static std::string format(const std::string &field, int line, const std::string &message) {
        std::string out;
        if (line > 0) {
            out += "line " + std::to_string(line) + ": ";
        }
        if (!field.empty()) {
            out += field + ": ";
        }
        return out + message;
    }

    std::string field_;
    int line_ = 0;
};

enum class FitFailureKind {
    NonPositiveOffset,  // fitted constant term <= 0 (empty or pathological data)
    Singular,           // normal equations not solvable
    NotConverged,
    NoKink,             // curve is flat within its errors
};

class FitFailure : public Error {
  public:
    FitFailure(FitFailureKind kind, const std::string &message, double flat_level = 0.0)
        : Error(message), kind_(kind), flat_level_(flat_level) {
    }
    FitFailureKind kind() const {
        return kind_;
    }
    /// Mean visibility of the curve; only meaningful for NoKink.
    double flat_level() const {
        return flat_level_;
    }

  private:
    FitFailureKind kind_;
    double flat_level_;
};

class DegenerateGeometries : public Error {
  public:
    using Error::Error;
};

/// A kink fit inside a composite experiment did not resolve a transition.
class UnresolvedKink : public Error {
  public:
    using Error::Error;
};

class IoError : public Error {
  public:
    using Error::Error;
};

}  // namespace rwsim
