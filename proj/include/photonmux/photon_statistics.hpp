/**
 * Copyright 2026 photonmux contributors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cmath>
#include <string>

#include "photonmux/errors.hpp"

namespace photonmux {

/// Photon-number law of a single collected mode.
enum class StatKind {
    BoseEinstein, ///< single-mode thermal light, P(n) = m^n / (1+m)^(n+1)
    Poisson       ///< coherent (faint laser) light, P(n) = m^n e^(-m) / n!
};

inline const char* to_string(StatKind kind) noexcept {
    return kind == StatKind::BoseEinstein ? "bose-einstein" : "poisson";
}

/// Mean photon number per pulse (per mode or per system, depending on
/// context). Must be finite and nonnegative.
class MeanPhotonNumber {
public:
    explicit MeanPhotonNumber(double value) : value_(value) {
        if (!(std::isfinite(value) && value >= 0.0)) {
            throw invalid_parameter("mean photon number must be finite and >= 0, got " +
                                    std::to_string(value));
        }
    }

    double value() const noexcept { return value_; }

private:
    double value_;
};

/// Probability that a detector fires when exactly one photon is incident.
class QuantumEfficiency {
public:
    explicit QuantumEfficiency(double value) : value_(value) {
        if (!(value >= 0.0 && value <= 1.0)) {
            throw invalid_parameter("quantum efficiency must lie in [0,1], got " +
                                    std::to_string(value));
        }
    }

    double value() const noexcept { return value_; }

private:
    double value_;
};

/// Photon-number distribution of one mode: a kind and a mean.
struct PhotonNumberDistribution {
    StatKind kind;
    MeanPhotonNumber mean;

    /// Closed-form pmf value, P(n).
    ///
    /// Bose-Einstein is geometric in n and is evaluated as
    /// (1/(1+m)) * q^n with q = m/(1+m), which never overflows.
    /// Poisson is evaluated in log space for the same reason.
    double pmf(int n) const {
        if (n < 0) {
            throw invalid_parameter("photon count must be >= 0, got " + std::to_string(n));
        }
        const double m = mean.value();
        if (kind == StatKind::BoseEinstein) {
            const double q = m / (1.0 + m); // pow(0,0) == 1 covers the m = 0 case
            return std::pow(q, n) / (1.0 + m);
        }
        if (m == 0.0) return n == 0 ? 1.0 : 0.0;
        if (n == 0) return std::exp(-m);
        return std::exp(n * std::log(m) - m - std::lgamma(n + 1.0));
    }
};

/// Probability that a detector of efficiency eta fires when n photons are
/// incident: 1 - (1-eta)^n. Zero photons never fire it.
inline double detector_fire_prob(QuantumEfficiency eta, int n) {
    if (n < 0) {
        throw invalid_parameter("photon count must be >= 0, got " + std::to_string(n));
    }
    if (n == 0) return 0.0;
    return 1.0 - std::pow(1.0 - eta.value(), n);
}

/// Total probability that the detector stays silent for one pulse of the
/// given mode: sum_k (1-eta)^k P(k).
///
/// Closed forms: Bose-Einstein 1/(1 + eta m), Poisson e^(-eta m).
inline double p_no_fire(const PhotonNumberDistribution& dist, QuantumEfficiency eta) {
    const double m = dist.mean.value();
    const double e = eta.value();
    if (dist.kind == StatKind::BoseEinstein) return 1.0 / (1.0 + e * m);
    return std::exp(-e * m);
}

/// Posterior probability that exactly n photons were incident given that the
/// detector fired:
///
///   P_F(n) = (1-(1-eta)^n) P(n) / sum_i (1-(1-eta)^i) P(i)
///
/// The denominator is the total firing probability, 1 - p_no_fire. Throws
/// undefined_conditional when that probability is zero (eta = 0 or mean = 0).
inline double posterior_given_fire(const PhotonNumberDistribution& dist, QuantumEfficiency eta,
                                   int n) {
    if (n < 1) {
        throw invalid_parameter("fired-detector posterior is defined for n >= 1, got " +
                                std::to_string(n));
    }
    const double fire = 1.0 - p_no_fire(dist, eta);
    if (!(fire > 0.0)) {
        throw undefined_conditional("detector can never fire (eta = 0 or mean = 0); "
                                    "posterior undefined");
    }
    return detector_fire_prob(eta, n) * dist.pmf(n) / fire;
}

/// Probability that one or more photons were incident given that the detector
/// stayed silent:
///
///   P_noFire = sum_{k>=1} (1-eta)^k P(k) / sum_{k>=0} (1-eta)^k P(k)
///
/// Closed forms: Bose-Einstein m(1-eta)/(1+m), Poisson 1 - e^(-m(1-eta)).
/// A perfect detector that stays silent certifies vacuum, so eta = 1 gives
/// exactly 0.
inline double p_some_photon_given_no_fire(const PhotonNumberDistribution& dist,
                                          QuantumEfficiency eta) {
    const double m = dist.mean.value();
    const double e = eta.value();
    if (dist.kind == StatKind::BoseEinstein) return m * (1.0 - e) / (1.0 + m);
    return -std::expm1(-m * (1.0 - e));
}

} // namespace photonmux
