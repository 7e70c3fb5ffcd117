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
#include <cstdint>
#include <random>

#include "photonmux/errors.hpp"
#include "photonmux/photon_statistics.hpp"

namespace photonmux {

/// SplitMix64 finalizer: a bijective 64-bit mixer with full avalanche.
inline std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Substream derivation for parallel chunks. Chunk c of run seed s draws
/// from mt19937_64 seeded with mix64(s + GAMMA * (c + 1)), GAMMA being the
/// SplitMix64 golden-ratio increment. The mapping (seed, chunk) -> engine is
/// pure, so any scheduling of chunks reproduces the same per-chunk streams.
inline std::mt19937_64 substream(std::uint64_t seed, std::uint64_t chunk) {
    constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;
    return std::mt19937_64(mix64(seed + kGamma * (chunk + 1)));
}

/// Uniform double strictly inside (0,1): 53 mantissa bits, offset half a ulp
/// so neither endpoint can appear.
inline double uniform_open(std::mt19937_64& gen) {
    return (static_cast<double>(gen() >> 11) + 0.5) * 0x1.0p-53;
}

/// Sample a Bose-Einstein photon count by geometric inverse CDF: the law
/// P(n) = m^n/(1+m)^(n+1) counts failures before the first success at
/// success probability 1/(1+m), so n = floor(log u / log(m/(1+m))).
inline int sample_bose_einstein(double mean, std::mt19937_64& gen) {
    if (mean <= 0.0) return 0;
    const double u = uniform_open(gen);
    return static_cast<int>(std::log(u) / std::log(mean / (1.0 + mean)));
}

/// Sample a Poisson photon count by sequential inverse CDF search, with the
/// pmf terms built up iteratively via p(n+1) = p(n) m/(n+1). The cap keeps
/// the scan finite if the accumulated CDF saturates below u.
inline int sample_poisson(double mean, std::mt19937_64& gen) {
    if (mean <= 0.0) return 0;
    const double u = uniform_open(gen);
    double term = std::exp(-mean);
    double cdf = term;
    int n = 0;
    while (u > cdf && n < 1024) {
        ++n;
        term *= mean / n;
        cdf += term;
    }
    return n;
}

/// Sampling counterpart of PhotonNumberDistribution::pmf.
inline int sample_mode_count(StatKind kind, double mean, std::mt19937_64& gen) {
    if (!(mean >= 0.0)) {
        throw invalid_parameter("mode mean must be >= 0, got " + std::to_string(mean));
    }
    return kind == StatKind::BoseEinstein ? sample_bose_einstein(mean, gen)
                                          : sample_poisson(mean, gen);
}

} // namespace photonmux
