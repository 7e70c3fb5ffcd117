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

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "photonmux/multiplex_model.hpp"
#include "photonmux/rng.hpp"

namespace photonmux {

enum class SimulationMode {
    DelayMultiplexed, ///< one trigger detector behind a chain of delay paths
    SwitchedArray     ///< per-channel detectors routing one channel to the output
};

/// Full description of a Monte Carlo run. Identical specs produce
/// bit-identical counts.
struct SimulationSpec {
    MultiplexConfig config;
    std::uint64_t trials;
    std::uint64_t seed;
    SimulationMode mode;
    double switch_transmittance; ///< SwitchedArray: switch-tree throughput
    double output_transmittance; ///< SwitchedArray: remaining output-path throughput

    SimulationSpec(MultiplexConfig config_, std::uint64_t trials_, std::uint64_t seed_,
                   SimulationMode mode_, double switch_transmittance_ = 1.0,
                   double output_transmittance_ = 1.0)
        : config(std::move(config_)),
          trials(trials_),
          seed(seed_),
          mode(mode_),
          switch_transmittance(switch_transmittance_),
          output_transmittance(output_transmittance_) {
        if (trials < 1) throw invalid_parameter("trials must be >= 1");
        for (double t : {switch_transmittance, output_transmittance}) {
            if (!(t >= 0.0 && t <= 1.0)) {
                throw invalid_parameter("transmittance must lie in [0,1], got " +
                                        std::to_string(t));
            }
        }
    }
};

/// What one pump pulse did.
struct TrialOutcome {
    TriggerEvent event;  ///< delay_index 0 when nothing fired
    int total_photons;   ///< sum over every mode of the system
    int emitted_photons; ///< SwitchedArray only; 0 in delay-multiplexed runs
};

/// A count-based probability estimate with its binomial standard error.
/// A zero denominator leaves estimate and standard_error as NaN: the
/// quantity was never observed, which is a result, not an error.
struct SimulationEstimate {
    std::string name;
    std::uint64_t numerator = 0;
    std::uint64_t denominator = 0;
    double estimate = std::numeric_limits<double>::quiet_NaN();
    double standard_error = std::numeric_limits<double>::quiet_NaN();

    bool defined() const noexcept { return denominator > 0; }
};

inline SimulationEstimate make_estimate(std::string name, std::uint64_t numerator,
                                        std::uint64_t denominator) {
    SimulationEstimate est;
    est.name = std::move(name);
    est.numerator = numerator;
    est.denominator = denominator;
    if (denominator > 0) {
        est.estimate = static_cast<double>(numerator) / static_cast<double>(denominator);
        est.standard_error =
            std::sqrt(est.estimate * (1.0 - est.estimate) / static_cast<double>(denominator));
    }
    return est;
}

/// Trials per RNG substream. Chunk c of a run simulates trials
/// [c*kChunkTrials, (c+1)*kChunkTrials) on substream(seed, c); counts are
/// summed over chunks, so the merge is associative, commutative, and
/// independent of which thread ran which chunk.
inline constexpr std::uint64_t kChunkTrials = 1u << 16;

namespace detail {

template <typename Counts, typename PerTrial>
Counts run_chunked(const SimulationSpec& spec, const Counts& zero, PerTrial per_trial) {
    const std::uint64_t num_chunks = (spec.trials + kChunkTrials - 1) / kChunkTrials;
    unsigned workers = std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(
        std::min<std::uint64_t>(workers, num_chunks));

    std::vector<Counts> partial(workers, zero);
    std::atomic<std::uint64_t> next_chunk{0};
    auto worker_loop = [&](unsigned w) {
        for (;;) {
            const std::uint64_t chunk = next_chunk.fetch_add(1);
            if (chunk >= num_chunks) break;
            std::mt19937_64 gen = substream(spec.seed, chunk);
            const std::uint64_t begin = chunk * kChunkTrials;
            const std::uint64_t count = std::min(kChunkTrials, spec.trials - begin);
            for (std::uint64_t t = 0; t < count; ++t) per_trial(gen, partial[w]);
        }
    };

    std::vector<std::thread> threads;
    threads.reserve(workers - 1);
    for (unsigned w = 1; w < workers; ++w) threads.emplace_back(worker_loop, w);
    worker_loop(0);
    for (auto& t : threads) t.join();

    Counts total = zero;
    for (const Counts& p : partial) total += p;
    return total;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Delay-multiplexed trigger (single detector behind a delay chain)
// ---------------------------------------------------------------------------

/// Raw tallies of a delay-multiplexed run. Mergeable: operator+= adds
/// counts elementwise, so chunked runs combine in any order.
struct DelayMultiplexedCounts {
    std::uint64_t trials = 0;
    std::vector<std::uint64_t> event_count;  ///< [0..N_D], [0] = no trigger
    std::vector<std::uint64_t> single_count; ///< [i] = event i AND system total of one photon

    DelayMultiplexedCounts() = default;
    explicit DelayMultiplexedCounts(int num_delays)
        : event_count(num_delays + 1, 0), single_count(num_delays + 1, 0) {}

    DelayMultiplexedCounts& operator+=(const DelayMultiplexedCounts& other) {
        if (event_count.size() < other.event_count.size()) {
            event_count.resize(other.event_count.size(), 0);
            single_count.resize(other.single_count.size(), 0);
        }
        trials += other.trials;
        for (std::size_t i = 0; i < other.event_count.size(); ++i) {
            event_count[i] += other.event_count[i];
            single_count[i] += other.single_count[i];
        }
        return *this;
    }

    bool operator==(const DelayMultiplexedCounts&) const = default;

    std::uint64_t triggered() const { return trials - event_count[0]; }
    std::uint64_t single_total() const {
        std::uint64_t sum = 0;
        for (std::uint64_t c : single_count) sum += c;
        return sum;
    }
    std::uint64_t single_and_triggered() const { return single_total() - single_count[0]; }
};

/// One pump pulse through the delay chain.
///
/// Draw order (the determinism contract): for each mode in ascending delay
/// order, one mode-count draw, then one uniform per photon in that mode for
/// detection thinning. The recorded event is the lowest-index mode holding a
/// detected photon; detector dead time discards every later detection.
inline TrialOutcome simulate_delay_trial(const MultiplexConfig& cfg, std::mt19937_64& gen) {
    const double mode_mean = cfg.mode_mean();
    const double eta = cfg.eta.value();
    int event = 0;
    int total = 0;
    for (int mode = 1; mode <= cfg.num_delays; ++mode) {
        const int n = sample_mode_count(cfg.kind, mode_mean, gen);
        total += n;
        bool detected = false;
        for (int k = 0; k < n; ++k) {
            if (uniform_open(gen) < eta) detected = true;
        }
        if (detected && event == 0) event = mode;
    }
    return TrialOutcome{TriggerEvent{event}, total, 0};
}

/// Counts for one chunk of a delay-multiplexed run (exposed so callers can
/// verify the merge contract directly).
inline DelayMultiplexedCounts run_delay_chunk(const MultiplexConfig& cfg, std::uint64_t trials,
                                              std::mt19937_64 gen) {
    DelayMultiplexedCounts counts(cfg.num_delays);
    counts.trials = trials;
    for (std::uint64_t t = 0; t < trials; ++t) {
        const TrialOutcome outcome = simulate_delay_trial(cfg, gen);
        counts.event_count[outcome.event.delay_index] += 1;
        if (outcome.total_photons == 1) counts.single_count[outcome.event.delay_index] += 1;
    }
    return counts;
}

inline DelayMultiplexedCounts run_delay_counts(const SimulationSpec& spec) {
    DelayMultiplexedCounts zero(spec.config.num_delays);
    return detail::run_chunked(spec, zero,
                               [&cfg = spec.config](std::mt19937_64& gen,
                                                    DelayMultiplexedCounts& counts) {
                                   const TrialOutcome outcome = simulate_delay_trial(cfg, gen);
                                   counts.trials += 1;
                                   counts.event_count[outcome.event.delay_index] += 1;
                                   if (outcome.total_photons == 1) {
                                       counts.single_count[outcome.event.delay_index] += 1;
                                   }
                               });
}

/// Estimates of every closed-form quantity the model defines, from raw
/// counts. Estimate names carry the delay index in brackets.
inline std::vector<SimulationEstimate> delay_estimates(const DelayMultiplexedCounts& counts) {
    const int num_delays = static_cast<int>(counts.event_count.size()) - 1;
    std::vector<SimulationEstimate> out;
    out.reserve(2 * num_delays + 3);
    for (int i = 1; i <= num_delays; ++i) {
        out.push_back(make_estimate("certification[" + std::to_string(i) + "]",
                                    counts.single_count[i], counts.event_count[i]));
    }
    for (int i = 1; i <= num_delays; ++i) {
        out.push_back(make_estimate("delay_fire_prob[" + std::to_string(i) + "]",
                                    counts.event_count[i], counts.trials));
    }
    out.push_back(make_estimate("no_trigger_prob", counts.event_count[0], counts.trials));
    out.push_back(make_estimate("single_photon_prob", counts.single_total(), counts.trials));
    out.push_back(make_estimate("single_photon_prob_given_trigger", counts.single_and_triggered(),
                                counts.triggered()));
    return out;
}

struct DelayMultiplexedResult {
    DelayMultiplexedCounts counts;
    std::vector<SimulationEstimate> estimates;
};

inline DelayMultiplexedResult run_delay_multiplexed(const SimulationSpec& spec) {
    if (spec.mode != SimulationMode::DelayMultiplexed) {
        throw invalid_parameter("run_delay_multiplexed needs a DelayMultiplexed spec");
    }
    DelayMultiplexedResult result;
    result.counts = run_delay_counts(spec);
    result.estimates = delay_estimates(result.counts);
    return result;
}

// ---------------------------------------------------------------------------
// Switched array (every channel heralded separately, one routed to output)
// ---------------------------------------------------------------------------

struct SwitchedArrayCounts {
    std::uint64_t trials = 0;
    std::uint64_t herald_count = 0;            ///< some channel produced a herald
    std::uint64_t twin_emitted_count = 0;      ///< the herald's twin survived to the output
    std::uint64_t emitted_ge1_and_herald = 0;
    std::vector<std::uint64_t> emitted_histogram; ///< index = photons leaving the output port

    SwitchedArrayCounts& operator+=(const SwitchedArrayCounts& other) {
        trials += other.trials;
        herald_count += other.herald_count;
        twin_emitted_count += other.twin_emitted_count;
        emitted_ge1_and_herald += other.emitted_ge1_and_herald;
        if (emitted_histogram.size() < other.emitted_histogram.size()) {
            emitted_histogram.resize(other.emitted_histogram.size(), 0);
        }
        for (std::size_t i = 0; i < other.emitted_histogram.size(); ++i) {
            emitted_histogram[i] += other.emitted_histogram[i];
        }
        return *this;
    }

    bool operator==(const SwitchedArrayCounts&) const = default;
};

struct SwitchedTrialDetail {
    TrialOutcome outcome;
    bool twin_emitted; ///< the specific photon paired with the recorded herald got out
};

/// One pump pulse through the switched array.
///
/// Each channel is an independent downconverter with its own herald
/// detector; every herald photon is thinned at eta. The controller routes
/// the lowest-index heralded channel to the output, where each of its
/// photons independently survives the switch-plus-output transmittance. The
/// twin of the recorded herald is tracked separately so its survival can be
/// estimated on its own.
///
/// Draw order: per channel in ascending order, one count draw then one
/// uniform per photon; if some channel heralded, one uniform for the twin,
/// then one uniform for each remaining photon of the selected channel.
inline SwitchedTrialDetail simulate_switched_trial(const MultiplexConfig& cfg,
                                                   double channel_transmittance,
                                                   std::mt19937_64& gen) {
    const double mode_mean = cfg.mode_mean();
    const double eta = cfg.eta.value();
    int selected = 0;
    int selected_photons = 0;
    int total = 0;
    for (int channel = 1; channel <= cfg.num_delays; ++channel) {
        const int n = sample_mode_count(cfg.kind, mode_mean, gen);
        total += n;
        bool heralded = false;
        for (int k = 0; k < n; ++k) {
            if (uniform_open(gen) < eta) heralded = true;
        }
        if (heralded && selected == 0) {
            selected = channel;
            selected_photons = n;
        }
    }

    int emitted = 0;
    bool twin_emitted = false;
    if (selected != 0) {
        twin_emitted = uniform_open(gen) < channel_transmittance;
        emitted = twin_emitted ? 1 : 0;
        for (int k = 1; k < selected_photons; ++k) {
            if (uniform_open(gen) < channel_transmittance) ++emitted;
        }
    }
    return SwitchedTrialDetail{TrialOutcome{TriggerEvent{selected}, total, emitted},
                               twin_emitted};
}

struct SwitchedArrayResult {
    SwitchedArrayCounts counts;
    std::vector<SimulationEstimate> estimates;
};

inline SwitchedArrayResult run_switched_array(const SimulationSpec& spec) {
    if (spec.mode != SimulationMode::SwitchedArray) {
        throw invalid_parameter("run_switched_array needs a SwitchedArray spec");
    }
    const double transmittance = spec.switch_transmittance * spec.output_transmittance;
    SwitchedArrayCounts zero;
    SwitchedArrayCounts counts = detail::run_chunked(
        spec, zero,
        [&cfg = spec.config, transmittance](std::mt19937_64& gen, SwitchedArrayCounts& c) {
            const SwitchedTrialDetail detail = simulate_switched_trial(cfg, transmittance, gen);
            c.trials += 1;
            const int emitted = detail.outcome.emitted_photons;
            if (detail.outcome.event.delay_index != 0) {
                c.herald_count += 1;
                if (detail.twin_emitted) c.twin_emitted_count += 1;
                if (emitted >= 1) c.emitted_ge1_and_herald += 1;
            }
            if (c.emitted_histogram.size() <= static_cast<std::size_t>(emitted)) {
                c.emitted_histogram.resize(emitted + 1, 0);
            }
            c.emitted_histogram[emitted] += 1;
        });

    std::uint64_t emitted_one = counts.emitted_histogram.size() > 1 ? counts.emitted_histogram[1] : 0;
    std::uint64_t emitted_multi = 0;
    for (std::size_t k = 2; k < counts.emitted_histogram.size(); ++k) {
        emitted_multi += counts.emitted_histogram[k];
    }

    SwitchedArrayResult result;
    result.estimates.push_back(make_estimate("herald_prob", counts.herald_count, counts.trials));
    result.estimates.push_back(
        make_estimate("emission_given_herald", counts.twin_emitted_count, counts.herald_count));
    result.estimates.push_back(make_estimate("emitted_one_prob", emitted_one, counts.trials));
    result.estimates.push_back(make_estimate("emitted_multi_prob", emitted_multi, counts.trials));
    result.estimates.push_back(make_estimate("emitted_ge1_given_herald",
                                             counts.emitted_ge1_and_herald, counts.herald_count));
    result.counts = std::move(counts);
    return result;
}

} // namespace photonmux
