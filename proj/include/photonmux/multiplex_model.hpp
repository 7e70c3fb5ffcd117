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
#include <functional>
#include <string>
#include <vector>

#include "photonmux/errors.hpp"
#include "photonmux/photon_statistics.hpp"

namespace photonmux {

/// A heralded source whose trigger arm is split across num_delays delay
/// paths feeding one detector. The system mean nbar is divided evenly, so
/// each path carries an independent mode of mean nbar/num_delays. The firing
/// time identifies which path produced the herald; detector dead time hides
/// everything after the first firing.
struct MultiplexConfig {
    MeanPhotonNumber nbar;  ///< mean photon pairs per pump pulse, whole system
    QuantumEfficiency eta;  ///< trigger detector efficiency
    int num_delays;         ///< number of delay paths, >= 1
    StatKind kind;          ///< per-mode photon-number law

    MultiplexConfig(MeanPhotonNumber nbar_, QuantumEfficiency eta_, int num_delays_,
                    StatKind kind_ = StatKind::BoseEinstein)
        : nbar(nbar_), eta(eta_), num_delays(num_delays_), kind(kind_) {
        if (num_delays < 1) {
            throw invalid_parameter("number of delay paths must be >= 1, got " +
                                    std::to_string(num_delays));
        }
    }

    double mode_mean() const noexcept { return nbar.value() / num_delays; }

    PhotonNumberDistribution mode_distribution() const {
        return PhotonNumberDistribution{kind, MeanPhotonNumber(mode_mean())};
    }
};

/// Which delay path caused the trigger; 0 means the trigger never fired.
struct TriggerEvent {
    int delay_index;
};

namespace detail {

inline void require_delay_index(const MultiplexConfig& cfg, int delay_index) {
    if (delay_index < 1 || delay_index > cfg.num_delays) {
        throw invalid_parameter("delay index must lie in [1," +
                                std::to_string(cfg.num_delays) + "], got " +
                                std::to_string(delay_index));
    }
}

/// Maximize a unimodal function on [lo, hi] by golden-section search,
/// stopping when the bracket is narrower than tol.
inline double golden_section_max(const std::function<double(double)>& f, double lo, double hi,
                                 double tol) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = hi - inv_phi * (hi - lo);
    double d = lo + inv_phi * (hi - lo);
    double fc = f(c);
    double fd = f(d);
    while (hi - lo > tol) {
        if (fc < fd) {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_phi * (hi - lo);
            fd = f(d);
        } else {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv_phi * (hi - lo);
            fc = f(c);
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace detail

/// Single-photon certification: the probability that exactly one photon
/// entered the whole delay system, given that path i caused the trigger.
///
/// The event decomposes into independent per-mode factors, and that product
/// is what is evaluated here:
///
///   (1 - P_noFire)^(i-1)  -- paths before i were silent AND empty
///   * P_F(1)              -- the firing path held exactly one photon
///   * P(0)^(N_D - i)      -- paths after i (hidden by dead time) are vacuum
///
/// with every factor taken at the per-mode mean m = nbar/N_D. For
/// Bose-Einstein modes the product simplifies to
///
///   (N_D + eta nbar)^i * N_D^(N_D + 1 - i) / (nbar + N_D)^(N_D + 1)
///
/// which rises with i: a herald from a later path certifies the earlier
/// paths empty, so it pins down the photon number more tightly.
inline double certification(const MultiplexConfig& cfg, int delay_index) {
    detail::require_delay_index(cfg, delay_index);
    const PhotonNumberDistribution dist = cfg.mode_distribution();
    const double silent_and_empty = 1.0 - p_some_photon_given_no_fire(dist, cfg.eta);
    const double one_photon_in_firing_path = posterior_given_fire(dist, cfg.eta, 1);
    const double vacuum = dist.pmf(0);
    return std::pow(silent_and_empty, delay_index - 1) * one_photon_in_firing_path *
           std::pow(vacuum, cfg.num_delays - delay_index);
}

/// Probability that delay path i is the one that fires the trigger: the
/// i-1 earlier paths stay silent and path i does not.
///
/// Bose-Einstein: (eta nbar/(eta nbar + N_D)) (N_D/(eta nbar + N_D))^(i-1).
/// Poisson: e^(-eta m (i-1)) (1 - e^(-eta m)) with m = nbar/N_D.
inline double delay_fire_prob(const MultiplexConfig& cfg, int delay_index) {
    detail::require_delay_index(cfg, delay_index);
    const double silent = p_no_fire(cfg.mode_distribution(), cfg.eta);
    return std::pow(silent, delay_index - 1) * (1.0 - silent);
}

/// Probability that no delay path fires at all.
///
/// Bose-Einstein: (N_D/(eta nbar + N_D))^N_D. Poisson: e^(-eta nbar).
inline double no_trigger_prob(const MultiplexConfig& cfg) {
    const double silent = p_no_fire(cfg.mode_distribution(), cfg.eta);
    return std::pow(silent, cfg.num_delays);
}

/// Overall probability that the system holds exactly one photon per pulse,
/// herald or not. Closed forms:
///
///   Bose-Einstein: nbar (N_D/(nbar + N_D))^(N_D + 1)
///   Poisson:       nbar e^(-nbar)
///
/// Neither depends on the detector, so eta never appears; the Poisson form
/// does not even depend on N_D (pooled Poisson modes stay Poisson).
inline double single_photon_prob(const MultiplexConfig& cfg) {
    const double nbar = cfg.nbar.value();
    if (cfg.kind == StatKind::Poisson) return nbar * std::exp(-nbar);
    const double nd = cfg.num_delays;
    return nbar * std::pow(nd / (nbar + nd), cfg.num_delays + 1);
}

/// The same overall single-photon probability accumulated event by event:
/// sum over heralded events of certification(i) * delay_fire_prob(i), plus
/// the unheralded term where a lone photon escaped detection,
/// N_D * P(0)^(N_D-1) * (1-eta) * P(1).
///
/// Agrees with single_photon_prob to within accumulation rounding; the two
/// routes are kept separate on purpose so they can arbitrate each other.
inline double single_photon_prob_by_events(const MultiplexConfig& cfg) {
    const PhotonNumberDistribution dist = cfg.mode_distribution();
    double total = 0.0;
    if (cfg.eta.value() > 0.0 && cfg.nbar.value() > 0.0) {
        for (int i = 1; i <= cfg.num_delays; ++i) {
            total += certification(cfg, i) * delay_fire_prob(cfg, i);
        }
    }
    total += cfg.num_delays * std::pow(dist.pmf(0), cfg.num_delays - 1) *
             (1.0 - cfg.eta.value()) * dist.pmf(1);
    return total;
}

/// Probability that the emitted pulse is a single photon given that the
/// trigger fired. Closed forms:
///
///   Bose-Einstein: nbar eta (N_D/(nbar+N_D))^(N_D+1) / (1 - (N_D/(nbar eta + N_D))^N_D)
///   Poisson:       nbar eta e^(-nbar) / (1 - e^(-nbar eta))
///
/// Undefined when the trigger can never fire (eta = 0 or nbar = 0).
inline double single_photon_prob_given_trigger(const MultiplexConfig& cfg) {
    const double nbar = cfg.nbar.value();
    const double e = cfg.eta.value();
    if (!(e > 0.0) || !(nbar > 0.0)) {
        throw undefined_conditional("trigger never fires (eta = 0 or nbar = 0); "
                                    "conditional single-photon probability undefined");
    }
    const double triggered = 1.0 - no_trigger_prob(cfg);
    if (cfg.kind == StatKind::Poisson) return nbar * e * std::exp(-nbar) / triggered;
    const double nd = cfg.num_delays;
    return nbar * e * std::pow(nd / (nbar + nd), cfg.num_delays + 1) / triggered;
}

/// Pump rate that maximizes single_photon_prob for the given detector and
/// delay count, searched over nbar in (0, 16]: a coarse scan brackets the
/// peak (and confirms the scan is single-peaked), then golden-section search
/// narrows the bracket to 1e-8.
inline MeanPhotonNumber optimal_mean(QuantumEfficiency eta, int num_delays, StatKind kind) {
    if (num_delays < 1) {
        throw invalid_parameter("number of delay paths must be >= 1, got " +
                                std::to_string(num_delays));
    }
    const auto objective = [&](double nbar) {
        return single_photon_prob(MultiplexConfig(MeanPhotonNumber(nbar), eta, num_delays, kind));
    };

    constexpr double lo = 1e-6;
    constexpr double hi = 16.0;
    constexpr int coarse_points = 161;
    std::vector<double> xs(coarse_points);
    std::vector<double> ys(coarse_points);
    int best = 0;
    for (int k = 0; k < coarse_points; ++k) {
        xs[k] = lo + (hi - lo) * k / (coarse_points - 1);
        ys[k] = objective(xs[k]);
        if (ys[k] > ys[best]) best = k;
    }
    for (int k = 1; k < coarse_points; ++k) {
        const bool rising = ys[k] > ys[k - 1];
        if ((k <= best && !rising) || (k > best && rising)) {
            throw std::runtime_error("single-photon probability is not unimodal on the "
                                     "scan grid; cannot bracket the maximum");
        }
    }
    const double bracket_lo = best > 0 ? xs[best - 1] : lo;
    const double bracket_hi = best < coarse_points - 1 ? xs[best + 1] : hi;
    return MeanPhotonNumber(detail::golden_section_max(objective, bracket_lo, bracket_hi, 1e-8));
}

/// Per-pulse single-photon fractions of the standard source arrangements,
/// side by side for one operating point.
struct SourceComparison {
    double faint_laser;             ///< Poisson P(1), no herald
    double conventional_unheralded; ///< one-mode thermal source, herald ignored
    double conventional_heralded;   ///< one-mode thermal source, given trigger
    double multiplexed_heralded;    ///< N_D-path system, given trigger
};

inline SourceComparison source_comparison(MeanPhotonNumber nbar, QuantumEfficiency eta,
                                          int num_delays) {
    const MultiplexConfig faint(nbar, eta, 1, StatKind::Poisson);
    const MultiplexConfig conventional(nbar, eta, 1, StatKind::BoseEinstein);
    const MultiplexConfig multiplexed(nbar, eta, num_delays, StatKind::BoseEinstein);
    return SourceComparison{
        single_photon_prob(faint),
        single_photon_prob(conventional),
        single_photon_prob_given_trigger(conventional),
        single_photon_prob_given_trigger(multiplexed),
    };
}

/// Ordered list of per-surface transmittances along the output path.
struct LossModel {
    std::vector<double> surfaces;

    explicit LossModel(std::vector<double> surfaces_ = {}) : surfaces(std::move(surfaces_)) {
        for (double t : surfaces) {
            if (!(t >= 0.0 && t <= 1.0)) {
                throw invalid_parameter("surface transmittance must lie in [0,1], got " +
                                        std::to_string(t));
            }
        }
    }
};

struct LossBudget {
    double net_transmittance;
    double net_loss;
};

/// Net throughput of a chain of optical surfaces: the product of the
/// individual transmittances, and one minus that product.
inline LossBudget loss_budget(const LossModel& model) {
    double net = 1.0;
    for (double t : model.surfaces) net *= t;
    return LossBudget{net, 1.0 - net};
}

/// Per-delay certification paired with how often that event occurs.
struct DelayCertification {
    double certification;
    double occurrence;
};

/// Everything the closed-form model says about one configuration: the
/// per-delay fan, the no-trigger weight, the aggregate single-photon
/// probabilities, and the Poisson-source values at the same operating point
/// for reference.
struct CertificationReport {
    std::vector<DelayCertification> per_delay; ///< index 0 holds delay path 1
    double p_no_trigger;
    double p_single;
    double p_single_given_trigger;
    double poisson_limit_p_single;
    double poisson_limit_given_trigger;
};

inline CertificationReport certification_report(const MultiplexConfig& cfg) {
    CertificationReport report;
    report.per_delay.reserve(cfg.num_delays);
    for (int i = 1; i <= cfg.num_delays; ++i) {
        report.per_delay.push_back(
            DelayCertification{certification(cfg, i), delay_fire_prob(cfg, i)});
    }
    report.p_no_trigger = no_trigger_prob(cfg);
    report.p_single = single_photon_prob(cfg);
    report.p_single_given_trigger = single_photon_prob_given_trigger(cfg);
    const MultiplexConfig poisson(cfg.nbar, cfg.eta, cfg.num_delays, StatKind::Poisson);
    report.poisson_limit_p_single = single_photon_prob(poisson);
    report.poisson_limit_given_trigger = single_photon_prob_given_trigger(poisson);
    return report;
}

} // namespace photonmux
