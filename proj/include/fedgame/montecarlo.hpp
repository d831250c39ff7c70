// Copyright 2026 The fedgame Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

/**
 * \file fedgame/montecarlo.hpp
 *
 * \brief Simulation of the generative model behind the closed-form error.
 *
 * Each trial draws a true mean theta_i ~ N(M, sigma2) per player, then n_i
 * samples Y ~ N(theta_i, eps_i). The coalition estimate is the sample-count
 * weighted average of the local means, and player j's squared error is
 * (estimate - theta_j)^2.
 *
 * Trials are grouped into fixed blocks of kBlockTrials, each with its own
 * generator seeded from (seed, block). Block sums are combined by pairwise
 * summation, so the result does not depend on how blocks are scheduled.
 */

#pragma once

#include <fedgame/model.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace fedgame {

struct GenerativeConfig {
  double meta_mean = 0.0;
  double sigma2 = 1.0;
  double mu_e = 1.0;
  std::uint64_t seed = 0;
  std::uint64_t trials = 100000;
  /// Draw eps_i ~ U(0, 2 mu_e) once per trial and player instead of fixing eps_i = mu_e.
  bool per_player_eps = false;

  void validate() const {
    if (!(sigma2 > 0) || !(mu_e > 0)) throw std::invalid_argument("sigma2 and mu_e must be positive");
    if (trials < 1) throw std::invalid_argument("trials must be at least 1");
    if (!std::isfinite(meta_mean)) throw std::invalid_argument("meta_mean must be finite");
  }

  /// Uses the instance's mu_e and sigma2.
  static GenerativeConfig for_instance(const Instance& inst, std::uint64_t seed, std::uint64_t trials) {
    GenerativeConfig g;
    g.sigma2 = to_double(inst.params().sigma2());
    g.mu_e = to_double(inst.params().mu_e());
    g.seed = seed;
    g.trials = trials;
    return g;
  }
};

struct McResult {
  PlayerId player = 0;
  double empirical = 0;  ///< mean squared error over trials
  double std_error = 0;  ///< standard error of the mean
  double theory = 0;     ///< closed-form expectation
  double z = 0;          ///< (empirical - theory) / std_error
};

inline constexpr std::uint64_t kBlockTrials = 1024;

namespace mc {

/// Sums of x and x^2 per player.
struct Moments {
  std::vector<double> sum, sum_sq;
  explicit Moments(std::size_t n = 0) : sum(n, 0.0), sum_sq(n, 0.0) {}
  void add(const Moments& o) {
    for (std::size_t i = 0; i < sum.size(); ++i) {
      sum[i] += o.sum[i];
      sum_sq[i] += o.sum_sq[i];
    }
  }
};

inline Moments pairwise_reduce(std::vector<Moments>& parts, std::size_t lo, std::size_t hi) {
  if (hi - lo == 1) return parts[lo];
  const std::size_t mid = lo + (hi - lo) / 2;
  Moments left = pairwise_reduce(parts, lo, mid);
  left.add(pairwise_reduce(parts, mid, hi));
  return left;
}

inline std::mt19937_64 block_rng(std::uint64_t seed, std::uint64_t block) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32), 0x6d63u};
  return std::mt19937_64(seq);
}

/// Squared error of every member for one draw of the generative model.
/// `weighted` receives the sample-weighted sum of squared errors over members.
inline void one_trial(const std::vector<SampleCount>& sizes, const GenerativeConfig& g, std::mt19937_64& rng,
                      std::vector<double>& err, double& weighted) {
  const std::size_t m = sizes.size();
  std::normal_distribution<double> theta_dist(g.meta_mean, std::sqrt(g.sigma2));
  std::normal_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> eps_dist(0.0, 2.0 * g.mu_e);
  std::vector<double> theta(m);
  double num = 0, den = 0;
  for (std::size_t i = 0; i < m; ++i) {
    theta[i] = theta_dist(rng);
    const double sd = std::sqrt(g.per_player_eps ? eps_dist(rng) : g.mu_e);
    double total = 0;
    for (SampleCount s = 0; s < sizes[i]; ++s) total += theta[i] + sd * unit(rng);
    num += total;  // n_i * local mean
    den += static_cast<double>(sizes[i]);
  }
  const double estimate = num / den;
  weighted = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const double d = estimate - theta[i];
    err[i] = d * d;
    weighted += static_cast<double>(sizes[i]) * err[i];
  }
}

/// Moments for members (indices 0..m-1) plus the weighted aggregate at index m.
inline Moments simulate_moments(const std::vector<SampleCount>& sizes, const GenerativeConfig& g) {
  g.validate();
  const std::size_t m = sizes.size();
  const std::uint64_t blocks = (g.trials + kBlockTrials - 1) / kBlockTrials;
  std::vector<Moments> parts;
  parts.reserve(blocks);
  std::vector<double> err(m);
  for (std::uint64_t b = 0; b < blocks; ++b) {
    auto rng = block_rng(g.seed, b);
    Moments part(m + 1);
    const std::uint64_t count = std::min(kBlockTrials, g.trials - b * kBlockTrials);
    for (std::uint64_t t = 0; t < count; ++t) {
      double weighted = 0;
      one_trial(sizes, g, rng, err, weighted);
      for (std::size_t i = 0; i < m; ++i) {
        part.sum[i] += err[i];
        part.sum_sq[i] += err[i] * err[i];
      }
      part.sum[m] += weighted;
      part.sum_sq[m] += weighted * weighted;
    }
    parts.push_back(std::move(part));
  }
  return pairwise_reduce(parts, 0, parts.size());
}

inline McResult summarize(PlayerId player, double sum, double sum_sq, std::uint64_t trials, double theory) {
  const double n = static_cast<double>(trials);
  const double mean = sum / n;
  double var = 0;
  if (trials >= 2) var = std::max(0.0, (sum_sq - n * mean * mean) / (n - 1));
  const double se = std::sqrt(var / n);
  const double z = se > 0 ? (mean - theory) / se : 0.0;
  return {player, mean, se, theory, z};
}

}  // namespace mc

/// Per-member results for one coalition, in member order.
inline std::vector<McResult> simulate_coalition(const Coalition& c, const Instance& inst, const GenerativeConfig& g) {
  std::vector<SampleCount> sizes;
  for (PlayerId id : c.members()) sizes.push_back(inst.n(id));
  const auto moments = mc::simulate_moments(sizes, g);
  std::vector<McResult> out;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    const PlayerId j = c.members()[i];
    out.push_back(mc::summarize(j, moments.sum[i], moments.sum_sq[i], g.trials, to_double(err_player(j, c, inst))));
  }
  return out;
}

struct PartitionMcResult {
  std::vector<McResult> players;  ///< indexed by player id
  McResult aggregate;             ///< weighted cost; player field unused
};

/// Simulates every coalition (each with its own seed offset) and compares the
/// summed weighted squared error with the closed-form partition cost.
inline PartitionMcResult validate_partition(const Partition& p, const Instance& inst, const GenerativeConfig& g) {
  PartitionMcResult out;
  out.players.resize(inst.size());
  double agg_mean = 0, agg_var = 0;
  for (std::size_t ci = 0; ci < p.size(); ++ci) {
    const auto& c = p.coalitions()[ci];
    GenerativeConfig gc = g;
    gc.seed = g.seed + 0x9e3779b97f4a7c15ULL * (ci + 1);
    std::vector<SampleCount> sizes;
    for (PlayerId id : c.members()) sizes.push_back(inst.n(id));
    const auto moments = mc::simulate_moments(sizes, gc);
    for (std::size_t i = 0; i < sizes.size(); ++i) {
      const PlayerId j = c.members()[i];
      out.players[j] = mc::summarize(j, moments.sum[i], moments.sum_sq[i], g.trials, to_double(err_player(j, c, inst)));
    }
    auto agg = mc::summarize(0, moments.sum[sizes.size()], moments.sum_sq[sizes.size()], g.trials,
                             to_double(coalition_cost(c, inst)));
    agg_mean += agg.empirical;
    agg_var += agg.std_error * agg.std_error;
  }
  const double theory = to_double(partition_cost(p, inst));
  const double se = std::sqrt(agg_var);
  out.aggregate = {0, agg_mean, se, theory, se > 0 ? (agg_mean - theory) / se : 0.0};
  return out;
}

}  // namespace fedgame
