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
 * \file fedgame/lemma_lab.hpp
 *
 * \brief Randomised property checks for the structural lemmas of the game,
 *  plus instance constructors where local learning or the grand coalition
 *  is arbitrarily worse than optimal.
 *
 * Every check is a function of (config, trial index): each trial seeds its own
 * generator from the pair, so a reported counterexample can be replayed in
 * isolation and running trials in any order gives the same report. All
 * comparisons are exact; there is no tolerance anywhere in this file.
 */

#pragma once

#include <fedgame/anarchy.hpp>
#include <fedgame/check_report.hpp>
#include <fedgame/enumeration.hpp>
#include <fedgame/model.hpp>
#include <fedgame/optimal.hpp>
#include <fedgame/stability.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fedgame {

enum class SizeFilter { Any, AllSmall, AllLarge, Mixed };

/// Generator settings for random instances. Sample counts are drawn
/// log-uniformly over [1, max_size_factor * mu_e / sigma2] so both sides of
/// the critical size are hit; mu_e is ratio * sigma2 with the ratio taken
/// from ratio_grid.
struct RandomInstanceConfig {
  std::size_t min_players = 1;
  std::size_t max_players = 8;
  std::vector<Rational> ratio_grid{Rational(1), Rational(10), Rational(100)};
  std::vector<Rational> sigma2_choices{Rational(1), Rational(2), make_rational(1, 2)};
  Rational max_size_factor = 10;
  std::uint64_t seed = 0;
  SizeFilter filter = SizeFilter::Any;

  void validate() const {
    if (min_players < 1 || max_players < min_players) throw std::invalid_argument("bad player range");
    if (ratio_grid.empty() || sigma2_choices.empty()) throw std::invalid_argument("empty parameter grid");
    for (const auto& r : ratio_grid) {
      if (r < 1) throw std::invalid_argument("ratios must be at least 1 so every size class is reachable");
    }
    for (const auto& s : sigma2_choices) {
      if (s <= 0) throw std::invalid_argument("sigma2 choices must be positive");
    }
    if (max_size_factor < 1) throw std::invalid_argument("max_size_factor must be at least 1");
  }
};

// ---------------------------------------------------------------------------
// Random generation
// ---------------------------------------------------------------------------

/// Generator for one trial, derived from (seed, trial).
inline std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)};
  return std::mt19937_64(seq);
}

inline SampleCount floor_of(const Rational& r) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q.get_si();
}

inline SampleCount ceil_of(const Rational& r) {
  Integer q;
  mpz_cdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q.get_si();
}

/// Log-uniform integer in [lo, hi].
inline SampleCount draw_size(std::mt19937_64& rng, SampleCount lo, SampleCount hi) {
  if (hi < lo) throw std::invalid_argument("empty size range");
  std::uniform_real_distribution<double> u(std::log(static_cast<double>(lo)), std::log(static_cast<double>(hi) + 1.0));
  auto n = static_cast<SampleCount>(std::floor(std::exp(u(rng))));
  return std::clamp(n, lo, hi);
}

template <typename T>
const T& pick_from(std::mt19937_64& rng, const std::vector<T>& xs) {
  std::uniform_int_distribution<std::size_t> d(0, xs.size() - 1);
  return xs[d(rng)];
}

inline GameParams draw_params(const RandomInstanceConfig& cfg, std::mt19937_64& rng) {
  const Rational& ratio = pick_from(rng, cfg.ratio_grid);
  const Rational& sigma2 = pick_from(rng, cfg.sigma2_choices);
  return GameParams(ratio * sigma2, sigma2);
}

inline SampleCount size_cap(const RandomInstanceConfig& cfg, const GameParams& params) {
  return std::max<SampleCount>(1, ceil_of(cfg.max_size_factor * params.critical_size()));
}

/// One size under the given filter (Mixed is treated as Any here).
inline SampleCount draw_filtered_size(const RandomInstanceConfig& cfg, const GameParams& params, SizeFilter filter,
                                      std::mt19937_64& rng) {
  const Rational crit = params.critical_size();
  const SampleCount cap = size_cap(cfg, params);
  switch (filter) {
    case SizeFilter::AllSmall: return draw_size(rng, 1, std::max<SampleCount>(1, floor_of(crit)));
    case SizeFilter::AllLarge: return draw_size(rng, std::max<SampleCount>(1, ceil_of(crit)), std::max(cap, ceil_of(crit)));
    default: return draw_size(rng, 1, cap);
  }
}

inline std::size_t draw_player_count(const RandomInstanceConfig& cfg, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> d(cfg.min_players, cfg.max_players);
  return d(rng);
}

inline std::vector<SampleCount> draw_sizes(const RandomInstanceConfig& cfg, const GameParams& params,
                                           std::size_t count, std::mt19937_64& rng) {
  std::vector<SampleCount> sizes;
  sizes.reserve(count);
  for (std::size_t i = 0; i < count; ++i) sizes.push_back(draw_filtered_size(cfg, params, cfg.filter, rng));
  if (cfg.filter == SizeFilter::Mixed && count >= 2) {
    // at least one player on each side of mu_e / sigma2
    const Rational crit = params.critical_size();
    sizes[0] = draw_size(rng, 1, std::max<SampleCount>(1, floor_of(crit)));
    sizes[1] = draw_size(rng, floor_of(crit) + 1, std::max(size_cap(cfg, params), floor_of(crit) + 1));
  }
  return sizes;
}

inline Instance draw_instance(const RandomInstanceConfig& cfg, std::mt19937_64& rng) {
  GameParams params = draw_params(cfg, rng);
  auto sizes = draw_sizes(cfg, params, draw_player_count(cfg, rng), rng);
  return Instance(std::move(params), std::move(sizes));
}

/// Parameters for which mu_e / (3 sigma2) is at least one sample, so that the
/// small-player lemmas have a non-empty domain.
inline GameParams draw_params_with_partner_room(const RandomInstanceConfig& cfg, std::mt19937_64& rng) {
  GameParams p = draw_params(cfg, rng);
  if (p.critical_size() >= 3) return p;
  return GameParams(3 * p.sigma2() * pick_from(rng, cfg.ratio_grid), p.sigma2());
}

// ---------------------------------------------------------------------------
// Lemma-level helpers
// ---------------------------------------------------------------------------

struct MergeResult {
  Coalition merged;
  std::vector<PlayerId> removed;  ///< in removal order (descending size)
};

/// Merges two disjoint groups, then sends the largest remaining player to
/// local learning for as long as it strictly prefers that; stops at the first
/// player that would rather stay.
inline MergeResult merge_groups(const Coalition& p, const Coalition& q, const Instance& inst) {
  std::vector<PlayerId> all = p.members();
  for (PlayerId id : q.members()) {
    if (p.contains(id)) throw std::invalid_argument("merge_groups needs disjoint groups");
    all.push_back(id);
  }
  std::stable_sort(all.begin(), all.end(), [&](PlayerId a, PlayerId b) { return inst.n(a) > inst.n(b); });

  std::vector<PlayerId> removed;
  std::size_t head = 0;
  while (all.size() - head >= 2) {
    Coalition current(inst, std::vector<PlayerId>(all.begin() + static_cast<std::ptrdiff_t>(head), all.end()));
    if (!wants_to_leave(all[head], current, inst)) break;
    removed.push_back(all[head]);
    ++head;
  }
  return {Coalition(inst, std::vector<PlayerId>(all.begin() + static_cast<std::ptrdiff_t>(head), all.end())),
          std::move(removed)};
}

struct Construction {
  Instance instance;
  Rational formula_ratio;  ///< ratio from the closed-form cost expressions
  std::optional<Rational> brute_force_ratio;  ///< measured against the exhaustive optimum when within budget
};

/// N = ceil(rho) + 1 equal players of size n below (N/rho - 1) * mu_e / ((N-1) sigma2),
/// sigma2 = 1. mu_e starts at 100 and doubles until an integer n >= 1 fits;
/// n is the largest such integer. Local learning then costs more than rho
/// times the optimum (the grand coalition).
inline Construction construct_alone_bad(const Rational& rho, const EnumerationBudget& budget = {}) {
  if (rho <= 1) throw std::invalid_argument("rho must exceed 1");
  const auto players = static_cast<std::size_t>(ceil_of(rho) + 1);
  const Rational window_scale = (Rational(static_cast<long>(players)) / rho - 1) / (static_cast<long>(players) - 1);
  Rational mu_e = 100;
  while (window_scale * mu_e <= 1) mu_e *= 2;
  // largest integer strictly below the bound
  const Rational bound = window_scale * mu_e;
  SampleCount n = ceil_of(bound) - 1;

  Instance inst(GameParams(mu_e, 1), std::vector<SampleCount>(players, n));
  const Rational alone = mu_e * static_cast<long>(players);
  const Rational grand = mu_e + Rational(static_cast<long>(players) - 1) * to_rational(n);
  Construction out{inst, alone / grand, std::nullopt};
  if (players <= budget.max_players) {
    auto [opt, opt_cost] = brute_force_optimal(inst, budget);
    out.brute_force_ratio = partition_cost(Partition::singletons(inst), inst) / opt_cost;
  }
  return out;
}

/// Three equal players with mu_e = sigma2 = 1 and size
/// n > max{(rho*N - 1) / (N - 1), 1}; the grand coalition then costs more than
/// rho times the optimum (local learning).
inline Construction construct_grand_bad(const Rational& rho, const EnumerationBudget& budget = {}) {
  if (rho <= 1) throw std::invalid_argument("rho must exceed 1");
  constexpr long players = 3;
  const Rational threshold = std::max(Rational((rho * players - 1) / (players - 1)), Rational(1));
  const SampleCount n = floor_of(threshold) + 1;

  Instance inst(GameParams(1, 1), std::vector<SampleCount>(players, n));
  const Rational grand = 1 + Rational(players - 1) * to_rational(n);
  const Rational alone = players;
  Construction out{inst, grand / alone, std::nullopt};
  if (static_cast<std::size_t>(players) <= budget.max_players) {
    auto [opt, opt_cost] = brute_force_optimal(inst, budget);
    out.brute_force_ratio = partition_cost(Partition::grand(inst), inst) / opt_cost;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Checks
// ---------------------------------------------------------------------------

struct TrialOutcome {
  Instance instance;
  bool pass = true;
  CheckContext context;
};

/// nullopt means the trial's random draw did not meet the lemma's
/// preconditions and is not counted.
using TrialFn = std::function<std::optional<TrialOutcome>(const RandomInstanceConfig&, std::uint64_t)>;

struct LemmaCheck {
  std::string name;
  std::string summary;
  TrialFn trial;
};

namespace lab {

inline std::string q(const Rational& r) { return to_exact_string(r); }

inline std::vector<PlayerId> range_ids(std::size_t from, std::size_t to) {
  std::vector<PlayerId> out;
  for (std::size_t i = from; i < to; ++i) out.push_back(i);
  return out;
}

inline std::size_t group_size(const RandomInstanceConfig& cfg, std::mt19937_64& rng, std::size_t reserved) {
  const std::size_t hi = std::max<std::size_t>(1, cfg.max_players > reserved ? cfg.max_players - reserved : 1);
  std::uniform_int_distribution<std::size_t> d(1, hi);
  return d(rng);
}

inline Rational cost_of(const Instance& inst, std::vector<PlayerId> ids) { return coalition_cost(Coalition(inst, std::move(ids)), inst); }

inline Rational err_in(const Instance& inst, PlayerId j, std::vector<PlayerId> ids) {
  return err_player(j, Coalition(inst, std::move(ids)), inst);
}

inline std::vector<PlayerId> with(std::vector<PlayerId> ids, PlayerId extra) {
  ids.push_back(extra);
  return ids;
}

/// Occasionally (1 in 8) make every player exactly critical so that
/// indifference is exercised; only possible for integral mu_e / sigma2.
inline bool force_critical(const GameParams& params, std::mt19937_64& rng) {
  const Rational crit = params.critical_size();
  return crit.get_den() == 1 && std::uniform_int_distribution<int>(0, 7)(rng) == 0;
}

inline std::optional<TrialOutcome> addminsame(const RandomInstanceConfig& cfg, std::uint64_t t) {
  auto rng = trial_rng(cfg.seed, t);
  GameParams params = draw_params(cfg, rng);
  const std::size_t qn = group_size(cfg, rng, 1);
  auto sizes = draw_sizes(cfg, params, qn + 1, rng);
  if (force_critical(params, rng)) std::fill(sizes.begin(), sizes.end(), floor_of(params.critical_size()));
  Instance inst(params, sizes);
  const PlayerId j = qn;
  const auto group = range_ids(0, qn);

  const Rational before = lab::cost_of(inst, {j}) + lab::cost_of(inst, group);
  const Rational after = lab::cost_of(inst, with(group, j));
  const Rational alone = kernel::local_error(inst.n(j), params);
  const Rational joined = err_in(inst, j, with(group, j));
  const bool cost_side = before >= after;
  const bool err_side = alone >= joined;
  // The equality cases must line up too.
  const bool pass = cost_side == err_side && (before == after) == (alone == joined);
  return TrialOutcome{inst, pass,
                      {{"cost_before", q(before)}, {"cost_after", q(after)}, {"err_alone", q(alone)}, {"err_joined", q(joined)}}};
}

inline std::optional<TrialOutcome> swap(const RandomInstanceConfig& cfg, std::uint64_t t) {
  auto rng = trial_rng(cfg.seed, t);
  GameParams params = draw_params(cfg, rng);
  const std::size_t qn = group_size(cfg, rng, 2);
  auto sizes = draw_sizes(cfg, params, qn + 2, rng);
  SampleCount& nj = sizes[qn];
  SampleCount& nk = sizes[qn + 1];
  if (nj == nk) ++nj;
  if (nj < nk) std::swap(nj, nk);
  Instance inst(params, sizes);
  const PlayerId j = qn, k = qn + 1;
  const auto group = range_ids(0, qn);

  const Rational keep_large = lab::cost_of(inst, with(group, j)) + lab::cost_of(inst, {k});
  const Rational keep_small = lab::cost_of(inst, with(group, k)) + lab::cost_of(inst, {j});
  return TrialOutcome{inst, keep_large > keep_small, {{"with_large", q(keep_large)}, {"with_small", q(keep_small)}}};
}

inline std::optional<TrialOutcome> monotone_join(const RandomInstanceConfig& cfg, std::uint64_t t) {
  auto rng = trial_rng(cfg.seed, t);
  GameParams params = draw_params(cfg, rng);
  const std::size_t qn = group_size(cfg, rng, 2);
  auto sizes = draw_sizes(cfg, params, qn + 2, rng);
  if (sizes[qn] > sizes[qn + 1]) std::swap(sizes[qn], sizes[qn + 1]);
  Instance inst(params, sizes);
  const PlayerId small = qn, large = qn + 1;
  const auto group = range_ids(0, qn);

  auto gap = [&](PlayerId p) -> Rational {
    return err_in(inst, p, with(group, p)) - kernel::local_error(inst.n(p), params);
  };
  const Rational gs = gap(small), gl = gap(large);
  // refusal (gap >= 0) is upward-closed; desire (gap <= 0) is downward-closed
  const bool pass = (gs < 0 || gl >= 0) && (gl > 0 || gs <= 0);
  return TrialOutcome{inst, pass, {{"gap_small", q(gs)}, {"gap_large", q(gl)}}};
}

inline std::optional<TrialOutcome> monotone_leave(const RandomInstanceConfig& cfg, std::uint64_t t) {
  auto rng = trial_rng(cfg.seed, t);
  GameParams params = draw_params(cfg, rng);
  std::uniform_int_distribution<std::size_t> d(2, std::max<std::size_t>(2, cfg.max_players));
  auto sizes = draw_sizes(cfg, params, d(rng), rng);
  if (force_critical(params, rng)) std::fill(sizes.begin(), sizes.end(), floor_of(params.critical_size()));
  Instance inst(params, sizes);
  Coalition c(inst, range_ids(0, inst.size()));

  std::vector<Rational> gap;
  for (PlayerId j : c.members()) gap.push_back(err_player(j, c, inst) - kernel::local_error(inst.n(j), params));
  for (PlayerId j : c.members()) {
    for (PlayerId k : c.members()) {
      if (inst.n(k) < inst.n(j)) continue;
      const bool weak_leave_ok = gap[j] < 0 || gap[k] >= 0;
      const bool weak_stay_ok = gap[k] > 0 || gap[j] <= 0;
      const bool strict_ok = !wants_to_leave(j, c, inst) || wants_to_leave(k, c, inst);
      if (!(weak_leave_ok && weak_stay_ok && strict_ok)) {
        return TrialOutcome{inst, false,
                            {{"j", std::to_string(j)}, {"k", std::to_string(k)}, {"gap_j", q(gap[j])}, {"gap_k", q(gap[k])}}};
      }
    }
  }
  return TrialOutcome{inst, true, {}};
}

inline std::optional<TrialOutcome> merge(const RandomInstanceConfig& cfg, std::uint64_t t) {
  auto rng = trial_rng(cfg.seed, t);
  GameParams params = draw_params(cfg, rng);
  const std::size_t pn = group_size(cfg, rng, 1);
  const std::size_t qn = group_size(cfg, rng, pn);
  auto sizes = draw_sizes(cfg, params, pn + qn, rng);
  if (force_critical(params, rng)) std::fill(sizes.begin(), sizes.end(), floor_of(params.critical_size()));
  Instance inst(params, sizes);
  Coalition p(inst, range_ids(0, pn)), qc(inst, range_ids(pn, pn + qn));

  auto result = merge_groups(p, qc, inst);
  const Rational before = coalition_cost(p, inst) + coalition_cost(qc, inst);
  const Rational after = coalition_cost(result.merged, inst) + params.mu_e() * static_cast<long>(result.removed.size());

  // Equality is allowed when the structure comes back unchanged or whenever
  // sizes tie; otherwise the inequality must be strict.
  std::set<std::vector<PlayerId>> before_groups{p.members(), qc.members()};
  std::set<std::vector<PlayerId>> after_groups{result.merged.members()};
  for (PlayerId id : result.removed) after_groups.insert({id});
  std::set<SampleCount> distinct(sizes.begin(), sizes.end());
  const bool equality_allowed = before_groups == after_groups || distinct.size() < sizes.size();
  const bool pass = equality_allowed ? before >= after : before > after;
  return TrialOutcome{inst, pass,
                      {{"before", q(before)}, {"after", q(after)}, {"removed", std::to_string(result.removed.size())}}};
}

inline std::optional<TrialOutcome> welcome(const RandomInstanceConfig& cfg, std::uint64_t t) {
  auto rng = trial_rng(cfg.seed, t);
  GameParams params = draw_params_with_partner_room(cfg, rng);
  const SampleCount limit = floor_of(params.critical_size() / 3);
  const std::size_t cn = group_size(cfg, rng, 1);
  std::vector<SampleCount> sizes;
  for (std::size_t i = 0; i <= cn; ++i) sizes.push_back(draw_size(rng, 1, limit));
  if (std::uniform_int_distribution<int>(0, 7)(rng) == 0) sizes.back() = limit;
  Instance inst(params, sizes);
  const PlayerId k = cn;
  const auto group = range_ids(0, cn);
  for (PlayerId j : group) {
    const Rational before = err_in(inst, j, group);
    const Rational after = err_in(inst, j, with(group, k));
    if (!(after < before)) {
      return TrialOutcome{inst, false, {{"member", std::to_string(j)}, {"before", q(before)}, {"after", q(after)}}};
    }
  }
  return TrialOutcome{inst, true, {}};
}

/// Two groups A = {0..a), B = {a..a+b) of players no larger than mu_e/(3 sigma2).
struct TwoGroups {
  Instance inst;
  std::vector<PlayerId> a, b;
};

inline TwoGroups draw_two_groups(const RandomInstanceConfig& cfg, std::mt19937_64& rng) {
  GameParams params = draw_params_with_partner_room(cfg, rng);
  const SampleCount limit = floor_of(params.critical_size() / 3);
  const std::size_t an = group_size(cfg, rng, 1);
  const std::size_t bn = group_size(cfg, rng, an);
  std::vector<SampleCount> sizes;
  for (std::size_t i = 0; i < an + bn; ++i) sizes.push_back(draw_size(rng, 1, limit));
  return {Instance(params, sizes), range_ids(0, an), range_ids(an, an + bn)};
}

inline PlayerId largest(const Instance& inst, const std::vector<PlayerId>& ids) {
  return *std::max_element(ids.begin(), ids.end(), [&](PlayerId x, PlayerId y) { return inst.n(x) < inst.n(y); });
}

inline SampleCount mass(const Instance& inst, const std::vector<PlayerId>& ids) {
  SampleCount m = 0;
  for (PlayerId id : ids) m += inst.n(id);
  return m;
}

/// Equal-size pair across groups, or a > b with at least as much partner
/// mass on a's side: the two-group arrangement is not individually stable.
inline bool case12_applies(const TwoGroups& g) {
  const SampleCount ma = mass(g.inst, g.a), mb = mass(g.inst, g.b);
  for (PlayerId x : g.a) {
    for (PlayerId y : g.b) {
      const SampleCount nx = g.inst.n(x), ny = g.inst.n(y);
      if (nx == ny) return true;
      if (nx > ny && ma - nx >= mb - ny) return true;
      if (ny > nx && mb - ny >= ma - nx) return true;
    }
  }
  return false;
}

/// (mover, destination) for the largest-player configuration where the
/// larger one has strictly lighter partners that weigh at most mu_e/(3 sigma2).
inline std::optional<std::pair<PlayerId, const std::vector<PlayerId>*>> case3_mover(const TwoGroups& g) {
  const auto& th = g.inst.params();
  const Rational limit = th.critical_size() / 3;
  auto try_side = [&](const std::vector<PlayerId>& from,
                      const std::vector<PlayerId>& to) -> std::optional<std::pair<PlayerId, const std::vector<PlayerId>*>> {
    const PlayerId x = largest(g.inst, from), y = largest(g.inst, to);
    const SampleCount px = mass(g.inst, from) - g.inst.n(x), py = mass(g.inst, to) - g.inst.n(y);
    if (g.inst.n(x) > g.inst.n(y) && px < py && to_rational(px) <= limit) return std::pair{x, &to};
    return std::nullopt;
  };
  if (auto m = try_side(g.a, g.b)) return m;
  return try_side(g.b, g.a);
}

inline std::optional<TrialOutcome> case_lemmas(const RandomInstanceConfig& cfg, std::uint64_t t) {
  auto rng = trial_rng(cfg.seed, t);
  for (int attempt = 0; attempt < 64; ++attempt) {
    TwoGroups g = draw_two_groups(cfg, rng);
    if (case12_applies(g)) {
      Partition arrangement(g.inst, {g.a, g.b});
      auto verdict = is_individually_stable(arrangement, g.inst);
      return TrialOutcome{g.inst, !verdict.stable, {{"case", "equal-or-heavier-partners"}}};
    }
    if (auto mover = case3_mover(g)) {
      const auto& [x, dest] = *mover;
      const auto& home = (dest == &g.b) ? g.a : g.b;
      const Rational stay = err_in(g.inst, x, home);
      const Rational move = err_in(g.inst, x, with(*dest, x));
      return TrialOutcome{g.inst, move < stay,
                          {{"case", "larger-with-lighter-partners"}, {"mover", std::to_string(x)},
                           {"stay", q(stay)}, {"move", q(move)}}};
    }
  }
  return std::nullopt;
}

/// Instance small enough to enumerate every partition quickly.
inline RandomInstanceConfig enumerable(RandomInstanceConfig cfg, std::size_t cap) {
  cfg.max_players = std::min(cfg.max_players, cap);
  cfg.min_players = std::min(cfg.min_players, cfg.max_players);
  return cfg;
}

inline constexpr std::size_t kEnumerationTrialCap = 6;

inline std::optional<TrialOutcome> err_upper_bound_is(const RandomInstanceConfig& cfg, std::uint64_t t) {
  auto rng = trial_rng(cfg.seed, t);
  Instance inst = draw_instance(enumerable(cfg, kEnumerationTrialCap), rng);
  auto stable = all_is_partitions(inst);
  if (stable.empty()) return TrialOutcome{inst, false, {{"reason", "no individually stable partition"}}};
  const auto& p = pick_from(rng, stable);
  auto report = check_err_upper_bound_is(p, inst);
  CheckContext ctx;
  if (report.counterexample) ctx = report.counterexample->context;
  return TrialOutcome{inst, report.ok(), ctx};
}

inline std::optional<TrialOutcome> err_lower_bound(const RandomInstanceConfig& cfg, std::uint64_t t) {
  auto rng = trial_rng(cfg.seed, t);
  Instance inst = draw_instance(cfg, rng);
  auto report = check_err_lower_bound(inst, 1, rng());
  CheckContext ctx;
  if (report.counterexample) ctx = report.counterexample->context;
  return TrialOutcome{inst, report.ok(), ctx};
}

inline std::optional<TrialOutcome> small_player_upper_with(const RandomInstanceConfig& cfg, std::uint64_t t,
                                                           const Rational& constant) {
  auto rng = trial_rng(cfg.seed, t);
  GameParams params = draw_params(cfg, rng);
  const Rational need = params.critical_size() / 3;
  std::vector<SampleCount> sizes{draw_filtered_size(cfg, params, SizeFilter::Any, rng)};
  SampleCount partners = 0;
  while (to_rational(partners) < need || sizes.size() < 2) {
    SampleCount n = draw_size(rng, 1, size_cap(cfg, params));
    sizes.push_back(n);
    partners += n;
  }
  Instance inst(params, sizes);
  const Rational err = err_in(inst, 0, range_ids(0, inst.size()));
  const Rational cap = constant * params.sigma2();
  return TrialOutcome{inst, err <= cap, {{"err", q(err)}, {"cap", q(cap)}, {"partner_mass", std::to_string(partners)}}};
}

inline std::optional<TrialOutcome> small_player_upper(const RandomInstanceConfig& cfg, std::uint64_t t) {
  return small_player_upper_with(cfg, t, small_player_constant());
}

inline std::optional<TrialOutcome> small_player_upper_relaxed(const RandomInstanceConfig& cfg, std::uint64_t t) {
  return small_player_upper_with(cfg, t, small_player_constant_relaxed());
}

inline std::optional<TrialOutcome> relaxed_structure(const RandomInstanceConfig& cfg, std::uint64_t t) {
  auto rng = trial_rng(cfg.seed, t);
  GameParams params = draw_params_with_partner_room(cfg, rng);
  const SampleCount limit = floor_of(params.critical_size() / 3);
  const auto sub = enumerable(cfg, kEnumerationTrialCap);
  std::vector<SampleCount> sizes;
  for (std::size_t i = 0, n = draw_player_count(sub, rng); i < n; ++i) sizes.push_back(draw_size(rng, 1, limit));
  Instance inst(params, sizes);
  auto report = check_relaxed_structure(inst);
  CheckContext ctx;
  if (report.counterexample) ctx = report.counterexample->context;
  return TrialOutcome{inst, report.ok(), ctx};
}

inline std::optional<TrialOutcome> grand_core(const RandomInstanceConfig& cfg, std::uint64_t t) {
  auto rng = trial_rng(cfg.seed, t);
  auto sub = enumerable(cfg, 10);
  sub.filter = SizeFilter::AllSmall;
  Instance inst = draw_instance(sub, rng);
  auto verdict = is_core_stable(Partition::grand(inst), inst);
  CheckContext ctx;
  if (verdict.witness) ctx.emplace_back("blocking_size", std::to_string(verdict.witness->target.size()));
  return TrialOutcome{inst, verdict.stable, ctx};
}

inline std::optional<TrialOutcome> large_stable_optimal(const RandomInstanceConfig& cfg, std::uint64_t t) {
  auto rng = trial_rng(cfg.seed, t);
  auto sub = enumerable(cfg, kEnumerationTrialCap);
  sub.filter = SizeFilter::AllLarge;
  Instance inst = draw_instance(sub, rng);
  const Rational opt = brute_force_optimal(inst).second;
  for (const auto& p : all_is_partitions(inst)) {
    if (partition_cost(p, inst) != opt) return TrialOutcome{inst, false, {{"concept", "individual"}}};
  }
  for (const auto& p : all_core_partitions(inst)) {
    if (partition_cost(p, inst) != opt) return TrialOutcome{inst, false, {{"concept", "core"}}};
  }
  return TrialOutcome{inst, true, {}};
}

inline std::optional<TrialOutcome> greedy_optimal(const RandomInstanceConfig& cfg, std::uint64_t t) {
  auto rng = trial_rng(cfg.seed, t);
  Instance inst = draw_instance(enumerable(cfg, 8), rng);
  const Rational greedy = partition_cost(optimal_partition(inst), inst);
  const Rational exhaustive = brute_force_optimal(inst).second;
  return TrialOutcome{inst, greedy == exhaustive, {{"greedy", q(greedy)}, {"exhaustive", q(exhaustive)}}};
}

inline std::optional<TrialOutcome> err_gap(const RandomInstanceConfig& cfg, std::uint64_t t) {
  auto rng = trial_rng(cfg.seed, t);
  Instance inst = draw_instance(cfg, rng);
  Coalition c(inst, range_ids(0, inst.size()));
  std::uniform_int_distribution<PlayerId> pick(0, inst.size() - 1);
  const PlayerId j = pick(rng), k = pick(rng);
  const Rational direct = err_player(j, c, inst) - err_player(k, c, inst);
  const Rational closed = err_gap_same_coalition(j, k, c, inst);
  return TrialOutcome{inst, direct == closed, {{"direct", q(direct)}, {"closed_form", q(closed)}}};
}

inline std::optional<TrialOutcome> t3_single_cluster(const RandomInstanceConfig& cfg, std::uint64_t t) {
  auto rng = trial_rng(cfg.seed, t);
  Instance inst = draw_instance(enumerable(cfg, kEnumerationTrialCap), rng);
  for (const auto& p : all_is_partitions(inst)) {
    const std::size_t clusters = t3_cluster_count(p, inst);
    if (clusters > 1) return TrialOutcome{inst, false, {{"t3_clusters", std::to_string(clusters)}}};
  }
  return TrialOutcome{inst, true, {}};
}

/// Harness self-test: the swap inequality with its direction flipped. Must fail.
inline std::optional<TrialOutcome> injected_failure(const RandomInstanceConfig& cfg, std::uint64_t t) {
  auto outcome = swap(cfg, t);
  if (outcome) outcome->pass = !outcome->pass;
  return outcome;
}

}  // namespace lab

/// Every check the suite knows, in report order. The harness self-test is
/// listed separately and only runs on request.
inline const std::vector<LemmaCheck>& lemma_checks() {
  static const std::vector<LemmaCheck> checks{
      {"addminsame", "joining from local learning lowers cost iff it lowers the joiner's error", lab::addminsame},
      {"swap", "keeping the smaller player in the group strictly lowers cost", lab::swap},
      {"monotone_join", "refusing to join is inherited by larger players", lab::monotone_join},
      {"monotone_leave", "wanting to leave is inherited by larger members", lab::monotone_leave},
      {"merge", "merge then shed largest players never raises cost", lab::merge},
      {"welcome", "small groups welcome any small newcomer", lab::welcome},
      {"case_lemmas", "two small-player groups always admit a profitable move", lab::case_lemmas},
      {"err_upper_bound_is", "IS partitions never beat local learning's error bound from above", lab::err_upper_bound_is},
      {"err_lower_bound", "federated error is bounded below by mu_e/(2n) or sigma2", lab::err_lower_bound},
      {"small_player_upper", "error with partner mass >= mu_e/(3 sigma2) is at most 29/4 sigma2",
       lab::small_player_upper},
      {"small_player_upper_relaxed", "same bound with the 15/2 sigma2 constant", lab::small_player_upper_relaxed},
      {"relaxed_structure", "small players with light partners are only stable in the grand coalition",
       lab::relaxed_structure},
      {"grand_core", "grand coalition is core stable when nobody exceeds mu_e/sigma2", lab::grand_core},
      {"large_stable_optimal", "with everyone at least mu_e/sigma2, every stable partition is optimal",
       lab::large_stable_optimal},
      {"greedy_optimal", "greedy partition cost equals the exhaustive optimum", lab::greedy_optimal},
      {"err_gap", "error gap inside a coalition is 2 sigma2 (n_k - n_j) / T", lab::err_gap},
      {"t3_single_cluster", "IS partitions hold T3 players in at most one coalition", lab::t3_single_cluster},
  };
  return checks;
}

inline const LemmaCheck& injected_failure_check() {
  static const LemmaCheck check{"injected_failure", "harness self-test: flipped swap inequality", lab::injected_failure};
  return check;
}

inline const LemmaCheck* find_check(const std::string& name) {
  for (const auto& c : lemma_checks()) {
    if (c.name == name) return &c;
  }
  if (name == injected_failure_check().name) return &injected_failure_check();
  return nullptr;
}

/// Trials that fail their preconditions are redrawn under fresh indices, up
/// to four times the requested count.
inline CheckReport run_check(const LemmaCheck& check, const RandomInstanceConfig& cfg, std::uint64_t trials) {
  cfg.validate();
  CheckReport report{check.name};
  const std::uint64_t limit = trials * 4 + 16;
  for (std::uint64_t index = 0; report.trials < trials && index < limit; ++index) {
    if (auto outcome = check.trial(cfg, index)) report.record(outcome->pass, outcome->instance, index, outcome->context);
  }
  return report;
}

/// Re-runs one trial, e.g. a reported counterexample.
inline std::optional<TrialOutcome> replay(const LemmaCheck& check, const RandomInstanceConfig& cfg, std::uint64_t trial) {
  return check.trial(cfg, trial);
}

struct ConstructionReport {
  std::string name;
  Rational rho;
  Construction construction;
  bool ok() const {
    return construction.formula_ratio > rho && (!construction.brute_force_ratio || *construction.brute_force_ratio > rho);
  }
};

inline std::vector<ConstructionReport> run_constructions(const std::vector<Rational>& rhos,
                                                         const EnumerationBudget& budget = {}) {
  std::vector<ConstructionReport> out;
  for (const auto& rho : rhos) out.push_back({"alone_bad", rho, construct_alone_bad(rho, budget)});
  for (const auto& rho : rhos) out.push_back({"grand_bad", rho, construct_grand_bad(rho, budget)});
  return out;
}

/// Runs the named checks (all when `names` is empty) with a shared seed.
inline std::vector<CheckReport> run_suite(const RandomInstanceConfig& cfg, std::uint64_t trials,
                                          const std::vector<std::string>& names = {}) {
  std::vector<CheckReport> out;
  if (names.empty()) {
    for (const auto& c : lemma_checks()) out.push_back(run_check(c, cfg, trials));
    return out;
  }
  for (const auto& n : names) {
    const LemmaCheck* c = find_check(n);
    if (!c) throw std::invalid_argument("unknown lemma check '" + n + "'");
    out.push_back(run_check(*c, cfg, trials));
  }
  return out;
}

}  // namespace fedgame
