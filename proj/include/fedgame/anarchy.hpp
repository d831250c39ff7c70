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
 * \file fedgame/anarchy.hpp
 *
 * \brief Price of Anarchy / Price of Stability over individually stable
 *  partitions, and the per-player error bounds behind the constant PoA bound.
 *
 * Player types relative to a reference partition (usually the worst stable
 * one), with t = mu_e / (3 sigma2):
 *
 *   T0: n >= (mu_e + sigma2) / (2 sigma2)
 *   T1: mu_e / (9 sigma2) <= n < (mu_e + sigma2) / (2 sigma2)
 *   T2: n < mu_e / (9 sigma2), partner mass >= t
 *   T3: n < mu_e / (9 sigma2), partner mass <  t
 */

#pragma once

#include <fedgame/check_report.hpp>
#include <fedgame/coalition_table.hpp>
#include <fedgame/enumeration.hpp>
#include <fedgame/model.hpp>
#include <fedgame/stability.hpp>

#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <vector>

namespace fedgame {

/// Which stable set the Price of Stability ranges over.
enum class StableConcept { Individual, Core };

struct PoAReport {
  Rational poa;
  Rational pos;
  Partition worst_is;
  Partition best_stable;
  Partition opt;
  Rational opt_cost;
  Rational worst_cost;
  Rational best_stable_cost;
  std::size_t stable_count = 0;  ///< number of IS partitions
};

/// PoA = max IS cost / optimal cost; PoS = min stable cost / optimal cost.
/// Ties keep the first partition in canonical order.
inline PoAReport price_of_anarchy(const Instance& inst, const EnumerationBudget& budget = {},
                                  StableConcept pos_concept = StableConcept::Individual) {
  require_within(budget, inst.size());
  CoalitionTable table(inst);

  std::optional<Rational> opt_cost, worst_cost, best_cost;
  std::vector<Mask> opt_blocks, worst_blocks, best_blocks;
  std::size_t stable_count = 0;

  for_each_partition_masks(inst.size(), budget, [&](const std::vector<Mask>& blocks) {
    Rational cost = blocks_cost(table, blocks);
    auto owner = detail::owners_of(blocks, inst.size());
    if (!opt_cost || cost < *opt_cost) {
      opt_cost = cost;
      opt_blocks = blocks;
    }
    const bool is_stable = !detail::first_is_deviation(table, blocks, owner);
    if (is_stable) {
      ++stable_count;
      if (!worst_cost || cost > *worst_cost) {
        worst_cost = cost;
        worst_blocks = blocks;
      }
    }
    const bool counts_for_pos =
        pos_concept == StableConcept::Individual ? is_stable : !detail::first_blocking_set(table, blocks, owner);
    if (counts_for_pos && (!best_cost || cost < *best_cost)) {
      best_cost = cost;
      best_blocks = blocks;
    }
  });

  if (!worst_cost) throw std::runtime_error("instance has no individually stable partition");
  if (!best_cost) throw std::runtime_error("instance has no core-stable partition");

  auto to_part = [&](const std::vector<Mask>& b) {
    return MaskPartition{b, detail::owners_of(b, inst.size())}.to_partition(inst);
  };
  return PoAReport{*worst_cost / *opt_cost,
                   *best_cost / *opt_cost,
                   to_part(worst_blocks),
                   to_part(best_blocks),
                   to_part(opt_blocks),
                   *opt_cost,
                   *worst_cost,
                   *best_cost,
                   stable_count};
}

inline constexpr int kPoABound = 9;

struct PoABoundCheck {
  Rational poa;
  bool within_bound = false;
};

inline PoABoundCheck verify_poa_bound(const Instance& inst, const EnumerationBudget& budget = {}) {
  auto report = price_of_anarchy(inst, budget);
  bool ok = report.poa <= kPoABound;
  return {std::move(report.poa), ok};
}

enum class PlayerTypeTag { T0, T1, T2, T3 };

inline const char* to_string(PlayerTypeTag t) {
  switch (t) {
    case PlayerTypeTag::T0: return "T0";
    case PlayerTypeTag::T1: return "T1";
    case PlayerTypeTag::T2: return "T2";
    case PlayerTypeTag::T3: return "T3";
  }
  return "?";
}

/// Thresholds shared by the type classification and the bound checks.
struct BoundThresholds {
  Rational large;    ///< (mu_e + sigma2) / (2 sigma2)
  Rational tiny;     ///< mu_e / (9 sigma2)
  Rational partner;  ///< mu_e / (3 sigma2)

  explicit BoundThresholds(const GameParams& p)
      : large((p.mu_e() + p.sigma2()) / (2 * p.sigma2())),
        tiny(p.mu_e() / (9 * p.sigma2())),
        partner(p.mu_e() / (3 * p.sigma2())) {}
};

inline PlayerTypeTag classify_player(SampleCount n, SampleCount partner_mass, const GameParams& params) {
  const BoundThresholds th(params);
  const Rational size = to_rational(n);
  if (size >= th.large) return PlayerTypeTag::T0;
  if (size >= th.tiny) return PlayerTypeTag::T1;
  return to_rational(partner_mass) >= th.partner ? PlayerTypeTag::T2 : PlayerTypeTag::T3;
}

/// Type of every player, indexed by id.
inline std::vector<PlayerTypeTag> classify_types(const Partition& ref, const Instance& inst) {
  std::vector<PlayerTypeTag> out;
  out.reserve(inst.size());
  for (const auto& p : inst.players()) {
    const auto& c = ref.coalition_of(p.id);
    out.push_back(classify_player(p.n, c.total_mass() - p.n, inst.params()));
  }
  return out;
}

/// In an IS partition nobody does worse than local learning: err_i <= mu_e / n_i.
inline CheckReport check_err_upper_bound_is(const Partition& p, const Instance& inst) {
  if (!is_individually_stable(p, inst).stable) {
    throw std::invalid_argument("partition is not individually stable");
  }
  CheckReport report{"err_upper_bound_is"};
  for (const auto& c : p.coalitions()) {
    for (PlayerId j : c.members()) {
      Rational err = err_player(j, c, inst);
      Rational alone = kernel::local_error(inst.n(j), inst.params());
      report.record(err <= alone, inst, j,
                    {{"player", std::to_string(j)}, {"err", to_exact_string(err)}, {"alone", to_exact_string(alone)}});
    }
  }
  return report;
}

/// Lower bound on err_j(C + j) for any group C:
/// mu_e / (2 n_j) when n_j >= (mu_e + sigma2) / (2 sigma2), else sigma2.
inline Rational err_lower_bound(SampleCount n_j, const GameParams& params) {
  const BoundThresholds th(params);
  if (to_rational(n_j) >= th.large) return params.mu_e() / (2 * to_rational(n_j));
  return params.sigma2();
}

namespace detail {

/// Random subset of the players other than j.
inline std::vector<PlayerId> random_partners(const Instance& inst, PlayerId j, std::mt19937_64& rng) {
  std::vector<PlayerId> out;
  std::bernoulli_distribution coin(0.5);
  for (const auto& p : inst.players()) {
    if (p.id != j && coin(rng)) out.push_back(p.id);
  }
  return out;
}

}  // namespace detail

inline CheckReport check_err_lower_bound(const Instance& inst, std::size_t samples, std::uint64_t seed = 0) {
  CheckReport report{"err_lower_bound"};
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<PlayerId> pick(0, inst.size() - 1);
  for (std::size_t s = 0; s < samples; ++s) {
    PlayerId j = pick(rng);
    auto members = detail::random_partners(inst, j, rng);
    members.push_back(j);
    Coalition c(inst, members);
    Rational err = err_player(j, c, inst);
    Rational bound = err_lower_bound(inst.n(j), inst.params());
    report.record(err >= bound, inst, s,
                  {{"player", std::to_string(j)}, {"partner_mass", std::to_string(c.total_mass() - inst.n(j))},
                   {"err", to_exact_string(err)}, {"bound", to_exact_string(bound)}});
  }
  return report;
}

/// Upper bound constant for small players federating with enough mass, in
/// units of sigma2. The lemma states 29/4; the PoA argument uses 15/2.
inline Rational small_player_constant() { return make_rational(29, 4); }
inline Rational small_player_constant_relaxed() { return make_rational(15, 2); }

/// err_j(C + j) <= constant * sigma2 whenever T_C >= mu_e / (3 sigma2).
/// Samples whose random group is too light are skipped, not counted.
inline CheckReport check_small_player_upper(const Instance& inst, std::size_t samples, std::uint64_t seed = 0,
                                            const Rational& constant = small_player_constant()) {
  CheckReport report{"small_player_upper"};
  const BoundThresholds th(inst.params());
  const Rational cap = constant * inst.params().sigma2();
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<PlayerId> pick(0, inst.size() - 1);
  for (std::size_t s = 0; s < samples; ++s) {
    PlayerId j = pick(rng);
    auto members = detail::random_partners(inst, j, rng);
    SampleCount partner_mass = 0;
    for (PlayerId id : members) partner_mass += inst.n(id);
    if (to_rational(partner_mass) < th.partner) continue;
    members.push_back(j);
    Rational err = err_player(j, Coalition(inst, members), inst);
    report.record(err <= cap, inst, s,
                  {{"player", std::to_string(j)}, {"partner_mass", std::to_string(partner_mass)},
                   {"err", to_exact_string(err)}, {"cap", to_exact_string(cap)}});
  }
  return report;
}

inline bool all_at_most_partner_threshold(const Instance& inst) {
  const BoundThresholds th(inst.params());
  for (const auto& p : inst.players()) {
    if (to_rational(p.n) > th.partner) return false;
  }
  return true;
}

/// With every player of size <= mu_e/(3 sigma2): an IS partition with two or
/// more coalitions must not contain a player whose partners weigh at most
/// mu_e/(3 sigma2). One trial per IS partition.
inline CheckReport check_relaxed_structure(const Instance& inst, const EnumerationBudget& budget = {}) {
  if (!all_at_most_partner_threshold(inst)) {
    throw std::invalid_argument("every player must have size at most mu_e / (3 sigma2)");
  }
  const BoundThresholds th(inst.params());
  CheckReport report{"relaxed_structure"};
  std::uint64_t index = 0;
  for (const auto& p : all_is_partitions(inst, budget)) {
    bool ok = true;
    std::string offender;
    if (p.size() >= 2) {
      for (const auto& player : inst.players()) {
        SampleCount partners = p.coalition_of(player.id).total_mass() - player.n;
        if (to_rational(partners) <= th.partner) {
          ok = false;
          offender = std::to_string(player.id);
          break;
        }
      }
    }
    report.record(ok, inst, index++, {{"coalitions", std::to_string(p.size())}, {"player", offender}});
  }
  return report;
}

/// Number of distinct coalitions holding a T3 player.
inline std::size_t t3_cluster_count(const Partition& p, const Instance& inst) {
  auto tags = classify_types(p, inst);
  std::set<std::size_t> clusters;
  for (std::size_t i = 0; i < tags.size(); ++i) {
    if (tags[i] == PlayerTypeTag::T3) clusters.insert(p.index_of(i));
  }
  return clusters.size();
}

}  // namespace fedgame
