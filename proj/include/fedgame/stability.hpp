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
 * \file fedgame/stability.hpp
 *
 * \brief Individual and core stability with deviation witnesses.
 *
 * Individual stability: no player j can move to another coalition C of the
 * partition (or to local learning) such that j strictly gains and every
 * member of C weakly gains. Core stability: no non-empty set S whose members
 * all strictly gain by forming S on their own.
 *
 * Witness order for individual deviations: players ascending, then target
 * coalitions in canonical order, local learning last. Blocking sets are
 * reported lexicographically first by sorted member list.
 */

#pragma once

#include <fedgame/coalition_table.hpp>
#include <fedgame/enumeration.hpp>
#include <fedgame/model.hpp>

#include <algorithm>
#include <bit>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fedgame {

enum class DeviationKind { JoinCoalition, GoAlone, BlockingCoalition };

inline const char* to_string(DeviationKind k) {
  switch (k) {
    case DeviationKind::JoinCoalition: return "join";
    case DeviationKind::GoAlone: return "alone";
    case DeviationKind::BlockingCoalition: return "blocking";
  }
  return "?";
}

struct Deviation {
  DeviationKind kind;
  std::optional<PlayerId> player;  ///< mover, for join/alone
  std::vector<PlayerId> target;    ///< coalition joined, or the blocking set; empty for alone

  static Deviation join(PlayerId j, std::vector<PlayerId> target) {
    return {DeviationKind::JoinCoalition, j, std::move(target)};
  }
  static Deviation alone(PlayerId j) { return {DeviationKind::GoAlone, j, {}}; }
  static Deviation blocking(std::vector<PlayerId> set) {
    return {DeviationKind::BlockingCoalition, std::nullopt, std::move(set)};
  }

  friend bool operator==(const Deviation&, const Deviation&) = default;
};

struct StabilityVerdict {
  bool stable = true;
  std::optional<Deviation> witness;

  explicit operator bool() const noexcept { return stable; }
};

namespace detail {

/// First individual deviation in canonical scan order, on mask form.
inline std::optional<Deviation> first_is_deviation(CoalitionTable& table, const std::vector<Mask>& blocks,
                                                   const std::vector<std::size_t>& owner) {
  const std::size_t n = table.players();
  for (PlayerId j = 0; j < n; ++j) {
    const Mask home = blocks[owner[j]];
    const Rational& current = table.err(home, j);
    for (std::size_t c = 0; c < blocks.size(); ++c) {
      if (c == owner[j]) continue;
      const Mask target = blocks[c];
      const Mask joined = target | (Mask{1} << j);
      if (!(table.err(joined, j) < current)) continue;
      bool welcomed = true;
      for (Mask rest = target; rest != 0 && welcomed; rest &= rest - 1) {
        PlayerId k = static_cast<PlayerId>(std::countr_zero(rest));
        welcomed = table.err(joined, k) <= table.err(target, k);
      }
      if (welcomed) return Deviation::join(j, members_of(target));
    }
    if (home != (Mask{1} << j)) {
      if (table.err(Mask{1} << j, j) < current) return Deviation::alone(j);
    }
  }
  return std::nullopt;
}

inline std::vector<std::size_t> owners_of(const std::vector<Mask>& blocks, std::size_t n) {
  std::vector<std::size_t> owner(n, 0);
  for (std::size_t c = 0; c < blocks.size(); ++c) {
    for (Mask rest = blocks[c]; rest != 0; rest &= rest - 1) owner[std::countr_zero(rest)] = c;
  }
  return owner;
}

inline bool lex_less(const std::vector<PlayerId>& a, const std::vector<PlayerId>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

/// Lexicographically first blocking set, or nullopt.
inline std::optional<std::vector<PlayerId>> first_blocking_set(CoalitionTable& table, const std::vector<Mask>& blocks,
                                                               const std::vector<std::size_t>& owner) {
  std::optional<std::vector<PlayerId>> best;
  const Mask full = table.full();
  for (Mask s = 1; s <= full && s != 0; ++s) {
    bool blocking = true;
    for (Mask rest = s; rest != 0 && blocking; rest &= rest - 1) {
      PlayerId j = static_cast<PlayerId>(std::countr_zero(rest));
      blocking = table.err(s, j) < table.err(blocks[owner[j]], j);
    }
    if (!blocking) continue;
    auto members = members_of(s);
    if (!best || lex_less(members, *best)) best = std::move(members);
  }
  return best;
}

}  // namespace detail

inline StabilityVerdict is_individually_stable(const Partition& p, CoalitionTable& table) {
  if (p.player_count() != table.players()) throw std::invalid_argument("partition does not match the instance");
  auto mp = MaskPartition::from(p);
  auto dev = detail::first_is_deviation(table, mp.blocks, mp.owner);
  return {!dev.has_value(), std::move(dev)};
}

inline StabilityVerdict is_individually_stable(const Partition& p, const Instance& inst) {
  if (p.player_count() != inst.size()) throw std::invalid_argument("partition does not match the instance");
  CoalitionTable table(inst);
  return is_individually_stable(p, table);
}

inline StabilityVerdict is_core_stable(const Partition& p, const Instance& inst, const EnumerationBudget& budget = {}) {
  require_within(budget, inst.size());
  if (p.player_count() != inst.size()) throw std::invalid_argument("partition does not match the instance");
  CoalitionTable table(inst);
  auto mp = MaskPartition::from(p);
  auto set = detail::first_blocking_set(table, mp.blocks, mp.owner);
  if (!set) return {true, std::nullopt};
  return {false, Deviation::blocking(std::move(*set))};
}

/// Every individually stable partition, canonical order.
inline std::vector<Partition> all_is_partitions(const Instance& inst, const EnumerationBudget& budget = {}) {
  require_within(budget, inst.size());
  CoalitionTable table(inst);
  std::vector<Partition> out;
  for_each_partition_masks(inst.size(), budget, [&](const std::vector<Mask>& blocks) {
    auto owner = detail::owners_of(blocks, inst.size());
    if (!detail::first_is_deviation(table, blocks, owner)) out.push_back(MaskPartition{blocks, owner}.to_partition(inst));
  });
  return out;
}

/// Every core-stable partition, canonical order.
inline std::vector<Partition> all_core_partitions(const Instance& inst, const EnumerationBudget& budget = {}) {
  require_within(budget, inst.size());
  CoalitionTable table(inst);
  std::vector<Partition> out;
  for_each_partition_masks(inst.size(), budget, [&](const std::vector<Mask>& blocks) {
    auto owner = detail::owners_of(blocks, inst.size());
    if (!detail::first_blocking_set(table, blocks, owner)) out.push_back(MaskPartition{blocks, owner}.to_partition(inst));
  });
  return out;
}

/// Moves the deviating player; blocking sets are split off as a new coalition.
inline Partition apply_deviation(const Partition& p, const Instance& inst, const Deviation& dev) {
  std::vector<std::vector<PlayerId>> groups;
  auto leaving = [&](PlayerId id) {
    if (dev.kind == DeviationKind::BlockingCoalition) {
      return std::find(dev.target.begin(), dev.target.end(), id) != dev.target.end();
    }
    return id == *dev.player;
  };
  for (const auto& c : p.coalitions()) {
    std::vector<PlayerId> kept;
    for (PlayerId id : c.members()) {
      if (!leaving(id)) kept.push_back(id);
    }
    if (dev.kind == DeviationKind::JoinCoalition && c.members() == dev.target) kept.push_back(*dev.player);
    if (!kept.empty()) groups.push_back(std::move(kept));
  }
  if (dev.kind == DeviationKind::GoAlone) groups.push_back({*dev.player});
  if (dev.kind == DeviationKind::BlockingCoalition) groups.push_back(dev.target);
  return Partition(inst, groups);
}

struct DynamicsResult {
  Partition partition;
  std::size_t steps = 0;
  bool converged = false;
};

inline constexpr std::size_t kDefaultMaxSteps = 1000;

/// Applies the first individual deviation until none remains or max_steps
/// moves have been made. Non-convergence is reported, not thrown.
inline DynamicsResult deviation_dynamics(const Partition& start, const Instance& inst,
                                         std::size_t max_steps = kDefaultMaxSteps) {
  if (max_steps < 1) throw std::invalid_argument("max_steps must be at least 1");
  CoalitionTable table(inst);
  Partition current = start;
  for (std::size_t step = 0;; ++step) {
    auto verdict = is_individually_stable(current, table);
    if (verdict.stable) return {current, step, true};
    if (step == max_steps) return {current, step, false};
    current = apply_deviation(current, inst, *verdict.witness);
  }
}

}  // namespace fedgame
