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
 * \file fedgame/enumeration.hpp
 *
 * \brief Exhaustive set-partition and subset streams, and the brute-force
 *  optimal partition used as an oracle for the greedy construction.
 *
 * Partitions are produced as restricted growth strings (RGS) in lexicographic
 * order. RGS block labels appear in order of first occurrence, so block k's
 * smallest member increases with k and the induced Partition is already
 * canonical. That order is also the tie-break order for every "first" or
 * "minimum" the library reports.
 */

#pragma once

#include <fedgame/coalition_table.hpp>
#include <fedgame/model.hpp>

#include <algorithm>
#include <cstdlib>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fedgame {

/// Cap on the number of players for exhaustive operations.
struct EnumerationBudget {
  std::size_t max_players = 12;

  EnumerationBudget() = default;
  explicit EnumerationBudget(std::size_t cap) : max_players(cap) {
    if (cap < 1) throw std::invalid_argument("enumeration budget must be at least 1");
    if (cap > kMaxMaskPlayers) {
      throw std::invalid_argument("enumeration budget cannot exceed " + std::to_string(kMaxMaskPlayers));
    }
  }
};

/// Bell numbers via the Bell triangle.
inline Integer bell_number(std::size_t n) {
  if (n == 0) return 1;
  std::vector<Integer> row{Integer(1)};
  for (std::size_t i = 1; i < n; ++i) {
    std::vector<Integer> next{row.back()};
    next.reserve(row.size() + 1);
    for (const auto& v : row) next.push_back(next.back() + v);
    row = std::move(next);
  }
  return row.back();
}

class BudgetError : public std::runtime_error {
 public:
  BudgetError(std::size_t players, std::size_t cap)
      : std::runtime_error("exhaustive enumeration over " + std::to_string(players) + " players exceeds budget of " +
                           std::to_string(cap) + " (Bell(" + std::to_string(players) + ") = " +
                           bell_number(players).get_str() + " partitions)"),
        players_(players),
        cap_(cap) {}

  std::size_t players() const noexcept { return players_; }
  std::size_t cap() const noexcept { return cap_; }

 private:
  std::size_t players_;
  std::size_t cap_;
};

inline void require_within(const EnumerationBudget& budget, std::size_t players) {
  if (players > budget.max_players) throw BudgetError(players, budget.max_players);
}

/// Budget from FEDGAME_BUDGET when set and valid, else the default.
inline EnumerationBudget budget_from_env() {
  if (const char* raw = std::getenv("FEDGAME_BUDGET")) {
    try {
      std::size_t pos = 0;
      long v = std::stol(raw, &pos);
      if (pos == std::string(raw).size() && v >= 1) return EnumerationBudget(static_cast<std::size_t>(v));
    } catch (const std::exception&) {
    }
    throw std::invalid_argument(std::string("FEDGAME_BUDGET is not a valid budget: '") + raw + "'");
  }
  return EnumerationBudget{};
}

/// c_0 = 0, c_i <= 1 + max(c_0..c_{i-1}).
class RestrictedGrowthString {
 public:
  explicit RestrictedGrowthString(std::size_t n) : codes_(n, 0), prefix_max_(n, 0) {
    if (n == 0) throw std::invalid_argument("restricted growth string needs at least one element");
  }

  explicit RestrictedGrowthString(std::vector<std::size_t> codes) : codes_(std::move(codes)) {
    if (codes_.empty() || codes_[0] != 0) throw std::invalid_argument("restricted growth string must start at 0");
    prefix_max_.resize(codes_.size());
    std::size_t mx = 0;
    for (std::size_t i = 0; i < codes_.size(); ++i) {
      if (i > 0 && codes_[i] > mx + 1) throw std::invalid_argument("restricted growth string grows too fast");
      mx = std::max(mx, codes_[i]);
      prefix_max_[i] = mx;
    }
  }

  const std::vector<std::size_t>& codes() const noexcept { return codes_; }
  std::size_t size() const noexcept { return codes_.size(); }
  std::size_t blocks() const noexcept { return prefix_max_.back() + 1; }

  /// Steps to the lexicographic successor; false once the last string
  /// (0,1,2,...,n-1) has been passed.
  bool advance() {
    for (std::size_t i = codes_.size(); i-- > 1;) {
      if (codes_[i] <= prefix_max_[i - 1]) {
        ++codes_[i];
        prefix_max_[i] = std::max(prefix_max_[i - 1], codes_[i]);
        for (std::size_t k = i + 1; k < codes_.size(); ++k) {
          codes_[k] = 0;
          prefix_max_[k] = prefix_max_[i];
        }
        return true;
      }
    }
    return false;
  }

  std::vector<std::vector<PlayerId>> groups() const {
    std::vector<std::vector<PlayerId>> out(blocks());
    for (std::size_t i = 0; i < codes_.size(); ++i) out[codes_[i]].push_back(i);
    return out;
  }

  void fill_masks(std::vector<Mask>& out) const {
    out.assign(blocks(), 0);
    for (std::size_t i = 0; i < codes_.size(); ++i) out[codes_[i]] |= Mask{1} << i;
  }

  Partition to_partition(const Instance& inst) const { return Partition(inst, groups()); }

  /// The RGS of a canonical partition (coalitions already ordered by their
  /// smallest member).
  static RestrictedGrowthString of(const Partition& p) {
    std::vector<std::size_t> codes(p.player_count());
    for (std::size_t c = 0; c < p.size(); ++c) {
      for (PlayerId id : p.coalitions()[c].members()) codes[id] = c;
    }
    return RestrictedGrowthString(std::move(codes));
  }

 private:
  std::vector<std::size_t> codes_;
  std::vector<std::size_t> prefix_max_;
};

/// Single-consumer stream of every set partition of {0..N-1}.
class PartitionStream {
 public:
  explicit PartitionStream(std::size_t n, const EnumerationBudget& budget = {}) : rgs_((require_within(budget, n), n)) {}

  /// Next partition as groups of player ids, or nullopt when exhausted.
  std::optional<std::vector<std::vector<PlayerId>>> next() {
    if (done_) return std::nullopt;
    if (started_ && !rgs_.advance()) {
      done_ = true;
      return std::nullopt;
    }
    started_ = true;
    return rgs_.groups();
  }

  const RestrictedGrowthString& current() const noexcept { return rgs_; }

 private:
  RestrictedGrowthString rgs_;
  bool started_ = false;
  bool done_ = false;
};

inline PartitionStream iter_partitions(std::size_t n, const EnumerationBudget& budget = {}) {
  return PartitionStream(n, budget);
}

/// Calls fn(blocks) for every partition of {0..N-1} in canonical order,
/// with each coalition as a mask. fn may return false to stop early.
template <typename Fn>
void for_each_partition_masks(std::size_t n, const EnumerationBudget& budget, Fn&& fn) {
  require_within(budget, n);
  RestrictedGrowthString rgs(n);
  std::vector<Mask> blocks;
  do {
    rgs.fill_masks(blocks);
    if constexpr (std::is_same_v<decltype(fn(blocks)), bool>) {
      if (!fn(static_cast<const std::vector<Mask>&>(blocks))) return;
    } else {
      fn(static_cast<const std::vector<Mask>&>(blocks));
    }
  } while (rgs.advance());
}

/// All 2^|S| subsets of S, in increasing bitmask order over S's positions.
class SubsetStream {
 public:
  explicit SubsetStream(std::vector<PlayerId> set, const EnumerationBudget& budget = {})
      : set_(std::move(set)) {
    require_within(budget, set_.size());
    end_ = std::uint64_t{1} << set_.size();
  }

  std::optional<std::vector<PlayerId>> next() {
    if (cursor_ >= end_) return std::nullopt;
    std::vector<PlayerId> out;
    for (std::size_t i = 0; i < set_.size(); ++i) {
      if ((cursor_ >> i) & 1U) out.push_back(set_[i]);
    }
    ++cursor_;
    return out;
  }

 private:
  std::vector<PlayerId> set_;
  std::uint64_t cursor_ = 0;
  std::uint64_t end_ = 0;
};

inline SubsetStream iter_subsets(std::vector<PlayerId> set, const EnumerationBudget& budget = {}) {
  return SubsetStream(std::move(set), budget);
}

inline Rational blocks_cost(CoalitionTable& table, const std::vector<Mask>& blocks) {
  Rational total = 0;
  for (Mask b : blocks) total += table.cost(b);
  return total;
}

/// Minimum-cost partition by exhaustive scan; the first minimum in canonical
/// order wins ties.
inline std::pair<Partition, Rational> brute_force_optimal(const Instance& inst, const EnumerationBudget& budget = {}) {
  require_within(budget, inst.size());
  CoalitionTable table(inst);
  std::optional<Rational> best;
  std::vector<Mask> best_blocks;
  for_each_partition_masks(inst.size(), budget, [&](const std::vector<Mask>& blocks) {
    Rational c = blocks_cost(table, blocks);
    if (!best || c < *best) {
      best = std::move(c);
      best_blocks = blocks;
    }
  });
  std::vector<std::vector<PlayerId>> groups;
  for (Mask b : best_blocks) groups.push_back(members_of(b));
  return {Partition(inst, groups), *best};
}

}  // namespace fedgame
