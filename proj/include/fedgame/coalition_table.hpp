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

#pragma once

#include <fedgame/model.hpp>

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace fedgame {

/// Bit i set <=> player i is a member.
using Mask = std::uint32_t;

inline constexpr std::size_t kMaxMaskPlayers = 24;

inline Mask mask_of(const Coalition& c) {
  Mask m = 0;
  for (PlayerId id : c.members()) m |= Mask{1} << id;
  return m;
}

inline std::vector<PlayerId> members_of(Mask m) {
  std::vector<PlayerId> out;
  while (m != 0) {
    out.push_back(static_cast<PlayerId>(std::countr_zero(m)));
    m &= m - 1;
  }
  return out;
}

inline bool has_player(Mask m, PlayerId id) { return ((m >> id) & Mask{1}) != 0; }

/// Lazily memoised errors and costs for every subset of an instance's
/// players. Exhaustive scans (partitions, blocking sets) revisit the same
/// coalitions many times, so each value is computed at most once.
///
/// Not thread-safe; give each worker its own table.
class CoalitionTable {
 public:
  explicit CoalitionTable(const Instance& inst) : inst_(inst), n_(inst.size()) {
    if (n_ > kMaxMaskPlayers) {
      throw std::invalid_argument("coalition table supports at most " + std::to_string(kMaxMaskPlayers) +
                                  " players");
    }
    const std::size_t subsets = std::size_t{1} << n_;
    mass_.assign(subsets, 0);
    sum_sq_.assign(subsets, 0);
    for (Mask m = 1; m < subsets; ++m) {
      PlayerId low = static_cast<PlayerId>(std::countr_zero(m));
      Mask rest = m & (m - 1);
      SampleCount n = inst.n(low);
      SampleCount sq = 0;
      if (__builtin_mul_overflow(n, n, &sq) || __builtin_add_overflow(sum_sq_[rest], sq, &sum_sq_[m]) ||
          __builtin_add_overflow(mass_[rest], n, &mass_[m])) {
        throw std::overflow_error("sample counts too large to tabulate");
      }
    }
    err_.resize(subsets * n_);
    err_ready_.assign(subsets * n_, 0);
    cost_.resize(subsets);
    cost_ready_.assign(subsets, 0);
  }

  const Instance& instance() const noexcept { return inst_; }
  std::size_t players() const noexcept { return n_; }
  Mask full() const noexcept { return static_cast<Mask>((std::size_t{1} << n_) - 1); }

  SampleCount mass(Mask m) const { return mass_[m]; }

  /// err_j(m); j must be in m.
  const Rational& err(Mask m, PlayerId j) {
    const std::size_t slot = static_cast<std::size_t>(m) * n_ + j;
    if (!err_ready_[slot]) {
      if (!has_player(m, j)) throw MembershipError("player " + std::to_string(j) + " is not in the coalition");
      err_[slot] = kernel::error(inst_.n(j), mass_[m], to_integer(sum_sq_[m]), inst_.params());
      err_ready_[slot] = 1;
    }
    return err_[slot];
  }

  const Rational& cost(Mask m) {
    if (!cost_ready_[m]) {
      if (m == 0) throw std::invalid_argument("cost of the empty coalition");
      cost_[m] = kernel::cost(mass_[m], to_integer(sum_sq_[m]), inst_.params());
      cost_ready_[m] = 1;
    }
    return cost_[m];
  }

 private:
  const Instance& inst_;
  std::size_t n_;
  std::vector<SampleCount> mass_;
  std::vector<SampleCount> sum_sq_;
  std::vector<Rational> err_;
  std::vector<char> err_ready_;
  std::vector<Rational> cost_;
  std::vector<char> cost_ready_;
};

/// Partition held as one mask per coalition plus an owner index per player.
struct MaskPartition {
  std::vector<Mask> blocks;
  std::vector<std::size_t> owner;

  static MaskPartition from(const Partition& p) {
    MaskPartition mp;
    mp.owner.assign(p.player_count(), 0);
    for (std::size_t c = 0; c < p.size(); ++c) {
      mp.blocks.push_back(mask_of(p.coalitions()[c]));
      for (PlayerId id : p.coalitions()[c].members()) mp.owner[id] = c;
    }
    return mp;
  }

  Partition to_partition(const Instance& inst) const {
    std::vector<std::vector<PlayerId>> groups;
    for (Mask b : blocks) groups.push_back(members_of(b));
    return Partition(inst, groups);
  }
};

}  // namespace fedgame
