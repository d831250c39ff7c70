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
 * \file fedgame/optimal.hpp
 *
 * \brief Greedy construction of a minimum weighted-cost partition.
 *
 * Players are visited in ascending order of sample count and added one at a
 * time to a single growing coalition for as long as the next player weakly
 * prefers joining it to local learning. Everyone left over learns locally.
 */

#pragma once

#include <fedgame/model.hpp>

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace fedgame {

enum class SizeClass { Small, Critical, Large };

inline const char* to_string(SizeClass c) {
  switch (c) {
    case SizeClass::Small: return "small";
    case SizeClass::Critical: return "critical";
    case SizeClass::Large: return "large";
  }
  return "?";
}

/// Position of n relative to mu_e / sigma2.
inline SizeClass classify(SampleCount n, const GameParams& params) {
  const Rational crit = params.critical_size();
  const Rational size = to_rational(n);
  if (size < crit) return SizeClass::Small;
  if (size == crit) return SizeClass::Critical;
  return SizeClass::Large;
}

/// Weak preference: err_j(Q + j) <= err_j({j}).
inline bool wants_to_join(PlayerId j, const std::vector<PlayerId>& group, const Instance& inst) {
  if (std::find(group.begin(), group.end(), j) != group.end()) {
    throw MembershipError("player " + std::to_string(j) + " is already in the coalition");
  }
  std::vector<PlayerId> joined = group;
  joined.push_back(j);
  Coalition with_j(inst, std::move(joined));
  return err_player(j, with_j, inst) <= kernel::local_error(inst.n(j), inst.params());
}

inline bool wants_to_join(PlayerId j, const Coalition& q, const Instance& inst) {
  return wants_to_join(j, q.members(), inst);
}

/// Strict preference: err_j(C) > err_j({j}). A singleton never wants to leave.
inline bool wants_to_leave(PlayerId j, const Coalition& c, const Instance& inst) {
  if (!c.contains(j)) throw MembershipError("player " + std::to_string(j) + " is not in the coalition");
  if (c.size() < 2) return false;
  return err_player(j, c, inst) > kernel::local_error(inst.n(j), inst.params());
}

/// Visiting order and outcome of the greedy sweep.
struct GreedySweep {
  std::vector<PlayerId> order;  ///< ascending by size, ties by id
  std::size_t accepted = 0;     ///< order[0..accepted) form the grown coalition
};

inline GreedySweep greedy_sweep(const Instance& inst) {
  GreedySweep sweep;
  sweep.order.resize(inst.size());
  std::iota(sweep.order.begin(), sweep.order.end(), PlayerId{0});
  std::stable_sort(sweep.order.begin(), sweep.order.end(),
                   [&](PlayerId a, PlayerId b) { return inst.n(a) < inst.n(b); });

  kernel::Aggregate grown;
  for (PlayerId j : sweep.order) {
    const SampleCount nj = inst.n(j);
    if (sweep.accepted > 0) {
      Rational joined = kernel::join_error(nj, grown.mass, grown.sum_sq, inst.params());
      if (joined > kernel::local_error(nj, inst.params())) break;
    }
    grown.mass += nj;
    grown.sum_sq += to_integer(nj) * to_integer(nj);
    ++sweep.accepted;
  }
  return sweep;
}

inline Partition optimal_partition(const Instance& inst) {
  const GreedySweep sweep = greedy_sweep(inst);
  std::vector<std::vector<PlayerId>> groups;
  groups.emplace_back(sweep.order.begin(), sweep.order.begin() + static_cast<std::ptrdiff_t>(sweep.accepted));
  for (std::size_t i = sweep.accepted; i < sweep.order.size(); ++i) groups.push_back({sweep.order[i]});
  Partition result(inst, groups);

  std::size_t non_singletons = 0;
  for (const auto& c : result.coalitions()) non_singletons += c.size() > 1 ? 1 : 0;
  if (non_singletons > 1) throw std::logic_error("greedy construction produced more than one federating coalition");
  return result;
}

}  // namespace fedgame
