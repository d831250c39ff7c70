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
 * \file fedgame/model.hpp
 *
 * \brief Players, coalitions and partitions of the federated mean-estimation
 *  game, together with the closed-form expected error and the weighted,
 *  unweighted and arbitrary-weight partition costs.
 *
 * A coalition federates by averaging local means weighted by sample counts.
 * For player j in coalition C with total mass T = sum of n_i over C:
 *
 *   err_j(C) = mu_e / T + sigma2 * (sum_{i in C, i != j} n_i^2 + (T - n_j)^2) / T^2
 *
 * and the weighted cost of C collapses to mu_e + sigma2*T - sigma2*(sum n_i^2)/T.
 */

#pragma once

#include <fedgame/rational.hpp>

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fedgame {

using PlayerId = std::size_t;
using SampleCount = std::int64_t;

/// Raised when a player is not (or unexpectedly is) a member of a coalition.
class MembershipError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Model constants: mu_e (average sampling noise) and sigma2 (variance of the
/// players' true means). Both strictly positive.
class GameParams {
 public:
  GameParams(Rational mu_e, Rational sigma2) : mu_e_(std::move(mu_e)), sigma2_(std::move(sigma2)) {
    if (mu_e_ <= 0) throw std::invalid_argument("mu_e must be positive");
    if (sigma2_ <= 0) throw std::invalid_argument("sigma2 must be positive");
  }

  const Rational& mu_e() const noexcept { return mu_e_; }
  const Rational& sigma2() const noexcept { return sigma2_; }

  /// mu_e / sigma2, the size at which a player is indifferent to federating
  /// with equally sized players.
  Rational critical_size() const { return mu_e_ / sigma2_; }

  friend bool operator==(const GameParams&, const GameParams&) = default;

 private:
  Rational mu_e_;
  Rational sigma2_;
};

struct Player {
  PlayerId id;
  SampleCount n;

  friend bool operator==(const Player&, const Player&) = default;
};

/// GameParams plus the players; ids are always 0..N-1 in list order.
class Instance {
 public:
  Instance(GameParams params, std::vector<SampleCount> sizes) : params_(std::move(params)) {
    if (sizes.empty()) throw std::invalid_argument("instance needs at least one player");
    players_.reserve(sizes.size());
    for (std::size_t i = 0; i < sizes.size(); ++i) {
      if (sizes[i] < 1) {
        throw std::invalid_argument("player " + std::to_string(i) + " has sample count < 1");
      }
      players_.push_back(Player{i, sizes[i]});
    }
  }

  const GameParams& params() const noexcept { return params_; }
  const std::vector<Player>& players() const noexcept { return players_; }
  std::size_t size() const noexcept { return players_.size(); }

  SampleCount n(PlayerId id) const {
    if (id >= players_.size()) {
      throw MembershipError("player " + std::to_string(id) + " is not in the instance");
    }
    return players_[id].n;
  }

  std::vector<SampleCount> sizes() const {
    std::vector<SampleCount> out;
    out.reserve(players_.size());
    for (const auto& p : players_) out.push_back(p.n);
    return out;
  }

  SampleCount total_mass() const {
    SampleCount t = 0;
    for (const auto& p : players_) t += p.n;
    return t;
  }

  friend bool operator==(const Instance&, const Instance&) = default;

 private:
  GameParams params_;
  std::vector<Player> players_;
};

/// A non-empty set of players with its cached total sample mass.
class Coalition {
 public:
  Coalition(const Instance& inst, std::vector<PlayerId> members) : members_(std::move(members)) {
    if (members_.empty()) throw std::invalid_argument("coalition must be non-empty");
    std::sort(members_.begin(), members_.end());
    if (std::adjacent_find(members_.begin(), members_.end()) != members_.end()) {
      throw std::invalid_argument("coalition lists a player twice");
    }
    for (PlayerId id : members_) {
      total_mass_ += inst.n(id);
      sum_sq_ += to_integer(inst.n(id)) * to_integer(inst.n(id));
    }
  }

  const std::vector<PlayerId>& members() const noexcept { return members_; }
  SampleCount total_mass() const noexcept { return total_mass_; }
  /// Sum of squared sample counts of the members.
  const Integer& sum_sq() const noexcept { return sum_sq_; }
  std::size_t size() const noexcept { return members_.size(); }
  PlayerId front() const noexcept { return members_.front(); }

  bool contains(PlayerId id) const {
    return std::binary_search(members_.begin(), members_.end(), id);
  }

  friend bool operator==(const Coalition& a, const Coalition& b) { return a.members_ == b.members_; }
  friend auto operator<=>(const Coalition& a, const Coalition& b) { return a.members_ <=> b.members_; }

 private:
  std::vector<PlayerId> members_;
  SampleCount total_mass_ = 0;
  Integer sum_sq_ = 0;
};

/// Disjoint cover of all players. Canonical form: members sorted inside each
/// coalition, coalitions ordered by their smallest member.
class Partition {
 public:
  Partition(const Instance& inst, const std::vector<std::vector<PlayerId>>& groups) {
    std::vector<bool> seen(inst.size(), false);
    coalitions_.reserve(groups.size());
    for (const auto& g : groups) {
      for (PlayerId id : g) {
        if (id >= inst.size()) {
          throw std::invalid_argument("player " + std::to_string(id) + " is not in the instance");
        }
        if (seen[id]) throw std::invalid_argument("player " + std::to_string(id) + " appears twice");
        seen[id] = true;
      }
      coalitions_.emplace_back(inst, g);
    }
    for (std::size_t i = 0; i < seen.size(); ++i) {
      if (!seen[i]) throw std::invalid_argument("player " + std::to_string(i) + " is not covered");
    }
    std::sort(coalitions_.begin(), coalitions_.end(),
              [](const Coalition& a, const Coalition& b) { return a.front() < b.front(); });
    owner_.assign(inst.size(), 0);
    for (std::size_t c = 0; c < coalitions_.size(); ++c) {
      for (PlayerId id : coalitions_[c].members()) owner_[id] = c;
    }
  }

  static Partition singletons(const Instance& inst) {
    std::vector<std::vector<PlayerId>> groups;
    for (const auto& p : inst.players()) groups.push_back({p.id});
    return Partition(inst, groups);
  }

  static Partition grand(const Instance& inst) {
    std::vector<PlayerId> all(inst.size());
    std::iota(all.begin(), all.end(), PlayerId{0});
    return Partition(inst, {all});
  }

  const std::vector<Coalition>& coalitions() const noexcept { return coalitions_; }
  std::size_t size() const noexcept { return coalitions_.size(); }
  std::size_t player_count() const noexcept { return owner_.size(); }

  /// Index into coalitions() of the coalition holding `id`.
  std::size_t index_of(PlayerId id) const {
    if (id >= owner_.size()) throw MembershipError("player " + std::to_string(id) + " is not in the partition");
    return owner_[id];
  }
  const Coalition& coalition_of(PlayerId id) const { return coalitions_[index_of(id)]; }

  std::vector<std::vector<PlayerId>> groups() const {
    std::vector<std::vector<PlayerId>> out;
    for (const auto& c : coalitions_) out.push_back(c.members());
    return out;
  }

  friend bool operator==(const Partition& a, const Partition& b) { return a.coalitions_ == b.coalitions_; }

 private:
  std::vector<Coalition> coalitions_;
  std::vector<std::size_t> owner_;
};

/// Per-player weights p_i > 0 summing to one.
class WeightVector {
 public:
  explicit WeightVector(std::vector<Rational> weights) : weights_(std::move(weights)) {
    Rational total = 0;
    for (const auto& w : weights_) {
      if (w <= 0) throw std::invalid_argument("weights must be positive");
      total += w;
    }
    if (total != 1) throw std::invalid_argument("weights must sum to one, got " + to_exact_string(total));
  }

  /// p_i = n_i / sum n.
  static WeightVector proportional(const Instance& inst) {
    std::vector<Rational> w;
    Rational total = to_rational(inst.total_mass());
    for (const auto& p : inst.players()) w.push_back(to_rational(p.n) / total);
    return WeightVector(std::move(w));
  }

  /// p_i = 1 / N.
  static WeightVector uniform(std::size_t n) {
    return WeightVector(std::vector<Rational>(n, make_rational(1, Integer(static_cast<unsigned long>(n)))));
  }

  const std::vector<Rational>& weights() const noexcept { return weights_; }
  std::size_t size() const noexcept { return weights_.size(); }

 private:
  std::vector<Rational> weights_;
};

// ---------------------------------------------------------------------------
// Size-level kernel. These work on raw aggregates so that hypothetical
// coalitions (lemma checks, cached tables) need not materialise a Coalition.
// ---------------------------------------------------------------------------
namespace kernel {

/// Error of a member of size n_j in a coalition with total mass `mass` and
/// squared-size sum `sum_sq` (both including j).
inline Rational error(SampleCount n_j, SampleCount mass, const Integer& sum_sq, const GameParams& params) {
  Integer t = to_integer(mass);
  Integer nj = to_integer(n_j);
  Integer rest = t - nj;
  Integer spread = sum_sq - nj * nj + rest * rest;
  return params.mu_e() / Rational(t) + params.sigma2() * make_rational(spread, t * t);
}

/// Weighted cost sum_j n_j * err_j of a coalition with the given aggregates.
inline Rational cost(SampleCount mass, const Integer& sum_sq, const GameParams& params) {
  Integer t = to_integer(mass);
  return params.mu_e() + params.sigma2() * Rational(t) - params.sigma2() * make_rational(sum_sq, t);
}

/// Error of j when it is alone.
inline Rational local_error(SampleCount n_j, const GameParams& params) {
  return params.mu_e() / to_rational(n_j);
}

/// Error of a player of size n_j joining a group of mass `others_mass` and
/// squared sum `others_sum_sq` (j excluded from both).
inline Rational join_error(SampleCount n_j, SampleCount others_mass, const Integer& others_sum_sq,
                           const GameParams& params) {
  Integer nj = to_integer(n_j);
  return error(n_j, others_mass + n_j, others_sum_sq + nj * nj, params);
}

struct Aggregate {
  SampleCount mass = 0;
  Integer sum_sq = 0;
};

inline Aggregate aggregate(std::span<const SampleCount> sizes) {
  Aggregate a;
  for (SampleCount n : sizes) {
    a.mass += n;
    a.sum_sq += to_integer(n) * to_integer(n);
  }
  return a;
}

}  // namespace kernel

/// Expected squared error player j experiences in coalition c.
inline Rational err_player(PlayerId j, const Coalition& c, const Instance& inst) {
  if (!c.contains(j)) {
    throw MembershipError("player " + std::to_string(j) + " is not a member of the coalition");
  }
  return kernel::error(inst.n(j), c.total_mass(), c.sum_sq(), inst.params());
}

/// err_j(C) - err_k(C) = 2*sigma2*(n_k - n_j)/T_C for two members of one coalition.
inline Rational err_gap_same_coalition(PlayerId j, PlayerId k, const Coalition& c, const Instance& inst) {
  if (!c.contains(j) || !c.contains(k)) {
    throw MembershipError("both players must be members of the coalition");
  }
  return 2 * inst.params().sigma2() * make_rational(to_integer(inst.n(k) - inst.n(j)), to_integer(c.total_mass()));
}

inline Rational coalition_cost(const Coalition& c, const Instance& inst) {
  return kernel::cost(c.total_mass(), c.sum_sq(), inst.params());
}

/// Weighted cost: sum over coalitions of sum_j n_j * err_j.
inline Rational partition_cost(const Partition& p, const Instance& inst) {
  Rational total = 0;
  for (const auto& c : p.coalitions()) total += coalition_cost(c, inst);
  return total;
}

/// Sum of player errors with no size weighting.
inline Rational unweighted_cost(const Partition& p, const Instance& inst) {
  Rational total = 0;
  for (const auto& c : p.coalitions()) {
    for (PlayerId j : c.members()) total += err_player(j, c, inst);
  }
  return total;
}

inline Rational arbitrary_weight_cost(const Partition& p, const Instance& inst, const WeightVector& w) {
  if (w.size() != inst.size()) {
    throw std::invalid_argument("weight vector has " + std::to_string(w.size()) + " entries for " +
                                std::to_string(inst.size()) + " players");
  }
  Rational total = 0;
  for (const auto& c : p.coalitions()) {
    for (PlayerId j : c.members()) total += w.weights()[j] * err_player(j, c, inst);
  }
  return total;
}

/// Cost divided by total mass; the weighted average error.
inline Rational average_error(const Partition& p, const Instance& inst) {
  return partition_cost(p, inst) / to_rational(inst.total_mass());
}

}  // namespace fedgame
