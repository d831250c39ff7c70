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

#include "oracles.hpp"

#include <fedgame/fedgame.hpp>

namespace testing_support {

inline fedgame::Instance to_instance(const oracle::Game& g) {
  return fedgame::Instance(fedgame::GameParams(g.mu_e, g.sigma2), g.n);
}

inline oracle::Game to_game(const fedgame::Instance& inst) {
  return {inst.params().mu_e(), inst.params().sigma2(), inst.sizes()};
}

inline oracle::Groups to_groups(const fedgame::Partition& p) {
  oracle::Groups out;
  for (const auto& c : p.coalitions()) out.push_back(c.members());
  return out;
}

/// mu_e = 10, sigma2 = 1, sizes a = 1, b = 8, c = 15.
inline fedgame::Instance table1() { return fedgame::Instance(fedgame::GameParams(10, 1), {1, 8, 15}); }

inline fedgame::Partition part(const fedgame::Instance& inst, std::vector<std::vector<fedgame::PlayerId>> groups) {
  return fedgame::Partition(inst, std::move(groups));
}

inline fedgame::Rational rat(long num, long den = 1) { return fedgame::make_rational(num, den); }

}  // namespace testing_support
