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

// Three players with 1, 8 and 15 samples: optimal partition, stable
// partitions and the Price of Anarchy.

#include <fedgame/fedgame.hpp>

#include <iostream>

int main() {
  using namespace fedgame;
  Instance inst(GameParams(10, 1), {1, 8, 15});

  Partition opt = optimal_partition(inst);
  std::cout << "optimal: " << render_partition(opt) << " cost " << to_decimal_string(partition_cost(opt, inst))
            << '\n';

  for (const auto& p : all_is_partitions(inst)) {
    std::cout << "individually stable: " << render_partition(p) << " cost "
              << to_decimal_string(partition_cost(p, inst)) << '\n';
  }

  auto verdict = is_individually_stable(opt, inst);
  if (!verdict.stable) {
    std::cout << "optimal partition is not stable: player " << *verdict.witness->player << " moves\n";
  }

  auto poa = price_of_anarchy(inst);
  std::cout << "PoA " << to_exact_string(poa.poa) << " = " << to_decimal_string(poa.poa, 4) << '\n';
}
