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

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace fedgame {

/// Key/value pairs describing the quantities that broke a check.
using CheckContext = std::vector<std::pair<std::string, std::string>>;

struct Counterexample {
  Instance instance;
  std::uint64_t trial = 0;  ///< trial index; replaying it reproduces the failure
  CheckContext context;
};

/// Outcome of a property check. passed <= trials, and a counterexample is
/// present exactly when some trial failed (the first failure is kept).
struct CheckReport {
  std::string name;
  std::uint64_t trials = 0;
  std::uint64_t passed = 0;
  std::optional<Counterexample> counterexample;
  /// Free-form summary quantities (e.g. worst ratio seen).
  CheckContext notes;

  CheckReport() = default;
  explicit CheckReport(std::string check_name) : name(std::move(check_name)) {}

  bool ok() const noexcept { return passed == trials; }

  void record(bool pass, const Instance& inst, std::uint64_t trial, CheckContext context = {}) {
    ++trials;
    if (pass) {
      ++passed;
    } else if (!counterexample) {
      counterexample = Counterexample{inst, trial, std::move(context)};
    }
  }
};

}  // namespace fedgame
