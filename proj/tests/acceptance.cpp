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

// Acceptance run: one PASS/FAIL line per criterion, exit status 0 only when
// every criterion passes. Seeds are pinned so the run is reproducible.

#include "../tools/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace fedgame;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

bool report(int number, bool pass, const std::string& detail) {
  std::cout << (pass ? "PASS" : "FAIL") << " criterion " << number << ": " << detail << std::endl;
  return pass;
}

std::string secs(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2fs", s);
  return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  bool quoted = false;
  for (char c : line) {
    if (c == '"') {
      quoted = !quoted;
    } else if (c == ',' && !quoted) {
      out.push_back(cell);
      cell.clear();
    } else {
      cell += c;
    }
  }
  out.push_back(cell);
  return out;
}

// Published worked example: per-player errors, weighted cost, average error.
struct ReferenceRow {
  const char* partition;
  const char* cells[5];
};
const ReferenceRow kReference[] = {
    {"{a} | {b} | {c}", {"10", "1.25", "0.667", "30", "1.25"}},
    {"{a} | {b,c}", {"10", "1.285", "0.677", "30.435", "1.268"}},
    {"{a,c} | {b}", {"2.382", "1.25", "0.633", "21.875", "0.911"}},
    {"{a,b} | {c}", {"2.691", "1.136", "0.667", "21.778", "0.907"}},
    {"{a,b,c}", {"1.834", "1.253", "0.670", "21.917", "0.913"}},
};

// Both sides are compared as values rounded to 3 decimals ("0.670" == "0.67").
bool same_3dp(const std::string& a, const std::string& b) {
  return to_decimal_string(parse_rational(a)) == to_decimal_string(parse_rational(b));
}

bool criterion_worked_example() {
  const auto start = Clock::now();
  std::ostringstream out, err;
  const int code = cli::run_cli({"--format", "csv", "reproduce-table1"}, out, err);
  const double elapsed = seconds_since(start);

  std::istringstream lines(out.str());
  std::string line;
  std::getline(lines, line);  // header
  int matched = 0, total = 0;
  std::string mismatches, stable_list, optimal, poa;
  for (const auto& ref : kReference) {
    if (!std::getline(lines, line)) break;
    auto cells = split_csv_line(line);
    if (cells.size() < 8 || cells[0] != ref.partition) {
      mismatches += " row '" + (cells.empty() ? std::string() : cells[0]) + "' out of order;";
      total += 5;
      continue;
    }
    for (int c = 0; c < 5; ++c) {
      ++total;
      if (same_3dp(cells[1 + c], ref.cells[c])) {
        ++matched;
      } else {
        mismatches += std::string(" ") + ref.partition + " col " + std::to_string(c + 1) + ": got " + cells[1 + c] +
                      " want " + ref.cells[c] + ";";
      }
    }
  }
  while (std::getline(lines, line)) {
    auto kv = split_csv_line(line.substr(2));
    if (kv.size() < 2) continue;
    if (kv[0] == "individually_stable") stable_list = kv[1];
    if (kv[0] == "optimal") optimal = kv[1];
    if (kv[0] == "PoA") poa = kv[1];
  }
  const bool cells_ok = matched == total && total == 25;
  const bool stable_ok = stable_list == "{a,c} | {b}";
  const bool optimal_ok = optimal == "{a,b} | {c}";
  const bool poa_ok = poa == "1.0045";
  const bool fast = elapsed < 1.0;
  return report(1, code == 0 && cells_ok && stable_ok && optimal_ok && poa_ok && fast,
                "cells " + std::to_string(matched) + "/" + std::to_string(total) + " match to 3 decimals" +
                    (mismatches.empty() ? "" : " (mismatch:" + mismatches + ")") + "; unique IS = " + stable_list +
                    "; optimal = " + optimal + "; PoA = " + poa + "; " + secs(elapsed));
}

// Shared sweep for criteria 2 and 3.
bool criteria_sweep() {
  RandomInstanceConfig cfg;
  cfg.seed = 20240601;
  cfg.max_players = 8;
  const std::uint64_t instances = 1000;

  std::uint64_t agree = 0, within = 0;
  Rational max_poa = 0;
  std::string max_instance;
  double optimal_time = 0, poa_time = 0;
  for (std::uint64_t t = 0; t < instances; ++t) {
    auto rng = trial_rng(cfg.seed, t);
    Instance inst = draw_instance(cfg, rng);

    auto t0 = Clock::now();
    const bool same = partition_cost(optimal_partition(inst), inst) == brute_force_optimal(inst).second;
    optimal_time += seconds_since(t0);
    agree += same ? 1 : 0;

    t0 = Clock::now();
    auto rep = price_of_anarchy(inst);
    poa_time += seconds_since(t0);
    within += rep.poa <= kPoABound ? 1 : 0;
    if (rep.poa > max_poa) {
      max_poa = rep.poa;
      max_instance = render_instance(inst);
    }
  }
  bool ok2 = report(2, agree == instances && optimal_time < 300,
                    std::to_string(agree) + "/" + std::to_string(instances) +
                        " random instances (N <= 8, mu_e/sigma2 in {1,10,100}) greedy cost == exhaustive optimum; " +
                        secs(optimal_time));
  bool ok3 = report(3, within == instances,
                    std::to_string(within) + "/" + std::to_string(instances) + " instances with PoA <= 9; max PoA " +
                        to_decimal_string(max_poa, 4) + " (" + to_exact_string(max_poa) + ") at " + max_instance + "; " +
                        secs(poa_time));
  return ok2 && ok3;
}

bool criterion_regimes() {
  const auto start = Clock::now();
  const std::uint64_t per_regime = 200;

  RandomInstanceConfig large;
  large.seed = 4242;
  large.max_players = 8;
  large.filter = SizeFilter::AllLarge;
  std::uint64_t poa_one = 0;
  for (std::uint64_t t = 0; t < per_regime; ++t) {
    auto rng = trial_rng(large.seed, t);
    Instance inst = draw_instance(large, rng);
    poa_one += price_of_anarchy(inst).poa == 1 ? 1 : 0;
  }

  RandomInstanceConfig small;
  small.seed = 4343;
  small.max_players = 10;
  small.filter = SizeFilter::AllSmall;
  std::uint64_t core = 0;
  for (std::uint64_t t = 0; t < per_regime; ++t) {
    auto rng = trial_rng(small.seed, t);
    Instance inst = draw_instance(small, rng);
    core += is_core_stable(Partition::grand(inst), inst).stable ? 1 : 0;
  }
  return report(4, poa_one == per_regime && core == per_regime,
                "all n_i >= mu_e/sigma2: PoA == 1 on " + std::to_string(poa_one) + "/" + std::to_string(per_regime) +
                    "; all n_i <= mu_e/sigma2 (N <= 10): grand coalition core stable on " + std::to_string(core) + "/" +
                    std::to_string(per_regime) + "; " + secs(seconds_since(start)));
}

bool criterion_lemmas() {
  const std::vector<std::string> names{"addminsame", "swap",     "monotone_join",      "monotone_leave",
                                       "merge",      "welcome",  "case_lemmas",        "err_upper_bound_is",
                                       "err_lower_bound", "small_player_upper", "relaxed_structure"};
  RandomInstanceConfig cfg;
  cfg.seed = 31337;
  const std::uint64_t trials = 10000;
  const auto start = Clock::now();
  auto reports = run_suite(cfg, trials, names);
  const double elapsed = seconds_since(start);
  bool all = true;
  std::string detail;
  for (const auto& r : reports) {
    const bool ok = r.ok() && r.trials == trials;
    all = all && ok;
    detail += " " + r.name + "=" + std::to_string(r.passed) + "/" + std::to_string(r.trials);
    if (r.counterexample) detail += "(first failure trial " + std::to_string(r.counterexample->trial) + ")";
  }
  return report(5, all && elapsed < 600, std::to_string(reports.size()) + " checks x " + std::to_string(trials) +
                                             " trials:" + detail + "; " + secs(elapsed));
}

bool criterion_constructions() {
  const auto start = Clock::now();
  auto reports = run_constructions({Rational(2), Rational(5), Rational(10)});
  bool all = true;
  std::string detail;
  for (const auto& c : reports) {
    const bool verified = c.construction.brute_force_ratio.has_value();
    all = all && c.ok() && verified;
    detail += " " + c.name + "(" + to_exact_string(c.rho) + ")=" + to_decimal_string(c.construction.formula_ratio, 4) +
              (verified ? "/bf " + to_decimal_string(*c.construction.brute_force_ratio, 4) : "/bf skipped");
  }
  return report(6, all, "ratios exceed rho (formula/brute force):" + detail + "; " + secs(seconds_since(start)));
}

bool criterion_montecarlo() {
  const auto start = Clock::now();
  const Instance inst = cli::table1_instance();
  const std::vector<Partition> partitions{Partition::grand(inst), Partition(inst, {{0, 2}, {1}})};
  const std::uint64_t seeds = 17;
  int pairs = 0, over3 = 0, over4 = 0;
  double worst = 0;
  for (std::uint64_t s = 0; s < seeds; ++s) {
    for (const auto& p : partitions) {
      auto res = validate_partition(p, inst, GenerativeConfig::for_instance(inst, 1000 + s, 100000));
      for (const auto& m : res.players) {
        ++pairs;
        const double az = std::abs(m.z);
        worst = std::max(worst, az);
        over3 += az > 3 ? 1 : 0;
        over4 += az > 4 ? 1 : 0;
      }
    }
  }
  const double elapsed = seconds_since(start);
  // at most 1 in 100 pairs beyond 3 standard errors, none beyond 4
  const bool ok = pairs >= 100 && over3 * 100 <= pairs && over4 == 0 && elapsed < 120;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", worst);
  return report(7, ok, std::to_string(pairs) + " seed/player pairs at 1e5 trials: " + std::to_string(over3) +
                           " beyond 3 SE, " + std::to_string(over4) + " beyond 4 SE, max |z| " + buf + "; " +
                           secs(elapsed));
}

}  // namespace

int main() {
  bool ok = true;
  ok = criterion_worked_example() && ok;
  ok = criteria_sweep() && ok;
  ok = criterion_regimes() && ok;
  ok = criterion_lemmas() && ok;
  ok = criterion_constructions() && ok;
  ok = criterion_montecarlo() && ok;
  std::cout << (ok ? "ALL CRITERIA PASS" : "SOME CRITERIA FAIL") << std::endl;
  return ok ? 0 : 1;
}
