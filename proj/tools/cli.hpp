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

// Command implementations for the fedgame tool. Kept in a header so tests
// can drive run_cli() directly with captured streams.
//
// Exit codes: 0 success, 1 a check failed, 2 usage or parse error,
// 3 enumeration budget exceeded.

#pragma once

#include <fedgame/fedgame.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace fedgame::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitBudget = 3;

enum class Format { Table, Csv, Json };

/// Tabular output plus trailing key/value summary. Table mode prints
/// `headline` first; CSV prints the rows and then the summary as
/// "# key,value" comment lines; JSON nests both under one object.
struct Report {
  std::vector<std::string> headline;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::pair<std::string, std::string>> summary;

  void add_summary(std::string key, std::string value) { summary.emplace_back(std::move(key), std::move(value)); }
};

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

/// Display width, counting each UTF-8 code point once.
inline std::size_t display_width(const std::string& s) {
  std::size_t w = 0;
  for (unsigned char c : s) w += (c & 0xC0) != 0x80 ? 1 : 0;
  return w;
}

inline void render(const Report& r, Format fmt, std::ostream& out) {
  switch (fmt) {
    case Format::Table: {
      for (const auto& line : r.headline) out << line << '\n';
      if (!r.columns.empty() && !r.rows.empty()) {
        std::vector<std::size_t> width(r.columns.size());
        for (std::size_t c = 0; c < r.columns.size(); ++c) width[c] = display_width(r.columns[c]);
        for (const auto& row : r.rows) {
          for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], display_width(row[c]));
        }
        auto line = [&](const std::vector<std::string>& cells) {
          for (std::size_t c = 0; c < cells.size(); ++c) {
            out << cells[c];
            if (c + 1 < cells.size()) out << std::string(width[c] - display_width(cells[c]) + 2, ' ');
          }
          out << '\n';
        };
        line(r.columns);
        for (const auto& row : r.rows) line(row);
      }
      for (const auto& [k, v] : r.summary) out << k << ": " << v << '\n';
      break;
    }
    case Format::Csv: {
      if (!r.columns.empty()) {
        for (std::size_t c = 0; c < r.columns.size(); ++c) out << (c ? "," : "") << csv_escape(r.columns[c]);
        out << '\n';
        for (const auto& row : r.rows) {
          for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << csv_escape(row[c]);
          out << '\n';
        }
      }
      for (const auto& [k, v] : r.summary) out << "# " << k << ',' << csv_escape(v) << '\n';
      break;
    }
    case Format::Json: {
      nlohmann::ordered_json j;
      if (!r.columns.empty()) {
        auto rows = nlohmann::ordered_json::array();
        for (const auto& row : r.rows) {
          nlohmann::ordered_json obj;
          for (std::size_t c = 0; c < r.columns.size(); ++c) obj[r.columns[c]] = row[c];
          rows.push_back(std::move(obj));
        }
        j["rows"] = std::move(rows);
      }
      nlohmann::ordered_json summary = nlohmann::ordered_json::object();
      for (const auto& [k, v] : r.summary) summary[k] = v;
      j["summary"] = std::move(summary);
      out << j.dump(2) << '\n';
      break;
    }
  }
}

struct Options {
  Format format = Format::Table;
  bool exact = false;
  std::optional<std::size_t> budget;
};

inline std::string num(const Rational& r, const Options& o, int places = 3) {
  return o.exact ? to_exact_string(r) : to_decimal_string(r, places);
}

inline std::string fnum(double x, int places = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", places, x);
  return buf;
}

/// CLI flag, then FEDGAME_BUDGET, then the default.
inline EnumerationBudget resolve_budget(const Options& o) {
  if (o.budget) return EnumerationBudget(*o.budget);
  return budget_from_env();
}

inline std::string describe(const Deviation& d) {
  std::string set = "{";
  for (std::size_t i = 0; i < d.target.size(); ++i) set += (i ? "," : "") + std::to_string(d.target[i]);
  set += "}";
  switch (d.kind) {
    case DeviationKind::JoinCoalition: return "player " + std::to_string(*d.player) + " → coalition " + set;
    case DeviationKind::GoAlone: return "player " + std::to_string(*d.player) + " → local learning";
    case DeviationKind::BlockingCoalition: return "blocking set " + set;
  }
  return "";
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

inline int cmd_optimal(const std::string& path, bool oracle, const Options& o, std::ostream& out) {
  Instance inst = load_instance(path);
  Partition p = optimal_partition(inst);
  Rational cost = partition_cost(p, inst);
  Report r;
  r.headline.push_back(render_partition(p) + " cost=" + num(cost, o));
  r.add_summary("partition", render_partition_spec(p));
  r.add_summary("cost", num(cost, o));
  r.add_summary("average_error", num(average_error(p, inst), o));
  int code = kExitOk;
  if (oracle) {
    auto [bf, bf_cost] = brute_force_optimal(inst, resolve_budget(o));
    const bool agree = bf_cost == cost;
    r.headline.push_back(std::string("oracle: ") + (agree ? "agree" : "MISMATCH") + " cost=" + num(bf_cost, o));
    r.add_summary("oracle_cost", num(bf_cost, o));
    r.add_summary("oracle_agrees", agree ? "true" : "false");
    if (!agree) code = kExitCheckFailed;
  }
  render(r, o.format, out);
  return code;
}

inline int cmd_stability(const std::string& path, const std::string& spec, bool core, const Options& o,
                         std::ostream& out) {
  Instance inst = load_instance(path);
  Partition p = parse_partition(spec, inst);
  StabilityVerdict v =
      core ? is_core_stable(p, inst, resolve_budget(o)) : is_individually_stable(p, inst);
  const std::string concept_name = core ? "core" : "IS";
  Report r;
  std::string line = render_partition(p) + " " + concept_name + ": " + (v.stable ? "stable" : "unstable");
  if (v.witness) line += ", witness " + describe(*v.witness);
  r.headline.push_back(line);
  r.add_summary("partition", render_partition_spec(p));
  r.add_summary("concept", concept_name);
  r.add_summary("stable", v.stable ? "true" : "false");
  if (v.witness) {
    r.add_summary("witness_kind", to_string(v.witness->kind));
    if (v.witness->player) r.add_summary("witness_player", std::to_string(*v.witness->player));
    std::string tgt;
    for (std::size_t i = 0; i < v.witness->target.size(); ++i) tgt += (i ? "," : "") + std::to_string(v.witness->target[i]);
    r.add_summary("witness_target", tgt);
    r.add_summary("witness", describe(*v.witness));
  }
  render(r, o.format, out);
  return kExitOk;
}

inline int cmd_poa(const std::string& path, bool core_pos, const Options& o, std::ostream& out) {
  Instance inst = load_instance(path);
  auto rep = price_of_anarchy(inst, resolve_budget(o), core_pos ? StableConcept::Core : StableConcept::Individual);
  const bool within = rep.poa <= kPoABound;
  Report r;
  r.headline.push_back("PoA " + num(rep.poa, o, 4) + " (worst IS " + render_partition(rep.worst_is) + " cost=" +
                       num(rep.worst_cost, o) + ")");
  r.headline.push_back("PoS " + num(rep.pos, o, 4) + " (best " + (core_pos ? "core" : "IS") + " " +
                       render_partition(rep.best_stable) + " cost=" + num(rep.best_stable_cost, o) + ")");
  r.headline.push_back("optimal " + render_partition(rep.opt) + " cost=" + num(rep.opt_cost, o));
  r.headline.push_back(std::string("bound PoA <= 9: ") + (within ? "holds" : "VIOLATED"));
  r.add_summary("poa", num(rep.poa, o, 4));
  r.add_summary("poa_exact", to_exact_string(rep.poa));
  r.add_summary("pos", num(rep.pos, o, 4));
  r.add_summary("pos_concept", core_pos ? "core" : "individual");
  r.add_summary("worst_is", render_partition_spec(rep.worst_is));
  r.add_summary("best_stable", render_partition_spec(rep.best_stable));
  r.add_summary("optimal", render_partition_spec(rep.opt));
  r.add_summary("is_partitions", std::to_string(rep.stable_count));
  r.add_summary("within_bound", within ? "true" : "false");
  render(r, o.format, out);
  return within ? kExitOk : kExitCheckFailed;
}

/// Random instances through the exhaustive PoA computation.
inline int cmd_poa_sweep(std::uint64_t count, std::uint64_t seed, std::size_t max_players, const Options& o,
                         std::ostream& out) {
  RandomInstanceConfig cfg;
  cfg.seed = seed;
  cfg.max_players = max_players;
  cfg.validate();
  const EnumerationBudget budget = resolve_budget(o);
  require_within(budget, max_players);
  Rational worst = 0;
  std::optional<Instance> worst_inst;
  std::uint64_t violations = 0;
  for (std::uint64_t t = 0; t < count; ++t) {
    auto rng = trial_rng(seed, t);
    Instance inst = draw_instance(cfg, rng);
    auto rep = price_of_anarchy(inst, budget);
    if (rep.poa > kPoABound) ++violations;
    if (!worst_inst || rep.poa > worst) {
      worst = rep.poa;
      worst_inst = inst;
    }
  }
  Report r;
  r.headline.push_back("instances " + std::to_string(count) + ", max PoA " + num(worst, o, 4) +
                       ", violations of PoA <= 9: " + std::to_string(violations));
  r.add_summary("instances", std::to_string(count));
  r.add_summary("max_poa", num(worst, o, 4));
  r.add_summary("max_poa_exact", to_exact_string(worst));
  if (worst_inst) r.add_summary("max_poa_instance", render_instance(*worst_inst));
  r.add_summary("violations", std::to_string(violations));
  render(r, o.format, out);
  return violations == 0 ? kExitOk : kExitCheckFailed;
}

inline std::string render_context(const CheckContext& ctx) {
  std::string s;
  for (const auto& [k, v] : ctx) s += (s.empty() ? "" : " ") + k + "=" + v;
  return s;
}

inline int cmd_lemmas(const std::vector<std::string>& names, std::uint64_t trials, std::uint64_t seed,
                      std::size_t max_players, bool inject, std::optional<std::uint64_t> replay_trial,
                      const Options& o, std::ostream& out) {
  RandomInstanceConfig cfg;
  cfg.seed = seed;
  cfg.max_players = max_players;
  cfg.validate();

  std::vector<std::string> selected = names;
  if (inject) selected.push_back(injected_failure_check().name);
  for (const auto& n : selected) {
    if (!find_check(n)) throw ParseError("unknown lemma check '" + n + "'");
  }

  if (replay_trial) {
    if (selected.size() != 1) throw ParseError("--replay needs exactly one --suite name");
    auto outcome = replay(*find_check(selected[0]), cfg, *replay_trial);
    Report r;
    if (!outcome) {
      r.headline.push_back(selected[0] + " trial " + std::to_string(*replay_trial) + ": skipped (preconditions not met)");
      r.add_summary("result", "skipped");
      render(r, o.format, out);
      return kExitOk;
    }
    r.headline.push_back(selected[0] + " trial " + std::to_string(*replay_trial) + ": " +
                         (outcome->pass ? "pass" : "FAIL") + " " + render_instance(outcome->instance) + " " +
                         render_context(outcome->context));
    r.add_summary("result", outcome->pass ? "pass" : "fail");
    r.add_summary("instance", render_instance(outcome->instance));
    for (const auto& [k, v] : outcome->context) r.add_summary(k, v);
    render(r, o.format, out);
    return outcome->pass ? kExitOk : kExitCheckFailed;
  }

  std::vector<CheckReport> reports;
  if (selected.empty()) {
    reports = run_suite(cfg, trials);
  } else {
    reports = run_suite(cfg, trials, selected);
  }

  Report r;
  r.columns = {"check", "trials", "passed", "status", "counterexample_trial", "counterexample_instance", "context"};
  bool all_ok = true;
  for (const auto& rep : reports) {
    all_ok = all_ok && rep.ok();
    std::vector<std::string> row{rep.name, std::to_string(rep.trials), std::to_string(rep.passed),
                                 rep.ok() ? "pass" : "FAIL", "", "", ""};
    if (rep.counterexample) {
      row[4] = std::to_string(rep.counterexample->trial);
      row[5] = render_instance(rep.counterexample->instance);
      row[6] = render_context(rep.counterexample->context);
    }
    r.rows.push_back(std::move(row));
  }
  r.add_summary("seed", std::to_string(seed));
  r.add_summary("all_passed", all_ok ? "true" : "false");
  render(r, o.format, out);
  return all_ok ? kExitOk : kExitCheckFailed;
}

inline int cmd_constructions(const std::vector<std::string>& rhos, const Options& o, std::ostream& out) {
  std::vector<Rational> values;
  for (const auto& s : rhos) {
    try {
      values.push_back(parse_rational(s));
    } catch (const std::invalid_argument& e) {
      throw ParseError(e.what());
    }
    if (values.back() <= 1) throw ParseError("rho must exceed 1");
  }
  auto reports = run_constructions(values, resolve_budget(o));
  Report r;
  r.columns = {"construction", "rho", "instance", "formula_ratio", "brute_force_ratio", "status"};
  bool all_ok = true;
  for (const auto& c : reports) {
    all_ok = all_ok && c.ok();
    r.rows.push_back({c.name, num(c.rho, o), render_instance(c.construction.instance),
                      num(c.construction.formula_ratio, o, 4),
                      c.construction.brute_force_ratio ? num(*c.construction.brute_force_ratio, o, 4) : "skipped",
                      c.ok() ? "pass" : "FAIL"});
  }
  r.add_summary("all_passed", all_ok ? "true" : "false");
  render(r, o.format, out);
  return all_ok ? kExitOk : kExitCheckFailed;
}

inline int cmd_montecarlo(const std::string& path, const std::string& spec, std::uint64_t trials, std::uint64_t seed,
                          bool per_player_eps, const Options& o, std::ostream& out) {
  Instance inst = load_instance(path);
  Partition p = spec.empty() ? Partition::grand(inst) : parse_partition(spec, inst);
  GenerativeConfig g = GenerativeConfig::for_instance(inst, seed, trials);
  g.per_player_eps = per_player_eps;
  auto res = validate_partition(p, inst, g);
  Report r;
  r.columns = {"player", "coalition", "n", "empirical", "std_error", "theory", "z"};
  for (const auto& m : res.players) {
    r.rows.push_back({player_name(m.player, inst.size()),
                      render_group(p.coalition_of(m.player).members(), inst.size()), std::to_string(inst.n(m.player)),
                      fnum(m.empirical), fnum(m.std_error), fnum(m.theory), fnum(m.z, 2)});
  }
  r.add_summary("partition", render_partition_spec(p));
  r.add_summary("trials", std::to_string(trials));
  r.add_summary("seed", std::to_string(seed));
  r.add_summary("weighted_cost_empirical", fnum(res.aggregate.empirical));
  r.add_summary("weighted_cost_theory", fnum(res.aggregate.theory));
  r.add_summary("weighted_cost_z", fnum(res.aggregate.z, 2));
  render(r, o.format, out);
  return kExitOk;
}

/// The three-player example with mu_e = 10, sigma2 = 1 and sizes 1, 8, 15.
inline Instance table1_instance() { return Instance(GameParams(10, 1), {1, 8, 15}); }

/// Row order of the reference table.
inline std::vector<std::string> table1_specs() { return {"0;1;2", "0;1,2", "0,2;1", "0,1;2", "0,1,2"}; }

inline int cmd_reproduce_table1(const Options& o, std::ostream& out) {
  const Instance inst = table1_instance();
  auto poa = price_of_anarchy(inst);
  const Partition opt = optimal_partition(inst);
  Report r;
  r.columns = {"partition", "err_a", "err_b", "err_c", "cost", "average_error", "individually_stable", "optimal"};
  std::vector<std::string> stable_rows;
  for (const auto& spec : table1_specs()) {
    Partition p = parse_partition(spec, inst);
    std::vector<std::string> row{render_partition(p)};
    for (PlayerId j = 0; j < inst.size(); ++j) row.push_back(num(err_player(j, p.coalition_of(j), inst), o));
    const Rational cost = partition_cost(p, inst);
    const bool stable = is_individually_stable(p, inst).stable;
    if (stable) stable_rows.push_back(render_partition(p));
    row.push_back(num(cost, o));
    row.push_back(num(average_error(p, inst), o));
    row.push_back(stable ? "yes" : "no");
    row.push_back(cost == poa.opt_cost ? "yes" : "no");
    r.rows.push_back(std::move(row));
  }
  std::string stable_list;
  for (const auto& s : stable_rows) stable_list += (stable_list.empty() ? "" : ", ") + s;
  r.add_summary("individually_stable", stable_list);
  r.add_summary("optimal", render_partition(opt));
  r.add_summary("PoA", num(poa.poa, o, 4));
  r.add_summary("PoA_exact", to_exact_string(poa.worst_cost) + " / " + to_exact_string(poa.opt_cost) + " = " +
                                 to_exact_string(poa.poa));
  render(r, o.format, out);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// Entry point
// ---------------------------------------------------------------------------

/// Parses `args` (without the program name) and runs the chosen command.
inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Coalition formation analysis for federated mean estimation", "fedgame"};
  app.require_subcommand(1);
  Options opts;
  std::string format = "table";
  std::size_t budget = 0;
  app.add_option("--format", format, "Output format")
      ->check(CLI::IsMember({"table", "csv", "json"}))
      ->capture_default_str();
  app.add_flag("--exact", opts.exact, "Print rationals as p/q");
  auto* budget_opt =
      app.add_option("--budget", budget, "Largest player count for exhaustive enumeration (default 12, env FEDGAME_BUDGET)")
          ->check(CLI::Range(1, static_cast<int>(kMaxMaskPlayers)));

  std::string instance_path, spec;
  bool oracle = false, core = false, per_player_eps = false, inject = false;
  std::uint64_t trials = 0, seed = 0, sweep = 0;
  std::uint64_t replay_trial = 0;
  std::size_t max_players = 8;
  std::vector<std::string> suite, rhos{"2", "5", "10"};

  auto* optimal = app.add_subcommand("optimal", "Optimal partition by the greedy sweep");
  optimal->add_option("--instance", instance_path, "Instance JSON file")->required();
  optimal->add_flag("--oracle", oracle, "Also run brute force and require exact agreement");

  auto* stability = app.add_subcommand("stability", "Stability verdict and witness for a partition");
  stability->add_option("--instance", instance_path, "Instance JSON file")->required();
  stability->add_option("--partition", spec, "Groups such as \"0,1;2\"")->required();
  stability->add_flag("--core", core, "Check core stability instead of individual stability");

  auto* poa = app.add_subcommand("poa", "Price of Anarchy and Price of Stability");
  auto* poa_instance = poa->add_option("--instance", instance_path, "Instance JSON file");
  poa->add_flag("--core-pos", core, "Price of Stability over core-stable partitions");
  auto* poa_sweep = poa->add_option("--sweep", sweep, "Number of random instances instead of --instance");
  poa->add_option("--seed", seed, "Seed for --sweep");
  poa->add_option("--max-players", max_players, "Largest random instance for --sweep")->check(CLI::Range(1, 24));
  poa_instance->excludes(poa_sweep);

  auto* lemmas = app.add_subcommand("lemmas", "Randomised lemma checks");
  lemmas->add_option("--suite", suite, "Check names (default: all)")->delimiter(',');
  lemmas->add_option("--trials", trials, "Trials per check")->default_val(1000);
  lemmas->add_option("--seed", seed, "Seed");
  lemmas->add_option("--max-players", max_players, "Largest random instance")->check(CLI::Range(1, 24));
  lemmas->add_flag("--inject-failure", inject, "Add the harness self-test, which must fail");
  auto* replay_opt = lemmas->add_option("--replay", replay_trial, "Re-run one trial of a single check");

  auto* constructions = app.add_subcommand("constructions", "Instances where local learning or the grand coalition is rho times worse");
  constructions->add_option("--rho", rhos, "Ratios to exceed")->delimiter(',');

  auto* mc = app.add_subcommand("montecarlo", "Simulated per-player error against the closed form");
  mc->add_option("--instance", instance_path, "Instance JSON file")->required();
  mc->add_option("--partition", spec, "Groups such as \"0,2;1\" (default: grand coalition)");
  mc->add_option("--trials", trials, "Trials")->default_val(100000)->check(CLI::PositiveNumber);
  mc->add_option("--seed", seed, "Seed");
  mc->add_flag("--per-player-eps", per_player_eps, "Draw each player's noise variance from U(0, 2 mu_e)");

  auto* table1 = app.add_subcommand("reproduce-table1", "Three-player worked example with mu_e = 10, sigma2 = 1");

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  opts.format = format == "csv" ? Format::Csv : format == "json" ? Format::Json : Format::Table;
  if (budget_opt->count() > 0) opts.budget = budget;

  try {
    if (optimal->parsed()) return cmd_optimal(instance_path, oracle, opts, out);
    if (stability->parsed()) return cmd_stability(instance_path, spec, core, opts, out);
    if (poa->parsed()) {
      if (poa_sweep->count() > 0) return cmd_poa_sweep(sweep, seed, max_players, opts, out);
      if (poa_instance->count() == 0) throw ParseError("poa needs --instance or --sweep");
      return cmd_poa(instance_path, core, opts, out);
    }
    if (lemmas->parsed()) {
      std::optional<std::uint64_t> rt;
      if (replay_opt->count() > 0) rt = replay_trial;
      return cmd_lemmas(suite, trials, seed, max_players, inject, rt, opts, out);
    }
    if (constructions->parsed()) return cmd_constructions(rhos, opts, out);
    if (mc->parsed()) return cmd_montecarlo(instance_path, spec, trials, seed, per_player_eps, opts, out);
    if (table1->parsed()) return cmd_reproduce_table1(opts, out);
  } catch (const BudgetError& e) {
    err << "error: " << e.what() << '\n';
    return kExitBudget;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitCheckFailed;
  }
  return kExitUsage;
}

}  // namespace fedgame::cli
