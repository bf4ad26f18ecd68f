// Copyright 2026 The randworlds Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// randworlds: degree-of-belief computation over possible worlds.
//
//   randworlds validate KB.rwkb
//   randworlds belief KB.rwkb "Copy(xd)" [--method auto] [--N 40] [--tau 1/20]
//   randworlds converge KB.rwkb "Copy(xd)" [--schedule 10,20,40] [--out csv]
//   randworlds scenario (mistress|irr|naf) CONFIG.json [--check]
//
// Exit codes: 0 success, 1 runtime error, 2 parse error, 3 validation
// error, 4 unsatisfiable KB, 5 counterexample found under --check.

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "randworlds/direct.hpp"
#include "randworlds/dsl.hpp"
#include "randworlds/engine.hpp"
#include "randworlds/scenarios.hpp"

namespace {

using namespace randworlds;

constexpr const char* kVersion = "0.1.0";

enum ExitCode {
  kOk = 0,
  kRuntime = 1,
  kParse = 2,
  kValidation = 3,
  kUnsatisfiable = 4,
  kCounterexample = 5,
};

struct InputFile {
  std::string path;
  std::string content;
  std::uint64_t hash = 0;
};

// FNV-1a; stable across platforms, good enough to fingerprint inputs.
std::uint64_t fnv1a(const std::string& data) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::optional<InputFile> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buffer;
  buffer << in.rdbuf();
  InputFile file{path, buffer.str(), 0};
  file.hash = fnv1a(file.content);
  return file;
}

std::string hex64(std::uint64_t value) {
  std::ostringstream out;
  out << std::hex << value;
  return out.str();
}

struct Options {
  std::vector<InputFile> inputs;
  std::string command_line;
  std::uint64_t seed = 0;
  bool no_timestamp = false;
  std::string out_path;
  std::vector<int> schedule_ns;
};

nlohmann::json manifest(const Options& opts) {
  nlohmann::json m;
  m["command"] = opts.command_line;
  m["tool_version"] = kVersion;
  m["seed"] = opts.seed;
  nlohmann::json files = nlohmann::json::array();
  for (const InputFile& f : opts.inputs) {
    files.push_back({{"path", f.path}, {"fnv1a64", hex64(f.hash)}});
  }
  m["inputs"] = files;
  if (!opts.schedule_ns.empty()) m["schedule"] = opts.schedule_ns;
  if (!opts.no_timestamp) {
    std::time_t now = std::chrono::system_clock::to_time_t(
        std::chrono::system_clock::now());
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%FT%TZ", std::gmtime(&now));
    m["timestamp"] = stamp;
  }
  return m;
}

void emit(const nlohmann::json& report, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << report.dump(2) << "\n";
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot write '" + out_path + "'");
  out << report.dump(2) << "\n";
}

void emit_text(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot write '" + out_path + "'");
  out << text;
}

std::uint64_t iteration_budget() {
  if (const char* env = std::getenv("RANDWORLDS_BUDGET")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw std::runtime_error("RANDWORLDS_BUDGET is not a number");
    }
  }
  return kDefaultIterationBudget;
}

Rational parse_rational_arg(const std::string& text, const std::string& what) {
  auto value = parse_rational(text);
  if (!value) throw std::runtime_error("malformed " + what + " '" + text + "'");
  return *value;
}

int report_parse_errors(const ParseResult& result, const std::string& path) {
  for (const ParseError& err : result.errors) {
    std::cerr << path << ":" << err.span.line << ":" << err.span.column << ": "
              << err.message;
    if (!err.expected.empty()) std::cerr << " (expected " << err.expected << ")";
    std::cerr << "\n";
  }
  if (!result.errors.empty()) return kParse;
  for (const Violation& v : result.validation.violations) {
    std::cerr << path << ": " << v.message << "\n";
  }
  return result.validation.ok() ? kOk : kValidation;
}

struct LoadedKb {
  KnowledgeBase kb;
  std::vector<SourceSpan> spans;
};

// Parses and validates, exiting through the return code on failure.
std::optional<LoadedKb> load_kb(Options& opts, const std::string& path,
                                int& exit_code) {
  auto file = read_file(path);
  if (!file) {
    std::cerr << "cannot read '" << path << "'\n";
    exit_code = kRuntime;
    return std::nullopt;
  }
  opts.inputs.push_back(*file);
  ParseResult result = parse_kb(file->content);
  int status = report_parse_errors(result, path);
  if (status != kOk) {
    exit_code = status;
    return std::nullopt;
  }
  return LoadedKb{*result.kb, result.constraint_spans};
}

int cmd_validate(Options& opts, const std::string& kb_path) {
  int exit_code = kOk;
  auto loaded = load_kb(opts, kb_path, exit_code);
  if (!loaded) return exit_code;
  nlohmann::json report;
  report["ok"] = true;
  report["predicates"] = loaded->kb.vocabulary.size();
  report["constants"] = loaded->kb.constants.size();
  report["rules"] = loaded->kb.rules.size();
  report["constraints"] = loaded->kb.constraints.size();
  report["facts"] = loaded->kb.facts.size();
  report["manifest"] = manifest(opts);
  emit(report, opts.out_path);
  return kOk;
}

ToleranceSpec taus_for(const KnowledgeBase& kb, const Rational& tau) {
  return ToleranceSpec::uniform(tau, kb.max_tolerance_index() + 1);
}

int cmd_belief(Options& opts, const std::string& kb_path,
               const std::string& query_text, const std::string& method,
               int N, const std::string& tau_text, std::uint64_t samples) {
  int exit_code = kOk;
  auto loaded = load_kb(opts, kb_path, exit_code);
  if (!loaded) return exit_code;
  const KnowledgeBase& kb = loaded->kb;

  QueryParseResult parsed_query = parse_query(query_text, kb);
  if (!parsed_query.ok()) {
    for (const ParseError& err : parsed_query.errors) {
      std::cerr << "query: " << err.message << "\n";
    }
    return kParse;
  }
  const Query& query = *parsed_query.query;
  Rational tau = parse_rational_arg(tau_text, "tolerance");
  ToleranceSpec taus = taus_for(kb, tau);

  nlohmann::json report;
  try {
    if (method == "direct" || method == "auto") {
      DirectInferenceResult direct = resolve(kb, query);
      if (direct.status == ResolveStatus::NotApplicable) {
        // No reference class matches the query itself; try the total
        // probability split through a rule consequent (query => pivot).
        for (const UniversalRule& rule : kb.rules) {
          if (rule.antecedent != query.target) continue;
          DirectInferenceResult split =
              total_probability_split(kb, query, rule.consequent);
          if (split.resolved()) {
            direct = split;
            break;
          }
        }
      }
      if (direct.resolved()) {
        report["method"] = "direct";
        report["result"] = result_to_json(direct, kb, &loaded->spans);
        report["manifest"] = manifest(opts);
        emit(report, opts.out_path);
        return kOk;
      }
      if (method == "direct") {
        std::cerr << "direct inference " << resolve_status_name(direct.status)
                  << ": " << direct.note << "\n";
        return kRuntime;
      }
      report["direct_fallback"] = resolve_status_name(direct.status);
    }
    if (method == "exact" || method == "auto") {
      BeliefEstimate estimate = belief(kb, query, N, taus, iteration_budget());
      report["method"] = "exact";
      report["result"] = belief_to_json(estimate);
      report["manifest"] = manifest(opts);
      emit(report, opts.out_path);
      return kOk;
    }
    if (method == "mc") {
      BeliefEstimate estimate = sample_belief(kb, query, N, taus, samples,
                                              opts.seed);
      report["method"] = "mc";
      report["result"] = belief_to_json(estimate);
      report["manifest"] = manifest(opts);
      emit(report, opts.out_path);
      return kOk;
    }
    std::cerr << "unknown method '" << method << "'\n";
    return kRuntime;
  } catch (const UnsatisfiableKb& e) {
    std::cerr << e.what() << "\n";
    return kUnsatisfiable;
  } catch (const BudgetExceeded& e) {
    std::cerr << e.what() << "\n";
    if (method == "auto") {
      std::cerr << "auto refuses to fall back to sampling; rerun with "
                   "--method mc to opt in\n";
    }
    return kRuntime;
  }
}

int cmd_converge(Options& opts, const std::string& kb_path,
                 const std::string& query_text, const std::string& tau_text,
                 const std::string& out_format) {
  int exit_code = kOk;
  auto loaded = load_kb(opts, kb_path, exit_code);
  if (!loaded) return exit_code;
  const KnowledgeBase& kb = loaded->kb;

  QueryParseResult parsed_query = parse_query(query_text, kb);
  if (!parsed_query.ok()) {
    for (const ParseError& err : parsed_query.errors) {
      std::cerr << "query: " << err.message << "\n";
    }
    return kParse;
  }

  std::vector<SchedulePoint> schedule;
  if (opts.schedule_ns.empty()) {
    schedule = default_schedule(kb);
    for (const SchedulePoint& p : schedule) opts.schedule_ns.push_back(p.N);
  } else {
    Rational tau = parse_rational_arg(tau_text, "tolerance");
    schedule = uniform_schedule(opts.schedule_ns, tau,
                                kb.max_tolerance_index() + 1);
  }

  ConvergenceReport report =
      converge(kb, *parsed_query.query, schedule, iteration_budget());
  if (out_format == "csv") {
    emit_text(convergence_csv(report), opts.out_path);
  } else {
    nlohmann::json j = convergence_json(report);
    j["manifest"] = manifest(opts);
    emit(j, opts.out_path);
  }
  return kOk;
}

nlohmann::json mistress_table() {
  nlohmann::json rows = nlohmann::json::array();
  const Query query{"Jane", Conjunction({{"Murderer", false}})};
  const std::pair<MistressVariant, const char*> variants[] = {
      {MistressVariant::Basic, "basic"},
      {MistressVariant::Extended, "extended"},
      {MistressVariant::NoApartment, "no_apartment"},
      {MistressVariant::SmokingGun, "smoking_gun"},
  };
  for (const auto& [variant, name] : variants) {
    KnowledgeBase kb = build_mistress_kb(variant);
    DirectInferenceResult r = resolve(kb, query);
    nlohmann::json row = result_to_json(r, kb);
    row["variant"] = name;
    rows.push_back(row);
  }
  return rows;
}

int cmd_scenario(Options& opts, const std::string& kind,
                 const std::string& config_path, bool check) {
  nlohmann::json config;
  if (!config_path.empty()) {
    auto file = read_file(config_path);
    if (!file) {
      std::cerr << "cannot read '" << config_path << "'\n";
      return kRuntime;
    }
    opts.inputs.push_back(*file);
    config = nlohmann::json::parse(file->content, nullptr, false);
    if (config.is_discarded()) {
      std::cerr << config_path << ": malformed JSON\n";
      return kParse;
    }
  }

  nlohmann::json report;
  bool failed_check = false;

  if (kind == "mistress") {
    report["variants"] = mistress_table();
    for (const auto& row : report["variants"]) {
      if (row["status"] != "resolved") failed_check = true;
    }
  } else if (kind == "irr") {
    IrrConfig irr = irr_config_from_json(config);
    Prop1Report prop1 = check_prop1(irr);
    report = prop1_to_json(prop1);
    nlohmann::json beliefs = nlohmann::json::array();
    for (std::size_t i = 1; i <= irr.n(); ++i) {
      for (std::size_t j = 1; j <= irr.m(); ++j) {
        beliefs.push_back({{"similarity_level", i},
                           {"evidence_category", j},
                           {"copy_belief", format_rational(irr_belief(irr, i, j))}});
      }
    }
    report["beliefs"] = beliefs;
    failed_check = !prop1.ok();
  } else if (kind == "naf") {
    if (config.contains("outcomes")) {
      OutcomeModel model = outcome_model_from_json(config);
      AuditReport audit = naf_audit(model);
      report = audit_to_json(audit);
      failed_check = !audit.ok();
    } else {
      NafConfig naf = naf_config_from_json(config);
      nlohmann::json bounds = nlohmann::json::array();
      for (std::size_t i = 1; i <= naf.levels(); ++i) {
        bounds.push_back({{"similarity_level", i},
                          {"copy_bound", format_rational(naf_copy_bound(naf, i))}});
      }
      report["gamma"] = format_rational(naf.gamma_value());
      report["ceiling"] = format_rational(
          Gamma_from_gamma(naf.gamma_value(), naf.delta));
      report["copy_bounds"] = bounds;
      std::vector<Rational> epsilons, deltas;
      for (int i = 1; i <= 8; ++i) epsilons.push_back(naf.epsilon * i / 4);
      for (int d = 0; d <= 8; ++d) deltas.push_back(Rational(d, 8));
      Prop2Report prop2 = check_prop2(epsilons, deltas, naf.gamma_spec);
      report["prop2"] = prop2_to_json(prop2);
      failed_check = !prop2.ok();
    }
  } else {
    std::cerr << "unknown scenario kind '" << kind << "'\n";
    return kRuntime;
  }

  report["manifest"] = manifest(opts);
  emit(report, opts.out_path);
  if (check && failed_check) return kCounterexample;
  return kOk;
}

std::string join_args(int argc, char** argv) {
  std::ostringstream out;
  for (int i = 0; i < argc; ++i) {
    if (i > 0) out << " ";
    out << argv[i];
  }
  return out.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"degree-of-belief computation over possible worlds"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  Options opts;
  opts.command_line = join_args(argc, argv);

  std::string kb_path, query_text, config_path, kind;
  std::string method = "auto", tau_text = "1/20", out_format = "json";
  int N = 40;
  std::uint64_t samples = 100000;
  bool check = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--out", opts.out_path, "write the report to a file");
    cmd->add_flag("--no-timestamp", opts.no_timestamp,
                  "omit the timestamp for byte-stable output");
  };

  CLI::App* validate = app.add_subcommand("validate", "parse and validate a KB");
  validate->add_option("kb", kb_path, "path to a .rwkb file")->required();
  add_common(validate);

  CLI::App* belief_cmd =
      app.add_subcommand("belief", "compute a degree of belief");
  belief_cmd->add_option("kb", kb_path)->required();
  belief_cmd->add_option("query", query_text, "e.g. \"Copy(xd)\"")->required();
  belief_cmd->add_option("--method", method, "exact|mc|direct|auto")
      ->check(CLI::IsMember({"exact", "mc", "direct", "auto"}));
  belief_cmd->add_option("--N", N, "domain size for enumeration/sampling");
  belief_cmd->add_option("--tau", tau_text, "tolerance, e.g. 1/20");
  belief_cmd->add_option("--samples", samples, "Monte Carlo sample count");
  belief_cmd->add_option("--seed", opts.seed, "RNG seed (default 0)");
  add_common(belief_cmd);

  CLI::App* converge_cmd =
      app.add_subcommand("converge", "run a belief over a growing-N schedule");
  converge_cmd->add_option("kb", kb_path)->required();
  converge_cmd->add_option("query", query_text)->required();
  converge_cmd->add_option("--schedule", opts.schedule_ns,
                           "domain sizes, e.g. --schedule 10 20 40");
  converge_cmd->add_option("--tau", tau_text, "tolerance for --schedule runs");
  converge_cmd
      ->add_option("--format", out_format, "json|csv")
      ->check(CLI::IsMember({"json", "csv"}));
  add_common(converge_cmd);

  CLI::App* scenario_cmd =
      app.add_subcommand("scenario", "run a packaged analysis");
  scenario_cmd->add_option("kind", kind, "mistress|irr|naf")->required();
  scenario_cmd->add_option("config", config_path, "JSON config path");
  scenario_cmd->add_flag("--check", check,
                         "exit 5 when the analysis finds a counterexample");
  add_common(scenario_cmd);

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate->parsed()) return cmd_validate(opts, kb_path);
    if (belief_cmd->parsed()) {
      return cmd_belief(opts, kb_path, query_text, method, N, tau_text, samples);
    }
    if (converge_cmd->parsed()) {
      return cmd_converge(opts, kb_path, query_text, tau_text, out_format);
    }
    if (scenario_cmd->parsed()) {
      return cmd_scenario(opts, kind, config_path, check);
    }
  } catch (const NoAcceptedSamples& e) {
    std::cerr << e.what() << "\n";
    return kUnsatisfiable;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kRuntime;
  }
  return kRuntime;
}
