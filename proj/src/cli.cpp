#include "agility/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "agility/error.hpp"
#include "agility/inference.hpp"
#include "agility/ingestion.hpp"
#include "agility/oracle.hpp"
#include "agility/report.hpp"
#include "agility/scenario.hpp"

namespace agility {
namespace {

namespace fs = std::filesystem;

// Raw string flags, converted after parsing so bad values surface as usage
// errors with the accepted spellings.
struct RunFlags {
  double epsilon = 0.12;
  double tau = 0.2;
  std::string lbt_mode = "strict";
  std::string ee_variant = "full-horizon";
  std::string agi_sign = "signed";
  std::string tie_break = "most-recent";
  std::string tt_candidates = "every-time-unit";
  std::string metrics = "all";
  bool infer_attacks = false;

  RunParams to_params() const {
    RunParams p;
    p.epsilon = epsilon;
    p.tau = tau;
    p.lbt_mode = parse_lbt_mode(lbt_mode);
    p.ee_variant = parse_ee_variant(ee_variant);
    p.agi_sign = parse_gain_sign(agi_sign);
    p.tie_break = parse_tie_break(tie_break);
    p.tt_candidates = parse_tt_candidates(tt_candidates);
    p.metrics = parse_metric_selector(metrics);
    p.infer_attacks = infer_attacks;
    p.validate();
    return p;
  }
};

void add_run_flags(CLI::App* app, RunFlags& f) {
  app->add_option("--epsilon", f.epsilon, "LBT acceptance threshold in [0,1]")
      ->capture_default_str();
  app->add_option("--tau", f.tau, "probable-generation threshold in (0,1)")
      ->capture_default_str();
  app->add_option("--lbt-mode", f.lbt_mode, "strict|averaged")->capture_default_str();
  app->add_option("--ee-variant", f.ee_variant, "full-horizon|from-generation")
      ->capture_default_str();
  app->add_option("--agi-sign", f.agi_sign, "signed|printed")->capture_default_str();
  app->add_option("--tie-break", f.tie_break, "TT tie rule: most-recent|earliest")
      ->capture_default_str();
  app->add_option("--tt-candidates", f.tt_candidates,
                  "TT trigger pool: every-time-unit|opponent-generations")
      ->capture_default_str();
  app->add_option("--metrics", f.metrics, "all, or a subset of gt,egt,tt,lbt,ee,rgi,agi")
      ->capture_default_str();
  app->add_flag("--infer-attacks", f.infer_attacks,
                "replace the attack timeline with probable generations at --tau");
}

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

RunParams checked_params(const RunFlags& f) {
  try {
    return f.to_params();
  } catch (const PreconditionError& e) {
    throw UsageError(e.what());
  }
}

std::string show(const SampleValue& v) {
  if (const auto* mv = std::get_if<MetricValue>(&v)) return mv->to_string();
  if (const auto* r = std::get_if<double>(&v)) return format_double(*r);
  return "?";
}

void print_summary(std::ostream& out, const AgilityReport& r) {
  const auto& h = r.provenance.horizon;
  out << "source: " << r.provenance.source << " (" << r.provenance.metric_name << ", T=" << h.end
      << ' ' << h.unit_label << ", offset " << h.offset << ")\n";
  for (const auto& [key, s] : r.series) {
    out << key << ':';
    for (const auto& sample : s.samples) {
      out << ' ' << show(sample.value) << (sample.supplementary ? "*" : "");
    }
    out << '\n';
  }
  for (const auto& [key, l] : r.lbt) out << "lbt_" << key << ": " << l.value.to_string() << '\n';
  if (r.agi) {
    out << "agi_defender: " << (r.agi->agi ? format_double(*r.agi->agi) : "?") << '\n';
  }
  out << "probable_attack_generations:";
  for (const Time t : r.probable_attack_generations) out << ' ' << t;
  out << '\n';
}

std::string join(const std::vector<Time>& ts, Time offset) {
  std::string s;
  for (std::size_t i = 0; i < ts.size(); ++i) s += (i ? "," : "") + std::to_string(ts[i] + offset);
  return s;
}

std::vector<Time> parse_time_list(const std::string& text) {
  std::vector<Time> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoll(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw UsageError("bad time '" + item + "' in list");
    }
  }
  return out;
}

// ---- subcommands ---------------------------------------------------------

int cmd_compute(const std::string& matrix_path, const std::string& out_dir, const RunFlags& flags,
                std::ostream& out) {
  const RunParams params = checked_params(flags);
  const MatrixFile input = parse_matrix_csv(fs::path(matrix_path));
  const AgilityReport report = compute_report(input, params, matrix_path);
  const auto normalized = normalize_orientation(input.matrix);
  auto files = export_report(report, normalized, ReportFormat::StructuredReport, out_dir);
  const auto plots = export_report(report, normalized, ReportFormat::PlotData, out_dir);
  files.insert(files.end(), plots.begin(), plots.end());
  print_summary(out, report);
  for (const auto& f : files) out << "wrote " << f.string() << '\n';
  return kExitOk;
}

int cmd_ingest(const std::string& log_path, const std::string& out_path,
               const std::string& attack_gens, double tau, std::ostream& out) {
  if (!(tau > 0.0 && tau < 1.0)) throw UsageError("--tau must lie in (0,1)");
  const auto records = parse_alert_log(fs::path(log_path));
  auto built = build_matrix_from_alert_log(records);
  const Time offset = built.matrix.horizon().offset;

  GenerationTimeline attack;
  attack.party = Party::Attacker;
  if (attack_gens == "infer") {
    InferenceParams ip;
    ip.tau = tau;
    attack = infer_attack_generations(built.matrix, ip);
  } else if (attack_gens == "all") {
    attack.instants = built.attack_times;
  } else {
    for (const Time t : parse_time_list(attack_gens)) attack.instants.push_back(t - offset);
  }

  MatrixFile file{std::move(built.matrix), std::move(built.defense), std::move(attack)};
  const auto check = validate_inputs(file.matrix, {file.defense, file.attack});
  if (!check.ok()) throw ValidationError(check.messages());
  write_matrix_csv(fs::path(out_path), file);
  out << "defense generations: " << join(file.defense.instants, offset) << '\n'
      << "attack generations" << (file.attack.probable ? " (probable)" : "") << ": "
      << join(file.attack.instants, offset) << '\n'
      << "wrote " << out_path << '\n';
  return kExitOk;
}

int cmd_infer(const std::string& matrix_path, double tau, const std::string& candidates,
              const std::string& out_path, const std::string& update_path, std::ostream& out) {
  if (!(tau > 0.0 && tau < 1.0)) throw UsageError("--tau must lie in (0,1)");
  MatrixFile input = parse_matrix_csv(fs::path(matrix_path));
  const auto normalized = normalize_orientation(input.matrix);
  const Time offset = normalized.horizon().offset;

  InferenceParams ip;
  ip.tau = tau;
  if (candidates != "every") {
    ip.granularity = CandidateGranularity::ProvidedList;
    for (const Time t : parse_time_list(candidates)) ip.candidates.push_back(t - offset);
  }
  const auto inferred = infer_attack_generations(normalized, ip);

  std::ostringstream text;
  text << "# probable attack generations, tau=" << format_double(tau) << '\n'
       << "generation,time\n";
  for (std::size_t i = 0; i < inferred.instants.size(); ++i) {
    text << i << ',' << inferred.instants[i] + offset << '\n';
  }
  if (out_path.empty() || out_path == "-") {
    out << text.str();
  } else {
    std::ofstream f(out_path, std::ios::binary | std::ios::trunc);
    if (!f || !(f << text.str())) throw IoError("cannot write '" + out_path + "'");
    out << "wrote " << out_path << '\n';
  }
  if (!update_path.empty()) {
    input.attack = inferred;
    write_matrix_csv(fs::path(update_path), input);
    out << "wrote " << update_path << '\n';
  }
  return kExitOk;
}

struct SimFlags {
  std::string config_path;
  Time horizon = 0;
  double defense_rate = 0, attack_rate = 0, magnitude = 0, missing = 0, noise = 0;
  std::string model;
  std::uint64_t seed = 0;
  std::size_t count = 1;
  std::size_t threads = 0;
  std::string out_dir = "scenarios";
};

int cmd_simulate(const SimFlags& f, const CLI::App& app, std::ostream& out) {
  ScenarioConfig c;
  if (!f.config_path.empty()) c = parse_scenario_config(fs::path(f.config_path));
  if (app.count("--horizon")) c.horizon_length = f.horizon;
  if (app.count("--defense-rate")) c.defense_gen_rate = f.defense_rate;
  if (app.count("--attack-rate")) c.attack_gen_rate = f.attack_rate;
  if (app.count("--magnitude")) c.gen_effect_magnitude = f.magnitude;
  if (app.count("--missing")) c.missing_fraction = f.missing;
  if (app.count("--noise")) c.noise = f.noise;
  if (app.count("--seed")) c.seed = f.seed;
  try {
    if (app.count("--model")) c.model = parse_effectiveness_model(f.model);
    c.validate();
  } catch (const PreconditionError& e) {
    throw UsageError(e.what());
  }
  if (f.count == 0) throw UsageError("--count must be positive");

  const auto scenarios = generate_batch(c, f.count, f.threads);
  std::error_code ec;
  fs::create_directories(f.out_dir, ec);
  if (ec) throw IoError("cannot create '" + f.out_dir + "'");

  const fs::path cfg = fs::path(f.out_dir) / "scenario.cfg";
  {
    std::ofstream os(cfg, std::ios::binary | std::ios::trunc);
    if (!os || !(os << scenario_config_to_text(c))) throw IoError("cannot write " + cfg.string());
  }
  out << "wrote " << cfg.string() << '\n';
  for (std::size_t i = 0; i < scenarios.size(); ++i) {
    std::ostringstream name;
    name << "scenario_" << (c.seed + i) << ".csv";
    const fs::path p = fs::path(f.out_dir) / name.str();
    write_matrix_csv(p, scenarios[i]);
    out << "wrote " << p.string() << '\n';
  }
  return kExitOk;
}

struct OracleFlags {
  std::string matrix_path;
  std::size_t random = 0;
  std::uint64_t seed = 1;
  Time horizon = 10;
  double missing = 0.2;
};

int cmd_oracle(const OracleFlags& f, const RunFlags& flags, std::ostream& out, std::ostream& err) {
  const RunParams params = checked_params(flags);
  if (f.matrix_path.empty() == (f.random == 0)) {
    throw UsageError("give exactly one of --matrix or --random");
  }

  auto check = [&](const MatrixFile& input, const std::string& name) {
    const auto main_path = compute_report(input, params, name);
    const auto reference = oracle_metrics(input.matrix, input.defense, input.attack, params, name);
    const auto diffs = compare_reports(reference, main_path);
    for (const auto& d : diffs) err << name << ": " << d << '\n';
    return diffs.empty();
  };

  if (!f.matrix_path.empty()) {
    const bool ok = check(parse_matrix_csv(fs::path(f.matrix_path)), f.matrix_path);
    out << (ok ? "match" : "MISMATCH") << ": " << f.matrix_path << '\n';
    return ok ? kExitOk : kExitMismatch;
  }

  if (f.horizon < 1 || f.horizon > kOracleMaxHorizonEnd) {
    throw UsageError("--horizon must lie in [1," + std::to_string(kOracleMaxHorizonEnd) + "]");
  }
  std::size_t failed = 0;
  constexpr EffectivenessModel models[] = {EffectivenessModel::StepResponse,
                                           EffectivenessModel::Drift,
                                           EffectivenessModel::Stalemate};
  for (std::size_t i = 0; i < f.random; ++i) {
    ScenarioConfig c;
    c.horizon_length = f.horizon;
    c.defense_gen_rate = 2.5;
    c.attack_gen_rate = 2.5;
    c.model = models[i % 3];
    c.gen_effect_magnitude = 0.15;
    c.missing_fraction = f.missing;
    c.noise = 0.1;
    c.seed = f.seed + i;
    try {
      c.validate();
    } catch (const PreconditionError& e) {
      throw UsageError(e.what());
    }
    if (!check(generate_scenario(c), "seed " + std::to_string(c.seed))) ++failed;
  }
  out << (f.random - failed) << '/' << f.random << " scenarios match\n";
  return failed == 0 ? kExitOk : kExitMismatch;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cyber-agility metrics over attack/defense generation timelines", "agility"};
  app.require_subcommand(1);

  std::string matrix_path, out_dir = "report";
  RunFlags compute_flags;
  auto* compute = app.add_subcommand("compute", "matrix file -> report.json and plot CSVs");
  compute->add_option("--matrix", matrix_path, "matrix file")->required();
  compute->add_option("--out-dir", out_dir, "output directory")->capture_default_str();
  add_run_flags(compute, compute_flags);

  std::string log_path, ingest_out = "matrix.csv", attack_gens = "infer";
  double ingest_tau = 0.2;
  auto* ingest = app.add_subcommand("ingest", "alert log -> matrix file");
  ingest->add_option("--alert-log", log_path, "alert log CSV")->required();
  ingest->add_option("--out", ingest_out, "matrix file to write")->capture_default_str();
  ingest->add_option("--attack-gens", attack_gens,
                     "infer (probable generations at --tau), all (every attack time) or a "
                     "comma-separated list")
      ->capture_default_str();
  ingest->add_option("--tau", ingest_tau, "threshold used by --attack-gens infer")
      ->capture_default_str();

  std::string infer_matrix, infer_out = "-", update_path, candidates = "every";
  double infer_tau = 0.2;
  auto* infer = app.add_subcommand("infer", "matrix -> probable attack timeline");
  infer->add_option("--matrix", infer_matrix, "matrix file")->required();
  infer->add_option("--tau", infer_tau, "threshold in (0,1)")->capture_default_str();
  infer->add_option("--candidates", candidates, "every, or a comma-separated list of times")
      ->capture_default_str();
  infer->add_option("--out", infer_out, "timeline CSV ('-' for stdout)")->capture_default_str();
  infer->add_option("--update-matrix", update_path,
                    "also write the matrix with the inferred attack timeline");

  SimFlags sim;
  auto* simulate = app.add_subcommand("simulate", "scenario config -> matrix files");
  simulate->add_option("--config", sim.config_path, "key=value scenario config");
  simulate->add_option("--horizon", sim.horizon, "horizon length T (default 50)");
  simulate->add_option("--defense-rate", sim.defense_rate, "mean defense gap (default 5)");
  simulate->add_option("--attack-rate", sim.attack_rate, "mean attack gap (default 5)");
  simulate->add_option("--model", sim.model, "step-response|drift|stalemate (default step-response)");
  simulate->add_option("--magnitude", sim.magnitude, "per-generation effect (default 0.1)");
  simulate->add_option("--missing", sim.missing, "fraction of masked cells (default 0)");
  simulate->add_option("--noise", sim.noise, "per-block noise half-width (default 0)");
  simulate->add_option("--seed", sim.seed, "seed; scenario i uses seed + i (default 1)");
  simulate->add_option("--count", sim.count, "number of scenarios")->capture_default_str();
  simulate->add_option("--threads", sim.threads, "worker threads, 0 = all cores")
      ->capture_default_str();
  simulate->add_option("--out-dir", sim.out_dir, "output directory")->capture_default_str();

  OracleFlags of;
  RunFlags oracle_flags;
  auto* oracle = app.add_subcommand("oracle", "cross-check main path against brute force");
  oracle->add_option("--matrix", of.matrix_path, "matrix file (T <= 50)");
  oracle->add_option("--random", of.random, "number of random scenarios instead of a file");
  oracle->add_option("--seed", of.seed, "first seed for --random")->capture_default_str();
  oracle->add_option("--horizon", of.horizon, "T for --random")->capture_default_str();
  oracle->add_option("--missing", of.missing, "missing fraction for --random")
      ->capture_default_str();
  add_run_flags(oracle, oracle_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*compute) return cmd_compute(matrix_path, out_dir, compute_flags, out);
    if (*ingest) return cmd_ingest(log_path, ingest_out, attack_gens, ingest_tau, out);
    if (*infer) return cmd_infer(infer_matrix, infer_tau, candidates, infer_out, update_path, out);
    if (*simulate) return cmd_simulate(sim, *simulate, out);
    if (*oracle) return cmd_oracle(of, oracle_flags, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ValidationError& e) {
    err << "invalid input: " << e.violations().size() << " violation(s)\n";
    for (const auto& v : e.violations()) err << "  " << v << '\n';
    return kExitInvalidInput;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << '\n';
    return kExitIo;
  } catch (const Error& e) {
    err << "invalid input: " << e.what() << '\n';
    return kExitInvalidInput;
  }
  return kExitUsage;
}

}  // namespace agility
