#pragma once

// AgilityReport: every computed metric plus the parameters and input
// provenance, with a JSON document form and per-figure CSV plot data.
//
// JSON layout (field names are stable):
//
//   format, version
//   parameters   { epsilon, tau, lbt_mode, ee_variant, agi_sign,
//                  tt_tie_break, tt_candidates, infer_attacks, metrics[] }
//   provenance   { source, metric, input_orientation,
//                  horizon { start, end, offset, unit },
//                  defense { instants[], labels[], kind },
//                  attack  { instants[], labels[], kind } }   kind: observed|probable
//   series       { <name>: { metric, party, kind, samples[], summary } }
//                  name: gt|egt|tt|ee|rgi _ defender|attacker
//                  sample: { anchor, value, supplementary? }
//                  value: integer duration | real | "+inf" | "-inf" | null (indeterminate)
//   ratios       { egt_gt_defender, egt_gt_attacker }
//   lbt          { defender|attacker: { value, empty_lags[], skipped_entries } }
//   agi          { defender, attacker, duration, gains[ { index, width, gain } ] }
//   inference    { probable_attack_generations[] }
//
// Times are horizon-relative; add provenance.horizon.offset for the original
// clock.

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "agility/effectiveness.hpp"
#include "agility/ingestion.hpp"
#include "agility/timeliness.hpp"

namespace agility {

enum class Metric { GT, EGT, TT, LBT, EE, RGI, AGI };

enum class TtCandidates {
  EveryTimeUnit,        // every t' < t_i is a potential trigger
  OpponentGenerations,  // only the opponent's generation instants
};

struct RunParams {
  double epsilon = 0.12;
  double tau = 0.2;
  LbtMode lbt_mode = LbtMode::Strict;
  EeVariant ee_variant = EeVariant::FullHorizon;
  GainSign agi_sign = GainSign::Signed;
  TieBreak tie_break = TieBreak::MostRecent;
  TtCandidates tt_candidates = TtCandidates::EveryTimeUnit;
  bool infer_attacks = false;
  std::vector<Metric> metrics = all_metrics();

  static std::vector<Metric> all_metrics();
  bool wants(Metric m) const;
  // Throws PreconditionError on out-of-range epsilon/tau.
  void validate() const;
};

// "all" or a comma-separated subset of gt,egt,tt,lbt,ee,rgi,agi.
std::vector<Metric> parse_metric_selector(std::string_view text);

std::string_view to_string(Metric m);
std::string_view to_string(LbtMode m);
std::string_view to_string(EeVariant v);
std::string_view to_string(GainSign s);
std::string_view to_string(TieBreak t);
std::string_view to_string(TtCandidates c);

LbtMode parse_lbt_mode(std::string_view s);
EeVariant parse_ee_variant(std::string_view s);
GainSign parse_gain_sign(std::string_view s);
TieBreak parse_tie_break(std::string_view s);
TtCandidates parse_tt_candidates(std::string_view s);

struct Provenance {
  std::string source;
  std::string metric_name;
  Orientation input_orientation = Orientation::LargerIsBetter;
  TimeHorizon horizon;
  GenerationTimeline defense;
  GenerationTimeline attack;
};

struct AgilityReport {
  RunParams params;
  Provenance provenance;
  std::map<std::string, SampleSeries> series;
  std::map<std::string, LbtResult> lbt;  // "defender", "attacker"
  std::optional<AgiResult> agi;
  std::vector<Time> probable_attack_generations;
};

// Main computation path: normalizes the matrix, optionally replaces the
// attack timeline with inferred probable generations, then evaluates the
// selected metrics.
AgilityReport compute_report(const MatrixFile& input, const RunParams& params,
                             std::string source = {});

// Field-by-field comparison; integers and sentinels must match exactly,
// reals within `tolerance`. Returns one line per difference.
std::vector<std::string> compare_reports(const AgilityReport& expected,
                                         const AgilityReport& actual, double tolerance = 1e-12);

std::string report_to_json(const AgilityReport& report);
AgilityReport report_from_json(std::string_view text);

enum class ReportFormat { StructuredReport, PlotData };

// StructuredReport writes <dir>/report.json. PlotData writes one CSV per
// figure shape and needs the normalized matrix for the curve files.
// Returns the files written; throws IoError when the destination is unusable.
std::vector<std::filesystem::path> export_report(const AgilityReport& report,
                                                 const EffectivenessMatrix& normalized,
                                                 ReportFormat format,
                                                 const std::filesystem::path& dir);

}  // namespace agility
