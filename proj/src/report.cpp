#include "agility/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "agility/error.hpp"
#include "agility/inference.hpp"

namespace agility {
namespace {

using Json = nlohmann::ordered_json;

constexpr std::string_view kFormat = "agility-report";
constexpr int kVersion = 1;

template <typename E, std::size_t N>
E parse_enum(std::string_view s, const std::pair<std::string_view, E> (&table)[N],
             std::string_view what) {
  for (const auto& [name, value] : table) {
    if (name == s) return value;
  }
  std::string choices;
  for (const auto& [name, value] : table) choices += (choices.empty() ? "" : "|") + std::string(name);
  throw PreconditionError("unknown " + std::string(what) + " '" + std::string(s) + "' (" +
                          choices + ")");
}

template <typename E, std::size_t N>
std::string_view enum_name(E v, const std::pair<std::string_view, E> (&table)[N]) {
  for (const auto& [name, value] : table) {
    if (value == v) return name;
  }
  return "?";
}

constexpr std::pair<std::string_view, Metric> kMetrics[] = {
    {"gt", Metric::GT},   {"egt", Metric::EGT}, {"tt", Metric::TT},  {"lbt", Metric::LBT},
    {"ee", Metric::EE},   {"rgi", Metric::RGI}, {"agi", Metric::AGI},
};
constexpr std::pair<std::string_view, LbtMode> kLbtModes[] = {
    {"strict", LbtMode::Strict}, {"averaged", LbtMode::AveragedRelaxation}};
constexpr std::pair<std::string_view, EeVariant> kEeVariants[] = {
    {"full-horizon", EeVariant::FullHorizon}, {"from-generation", EeVariant::FromGeneration}};
constexpr std::pair<std::string_view, GainSign> kGainSigns[] = {{"signed", GainSign::Signed},
                                                                {"printed", GainSign::Printed}};
constexpr std::pair<std::string_view, TieBreak> kTieBreaks[] = {
    {"most-recent", TieBreak::MostRecent}, {"earliest", TieBreak::Earliest}};
constexpr std::pair<std::string_view, TtCandidates> kTtCandidates[] = {
    {"every-time-unit", TtCandidates::EveryTimeUnit},
    {"opponent-generations", TtCandidates::OpponentGenerations}};
constexpr std::pair<std::string_view, Party> kParties[] = {{"defender", Party::Defender},
                                                           {"attacker", Party::Attacker}};
constexpr std::pair<std::string_view, Orientation> kOrientations[] = {
    {"larger", Orientation::LargerIsBetter}, {"smaller", Orientation::SmallerIsBetter}};
constexpr std::pair<std::string_view, ValueKind> kValueKinds[] = {
    {"duration", ValueKind::Duration}, {"real", ValueKind::Real}};

std::string series_key(std::string_view metric, Party p) {
  return std::string(metric) + "_" + std::string(to_string(p));
}

SampleSeries empty_series(std::string name, Party party, ValueKind kind) {
  return SampleSeries{std::move(name), party, kind, {}};
}

std::vector<Time> every_unit(Time end) {
  std::vector<Time> out;
  for (Time t = 0; t <= end; ++t) out.push_back(t);
  return out;
}

// ---- JSON encoding -------------------------------------------------------

Json encode_value(const SampleValue& v) {
  if (const auto* mv = std::get_if<MetricValue>(&v)) {
    if (mv->is_finite()) return mv->duration();
    return mv->to_string();
  }
  if (const auto* r = std::get_if<double>(&v)) return *r;
  return nullptr;
}

SampleValue decode_value(const Json& j, ValueKind kind) {
  if (j.is_null()) return Indeterminate{};
  if (j.is_string()) return MetricValue::parse(j.get<std::string>());
  if (kind == ValueKind::Real) return j.get<double>();
  return MetricValue::finite(j.get<Time>());
}

Json encode_optional(const std::optional<double>& v) {
  if (v) return *v;
  return nullptr;
}

Json encode_timeline(const GenerationTimeline& tl) {
  Json j;
  j["instants"] = tl.instants;
  j["labels"] = tl.labels;
  j["kind"] = tl.probable ? "probable" : "observed";
  return j;
}

GenerationTimeline decode_timeline(const Json& j, Party party) {
  GenerationTimeline tl;
  tl.party = party;
  tl.instants = j.at("instants").get<std::vector<Time>>();
  tl.labels = j.at("labels").get<std::vector<std::string>>();
  tl.probable = j.at("kind").get<std::string>() == "probable";
  return tl;
}

Json encode_series(const SampleSeries& s) {
  Json j;
  j["metric"] = s.metric_name;
  j["party"] = to_string(s.party);
  j["kind"] = enum_name(s.kind, kValueKinds);
  Json samples = Json::array();
  for (const auto& sample : s.samples) {
    Json e;
    e["anchor"] = sample.anchor;
    e["value"] = encode_value(sample.value);
    if (sample.supplementary) e["supplementary"] = true;
    samples.push_back(std::move(e));
  }
  j["samples"] = std::move(samples);
  const auto sum = s.summary();
  j["summary"] = {{"count", sum.count},
                  {"finite", sum.finite},
                  {"plus_infinity", sum.plus_infinity},
                  {"minus_infinity", sum.minus_infinity},
                  {"indeterminate", sum.indeterminate},
                  {"supplementary", sum.supplementary},
                  {"mean", encode_optional(sum.mean)}};
  return j;
}

SampleSeries decode_series(const Json& j) {
  SampleSeries s;
  s.metric_name = j.at("metric").get<std::string>();
  s.party = parse_enum(j.at("party").get<std::string>(), kParties, "party");
  s.kind = parse_enum(j.at("kind").get<std::string>(), kValueKinds, "value kind");
  for (const auto& e : j.at("samples")) {
    Sample sample;
    sample.anchor = e.at("anchor").get<Time>();
    sample.value = decode_value(e.at("value"), s.kind);
    sample.supplementary = e.value("supplementary", false);
    s.samples.push_back(std::move(sample));
  }
  return s;
}

Json encode_metric_value(const MetricValue& v) {
  if (v.is_finite()) return v.duration();
  return v.to_string();
}

MetricValue decode_metric_value(const Json& j) {
  if (j.is_string()) return MetricValue::parse(j.get<std::string>());
  return MetricValue::finite(j.get<Time>());
}

// ---- comparison ----------------------------------------------------------

std::string describe(const SampleValue& v) {
  if (const auto* mv = std::get_if<MetricValue>(&v)) return mv->to_string();
  if (const auto* r = std::get_if<double>(&v)) {
    std::ostringstream os;
    os.precision(17);
    os << *r;
    return os.str();
  }
  return "indeterminate";
}

bool close(double a, double b, double tol) { return std::fabs(a - b) <= tol; }

bool same_value(const SampleValue& a, const SampleValue& b, double tol) {
  if (a.index() != b.index()) return false;
  if (const auto* ra = std::get_if<double>(&a)) return close(*ra, std::get<double>(b), tol);
  return a == b;
}

bool same_optional(const std::optional<double>& a, const std::optional<double>& b, double tol) {
  if (a.has_value() != b.has_value()) return false;
  return !a || close(*a, *b, tol);
}

// ---- plot data -----------------------------------------------------------

std::string csv_cell(const std::optional<double>& v) { return v ? format_double(*v) : ""; }

std::string status_of(const SampleValue& v) {
  if (const auto* mv = std::get_if<MetricValue>(&v)) {
    return mv->is_finite() ? "finite" : mv->to_string();
  }
  if (std::holds_alternative<double>(v)) return "finite";
  return "indeterminate";
}

std::string bar_of(const SampleValue& v) {
  if (const auto* mv = std::get_if<MetricValue>(&v)) {
    return mv->is_finite() ? std::to_string(mv->duration()) : "";
  }
  if (const auto* r = std::get_if<double>(&v)) return format_double(*r);
  return "";
}

class CsvFile {
 public:
  CsvFile(const std::filesystem::path& path, std::vector<std::filesystem::path>& written)
      : path_(path), out_(path, std::ios::binary | std::ios::trunc) {
    if (!out_) throw IoError("cannot open '" + path.string() + "' for writing");
    written.push_back(path);
  }
  ~CsvFile() = default;

  std::ostream& stream() { return out_; }
  void finish() {
    out_.flush();
    if (!out_) throw IoError("failed writing '" + path_.string() + "'");
  }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

void write_paired_bars(const std::filesystem::path& dir, const AgilityReport& report, Party p,
                       std::vector<std::filesystem::path>& written) {
  const auto gt = report.series.find(series_key("gt", p));
  const auto egt = report.series.find(series_key("egt", p));
  if (gt == report.series.end() || egt == report.series.end()) return;
  CsvFile f(dir / ("gt_egt_" + std::string(to_string(p)) + ".csv"), written);
  f.stream() << "anchor,gt,egt,egt_status\n";
  for (const auto& s : gt->second.samples) {
    const auto it = std::find_if(egt->second.samples.begin(), egt->second.samples.end(),
                                 [&](const Sample& e) { return e.anchor == s.anchor; });
    f.stream() << s.anchor << ',' << bar_of(s.value) << ',';
    if (it != egt->second.samples.end()) {
      f.stream() << bar_of(it->value) << ',' << status_of(it->value);
    } else {
      f.stream() << ",absent";
    }
    f.stream() << '\n';
  }
  f.finish();
}

void write_tt(const std::filesystem::path& dir, const AgilityReport& report, Party p,
              std::vector<std::filesystem::path>& written) {
  const auto tt = report.series.find(series_key("tt", p));
  if (tt == report.series.end()) return;
  const auto& opponent =
      p == Party::Defender ? report.provenance.attack : report.provenance.defense;
  CsvFile f(dir / ("tt_" + std::string(to_string(p)) + ".csv"), written);
  // worst_case: every generation triggered by the opponent's first generation.
  f.stream() << "anchor,tt,worst_case,status\n";
  for (const auto& s : tt->second.samples) {
    f.stream() << s.anchor << ',' << bar_of(s.value) << ',';
    if (!opponent.instants.empty() && opponent.instants.front() < s.anchor) {
      f.stream() << s.anchor - opponent.instants.front();
    }
    f.stream() << ',' << status_of(s.value) << '\n';
  }
  f.finish();
}

void write_real_series(const std::filesystem::path& dir, const AgilityReport& report,
                       const std::string& key, std::string_view column,
                       std::vector<std::filesystem::path>& written) {
  const auto it = report.series.find(key);
  if (it == report.series.end()) return;
  CsvFile f(dir / (key + ".csv"), written);
  f.stream() << "anchor," << column << ",supplementary\n";
  for (const auto& s : it->second.samples) {
    f.stream() << s.anchor << ',' << bar_of(s.value) << ',' << (s.supplementary ? 1 : 0) << '\n';
  }
  f.finish();
}

}  // namespace

// ---- parameters ----------------------------------------------------------

std::vector<Metric> RunParams::all_metrics() {
  return {Metric::GT, Metric::EGT, Metric::TT, Metric::LBT, Metric::EE, Metric::RGI, Metric::AGI};
}

bool RunParams::wants(Metric m) const {
  return std::find(metrics.begin(), metrics.end(), m) != metrics.end();
}

void RunParams::validate() const {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw PreconditionError("epsilon must lie in [0,1]");
  if (!(tau > 0.0 && tau < 1.0)) throw PreconditionError("tau must lie in (0,1)");
}

std::vector<Metric> parse_metric_selector(std::string_view text) {
  if (text == "all") return RunParams::all_metrics();
  std::vector<Metric> out;
  std::size_t from = 0;
  while (from <= text.size()) {
    const auto comma = std::min(text.find(',', from), text.size());
    const auto name = text.substr(from, comma - from);
    if (!name.empty()) out.push_back(parse_enum(name, kMetrics, "metric"));
    from = comma + 1;
  }
  if (out.empty()) throw PreconditionError("empty metric selector");
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::string_view to_string(Metric m) { return enum_name(m, kMetrics); }
std::string_view to_string(LbtMode m) { return enum_name(m, kLbtModes); }
std::string_view to_string(EeVariant v) { return enum_name(v, kEeVariants); }
std::string_view to_string(GainSign s) { return enum_name(s, kGainSigns); }
std::string_view to_string(TieBreak t) { return enum_name(t, kTieBreaks); }
std::string_view to_string(TtCandidates c) { return enum_name(c, kTtCandidates); }

LbtMode parse_lbt_mode(std::string_view s) { return parse_enum(s, kLbtModes, "lbt mode"); }
EeVariant parse_ee_variant(std::string_view s) { return parse_enum(s, kEeVariants, "ee variant"); }
GainSign parse_gain_sign(std::string_view s) { return parse_enum(s, kGainSigns, "agi sign"); }
TieBreak parse_tie_break(std::string_view s) { return parse_enum(s, kTieBreaks, "tie break"); }
TtCandidates parse_tt_candidates(std::string_view s) {
  return parse_enum(s, kTtCandidates, "tt candidates");
}

// ---- main computation path -----------------------------------------------

AgilityReport compute_report(const MatrixFile& input, const RunParams& params,
                             std::string source) {
  params.validate();
  const EffectivenessMatrix matrix = normalize_orientation(input.matrix);

  AgilityReport r;
  r.params = params;
  r.provenance.source = std::move(source);
  r.provenance.metric_name = matrix.metric_name();
  r.provenance.input_orientation = input.matrix.orientation();
  r.provenance.horizon = matrix.horizon();
  r.provenance.defense = input.defense;
  r.provenance.attack = input.attack;

  InferenceParams ip;
  ip.tau = params.tau;
  r.probable_attack_generations = infer_attack_generations(matrix, ip).instants;
  if (params.infer_attacks) {
    r.provenance.attack = GenerationTimeline{Party::Attacker, r.probable_attack_generations, {}, true};
  }
  const auto& defense = r.provenance.defense;
  const auto& attack = r.provenance.attack;

  if (params.wants(Metric::GT)) {
    r.series["gt_defender"] = gt_samples(defense);
    r.series["gt_attacker"] = gt_samples(attack);
  }
  if (params.wants(Metric::EGT)) {
    r.series["egt_defender"] = egt_defender(matrix, defense);
    r.series["egt_attacker"] = egt_attacker(matrix, attack);
  }
  if (params.wants(Metric::TT)) {
    const TtOptions opts{params.tie_break};
    const bool every = params.tt_candidates == TtCandidates::EveryTimeUnit;
    const auto units = every_unit(matrix.end());
    const auto& attack_times = every ? units : attack.instants;
    const auto& defense_times = every ? units : defense.instants;
    r.series["tt_defender"] = defense.count() >= 2
                                  ? tt_defender(matrix, defense, attack_times, opts)
                                  : empty_series("TT", Party::Defender, ValueKind::Duration);
    r.series["tt_attacker"] = attack.count() >= 2
                                  ? tt_attacker(matrix, attack, defense_times, opts)
                                  : empty_series("TT", Party::Attacker, ValueKind::Duration);
  }
  if (params.wants(Metric::LBT)) {
    const LbtParams lp{params.epsilon, params.lbt_mode};
    r.lbt["defender"] = lbt_defender(matrix, lp);
    r.lbt["attacker"] = lbt_attacker(matrix, lp);
  }
  if (params.wants(Metric::EE)) {
    r.series["ee_defender"] = ee_defender(matrix, attack, params.ee_variant);
    r.series["ee_attacker"] = ee_attacker(matrix, defense);
  }
  if (params.wants(Metric::RGI)) {
    r.series["rgi_defender"] = rgi_series(matrix, Party::Defender);
    r.series["rgi_attacker"] = rgi_series(matrix, Party::Attacker);
  }
  if (params.wants(Metric::AGI)) r.agi = agi_discrete(matrix, params.agi_sign);
  return r;
}

// ---- comparison ----------------------------------------------------------

std::vector<std::string> compare_reports(const AgilityReport& expected,
                                         const AgilityReport& actual, double tolerance) {
  std::vector<std::string> diffs;
  auto note = [&](std::string s) { diffs.push_back(std::move(s)); };

  if (expected.provenance.defense.instants != actual.provenance.defense.instants) {
    note("provenance.defense instants differ");
  }
  if (expected.provenance.attack.instants != actual.provenance.attack.instants) {
    note("provenance.attack instants differ");
  }
  if (expected.provenance.horizon != actual.provenance.horizon) note("horizon differs");
  if (expected.probable_attack_generations != actual.probable_attack_generations) {
    note("probable attack generations differ");
  }

  for (const auto& [key, es] : expected.series) {
    const auto it = actual.series.find(key);
    if (it == actual.series.end()) {
      note("series " + key + " missing");
      continue;
    }
    const auto& as = it->second;
    if (es.party != as.party || es.kind != as.kind || es.metric_name != as.metric_name) {
      note("series " + key + " header differs");
    }
    if (es.samples.size() != as.samples.size()) {
      note("series " + key + " has " + std::to_string(as.samples.size()) + " samples, expected " +
           std::to_string(es.samples.size()));
      continue;
    }
    for (std::size_t i = 0; i < es.samples.size(); ++i) {
      const auto& e = es.samples[i];
      const auto& a = as.samples[i];
      if (e.anchor != a.anchor || e.supplementary != a.supplementary ||
          !same_value(e.value, a.value, tolerance)) {
        note("series " + key + " sample " + std::to_string(i) + ": expected (" +
             std::to_string(e.anchor) + ", " + describe(e.value) + "), got (" +
             std::to_string(a.anchor) + ", " + describe(a.value) + ")");
      }
    }
  }
  for (const auto& [key, as] : actual.series) {
    if (!expected.series.count(key)) note("unexpected series " + key);
  }

  for (const auto& [key, el] : expected.lbt) {
    const auto it = actual.lbt.find(key);
    if (it == actual.lbt.end()) {
      note("lbt " + key + " missing");
    } else if (!(el == it->second)) {
      note("lbt " + key + ": expected " + el.value.to_string() + " (skipped " +
           std::to_string(el.skipped_entries) + "), got " + it->second.value.to_string() +
           " (skipped " + std::to_string(it->second.skipped_entries) + ")");
    }
  }
  if (expected.lbt.size() != actual.lbt.size()) note("lbt entry count differs");

  if (expected.agi.has_value() != actual.agi.has_value()) {
    note("agi presence differs");
  } else if (expected.agi) {
    const auto& e = *expected.agi;
    const auto& a = *actual.agi;
    if (!same_optional(e.agi, a.agi, tolerance)) note("agi value differs");
    if (!same_optional(e.attacker(), a.attacker(), tolerance)) note("attacker agi differs");
    if (e.duration != a.duration) note("agi duration differs");
    if (e.series.gains.size() != a.series.gains.size()) {
      note("agi gain count differs");
    } else {
      for (std::size_t i = 0; i < e.series.gains.size(); ++i) {
        const auto& ge = e.series.gains[i];
        const auto& ga = a.series.gains[i];
        if (ge.index != ga.index || ge.width != ga.width || !close(ge.gain, ga.gain, tolerance)) {
          note("agi gain " + std::to_string(i) + " differs");
        }
      }
    }
  }
  return diffs;
}

// ---- JSON ----------------------------------------------------------------

std::string report_to_json(const AgilityReport& r) {
  Json j;
  j["format"] = kFormat;
  j["version"] = kVersion;

  const auto& p = r.params;
  Json metrics = Json::array();
  for (const auto m : p.metrics) metrics.push_back(to_string(m));
  j["parameters"] = {{"epsilon", p.epsilon},
                     {"tau", p.tau},
                     {"lbt_mode", to_string(p.lbt_mode)},
                     {"ee_variant", to_string(p.ee_variant)},
                     {"agi_sign", to_string(p.agi_sign)},
                     {"tt_tie_break", to_string(p.tie_break)},
                     {"tt_candidates", to_string(p.tt_candidates)},
                     {"infer_attacks", p.infer_attacks},
                     {"metrics", metrics}};

  const auto& pv = r.provenance;
  j["provenance"] = {{"source", pv.source},
                     {"metric", pv.metric_name},
                     {"input_orientation", to_string(pv.input_orientation)},
                     {"horizon",
                      {{"start", pv.horizon.start},
                       {"end", pv.horizon.end},
                       {"offset", pv.horizon.offset},
                       {"unit", pv.horizon.unit_label}}},
                     {"defense", encode_timeline(pv.defense)},
                     {"attack", encode_timeline(pv.attack)}};

  Json series = Json::object();
  for (const auto& [key, s] : r.series) series[key] = encode_series(s);
  j["series"] = std::move(series);

  Json ratios = Json::object();
  for (const Party party : {Party::Defender, Party::Attacker}) {
    const auto egt = r.series.find(series_key("egt", party));
    const auto gt = r.series.find(series_key("gt", party));
    if (egt != r.series.end() && gt != r.series.end()) {
      ratios["egt_gt_" + std::string(to_string(party))] =
          encode_optional(mean_ratio(egt->second, gt->second));
    }
  }
  j["ratios"] = std::move(ratios);

  Json lbt = Json::object();
  for (const auto& [key, l] : r.lbt) {
    lbt[key] = {{"value", encode_metric_value(l.value)},
                {"empty_lags", l.empty_lags},
                {"skipped_entries", l.skipped_entries}};
  }
  j["lbt"] = std::move(lbt);

  if (r.agi) {
    Json gains = Json::array();
    for (const auto& g : r.agi->series.gains) {
      gains.push_back({{"index", g.index}, {"width", g.width}, {"gain", g.gain}});
    }
    j["agi"] = {{"defender", encode_optional(r.agi->agi)},
                {"attacker", encode_optional(r.agi->attacker())},
                {"duration", r.agi->duration},
                {"gains", std::move(gains)}};
  } else {
    j["agi"] = nullptr;
  }

  j["inference"] = {{"probable_attack_generations", r.probable_attack_generations}};
  return j.dump(2) + "\n";
}

AgilityReport report_from_json(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    throw ParseError(0, std::string("report is not valid JSON: ") + e.what());
  }
  try {
    if (j.at("format").get<std::string>() != kFormat || j.at("version").get<int>() != kVersion) {
      throw ParseError(0, "unsupported report format or version");
    }
    AgilityReport r;
    const auto& p = j.at("parameters");
    r.params.epsilon = p.at("epsilon").get<double>();
    r.params.tau = p.at("tau").get<double>();
    r.params.lbt_mode = parse_lbt_mode(p.at("lbt_mode").get<std::string>());
    r.params.ee_variant = parse_ee_variant(p.at("ee_variant").get<std::string>());
    r.params.agi_sign = parse_gain_sign(p.at("agi_sign").get<std::string>());
    r.params.tie_break = parse_tie_break(p.at("tt_tie_break").get<std::string>());
    r.params.tt_candidates = parse_tt_candidates(p.at("tt_candidates").get<std::string>());
    r.params.infer_attacks = p.at("infer_attacks").get<bool>();
    r.params.metrics.clear();
    for (const auto& m : p.at("metrics")) {
      r.params.metrics.push_back(parse_enum(m.get<std::string>(), kMetrics, "metric"));
    }

    const auto& pv = j.at("provenance");
    r.provenance.source = pv.at("source").get<std::string>();
    r.provenance.metric_name = pv.at("metric").get<std::string>();
    r.provenance.input_orientation =
        parse_enum(pv.at("input_orientation").get<std::string>(), kOrientations, "orientation");
    const auto& h = pv.at("horizon");
    r.provenance.horizon.start = h.at("start").get<Time>();
    r.provenance.horizon.end = h.at("end").get<Time>();
    r.provenance.horizon.offset = h.at("offset").get<Time>();
    r.provenance.horizon.unit_label = h.at("unit").get<std::string>();
    r.provenance.defense = decode_timeline(pv.at("defense"), Party::Defender);
    r.provenance.attack = decode_timeline(pv.at("attack"), Party::Attacker);

    for (const auto& [key, s] : j.at("series").items()) r.series[key] = decode_series(s);
    for (const auto& [key, l] : j.at("lbt").items()) {
      LbtResult res;
      res.value = decode_metric_value(l.at("value"));
      res.empty_lags = l.at("empty_lags").get<std::vector<Time>>();
      res.skipped_entries = l.at("skipped_entries").get<std::size_t>();
      r.lbt[key] = std::move(res);
    }
    const auto& agi = j.at("agi");
    if (!agi.is_null()) {
      AgiResult a;
      if (!agi.at("defender").is_null()) a.agi = agi.at("defender").get<double>();
      a.duration = agi.at("duration").get<double>();
      for (const auto& g : agi.at("gains")) {
        a.series.gains.push_back(
            {g.at("index").get<Time>(), g.at("width").get<double>(), g.at("gain").get<double>()});
      }
      r.agi = std::move(a);
    }
    r.probable_attack_generations =
        j.at("inference").at("probable_attack_generations").get<std::vector<Time>>();
    return r;
  } catch (const Json::exception& e) {
    throw ParseError(0, std::string("malformed report: ") + e.what());
  }
}

// ---- export --------------------------------------------------------------

std::vector<std::filesystem::path> export_report(const AgilityReport& report,
                                                 const EffectivenessMatrix& normalized,
                                                 ReportFormat format,
                                                 const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw IoError("cannot create output directory '" + dir.string() + "'");
  }
  std::vector<std::filesystem::path> written;

  if (format == ReportFormat::StructuredReport) {
    CsvFile f(dir / "report.json", written);
    f.stream() << report_to_json(report);
    f.finish();
    return written;
  }

  for (const Party p : {Party::Defender, Party::Attacker}) {
    write_paired_bars(dir, report, p, written);
    write_tt(dir, report, p, written);
  }
  write_real_series(dir, report, "rgi_defender", "rgi", written);
  write_real_series(dir, report, "rgi_attacker", "rgi", written);
  write_real_series(dir, report, "ee_defender", "ee", written);
  write_real_series(dir, report, "ee_attacker", "ee", written);

  for (const auto& [key, l] : report.lbt) {
    const Party p = key == "defender" ? Party::Defender : Party::Attacker;
    CsvFile f(dir / ("lbt_" + key + ".csv"), written);
    f.stream() << "lag,present,mean,min,epsilon\n";
    for (const auto& lp : lag_profile(normalized, p)) {
      f.stream() << lp.lag << ',' << lp.present << ',' << csv_cell(lp.mean) << ','
                 << csv_cell(lp.min) << ',' << format_double(report.params.epsilon) << '\n';
    }
    f.finish();
  }

  if (report.series.count("ee_defender")) {
    CsvFile f(dir / "ee_curves_defender.csv", written);
    f.stream() << "attack_generation,t,value\n";
    for (const Time tp : report.provenance.attack.instants) {
      for (Time t = 0; t <= normalized.end(); ++t) {
        f.stream() << tp << ',' << t << ',' << csv_cell(normalized.at(t, tp)) << '\n';
      }
    }
    f.finish();
  }
  if (report.series.count("ee_attacker")) {
    CsvFile f(dir / "ee_curves_attacker.csv", written);
    f.stream() << "defense_generation,t_prime,value\n";
    for (const Time t : report.provenance.defense.instants) {
      for (Time tp = 0; tp <= normalized.end(); ++tp) {
        f.stream() << t << ',' << tp << ',' << csv_cell(normalized.at(t, tp)) << '\n';
      }
    }
    f.finish();
  }

  if (report.agi) {
    CsvFile f(dir / "agi_gains.csv", written);
    f.stream() << "index,width,gain\n";
    for (const auto& g : report.agi->series.gains) {
      f.stream() << g.index << ',' << format_double(g.width) << ',' << format_double(g.gain)
                 << '\n';
    }
    f.finish();
  }
  return written;
}

}  // namespace agility
