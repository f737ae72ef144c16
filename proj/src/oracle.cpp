#include "agility/oracle.hpp"

#include <set>

#include "agility/error.hpp"

namespace agility {
namespace {

using Cell = std::optional<double>;

struct Grid {
  Time T = 0;
  std::vector<std::vector<Cell>> d;  // d[t][t'], larger is better

  Cell operator()(Time t, Time tp) const {
    return d[static_cast<std::size_t>(t)][static_cast<std::size_t>(tp)];
  }
};

Grid load(const EffectivenessMatrix& m) {
  Grid g;
  g.T = m.end();
  g.d.assign(static_cast<std::size_t>(g.T + 1), std::vector<Cell>(static_cast<std::size_t>(g.T + 1)));
  for (Time t = 0; t <= g.T; ++t) {
    for (Time tp = 0; tp <= g.T; ++tp) {
      Cell v = m.at(t, tp);
      if (v && !(*v >= 0.0 && *v <= 1.0)) throw DomainError("oracle: value outside [0,1]");
      if (v && m.orientation() == Orientation::SmallerIsBetter) v = 1.0 - *v;
      g.d[static_cast<std::size_t>(t)][static_cast<std::size_t>(tp)] = v;
    }
  }
  return g;
}

SampleSeries gt(const GenerationTimeline& tl) {
  SampleSeries s{"GT", tl.party, ValueKind::Duration, {}};
  for (std::size_t i = 1; i < tl.instants.size(); ++i) {
    s.samples.push_back({tl.instants[i - 1], MetricValue::finite(tl.instants[i] - tl.instants[i - 1])});
  }
  return s;
}

// EGT(D,i) = t_{i*} - t_i for the smallest i* > i with
//   D_{t_{i*}}(A_{t_i}) > D_{t_i}(A_{t_i})
// and D_{t_m}(A_{t_i}) <= D_{t_i}(A_{t_i}) at every generation t_m in between.
// EGT(A,j) mirrors this along row t'_j with the inequalities reversed.
SampleSeries egt(const Grid& g, const GenerationTimeline& tl) {
  const bool defender = tl.party == Party::Defender;
  auto cell = [&](Time anchor, Time other) { return defender ? g(other, anchor) : g(anchor, other); };
  auto better = [&](double x, double ref) { return defender ? x > ref : x < ref; };

  SampleSeries s{"EGT", tl.party, ValueKind::Duration, {}};
  const auto& ts = tl.instants;
  for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
    const Cell ref = cell(ts[i], ts[i]);
    std::optional<Time> found;
    for (std::size_t star = i + 1; star < ts.size() && !found; ++star) {
      const Cell c = cell(ts[i], ts[star]);
      if (!ref || !c || !better(*c, *ref)) continue;
      bool quiet = true;
      for (std::size_t m = i + 1; m < star; ++m) {
        const Cell mid = cell(ts[i], ts[m]);
        if (!mid || better(*mid, *ref)) quiet = false;
      }
      if (quiet) found = ts[star] - ts[i];
    }
    bool any_missing = !ref;
    for (std::size_t k = i + 1; k < ts.size(); ++k) any_missing = any_missing || !cell(ts[i], ts[k]);

    SampleValue v = Indeterminate{};
    if (found) {
      v = MetricValue::finite(*found);
    } else if (!any_missing) {
      v = MetricValue::plus_infinity();
    }
    s.samples.push_back({ts[i], v});
  }
  return s;
}

// Defender: argmax over t' < t_i of D_{t_i}(A_t') - D_{t_{i-1}}(A_t') among
// positive differences. Attacker: argmin over t < t'_j of
// D_t(A_{t'_j}) - D_t(A_{t'_{j-1}}) among negative differences.
SampleSeries tt(const Grid& g, const GenerationTimeline& tl, const std::vector<Time>& pool,
                TieBreak tie) {
  const bool defender = tl.party == Party::Defender;
  SampleSeries s{"TT", tl.party, ValueKind::Duration, {}};
  if (tl.instants.size() < 2) return s;
  const std::set<Time> candidates(pool.begin(), pool.end());
  const auto& ts = tl.instants;
  for (std::size_t i = 1; i < ts.size(); ++i) {
    std::vector<std::pair<Time, double>> qualifying;
    std::size_t eligible = 0, measurable = 0;
    for (const Time c : candidates) {
      if (c < 0 || c >= ts[i]) continue;
      ++eligible;
      const Cell now = defender ? g(ts[i], c) : g(c, ts[i]);
      const Cell before = defender ? g(ts[i - 1], c) : g(c, ts[i - 1]);
      if (!now || !before) continue;
      ++measurable;
      const double change = *now - *before;
      if (defender ? change > 0.0 : change < 0.0) qualifying.push_back({c, change});
    }
    if (qualifying.empty()) {
      if (eligible > 0 && measurable == 0) {
        s.samples.push_back({ts[i], Indeterminate{}});
      } else {
        s.samples.push_back({ts[i], MetricValue::plus_infinity()});
      }
      continue;
    }
    double extreme = qualifying.front().second;
    for (const auto& [c, change] : qualifying) {
      if (defender ? change > extreme : change < extreme) extreme = change;
    }
    std::vector<Time> argext;
    for (const auto& [c, change] : qualifying) {
      if (change == extreme) argext.push_back(c);
    }
    const Time chosen = tie == TieBreak::MostRecent ? argext.back() : argext.front();
    s.samples.push_back({ts[i], MetricValue::finite(ts[i] - chosen)});
  }
  return s;
}

// Defender: the set of lags λ with D_t(A_{t-λ}) >= ε for all t in [λ, T];
// attacker: D_t(A_{t+λ}) >= ε for all t in [0, T-λ]. Missing entries are
// left out of the quantifier; a lag with no measurable entry never counts.
LbtResult lbt(const Grid& g, Party party, double epsilon, LbtMode mode) {
  LbtResult r;
  std::set<Time> lambdas;
  for (Time lambda = 0; lambda <= g.T; ++lambda) {
    std::vector<double> seen;
    std::size_t missing = 0;
    const Time lo = party == Party::Defender ? lambda : 0;
    const Time hi = party == Party::Defender ? g.T : g.T - lambda;
    for (Time t = lo; t <= hi; ++t) {
      const Cell v = party == Party::Defender ? g(t, t - lambda) : g(t, t + lambda);
      if (v) {
        seen.push_back(*v);
      } else {
        ++missing;
      }
    }
    r.skipped_entries += missing;
    if (seen.empty()) {
      r.empty_lags.push_back(lambda);
      continue;
    }
    bool holds = true;
    if (mode == LbtMode::Strict) {
      for (const double v : seen) holds = holds && v >= epsilon;
    } else {
      double sum = 0.0;
      for (const double v : seen) sum += v;
      holds = sum / static_cast<double>(seen.size()) >= epsilon;
    }
    if (holds) lambdas.insert(lambda);
  }
  if (!lambdas.empty()) {
    r.value = MetricValue::finite(party == Party::Defender ? *lambdas.begin() : *lambdas.rbegin());
  }
  return r;
}

SampleSeries ee(const Grid& g, const GenerationTimeline& reference, Party party, EeVariant variant) {
  SampleSeries s{"EE", party, ValueKind::Real, {}};
  for (std::size_t j = 0; j < reference.instants.size(); ++j) {
    const Time fixed = reference.instants[j];
    const Time from = party == Party::Defender && variant == EeVariant::FromGeneration ? fixed : 0;
    double sum = 0.0;
    std::size_t n = 0;
    for (Time x = from; x <= g.T; ++x) {
      const Cell v = party == Party::Defender ? g(x, fixed) : g(fixed, x);
      if (!v) continue;
      sum += *v;
      ++n;
    }
    SampleValue value = Indeterminate{};
    if (n > 0) value = sum / static_cast<double>(n);
    s.samples.push_back({fixed, value, j == 0});
  }
  return s;
}

SampleSeries rgi(const Grid& g, Party party) {
  SampleSeries s{"RGI", party, ValueKind::Real, {}};
  for (Time t = 1; t <= g.T; ++t) {
    const Cell now = g(t, t), before = g(t - 1, t - 1);
    if (!now || !before) continue;
    const double step = *now - *before;
    s.samples.push_back({t, party == Party::Defender ? step : 0.0 - step});
  }
  return s;
}

AgiResult agi(const Grid& g, GainSign sign) {
  AgiResult r;
  double sum = 0.0;
  for (Time i = 1; i <= g.T; ++i) {
    const Cell hi = g(i, i), lo = g(i - 1, i - 1);
    if (!hi || !lo) continue;
    double gain = 0.0;
    if (*hi > *lo) {
      gain = 0.5 * (*hi - *lo);
    } else if (*hi < *lo) {
      gain = -0.5 * (*hi - *lo);
      // a loss counts against the defender
      if (sign == GainSign::Signed) gain = -gain;
    }
    r.series.gains.push_back({i, 1.0, gain});
    sum += gain;
  }
  r.duration = static_cast<double>(r.series.gains.size());
  if (!r.series.gains.empty()) r.agi = sum / r.duration;
  return r;
}

std::vector<Time> probable(const Grid& g, double tau) {
  std::vector<Time> out{0};
  for (Time tp = 1; tp <= g.T; ++tp) {
    bool flagged = false;
    for (Time t = 0; t < tp; ++t) {
      const Cell own = g(t, t), other = g(t, tp);
      if (own && other && *own - *other > tau) flagged = true;
    }
    if (flagged) out.push_back(tp);
  }
  return out;
}

void refuse_large(Time end) {
  if (end > kOracleMaxHorizonEnd) {
    throw PreconditionError("oracle refuses horizons beyond T = " +
                            std::to_string(kOracleMaxHorizonEnd));
  }
}

}  // namespace

std::vector<Time> oracle_probable_generations(const EffectivenessMatrix& normalized, double tau) {
  refuse_large(normalized.end());
  return probable(load(normalized), tau);
}

AgilityReport oracle_metrics(const EffectivenessMatrix& matrix, const GenerationTimeline& defense,
                             const GenerationTimeline& attack, const RunParams& params,
                             std::string source) {
  refuse_large(matrix.end());
  params.validate();
  const Grid g = load(matrix);

  AgilityReport r;
  r.params = params;
  r.provenance.source = std::move(source);
  r.provenance.metric_name = matrix.metric_name();
  r.provenance.input_orientation = matrix.orientation();
  r.provenance.horizon = matrix.horizon();
  r.provenance.defense = defense;
  r.provenance.attack = attack;
  r.probable_attack_generations = probable(g, params.tau);
  if (params.infer_attacks) {
    r.provenance.attack = GenerationTimeline{Party::Attacker, r.probable_attack_generations, {}, true};
  }
  const auto& D = r.provenance.defense;
  const auto& A = r.provenance.attack;

  if (params.wants(Metric::GT)) {
    r.series["gt_defender"] = gt(D);
    r.series["gt_attacker"] = gt(A);
  }
  if (params.wants(Metric::EGT)) {
    r.series["egt_defender"] = egt(g, D);
    r.series["egt_attacker"] = egt(g, A);
  }
  if (params.wants(Metric::TT)) {
    std::vector<Time> every;
    for (Time t = 0; t <= g.T; ++t) every.push_back(t);
    const bool all = params.tt_candidates == TtCandidates::EveryTimeUnit;
    r.series["tt_defender"] = tt(g, D, all ? every : A.instants, params.tie_break);
    r.series["tt_attacker"] = tt(g, A, all ? every : D.instants, params.tie_break);
  }
  if (params.wants(Metric::LBT)) {
    r.lbt["defender"] = lbt(g, Party::Defender, params.epsilon, params.lbt_mode);
    r.lbt["attacker"] = lbt(g, Party::Attacker, params.epsilon, params.lbt_mode);
  }
  if (params.wants(Metric::EE)) {
    r.series["ee_defender"] = ee(g, A, Party::Defender, params.ee_variant);
    r.series["ee_attacker"] = ee(g, D, Party::Attacker, params.ee_variant);
  }
  if (params.wants(Metric::RGI)) {
    r.series["rgi_defender"] = rgi(g, Party::Defender);
    r.series["rgi_attacker"] = rgi(g, Party::Attacker);
  }
  if (params.wants(Metric::AGI)) r.agi = agi(g, params.agi_sign);
  return r;
}

}  // namespace agility
