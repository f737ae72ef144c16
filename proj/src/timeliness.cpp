#include "agility/timeliness.hpp"

#include <algorithm>
#include <limits>

#include "agility/error.hpp"

namespace agility {
namespace {

void require_epsilon(double epsilon) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
    throw PreconditionError("epsilon must lie in [0,1]");
  }
}

void require_normalized(const EffectivenessMatrix& matrix) {
  if (matrix.orientation() != Orientation::LargerIsBetter) {
    throw PreconditionError("matrix must be normalized to LargerIsBetter");
  }
}

// Shared scan for both EGT sides. `entry(anchor, later)` reads the matrix
// cell compared for generation `later` against generation `anchor`;
// `improves(candidate, reference)` is the strict effectiveness condition.
template <typename Entry, typename Improves>
SampleSeries egt_scan(const GenerationTimeline& timeline, std::string name, Entry entry,
                      Improves improves) {
  SampleSeries out{std::move(name), timeline.party, ValueKind::Duration, {}};
  const auto& ts = timeline.instants;
  for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
    const auto reference = entry(ts[i], ts[i]);
    if (!reference) {
      out.samples.push_back({ts[i], Indeterminate{}});
      continue;
    }
    SampleValue value = MetricValue::plus_infinity();
    for (std::size_t j = i + 1; j < ts.size(); ++j) {
      const auto candidate = entry(ts[i], ts[j]);
      if (!candidate) {
        value = Indeterminate{};
        break;
      }
      if (improves(*candidate, *reference)) {
        value = MetricValue::finite(ts[j] - ts[i]);
        break;
      }
    }
    out.samples.push_back({ts[i], value});
  }
  return out;
}

template <typename Diff>
SampleSeries tt_scan(const GenerationTimeline& own, std::span<const Time> opponent_times,
                     std::string name, TtOptions options, Diff diff) {
  SampleSeries out{std::move(name), own.party, ValueKind::Duration, {}};
  std::vector<Time> candidates(opponent_times.begin(), opponent_times.end());
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  const auto& ts = own.instants;
  for (std::size_t i = 1; i < ts.size(); ++i) {
    std::size_t considered = 0;
    std::size_t present = 0;
    double best = 0.0;
    std::optional<Time> trigger;
    for (const Time c : candidates) {
      if (c < 0 || c >= ts[i]) continue;
      ++considered;
      const auto d = diff(ts[i], ts[i - 1], c);
      if (!d) continue;
      ++present;
      if (*d <= 0.0) continue;
      const bool better = !trigger || *d > best ||
                          (*d == best && options.tie_break == TieBreak::MostRecent);
      if (better) {
        best = *d;
        trigger = c;
      }
    }
    SampleValue value = MetricValue::plus_infinity();
    if (trigger) {
      value = MetricValue::finite(ts[i] - *trigger);
    } else if (considered > 0 && present == 0) {
      value = Indeterminate{};
    }
    out.samples.push_back({ts[i], value});
  }
  return out;
}

struct Diagonal {
  std::size_t present = 0;
  std::size_t missing = 0;
  double sum = 0.0;
  double min = std::numeric_limits<double>::infinity();
};

// Defender looks back (t, t-λ); attacker looks forward (t, t+λ).
Diagonal diagonal(const EffectivenessMatrix& matrix, Party party, Time lag) {
  Diagonal d;
  const Time end = matrix.end();
  for (Time k = 0; k + lag <= end; ++k) {
    const auto v = party == Party::Defender ? matrix.at(k + lag, k) : matrix.at(k, k + lag);
    if (!v) {
      ++d.missing;
      continue;
    }
    ++d.present;
    d.sum += *v;
    d.min = std::min(d.min, *v);
  }
  return d;
}

LbtResult lbt_impl(const EffectivenessMatrix& matrix, const LbtParams& params, Party party) {
  require_normalized(matrix);
  require_epsilon(params.epsilon);
  LbtResult result;
  std::optional<Time> chosen;
  for (Time lag = 0; lag <= matrix.end(); ++lag) {
    const Diagonal d = diagonal(matrix, party, lag);
    result.skipped_entries += d.missing;
    if (d.present == 0) {
      result.empty_lags.push_back(lag);
      continue;
    }
    const bool ok = params.mode == LbtMode::Strict
                        ? d.min >= params.epsilon
                        : d.sum / static_cast<double>(d.present) >= params.epsilon;
    if (!ok) continue;
    if (party == Party::Defender) {
      if (!chosen) chosen = lag;
    } else {
      chosen = lag;
    }
  }
  if (chosen) result.value = MetricValue::finite(*chosen);
  return result;
}

}  // namespace

SampleSeries gt_samples(const GenerationTimeline& timeline) {
  if (timeline.instants.empty()) throw PreconditionError("gt_samples: timeline is empty");
  SampleSeries out{"GT", timeline.party, ValueKind::Duration, {}};
  const auto& ts = timeline.instants;
  for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
    if (ts[i + 1] <= ts[i]) throw PreconditionError("gt_samples: instants must increase");
    out.samples.push_back({ts[i], MetricValue::finite(ts[i + 1] - ts[i])});
  }
  return out;
}

SampleSeries egt_defender(const EffectivenessMatrix& matrix, const GenerationTimeline& defense,
                          EgtOptions options) {
  require_normalized(matrix);
  require_timeline(defense, matrix.end(), "egt_defender");
  // Column A_{t_i} fixed; later defense rows compared.
  return egt_scan(
      defense, "EGT",
      [&](Time anchor, Time later) { return matrix.at(later, anchor); },
      [&](double c, double r) { return c > r + options.tolerance; });
}

SampleSeries egt_attacker(const EffectivenessMatrix& matrix, const GenerationTimeline& attack,
                          EgtOptions options) {
  require_normalized(matrix);
  require_timeline(attack, matrix.end(), "egt_attacker");
  // Row D_{t'_j} fixed; later attack columns compared.
  return egt_scan(
      attack, "EGT",
      [&](Time anchor, Time later) { return matrix.at(anchor, later); },
      [&](double c, double r) { return c < r - options.tolerance; });
}

SampleSeries tt_defender(const EffectivenessMatrix& matrix, const GenerationTimeline& defense,
                         std::span<const Time> attack_times, TtOptions options) {
  require_normalized(matrix);
  require_timeline(defense, matrix.end(), "tt_defender");
  if (defense.count() < 2) throw PreconditionError("tt_defender: needs at least two generations");
  return tt_scan(defense, attack_times, "TT", options,
                 [&](Time cur, Time prev, Time c) -> std::optional<double> {
                   const auto a = matrix.at(cur, c);
                   const auto b = matrix.at(prev, c);
                   if (!a || !b) return std::nullopt;
                   return *a - *b;
                 });
}

SampleSeries tt_attacker(const EffectivenessMatrix& matrix, const GenerationTimeline& attack,
                         std::span<const Time> defense_times, TtOptions options) {
  require_normalized(matrix);
  require_timeline(attack, matrix.end(), "tt_attacker");
  if (attack.count() < 2) throw PreconditionError("tt_attacker: needs at least two generations");
  // Negated so that the greatest drop becomes the largest positive value.
  return tt_scan(attack, defense_times, "TT", options,
                 [&](Time cur, Time prev, Time c) -> std::optional<double> {
                   const auto a = matrix.at(c, cur);
                   const auto b = matrix.at(c, prev);
                   if (!a || !b) return std::nullopt;
                   return *b - *a;
                 });
}

LbtResult lbt_defender(const EffectivenessMatrix& matrix, const LbtParams& params) {
  return lbt_impl(matrix, params, Party::Defender);
}

LbtResult lbt_attacker(const EffectivenessMatrix& matrix, const LbtParams& params) {
  return lbt_impl(matrix, params, Party::Attacker);
}

std::vector<LagProfile> lag_profile(const EffectivenessMatrix& matrix, Party party) {
  std::vector<LagProfile> out;
  for (Time lag = 0; lag <= matrix.end(); ++lag) {
    const Diagonal d = diagonal(matrix, party, lag);
    LagProfile p;
    p.lag = lag;
    p.present = d.present;
    if (d.present > 0) {
      p.mean = d.sum / static_cast<double>(d.present);
      p.min = d.min;
    }
    out.push_back(p);
  }
  return out;
}

}  // namespace agility
