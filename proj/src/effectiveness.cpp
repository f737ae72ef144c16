#include "agility/effectiveness.hpp"

#include <cmath>
#include <numeric>

#include "agility/error.hpp"

namespace agility {
namespace {

void require_normalized(const EffectivenessMatrix& matrix) {
  if (matrix.orientation() != Orientation::LargerIsBetter) {
    throw PreconditionError("matrix must be normalized to LargerIsBetter");
  }
}

SampleValue mean_or_indeterminate(double sum, std::size_t n) {
  if (n == 0) return Indeterminate{};
  return sum / static_cast<double>(n);
}

int slope_sign(double delta) { return (delta > 0.0) - (delta < 0.0); }

double apply_sign(double signed_gain, GainSign sign) {
  return sign == GainSign::Signed ? signed_gain : std::fabs(signed_gain);
}

}  // namespace

SampleSeries ee_defender(const EffectivenessMatrix& matrix, const GenerationTimeline& attack,
                         EeVariant variant) {
  require_normalized(matrix);
  require_timeline(attack, matrix.end(), "ee_defender");
  SampleSeries out{"EE", Party::Defender, ValueKind::Real, {}};
  for (std::size_t j = 0; j < attack.instants.size(); ++j) {
    const Time column = attack.instants[j];
    const Time from = variant == EeVariant::FullHorizon ? 0 : column;
    double sum = 0.0;
    std::size_t n = 0;
    for (Time t = from; t <= matrix.end(); ++t) {
      if (const auto v = matrix.at(t, column)) {
        sum += *v;
        ++n;
      }
    }
    out.samples.push_back({column, mean_or_indeterminate(sum, n), j == 0});
  }
  return out;
}

SampleSeries ee_attacker(const EffectivenessMatrix& matrix, const GenerationTimeline& defense) {
  require_normalized(matrix);
  require_timeline(defense, matrix.end(), "ee_attacker");
  SampleSeries out{"EE", Party::Attacker, ValueKind::Real, {}};
  for (std::size_t i = 0; i < defense.instants.size(); ++i) {
    const Time row = defense.instants[i];
    double sum = 0.0;
    std::size_t n = 0;
    for (Time tp = 0; tp <= matrix.end(); ++tp) {
      if (const auto v = matrix.at(row, tp)) {
        sum += *v;
        ++n;
      }
    }
    out.samples.push_back({row, mean_or_indeterminate(sum, n), i == 0});
  }
  return out;
}

SampleSeries rgi_series(const EffectivenessMatrix& matrix, Party party) {
  require_normalized(matrix);
  SampleSeries out{"RGI", party, ValueKind::Real, {}};
  for (Time t = 1; t <= matrix.end(); ++t) {
    const auto cur = matrix.at(t, t);
    const auto prev = matrix.at(t - 1, t - 1);
    if (!cur || !prev) continue;
    const double d = *cur - *prev;
    out.samples.push_back({t, party == Party::Defender ? d : 0.0 - d});
  }
  return out;
}

double SecurityGainSeries::total() const noexcept {
  return std::accumulate(gains.begin(), gains.end(), 0.0,
                         [](double acc, const SecurityGain& g) { return acc + g.gain; });
}

AgiResult agi_discrete(const EffectivenessMatrix& matrix, GainSign sign) {
  require_normalized(matrix);
  AgiResult result;
  for (Time t = 1; t <= matrix.end(); ++t) {
    const auto cur = matrix.at(t, t);
    const auto prev = matrix.at(t - 1, t - 1);
    if (!cur || !prev) continue;
    result.series.gains.push_back({t, 1.0, apply_sign(0.5 * (*cur - *prev), sign)});
  }
  result.duration = static_cast<double>(result.series.gains.size());
  if (!result.series.gains.empty()) result.agi = result.series.total() / result.duration;
  return result;
}

AgiResult agi_continuous(std::span<const CurvePoint> curve, ContinuousAgiOptions options) {
  if (curve.size() < 2) throw PreconditionError("agi_continuous: need at least two points");
  for (std::size_t i = 0; i < curve.size(); ++i) {
    if (!(curve[i].value >= 0.0 && curve[i].value <= 1.0)) {
      throw PreconditionError("agi_continuous: values must lie in [0,1]");
    }
    if (i > 0 && !(curve[i].time > curve[i - 1].time)) {
      throw PreconditionError("agi_continuous: time stamps must be strictly increasing");
    }
  }

  AgiResult result;
  std::size_t begin = 0;
  Time segment = 0;
  while (begin + 1 < curve.size()) {
    const int dir = slope_sign(curve[begin + 1].value - curve[begin].value);
    std::size_t end = begin + 1;
    if (options.segmentation == Segmentation::MaximalMonotone) {
      while (end + 1 < curve.size() &&
             slope_sign(curve[end + 1].value - curve[end].value) == dir) {
        ++end;
      }
    }
    const double left = curve[begin].value;
    const double width = curve[end].time - curve[begin].time;
    double gain = 0.0;
    if (dir != 0) {
      // Trapezoid rule is exact on each linear piece.
      double area = 0.0;
      for (std::size_t k = begin; k < end; ++k) {
        const double w = curve[k + 1].time - curve[k].time;
        area += w * (0.5 * (curve[k].value + curve[k + 1].value) - left);
      }
      gain = apply_sign(area, options.sign);
    }
    result.series.gains.push_back({++segment, width, gain});
    begin = end;
  }
  result.duration = curve.back().time - curve.front().time;
  result.agi = result.series.total() / result.duration;
  return result;
}

}  // namespace agility
