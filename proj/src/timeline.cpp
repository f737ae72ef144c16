#include "agility/timeline.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "agility/error.hpp"

namespace agility {

std::string_view to_string(Party p) {
  return p == Party::Defender ? "defender" : "attacker";
}

std::string_view to_string(Orientation o) {
  return o == Orientation::LargerIsBetter ? "larger" : "smaller";
}

TimeHorizon align_horizons(Span defender, Span attacker) {
  if (defender.start > defender.end || attacker.start > attacker.end) {
    throw PreconditionError("align_horizons: span start must not exceed its end");
  }
  const Time lo = std::min(defender.start, attacker.start);
  const Time hi = std::max(defender.end, attacker.end);
  TimeHorizon h;
  h.start = 0;
  h.end = hi - lo;
  h.offset = lo;
  return h;
}

EffectivenessMatrix::EffectivenessMatrix(TimeHorizon horizon, std::string metric_name,
                                         Orientation orientation)
    : horizon_(std::move(horizon)),
      metric_name_(std::move(metric_name)),
      orientation_(orientation),
      n_(0) {
  if (horizon_.start != 0 || horizon_.end < 0) {
    throw PreconditionError("matrix horizon must be re-based to [0,T] with T >= 0");
  }
  if (horizon_.end > kMaxHorizonEnd) {
    throw PreconditionError("horizon end " + std::to_string(horizon_.end) + " exceeds " +
                            std::to_string(kMaxHorizonEnd));
  }
  n_ = horizon_.size();
  values_.assign(n_ * n_, 0.0);
  mask_.assign(n_ * n_, 0);
}

std::optional<double> EffectivenessMatrix::at(Time t, Time tp) const noexcept {
  if (!present(t, tp)) return std::nullopt;
  return values_[index(t, tp)];
}

double EffectivenessMatrix::value(Time t, Time tp) const {
  if (!present(t, tp)) {
    throw PreconditionError("entry (" + std::to_string(t) + "," + std::to_string(tp) +
                            ") is missing");
  }
  return values_[index(t, tp)];
}

void EffectivenessMatrix::set(Time t, Time tp, double v) {
  if (!in_range(t, tp)) {
    throw PreconditionError("entry (" + std::to_string(t) + "," + std::to_string(tp) +
                            ") outside horizon [0," + std::to_string(horizon_.end) + "]");
  }
  values_[index(t, tp)] = v;
  mask_[index(t, tp)] = 1;
}

void EffectivenessMatrix::clear(Time t, Time tp) {
  if (!in_range(t, tp)) return;
  values_[index(t, tp)] = 0.0;
  mask_[index(t, tp)] = 0;
}

std::size_t EffectivenessMatrix::present_count() const noexcept {
  return static_cast<std::size_t>(std::count(mask_.begin(), mask_.end(), 1));
}

EffectivenessMatrix EffectivenessMatrix::with_orientation(Orientation o) const {
  EffectivenessMatrix m = *this;
  m.orientation_ = o;
  return m;
}

EffectivenessMatrix EffectivenessMatrix::with_metric_name(std::string name) const {
  EffectivenessMatrix m = *this;
  m.metric_name_ = std::move(name);
  return m;
}

bool EffectivenessMatrix::operator==(const EffectivenessMatrix& other) const {
  if (horizon_ != other.horizon_ || metric_name_ != other.metric_name_ ||
      orientation_ != other.orientation_ || mask_ != other.mask_) {
    return false;
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (mask_[i] && values_[i] != other.values_[i]) return false;
  }
  return true;
}

EffectivenessMatrix normalize_orientation(const EffectivenessMatrix& matrix) {
  const auto n = static_cast<Time>(matrix.size());
  for (Time t = 0; t < n; ++t) {
    for (Time tp = 0; tp < n; ++tp) {
      const auto v = matrix.at(t, tp);
      if (v && !(*v >= 0.0 && *v <= 1.0)) {
        std::ostringstream os;
        os << "value " << *v << " at (" << t << "," << tp << ") outside [0,1]";
        throw DomainError(os.str());
      }
    }
  }
  if (matrix.orientation() == Orientation::LargerIsBetter) return matrix;

  EffectivenessMatrix out = matrix.with_orientation(Orientation::LargerIsBetter);
  for (Time t = 0; t < n; ++t) {
    for (Time tp = 0; tp < n; ++tp) {
      if (const auto v = matrix.at(t, tp)) out.set(t, tp, 1.0 - *v);
    }
  }
  return out;
}

MetricValue MetricValue::finite(Time duration) {
  if (duration < 0) throw PreconditionError("finite metric durations are non-negative");
  return MetricValue(Kind::Finite, duration);
}

Time MetricValue::duration() const {
  if (kind_ != Kind::Finite) throw PreconditionError("metric value is not finite");
  return duration_;
}

std::string MetricValue::to_string() const {
  switch (kind_) {
    case Kind::PlusInfinity:
      return "+inf";
    case Kind::MinusInfinity:
      return "-inf";
    case Kind::Finite:
      break;
  }
  return std::to_string(duration_);
}

MetricValue MetricValue::parse(std::string_view text) {
  if (text == "+inf") return plus_infinity();
  if (text == "-inf") return minus_infinity();
  Time d = 0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, d);
  if (ec != std::errc{} || ptr != last || text.empty()) {
    throw PreconditionError("not a metric value: '" + std::string(text) + "'");
  }
  return finite(d);
}

SeriesSummary SampleSeries::summary() const {
  SeriesSummary s;
  double total = 0.0;
  std::size_t used = 0;
  for (const auto& sample : samples) {
    ++s.count;
    if (sample.supplementary) ++s.supplementary;
    std::optional<double> x;
    if (const auto* mv = std::get_if<MetricValue>(&sample.value)) {
      switch (mv->kind()) {
        case MetricValue::Kind::Finite:
          ++s.finite;
          x = static_cast<double>(mv->duration());
          break;
        case MetricValue::Kind::PlusInfinity:
          ++s.plus_infinity;
          break;
        case MetricValue::Kind::MinusInfinity:
          ++s.minus_infinity;
          break;
      }
    } else if (const auto* r = std::get_if<double>(&sample.value)) {
      ++s.finite;
      x = *r;
    } else {
      ++s.indeterminate;
    }
    if (x && !sample.supplementary) {
      total += *x;
      ++used;
    }
  }
  if (used > 0) s.mean = total / static_cast<double>(used);
  return s;
}

std::optional<double> mean_ratio(const SampleSeries& numerator, const SampleSeries& denominator) {
  double total = 0.0;
  std::size_t used = 0;
  for (const auto& n : numerator.samples) {
    const auto* nv = std::get_if<MetricValue>(&n.value);
    if (!nv || !nv->is_finite()) continue;
    const auto it = std::find_if(denominator.samples.begin(), denominator.samples.end(),
                                 [&](const Sample& d) { return d.anchor == n.anchor; });
    if (it == denominator.samples.end()) continue;
    const auto* dv = std::get_if<MetricValue>(&it->value);
    if (!dv || !dv->is_finite() || dv->duration() == 0) continue;
    total += static_cast<double>(nv->duration()) / static_cast<double>(dv->duration());
    ++used;
  }
  if (used == 0) return std::nullopt;
  return total / static_cast<double>(used);
}

std::vector<std::string> ValidationReport::messages() const {
  std::vector<std::string> out;
  out.reserve(violations.size());
  for (const auto& v : violations) out.push_back(v.message);
  return out;
}

ValidationReport validate_inputs(const EffectivenessMatrix& matrix,
                                 const std::vector<GenerationTimeline>& timelines) {
  ValidationReport report;
  const Time end = matrix.end();
  const auto n = static_cast<Time>(matrix.size());

  for (Time t = 0; t < n; ++t) {
    for (Time tp = 0; tp < n; ++tp) {
      const auto v = matrix.at(t, tp);
      if (v && !(*v >= 0.0 && *v <= 1.0)) {
        std::ostringstream os;
        os << "value " << *v << " at (" << t << "," << tp << ") outside [0,1]";
        report.violations.push_back({ViolationKind::ValueOutOfRange, os.str()});
      }
    }
  }

  for (const auto& tl : timelines) {
    const std::string who{to_string(tl.party)};
    if (tl.instants.empty()) {
      report.violations.push_back({ViolationKind::EmptyTimeline, who + " timeline is empty"});
      continue;
    }
    for (std::size_t i = 0; i < tl.instants.size(); ++i) {
      const Time t = tl.instants[i];
      if (t < 0 || t > end) {
        report.violations.push_back(
            {ViolationKind::OutOfHorizon, who + " instant " + std::to_string(t) +
                                              " outside horizon [0," + std::to_string(end) + "]"});
      }
      if (i > 0 && t <= tl.instants[i - 1]) {
        report.violations.push_back(
            {ViolationKind::NonMonotone, who + " instants not strictly increasing at " +
                                             std::to_string(tl.instants[i - 1]) + ", " +
                                             std::to_string(t)});
      }
    }
    if (!tl.labels.empty()) {
      if (tl.labels.size() != tl.instants.size()) {
        report.violations.push_back(
            {ViolationKind::LabelCountMismatch,
             who + " timeline has " + std::to_string(tl.labels.size()) + " labels for " +
                 std::to_string(tl.instants.size()) + " instants"});
      } else {
        for (std::size_t i = 1; i < tl.labels.size(); ++i) {
          if (tl.labels[i] == tl.labels[i - 1]) {
            report.violations.push_back(
                {ViolationKind::RepeatedLabel, who + " label '" + tl.labels[i] +
                                                   "' repeats at consecutive instants " +
                                                   std::to_string(tl.instants[i - 1]) + ", " +
                                                   std::to_string(tl.instants[i])});
          }
        }
      }
    }
  }
  return report;
}

void require_timeline(const GenerationTimeline& timeline, Time end, std::string_view what) {
  if (timeline.instants.empty()) {
    throw PreconditionError(std::string(what) + ": timeline has no instants");
  }
  for (std::size_t i = 0; i < timeline.instants.size(); ++i) {
    const Time t = timeline.instants[i];
    if (t < 0 || t > end) {
      throw PreconditionError(std::string(what) + ": instant " + std::to_string(t) +
                              " outside horizon");
    }
    if (i > 0 && t <= timeline.instants[i - 1]) {
      throw PreconditionError(std::string(what) + ": instants must be strictly increasing");
    }
  }
}

}  // namespace agility
