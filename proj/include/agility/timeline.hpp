#pragma once

// Core domain types: the discrete time horizon, per-party generation
// timelines, the effectiveness matrix D_t(A_t') and sampled metric series.
//
// All times handled by the metric code are re-based so the horizon starts
// at 0; TimeHorizon::offset keeps the original origin for display.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace agility {

using Time = std::int64_t;

// Dense storage bound: a matrix holds (T+1)^2 cells.
inline constexpr Time kMaxHorizonEnd = 10000;

enum class Party { Defender, Attacker };

enum class Orientation { LargerIsBetter, SmallerIsBetter };

std::string_view to_string(Party p);
std::string_view to_string(Orientation o);

struct TimeHorizon {
  Time start = 0;
  Time end = 0;  // T, inclusive
  Time offset = 0;
  std::string unit_label = "day";

  Time length() const noexcept { return end - start; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(end - start + 1); }
  bool contains(Time t) const noexcept { return t >= start && t <= end; }

  bool operator==(const TimeHorizon&) const = default;
};

struct Span {
  Time start;
  Time end;
};

// Union horizon [min start, max end], re-based so the earliest start is 0.
TimeHorizon align_horizons(Span defender, Span attacker);

struct GenerationTimeline {
  Party party = Party::Defender;
  std::vector<Time> instants;
  std::vector<std::string> labels;  // empty, or one per instant
  bool probable = false;            // inferred rather than observed

  std::size_t count() const noexcept { return instants.size(); }

  bool operator==(const GenerationTimeline&) const = default;
};

// Dense (T+1)x(T+1) grid indexed by (defense time t, attack time t') with an
// explicit presence mask. Entries start out Missing.
class EffectivenessMatrix {
 public:
  explicit EffectivenessMatrix(TimeHorizon horizon, std::string metric_name = "effectiveness",
                               Orientation orientation = Orientation::LargerIsBetter);

  const TimeHorizon& horizon() const noexcept { return horizon_; }
  Time end() const noexcept { return horizon_.end; }
  std::size_t size() const noexcept { return n_; }
  const std::string& metric_name() const noexcept { return metric_name_; }
  Orientation orientation() const noexcept { return orientation_; }

  bool in_range(Time t, Time tp) const noexcept {
    return t >= 0 && tp >= 0 && static_cast<std::size_t>(t) < n_ &&
           static_cast<std::size_t>(tp) < n_;
  }
  bool present(Time t, Time tp) const noexcept { return in_range(t, tp) && mask_[index(t, tp)]; }
  std::optional<double> at(Time t, Time tp) const noexcept;
  // Throws PreconditionError when the entry is absent.
  double value(Time t, Time tp) const;

  void set(Time t, Time tp, double v);
  void clear(Time t, Time tp);

  std::size_t present_count() const noexcept;

  EffectivenessMatrix with_orientation(Orientation o) const;
  EffectivenessMatrix with_metric_name(std::string name) const;

  bool operator==(const EffectivenessMatrix& other) const;

 private:
  std::size_t index(Time t, Time tp) const noexcept {
    return static_cast<std::size_t>(t) * n_ + static_cast<std::size_t>(tp);
  }

  TimeHorizon horizon_;
  std::string metric_name_;
  Orientation orientation_;
  std::size_t n_;
  std::vector<double> values_;
  std::vector<unsigned char> mask_;
};

// Flips SmallerIsBetter matrices to LargerIsBetter via v -> 1 - v.
// Throws DomainError naming (t,t') when a present value is outside [0,1].
EffectivenessMatrix normalize_orientation(const EffectivenessMatrix& matrix);

// Duration-valued metric result with the two sentinels.
class MetricValue {
 public:
  enum class Kind { Finite, PlusInfinity, MinusInfinity };

  static MetricValue finite(Time duration);
  static MetricValue plus_infinity() noexcept { return MetricValue(Kind::PlusInfinity, 0); }
  static MetricValue minus_infinity() noexcept { return MetricValue(Kind::MinusInfinity, 0); }

  Kind kind() const noexcept { return kind_; }
  bool is_finite() const noexcept { return kind_ == Kind::Finite; }
  Time duration() const;

  // "+inf", "-inf" or the decimal duration.
  std::string to_string() const;
  static MetricValue parse(std::string_view text);

  bool operator==(const MetricValue&) const = default;

 private:
  MetricValue(Kind k, Time d) noexcept : kind_(k), duration_(d) {}

  Kind kind_;
  Time duration_;
};

// A sample whose inputs were Missing; excluded from summaries.
struct Indeterminate {
  bool operator==(const Indeterminate&) const = default;
};

using SampleValue = std::variant<MetricValue, double, Indeterminate>;

struct Sample {
  Time anchor = 0;
  SampleValue value = Indeterminate{};
  // Computed for completeness but outside the index range the metric is
  // defined on (e.g. EE at the base generation).
  bool supplementary = false;

  bool operator==(const Sample&) const = default;
};

struct SeriesSummary {
  std::size_t count = 0;
  std::size_t finite = 0;
  std::size_t plus_infinity = 0;
  std::size_t minus_infinity = 0;
  std::size_t indeterminate = 0;
  std::size_t supplementary = 0;
  std::optional<double> mean;  // over finite, non-supplementary samples
};

enum class ValueKind { Duration, Real };

struct SampleSeries {
  std::string metric_name;
  Party party = Party::Defender;
  ValueKind kind = ValueKind::Duration;
  std::vector<Sample> samples;

  SeriesSummary summary() const;
};

// Mean of numerator/denominator over anchors where both samples are finite
// durations. Used for the EGT-to-GT ratio.
std::optional<double> mean_ratio(const SampleSeries& numerator, const SampleSeries& denominator);

enum class ViolationKind {
  OutOfHorizon,
  NonMonotone,
  ValueOutOfRange,
  RepeatedLabel,
  EmptyTimeline,
  LabelCountMismatch,
};

struct Violation {
  ViolationKind kind;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const noexcept { return violations.empty(); }
  std::vector<std::string> messages() const;
};

ValidationReport validate_inputs(const EffectivenessMatrix& matrix,
                                 const std::vector<GenerationTimeline>& timelines);

// Throws PreconditionError unless instants are non-empty, strictly
// increasing and inside [0, end].
void require_timeline(const GenerationTimeline& timeline, Time end, std::string_view what);

}  // namespace agility
