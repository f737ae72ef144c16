#pragma once

// Effectiveness metrics: Evolutionary-Effectiveness (EE),
// Relative-Generational-Impact (RGI) and Aggregated-Generational-Impact (AGI).

#include <optional>
#include <span>
#include <vector>

#include "agility/timeline.hpp"

namespace agility {

enum class EeVariant {
  FullHorizon,     // mean over t = 0..T
  FromGeneration,  // mean over t = t'_j..T
};

// EE(D,j): mean of D_t(A_{t'_j}) over present entries. The j = 0 sample is
// marked supplementary.
SampleSeries ee_defender(const EffectivenessMatrix& matrix, const GenerationTimeline& attack,
                         EeVariant variant = EeVariant::FullHorizon);

// EE(A,i): mean of D_{t_i}(A_t') over present entries of row t_i.
SampleSeries ee_attacker(const EffectivenessMatrix& matrix, const GenerationTimeline& defense);

// RGI(D,t) = D_t(A_t) - D_{t-1}(A_{t-1}) for t = 1..T where both are present.
// The attacker series is the exact negation.
SampleSeries rgi_series(const EffectivenessMatrix& matrix, Party party = Party::Defender);

enum class GainSign {
  Signed,   // a drop in effectiveness contributes a negative gain
  Printed,  // every non-flat interval contributes its unsigned triangle area
};

struct SecurityGain {
  Time index = 0;  // interval end (discrete) or segment number (continuous)
  double width = 1.0;
  double gain = 0.0;

  bool operator==(const SecurityGain&) const = default;
};

struct SecurityGainSeries {
  std::vector<SecurityGain> gains;

  double total() const noexcept;
};

struct AgiResult {
  SecurityGainSeries series;
  std::optional<double> agi;  // defender; nullopt when no valid interval exists
  double duration = 0.0;      // divisor used for the average

  std::optional<double> attacker() const {
    if (!agi) return std::nullopt;
    return -*agi;
  }
};

// Discrete AGI over the diagonal. Intervals with a Missing endpoint are
// skipped and the divisor shrinks to the number of valid intervals.
AgiResult agi_discrete(const EffectivenessMatrix& matrix, GainSign sign = GainSign::Signed);

struct CurvePoint {
  double time;
  double value;
};

enum class Segmentation {
  // Every linear piece between consecutive points is its own segment.
  LinearPieces,
  // Consecutive pieces with the same slope sign merge into one segment.
  MaximalMonotone,
};

struct ContinuousAgiOptions {
  GainSign sign = GainSign::Signed;
  Segmentation segmentation = Segmentation::LinearPieces;
};

// AGI of the piecewise-linear interpolation of `curve`. Per segment the gain
// is the area between the curve and its left value; the average divides by
// the curve duration. Throws PreconditionError on non-increasing times.
AgiResult agi_continuous(std::span<const CurvePoint> curve, ContinuousAgiOptions options = {});

}  // namespace agility
