#pragma once

// Timeliness metrics: Generation-Time (GT), Effective-Generation-Time (EGT),
// Triggering-Time (TT) and Lagging-Behind-Time (LBT).
//
// Every function expects a LargerIsBetter matrix (see normalize_orientation)
// and timelines expressed in re-based horizon time.

#include <span>
#include <vector>

#include "agility/timeline.hpp"

namespace agility {

// GT(X,i) = t_{i+1} - t_i, anchored at t_i. Empty series for one instant.
SampleSeries gt_samples(const GenerationTimeline& timeline);

struct EgtOptions {
  // An improvement must exceed the anchor value by more than this.
  double tolerance = 0.0;
};

// EGT(D,i): time from t_i to the first later defense generation whose
// effectiveness against A_{t_i} strictly exceeds D_{t_i}(A_{t_i}).
// +inf when none does; Indeterminate when a Missing entry is reached first.
SampleSeries egt_defender(const EffectivenessMatrix& matrix, const GenerationTimeline& defense,
                          EgtOptions options = {});

// EGT(A,j): time from t'_j to the first later attack generation that pushes
// D_{t'_j}(A_.) strictly below D_{t'_j}(A_{t'_j}).
SampleSeries egt_attacker(const EffectivenessMatrix& matrix, const GenerationTimeline& attack,
                          EgtOptions options = {});

enum class TieBreak { MostRecent, Earliest };

struct TtOptions {
  TieBreak tie_break = TieBreak::MostRecent;
};

// TT(D,i) for i >= 1: t_i - t' where t' (drawn from attack_times, t' < t_i)
// maximises the positive change D_{t_i}(A_t') - D_{t_{i-1}}(A_t').
// Requires at least two defense instants.
SampleSeries tt_defender(const EffectivenessMatrix& matrix, const GenerationTimeline& defense,
                         std::span<const Time> attack_times, TtOptions options = {});

// TT(A,j) for j >= 1: t'_j - t where t (from defense_times, t < t'_j)
// minimises the negative change D_t(A_{t'_j}) - D_t(A_{t'_{j-1}}).
SampleSeries tt_attacker(const EffectivenessMatrix& matrix, const GenerationTimeline& attack,
                         std::span<const Time> defense_times, TtOptions options = {});

enum class LbtMode { Strict, AveragedRelaxation };

struct LbtParams {
  double epsilon = 0.12;
  LbtMode mode = LbtMode::Strict;
};

struct LbtResult {
  MetricValue value = MetricValue::minus_infinity();
  // Lags whose diagonal has no present entry; never qualify.
  std::vector<Time> empty_lags;
  // Missing entries across all lag diagonals of the relevant triangle.
  std::size_t skipped_entries = 0;

  bool operator==(const LbtResult&) const = default;
};

// Smallest lag λ with D_t(A_{t-λ}) >= ε for every present t >= λ (Strict),
// or with the diagonal mean >= ε (AveragedRelaxation). -inf when none.
LbtResult lbt_defender(const EffectivenessMatrix& matrix, const LbtParams& params);

// Largest lag λ with D_t(A_{t+λ}) >= ε for every present t <= T-λ.
LbtResult lbt_attacker(const EffectivenessMatrix& matrix, const LbtParams& params);

// Per-lag diagonal statistics, for plotting LBT against the ε line.
struct LagProfile {
  Time lag = 0;
  std::size_t present = 0;
  std::optional<double> mean;
  std::optional<double> min;
};

std::vector<LagProfile> lag_profile(const EffectivenessMatrix& matrix, Party party);

}  // namespace agility
