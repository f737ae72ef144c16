#pragma once

// Probable attack generations and virtual-party aggregation.

#include <span>
#include <vector>

#include "agility/timeline.hpp"

namespace agility {

enum class CandidateGranularity { EveryTimeUnit, ProvidedList };

struct InferenceParams {
  double tau = 0.2;  // 0 < tau < 1
  CandidateGranularity granularity = CandidateGranularity::EveryTimeUnit;
  std::vector<Time> candidates;  // used with ProvidedList
};

// Time 0 plus every candidate t' for which some earlier t has
// D_t(A_t) - D_t(A_t') > tau. Missing entries never satisfy the inequality.
// The result is flagged `probable`.
GenerationTimeline infer_attack_generations(const EffectivenessMatrix& matrix,
                                            const InferenceParams& params);

// Set-union of instants. Labels of colliding instants are joined with '+'.
// Throws PreconditionError on an empty list or mixed parties.
GenerationTimeline merge_parties(std::span<const GenerationTimeline> timelines);

}  // namespace agility
