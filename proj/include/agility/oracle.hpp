#pragma once

// Brute-force reference for every metric. Each quantity is computed by
// enumerating the candidate sets of its definition directly; nothing is
// shared with the main implementations except the domain types.

#include "agility/report.hpp"

namespace agility {

inline constexpr Time kOracleMaxHorizonEnd = 50;

// Same report shape as compute_report. Throws PreconditionError for T > 50.
AgilityReport oracle_metrics(const EffectivenessMatrix& matrix, const GenerationTimeline& defense,
                             const GenerationTimeline& attack, const RunParams& params,
                             std::string source = {});

// Exhaustive pair scan for probable attack generations at threshold tau.
std::vector<Time> oracle_probable_generations(const EffectivenessMatrix& normalized, double tau);

}  // namespace agility
