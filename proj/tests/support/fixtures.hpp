#pragma once

#include <filesystem>
#include <random>
#include <vector>

#include "agility/ingestion.hpp"

namespace agility::testing {

std::filesystem::path data_dir();
MatrixFile toy_fixture();

// Matrix from explicit rows, no missing entries.
EffectivenessMatrix matrix_from_rows(const std::vector<std::vector<double>>& rows);

GenerationTimeline timeline(Party p, std::vector<Time> instants);

// Entries drawn from {0, 1/8, ..., 1}, so sums and 1-v are exact.
// `missing` is the per-cell probability of a Missing entry.
EffectivenessMatrix random_dyadic_matrix(std::mt19937_64& rng, Time end, double missing = 0.0);

// Uniform reals in [0,1].
EffectivenessMatrix random_real_matrix(std::mt19937_64& rng, Time end, double missing = 0.0);

// Random strictly increasing instants starting at 0.
GenerationTimeline random_timeline(std::mt19937_64& rng, Party p, Time end, double density = 0.4);

// v -> 1 - v with (t,t') swapped.
EffectivenessMatrix transpose_complement(const EffectivenessMatrix& m);

// Synthetic stand-in for the honeypot study: T = 900, twelve defense
// generations, every time unit an attack candidate, tuned so that
// TT(D,235) = 65, TT(D,586) = 59, TT(D,88) = TT(D,123) = +inf and
// EGT(D,0) = 208, with diagonal steps inside +-0.10.
MatrixFile honeypot_shape();

// Three attack generations at 238, 609, 973 over T = 1000.
MatrixFile defcon_shape();

}  // namespace agility::testing
