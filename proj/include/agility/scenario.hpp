#pragma once

// Seeded synthetic co-evolution scenarios.
//
// Generation gaps are 1 + Geometric(1/rate), so the mean gap equals the
// configured rate (rates below 1 give gap 1). Both parties generate at time
// 0. Matrix values are constant within each (defense generation, attack
// generation) block:
//
//   StepResponse  base + m*(defense gens so far) - m*(attack gens so far)
//   Stalemate     same formula, but one attack generation follows each
//                 defense generation before the next one, so the diagonal
//                 keeps returning to base. Defense gaps are at least 2 to
//                 leave room for the answer.
//   Drift         base + (m/T)*(t_gen - t'_gen/2), a constant slope in the
//                 latest generation instants
//
// plus optional uniform block noise, clamped to [0,1]. base ~ U(0.3, 0.7).
// Finally round(missing_fraction * (T+1)^2) cells are masked.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "agility/ingestion.hpp"

namespace agility {

enum class EffectivenessModel { StepResponse, Drift, Stalemate };

std::string_view to_string(EffectivenessModel m);
EffectivenessModel parse_effectiveness_model(std::string_view s);

struct ScenarioConfig {
  Time horizon_length = 50;  // T
  double defense_gen_rate = 5.0;
  double attack_gen_rate = 5.0;
  EffectivenessModel model = EffectivenessModel::StepResponse;
  double gen_effect_magnitude = 0.1;
  double missing_fraction = 0.0;
  double noise = 0.0;  // half-width of the per-block uniform noise
  std::uint64_t seed = 1;

  // Throws PreconditionError naming the offending field.
  void validate() const;
};

// key=value lines; '#' starts a comment. Unknown keys are errors.
ScenarioConfig parse_scenario_config(std::istream& in);
ScenarioConfig parse_scenario_config(const std::filesystem::path& path);
std::string scenario_config_to_text(const ScenarioConfig& config);

MatrixFile generate_scenario(const ScenarioConfig& config);

// Scenario i uses seed + i. Runs on up to `threads` workers (0 = hardware).
std::vector<MatrixFile> generate_batch(const ScenarioConfig& config, std::size_t count,
                                       std::size_t threads = 0);

}  // namespace agility
