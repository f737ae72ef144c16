#include "agility/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>
#include <thread>

#include "agility/error.hpp"

namespace agility {
namespace {

constexpr std::pair<std::string_view, EffectivenessModel> kModels[] = {
    {"step-response", EffectivenessModel::StepResponse},
    {"drift", EffectivenessModel::Drift},
    {"stalemate", EffectivenessModel::Stalemate},
};

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(std::string_view text, std::size_t line, std::string_view key) {
  T v{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw ParseError(line, "bad value '" + std::string(text) + "' for " + std::string(key));
  }
  return v;
}

Time draw_gap(std::mt19937_64& rng, double mean) {
  const double p = 1.0 / mean;
  if (p >= 1.0) return 1;
  std::geometric_distribution<Time> geo(p);
  return 1 + geo(rng);
}

std::vector<Time> draw_instants(std::mt19937_64& rng, double mean, Time end, Time min_gap = 1) {
  auto gap = [&] { return std::max(min_gap, draw_gap(rng, mean)); };
  std::vector<Time> out{0};
  for (Time t = gap(); t <= end; t += gap()) out.push_back(t);
  return out;
}

// Attack generation strictly inside each defense gap, when there is room.
std::vector<Time> answer_instants(std::mt19937_64& rng, double mean,
                                  const std::vector<Time>& defense, Time end) {
  std::vector<Time> out{0};
  for (std::size_t i = 1; i < defense.size(); ++i) {
    const Time next = i + 1 < defense.size() ? defense[i + 1] : end + 1;
    const Time room = next - defense[i] - 1;
    if (room < 1) continue;
    out.push_back(defense[i] + std::min(draw_gap(rng, mean), room));
  }
  return out;
}

// index of the latest instant <= t, per time unit
std::vector<std::size_t> generation_index(const std::vector<Time>& instants, Time end) {
  std::vector<std::size_t> idx(static_cast<std::size_t>(end + 1));
  std::size_t g = 0;
  for (Time t = 0; t <= end; ++t) {
    while (g + 1 < instants.size() && instants[g + 1] <= t) ++g;
    idx[static_cast<std::size_t>(t)] = g;
  }
  return idx;
}

}  // namespace

std::string_view to_string(EffectivenessModel m) {
  for (const auto& [name, value] : kModels) {
    if (value == m) return name;
  }
  return "?";
}

EffectivenessModel parse_effectiveness_model(std::string_view s) {
  for (const auto& [name, value] : kModels) {
    if (name == s) return value;
  }
  throw PreconditionError("unknown effectiveness model '" + std::string(s) +
                          "' (step-response|drift|stalemate)");
}

void ScenarioConfig::validate() const {
  if (horizon_length < 1 || horizon_length > kMaxHorizonEnd) {
    throw PreconditionError("horizon_length must lie in [1," + std::to_string(kMaxHorizonEnd) +
                            "]");
  }
  if (!(defense_gen_rate > 0.0) || !std::isfinite(defense_gen_rate)) {
    throw PreconditionError("defense_gen_rate must be positive");
  }
  if (!(attack_gen_rate > 0.0) || !std::isfinite(attack_gen_rate)) {
    throw PreconditionError("attack_gen_rate must be positive");
  }
  if (!(gen_effect_magnitude >= 0.0 && gen_effect_magnitude <= 1.0)) {
    throw PreconditionError("gen_effect_magnitude must lie in [0,1]");
  }
  if (!(missing_fraction >= 0.0 && missing_fraction < 1.0)) {
    throw PreconditionError("missing_fraction must lie in [0,1)");
  }
  if (!(noise >= 0.0 && noise <= 1.0)) throw PreconditionError("noise must lie in [0,1]");
}

ScenarioConfig parse_scenario_config(std::istream& in) {
  ScenarioConfig c;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    auto text = std::string_view(raw);
    if (const auto hash = text.find('#'); hash != std::string_view::npos) {
      text = text.substr(0, hash);
    }
    text = trim(text);
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) throw ParseError(line, "expected key=value");
    const auto key = trim(text.substr(0, eq));
    const auto value = trim(text.substr(eq + 1));
    if (key == "horizon_length") {
      c.horizon_length = parse_number<Time>(value, line, key);
    } else if (key == "defense_gen_rate") {
      c.defense_gen_rate = parse_number<double>(value, line, key);
    } else if (key == "attack_gen_rate") {
      c.attack_gen_rate = parse_number<double>(value, line, key);
    } else if (key == "effectiveness_model") {
      try {
        c.model = parse_effectiveness_model(value);
      } catch (const PreconditionError& e) {
        throw ParseError(line, e.what());
      }
    } else if (key == "gen_effect_magnitude") {
      c.gen_effect_magnitude = parse_number<double>(value, line, key);
    } else if (key == "missing_fraction") {
      c.missing_fraction = parse_number<double>(value, line, key);
    } else if (key == "noise") {
      c.noise = parse_number<double>(value, line, key);
    } else if (key == "seed") {
      c.seed = parse_number<std::uint64_t>(value, line, key);
    } else {
      throw ParseError(line, "unknown key '" + std::string(key) + "'");
    }
  }
  c.validate();
  return c;
}

ScenarioConfig parse_scenario_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  return parse_scenario_config(in);
}

std::string scenario_config_to_text(const ScenarioConfig& c) {
  std::ostringstream os;
  os << "horizon_length=" << c.horizon_length << '\n'
     << "defense_gen_rate=" << format_double(c.defense_gen_rate) << '\n'
     << "attack_gen_rate=" << format_double(c.attack_gen_rate) << '\n'
     << "effectiveness_model=" << to_string(c.model) << '\n'
     << "gen_effect_magnitude=" << format_double(c.gen_effect_magnitude) << '\n'
     << "missing_fraction=" << format_double(c.missing_fraction) << '\n'
     << "noise=" << format_double(c.noise) << '\n'
     << "seed=" << c.seed << '\n';
  return os.str();
}

MatrixFile generate_scenario(const ScenarioConfig& c) {
  c.validate();
  std::mt19937_64 rng(c.seed);
  const Time end = c.horizon_length;

  const bool stalemate = c.model == EffectivenessModel::Stalemate;
  auto defense = draw_instants(rng, c.defense_gen_rate, end, stalemate ? 2 : 1);
  auto attack = stalemate
                    ? answer_instants(rng, c.attack_gen_rate, defense, end)
                    : draw_instants(rng, c.attack_gen_rate, end);

  std::uniform_real_distribution<double> base_dist(0.3, 0.7);
  const double base = base_dist(rng);

  std::vector<double> block_noise(defense.size() * attack.size(), 0.0);
  if (c.noise > 0.0) {
    std::uniform_real_distribution<double> nd(-c.noise, c.noise);
    for (auto& n : block_noise) n = nd(rng);
  }

  const auto didx = generation_index(defense, end);
  const auto aidx = generation_index(attack, end);
  const double m = c.gen_effect_magnitude;
  const double slope = m / static_cast<double>(end);

  TimeHorizon h;
  h.end = end;
  EffectivenessMatrix matrix(h, "synthetic effectiveness", Orientation::LargerIsBetter);
  for (Time t = 0; t <= end; ++t) {
    const auto dg = didx[static_cast<std::size_t>(t)];
    for (Time tp = 0; tp <= end; ++tp) {
      const auto ag = aidx[static_cast<std::size_t>(tp)];
      double v = 0.0;
      switch (c.model) {
        case EffectivenessModel::StepResponse:
        case EffectivenessModel::Stalemate:
          v = base + m * static_cast<double>(dg) - m * static_cast<double>(ag);
          break;
        case EffectivenessModel::Drift:
          v = base + slope * (static_cast<double>(defense[dg]) -
                              0.5 * static_cast<double>(attack[ag]));
          break;
      }
      v += block_noise[dg * attack.size() + ag];
      matrix.set(t, tp, std::clamp(v, 0.0, 1.0));
    }
  }

  if (c.missing_fraction > 0.0) {
    const std::size_t n = matrix.size();
    std::vector<std::size_t> cells(n * n);
    std::iota(cells.begin(), cells.end(), std::size_t{0});
    std::shuffle(cells.begin(), cells.end(), rng);
    const auto k = static_cast<std::size_t>(
        std::llround(c.missing_fraction * static_cast<double>(cells.size())));
    for (std::size_t i = 0; i < k; ++i) {
      matrix.clear(static_cast<Time>(cells[i] / n), static_cast<Time>(cells[i] % n));
    }
  }

  return MatrixFile{std::move(matrix),
                    GenerationTimeline{Party::Defender, std::move(defense), {}, false},
                    GenerationTimeline{Party::Attacker, std::move(attack), {}, false}};
}

std::vector<MatrixFile> generate_batch(const ScenarioConfig& config, std::size_t count,
                                       std::size_t threads) {
  config.validate();
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, std::max<std::size_t>(count, 1));

  std::vector<std::optional<MatrixFile>> slots(count);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;

  auto work = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        ScenarioConfig c = config;
        c.seed = config.seed + i;
        slots[i] = generate_scenario(c);
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
      }
    }
  };

  if (threads <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<MatrixFile> out;
  out.reserve(count);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

}  // namespace agility
