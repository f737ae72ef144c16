#include "support/fixtures.hpp"

#include <algorithm>

namespace agility::testing {

std::filesystem::path data_dir() { return AGILITY_DATA_DIR; }

MatrixFile toy_fixture() { return parse_matrix_csv(data_dir() / "toy_example.csv"); }

EffectivenessMatrix matrix_from_rows(const std::vector<std::vector<double>>& rows) {
  TimeHorizon h;
  h.end = static_cast<Time>(rows.size()) - 1;
  EffectivenessMatrix m(h);
  for (std::size_t t = 0; t < rows.size(); ++t) {
    for (std::size_t tp = 0; tp < rows[t].size(); ++tp) {
      m.set(static_cast<Time>(t), static_cast<Time>(tp), rows[t][tp]);
    }
  }
  return m;
}

GenerationTimeline timeline(Party p, std::vector<Time> instants) {
  return GenerationTimeline{p, std::move(instants), {}, false};
}

namespace {

template <typename Draw>
EffectivenessMatrix random_matrix(std::mt19937_64& rng, Time end, double missing, Draw draw) {
  TimeHorizon h;
  h.end = end;
  EffectivenessMatrix m(h);
  std::bernoulli_distribution gap(missing);
  for (Time t = 0; t <= end; ++t) {
    for (Time tp = 0; tp <= end; ++tp) {
      const double v = draw(rng);
      if (!gap(rng)) m.set(t, tp, v);
    }
  }
  return m;
}

}  // namespace

EffectivenessMatrix random_dyadic_matrix(std::mt19937_64& rng, Time end, double missing) {
  std::uniform_int_distribution<int> k(0, 8);
  return random_matrix(rng, end, missing, [&](std::mt19937_64& r) { return k(r) / 8.0; });
}

EffectivenessMatrix random_real_matrix(std::mt19937_64& rng, Time end, double missing) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return random_matrix(rng, end, missing, [&](std::mt19937_64& r) { return u(r); });
}

GenerationTimeline random_timeline(std::mt19937_64& rng, Party p, Time end, double density) {
  std::bernoulli_distribution pick(density);
  GenerationTimeline tl = timeline(p, {0});
  for (Time t = 1; t <= end; ++t) {
    if (pick(rng)) tl.instants.push_back(t);
  }
  return tl;
}

EffectivenessMatrix transpose_complement(const EffectivenessMatrix& m) {
  EffectivenessMatrix out(m.horizon(), m.metric_name(), m.orientation());
  for (Time t = 0; t <= m.end(); ++t) {
    for (Time tp = 0; tp <= m.end(); ++tp) {
      if (const auto v = m.at(t, tp)) out.set(tp, t, 1.0 - *v);
    }
  }
  return out;
}

MatrixFile honeypot_shape() {
  const Time end = 900;
  const std::vector<Time> gens = {0, 88, 123, 138, 208, 235, 284, 346, 501, 586, 685, 825};
  // trigger chosen for each generation from index 3 on
  const std::vector<Time> trigger = {-1, -1, -1, 10, 10, 170, 10, 10, 10, 527, 10, 10};

  const auto n = static_cast<std::size_t>(end + 1);
  std::vector<double> base(n);
  for (std::size_t tp = 0; tp < n; ++tp) base[tp] = 0.05 + 0.09 * ((tp * 37) % 11) / 10.0;

  // rows[g][t'] for generation g; generations 1 and 2 repeat generation 0
  std::vector<std::vector<double>> rows(gens.size(), base);
  for (std::size_t g = 3; g < gens.size(); ++g) {
    rows[g] = rows[g - 1];
    for (Time tp = 0; tp < gens[g]; ++tp) {
      if (tp >= 10 || gens[g] == 208) rows[g][static_cast<std::size_t>(tp)] += 0.01;
    }
    rows[g][static_cast<std::size_t>(trigger[g])] += 0.02;
  }

  TimeHorizon h;
  h.end = end;
  EffectivenessMatrix m(h, "true-positive rate");
  std::size_t g = 0;
  for (Time t = 0; t <= end; ++t) {
    while (g + 1 < gens.size() && gens[g + 1] <= t) ++g;
    for (Time tp = 0; tp <= end; ++tp) m.set(t, tp, rows[g][static_cast<std::size_t>(tp)]);
  }
  std::vector<Time> every(n);
  for (std::size_t i = 0; i < n; ++i) every[i] = static_cast<Time>(i);
  return MatrixFile{std::move(m), timeline(Party::Defender, gens),
                    timeline(Party::Attacker, std::move(every))};
}

MatrixFile defcon_shape() {
  const Time end = 1000;
  TimeHorizon h;
  h.end = end;
  EffectivenessMatrix m(h, "true-positive rate");
  const std::vector<Time> attacks = {238, 609, 973};
  for (Time t = 0; t <= end; ++t) {
    for (Time tp = 0; tp <= end; ++tp) {
      const auto later = std::count_if(attacks.begin(), attacks.end(), [&](Time a) { return a <= tp; });
      m.set(t, tp, std::clamp(0.3 + 0.0004 * static_cast<double>(t) - 0.08 * static_cast<double>(later), 0.0, 1.0));
    }
  }
  return MatrixFile{std::move(m), timeline(Party::Defender, {0, 120, 480, 800}),
                    timeline(Party::Attacker, attacks)};
}

}  // namespace agility::testing
