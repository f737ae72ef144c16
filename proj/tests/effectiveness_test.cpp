#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "agility/effectiveness.hpp"
#include "agility/error.hpp"
#include "support/fixtures.hpp"

namespace agility {
namespace {

using testing::matrix_from_rows;
using testing::timeline;

double real(const Sample& s) { return std::get<double>(s.value); }

EffectivenessMatrix diagonal_matrix(const std::vector<double>& diag) {
  TimeHorizon h;
  h.end = static_cast<Time>(diag.size()) - 1;
  EffectivenessMatrix m(h);
  for (std::size_t i = 0; i < diag.size(); ++i) m.set(static_cast<Time>(i), static_cast<Time>(i), diag[i]);
  return m;
}

std::vector<double> random_diagonal(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> d(n);
  for (auto& x : d) x = u(rng);
  return d;
}

// ---- EE ----

TEST(EvolutionaryEffectiveness, ColumnMean) {
  auto m = matrix_from_rows({{0.0, 0.3, 0.0}, {0.0, 0.6, 0.0}, {0.0, 0.9, 0.0}});
  const auto s = ee_defender(m, timeline(Party::Attacker, {0, 1}));
  ASSERT_EQ(s.samples.size(), 2u);
  EXPECT_TRUE(s.samples[0].supplementary);
  EXPECT_FALSE(s.samples[1].supplementary);
  EXPECT_EQ(s.samples[1].anchor, 1);
  EXPECT_NEAR(real(s.samples[1]), 0.6, 1e-15);
}

TEST(EvolutionaryEffectiveness, ConstantMatrix) {
  TimeHorizon h;
  h.end = 4;
  EffectivenessMatrix m(h);
  for (Time t = 0; t <= 4; ++t)
    for (Time tp = 0; tp <= 4; ++tp) m.set(t, tp, 0.375);
  for (const auto& s : ee_defender(m, timeline(Party::Attacker, {0, 2, 3})).samples) EXPECT_EQ(real(s), 0.375);
  for (const auto& s : ee_attacker(m, timeline(Party::Defender, {0, 4})).samples) EXPECT_EQ(real(s), 0.375);
}

TEST(EvolutionaryEffectiveness, DivisorIsPresentCount) {
  TimeHorizon h;
  h.end = 5;
  EffectivenessMatrix m(h);
  m.set(3, 2, 0.7);
  const auto s = ee_defender(m, timeline(Party::Attacker, {0, 2}));
  EXPECT_TRUE(std::holds_alternative<Indeterminate>(s.samples[0].value));
  EXPECT_EQ(real(s.samples[1]), 0.7);
}

TEST(EvolutionaryEffectiveness, FromGenerationVariant) {
  auto m = matrix_from_rows({{0.0, 0.2, 0.0}, {0.0, 0.4, 0.0}, {0.0, 0.8, 0.0}});
  const auto full = ee_defender(m, timeline(Party::Attacker, {0, 1}), EeVariant::FullHorizon);
  const auto from = ee_defender(m, timeline(Party::Attacker, {0, 1}), EeVariant::FromGeneration);
  EXPECT_NEAR(real(full.samples[1]), 1.4 / 3.0, 1e-15);
  EXPECT_NEAR(real(from.samples[1]), 0.6, 1e-15);
}

TEST(EvolutionaryEffectiveness, AttackerRowMean) {
  auto m = matrix_from_rows({{0.0, 0.0, 0.0}, {0.2, 0.2, 0.8}, {1.0, 1.0, 1.0}});
  const auto s = ee_attacker(m, timeline(Party::Defender, {0, 1, 2}));
  ASSERT_EQ(s.samples.size(), 3u);
  EXPECT_NEAR(real(s.samples[1]), 0.4, 1e-15);
  EXPECT_EQ(real(s.samples[2]), 1.0);
  EXPECT_TRUE(s.samples[0].supplementary);
}

TEST(EvolutionaryEffectiveness, AttackerMatchesDirectSummation) {
  std::mt19937_64 rng(4);
  const auto m = testing::random_real_matrix(rng, 3);
  const auto d = timeline(Party::Defender, {0, 1, 2, 3});
  const auto s = ee_attacker(m, d);
  for (Time t = 0; t <= 3; ++t) {
    const double expect = (m.value(t, 0) + m.value(t, 1) + m.value(t, 2) + m.value(t, 3)) / 4.0;
    EXPECT_NEAR(real(s.samples[static_cast<std::size_t>(t)]), expect, 1e-15);
  }
}

TEST(EvolutionaryEffectiveness, DefconShapeHasThreeSamples) {
  const auto dc = testing::defcon_shape();
  const auto s = ee_defender(dc.matrix, dc.attack);
  ASSERT_EQ(s.samples.size(), 3u);
  EXPECT_EQ(s.samples[0].anchor, 238);
  EXPECT_EQ(s.samples[1].anchor, 609);
  EXPECT_EQ(s.samples[2].anchor, 973);
  // later attack generations are harder to detect in this fixture
  EXPECT_GT(real(s.samples[0]), real(s.samples[1]));
  EXPECT_GT(real(s.samples[1]), real(s.samples[2]));
}

// ---- RGI ----

TEST(RelativeGenerationalImpact, StepDifferences) {
  const auto s = rgi_series(diagonal_matrix({0.2, 0.5, 0.4}));
  ASSERT_EQ(s.samples.size(), 2u);
  EXPECT_NEAR(real(s.samples[0]), 0.3, 1e-15);
  EXPECT_NEAR(real(s.samples[1]), -0.1, 1e-15);
  EXPECT_EQ(s.samples[0].anchor, 1);
}

TEST(RelativeGenerationalImpact, ConstantDiagonalIsZero) {
  for (const auto& s : rgi_series(diagonal_matrix({0.4, 0.4, 0.4, 0.4})).samples) EXPECT_EQ(real(s), 0.0);
}

TEST(RelativeGenerationalImpact, GapsAreSkipped) {
  auto m = diagonal_matrix({0.2, 0.5, 0.4, 0.1});
  m.clear(2, 2);
  const auto s = rgi_series(m);
  ASSERT_EQ(s.samples.size(), 1u);
  EXPECT_EQ(s.samples[0].anchor, 1);
}

TEST(RelativeGenerationalImpact, AttackerIsExactNegation) {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 50; ++i) {
    const auto m = testing::random_real_matrix(rng, 10, 0.2);
    const auto d = rgi_series(m, Party::Defender);
    const auto a = rgi_series(m, Party::Attacker);
    ASSERT_EQ(d.samples.size(), a.samples.size());
    for (std::size_t k = 0; k < d.samples.size(); ++k) EXPECT_EQ(real(a.samples[k]), -real(d.samples[k]));
  }
}

TEST(RelativeGenerationalImpact, HoneypotShapeStaysInBand) {
  const auto hp = testing::honeypot_shape();
  const auto s = rgi_series(hp.matrix);
  ASSERT_EQ(s.samples.size(), 900u);
  for (const auto& x : s.samples) EXPECT_LE(std::fabs(real(x)), 0.10);
}

// ---- AGI ----

TEST(AggregatedGenerationalImpact, SignedGains) {
  const auto r = agi_discrete(diagonal_matrix({0.2, 0.5, 0.4}));
  ASSERT_EQ(r.series.gains.size(), 2u);
  EXPECT_NEAR(r.series.gains[0].gain, 0.15, 1e-15);
  EXPECT_NEAR(r.series.gains[1].gain, -0.05, 1e-15);
  EXPECT_NEAR(*r.agi, 0.05, 1e-15);
  EXPECT_EQ(r.duration, 2.0);
}

TEST(AggregatedGenerationalImpact, PrintedGainsAreUnsigned) {
  const auto r = agi_discrete(diagonal_matrix({0.2, 0.5, 0.4}), GainSign::Printed);
  EXPECT_NEAR(r.series.gains[1].gain, 0.05, 1e-15);
  EXPECT_NEAR(*r.agi, 0.1, 1e-15);
}

TEST(AggregatedGenerationalImpact, ConstantDiagonal) {
  EXPECT_EQ(*agi_discrete(diagonal_matrix({0.3, 0.3, 0.3})).agi, 0.0);
}

TEST(AggregatedGenerationalImpact, ZigZagCancels) {
  const auto r = agi_discrete(diagonal_matrix({0.1, 0.3, 0.1, 0.3, 0.1}));
  double sum = 0.0;
  for (const auto& g : r.series.gains) sum += g.gain;
  EXPECT_EQ(*r.agi, sum / 4.0);
  EXPECT_NEAR(*r.agi, 0.0, 1e-15);
}

TEST(AggregatedGenerationalImpact, MissingEndpointShrinksDivisor) {
  auto m = diagonal_matrix({0.2, 0.5, 0.4, 0.8});
  m.clear(2, 2);
  const auto r = agi_discrete(m);
  EXPECT_EQ(r.duration, 1.0);
  EXPECT_NEAR(*r.agi, 0.15, 1e-15);
}

TEST(AggregatedGenerationalImpact, UndefinedWithoutTwoPoints) {
  auto m = diagonal_matrix({0.2, 0.5, 0.4});
  m.clear(1, 1);
  EXPECT_FALSE(agi_discrete(m).agi.has_value());
  EXPECT_FALSE(agi_discrete(m).attacker().has_value());
}

TEST(AggregatedGenerationalImpact, Telescopes) {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 100; ++i) {
    const std::size_t n = 2 + rng() % 30;
    const auto d = random_diagonal(rng, n);
    const auto m = diagonal_matrix(d);
    const double T = static_cast<double>(n - 1);
    const auto r = agi_discrete(m);
    EXPECT_NEAR(*r.agi, (d.back() - d.front()) / (2.0 * T), 1e-12);
    double rgi_sum = 0.0;
    for (const auto& s : rgi_series(m).samples) rgi_sum += real(s);
    EXPECT_NEAR(rgi_sum, 2.0 * T * *r.agi, 1e-12);
    EXPECT_EQ(*r.attacker(), -*r.agi);
  }
}

TEST(AggregatedGenerationalImpact, GainBoundedByHalfRange) {
  std::mt19937_64 rng(32);
  const auto r = agi_discrete(diagonal_matrix(random_diagonal(rng, 50)));
  for (const auto& g : r.series.gains) EXPECT_LE(std::fabs(g.gain), 0.5);
  EXPECT_NEAR(r.series.total() / r.duration, *r.agi, 1e-12);
}

// ---- continuous ----

std::vector<CurvePoint> unit_curve(const std::vector<double>& d) {
  std::vector<CurvePoint> c;
  for (std::size_t i = 0; i < d.size(); ++i) c.push_back({static_cast<double>(i), d[i]});
  return c;
}

TEST(ContinuousAgi, UnitEmbeddingMatchesDiscrete) {
  std::mt19937_64 rng(33);
  for (int i = 0; i < 100; ++i) {
    const auto d = random_diagonal(rng, 2 + rng() % 30);
    const auto cont = agi_continuous(unit_curve(d));
    const auto disc = agi_discrete(diagonal_matrix(d));
    EXPECT_NEAR(*cont.agi, *disc.agi, 1e-12);
  }
}

TEST(ContinuousAgi, FlatCurve) {
  const auto r = agi_continuous(unit_curve({0.4, 0.4, 0.4}));
  EXPECT_EQ(*r.agi, 0.0);
}

// Midpoint-rule integration of the interpolated curve, segment by segment.
double numeric_gain(const std::vector<CurvePoint>& c, std::size_t from, std::size_t to) {
  auto f = [&](double x) {
    for (std::size_t k = from; k < to; ++k) {
      if (x <= c[k + 1].time) {
        const double w = (x - c[k].time) / (c[k + 1].time - c[k].time);
        return c[k].value + w * (c[k + 1].value - c[k].value);
      }
    }
    return c[to].value;
  };
  const int steps = 200000;
  const double a = c[from].time, b = c[to].time, h = (b - a) / steps;
  double integral = 0.0;
  for (int s = 0; s < steps; ++s) integral += f(a + (s + 0.5) * h) * h;
  const double area = integral - (b - a) * c[from].value;
  return area;
}

TEST(ContinuousAgi, FiveMonotoneSegmentsMatchQuadrature) {
  // rises, falls, rises, plateau, falls: five maximal monotone pieces
  const std::vector<CurvePoint> c = {{0.0, 0.2}, {0.7, 0.35}, {1.5, 0.6}, {2.0, 0.45}, {3.1, 0.1},
                                     {3.6, 0.3}, {4.8, 0.7}, {6.0, 0.7}, {6.5, 0.5}, {7.5, 0.2}};
  ContinuousAgiOptions opts;
  opts.segmentation = Segmentation::MaximalMonotone;
  const auto r = agi_continuous(c, opts);
  const std::vector<std::pair<std::size_t, std::size_t>> pieces = {{0, 2}, {2, 4}, {4, 6}, {6, 7}, {7, 9}};
  ASSERT_EQ(r.series.gains.size(), pieces.size());
  double total = 0.0;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const double expect = numeric_gain(c, pieces[i].first, pieces[i].second);
    EXPECT_NEAR(r.series.gains[i].gain, expect, 1e-9) << "segment " << i;
    total += expect;
  }
  EXPECT_NEAR(*r.agi, total / 7.5, 1e-9);
  EXPECT_EQ(r.series.gains[3].gain, 0.0);
}

TEST(ContinuousAgi, LinearPiecesDifferFromMergedOnLongRuns) {
  const auto c = unit_curve({0.2, 0.5, 0.9});
  ContinuousAgiOptions merged;
  merged.segmentation = Segmentation::MaximalMonotone;
  EXPECT_NEAR(*agi_continuous(c).agi, 0.35 / 2.0, 1e-15);
  EXPECT_NEAR(*agi_continuous(c, merged).agi, 0.65 / 2.0, 1e-15);
}

TEST(ContinuousAgi, RejectsBadCurves) {
  EXPECT_THROW(agi_continuous(unit_curve({0.5})), PreconditionError);
  const std::vector<CurvePoint> backwards = {{0.0, 0.1}, {1.0, 0.2}, {1.0, 0.3}};
  EXPECT_THROW(agi_continuous(backwards), PreconditionError);
  EXPECT_THROW(agi_continuous(unit_curve({0.5, 1.2})), PreconditionError);
}

}  // namespace
}  // namespace agility
