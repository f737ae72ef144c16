#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "agility/error.hpp"
#include "agility/ingestion.hpp"
#include "support/fixtures.hpp"

namespace agility {
namespace {

MatrixFile parse_text(const std::string& text) {
  std::istringstream in(text);
  return parse_matrix_csv(in);
}

std::vector<AlertLogRecord> records_from(const std::string& text) {
  std::istringstream in(text);
  return parse_alert_log(in);
}

TEST(ParseMatrixCsv, ToyFixture) {
  const auto toy = testing::toy_fixture();
  EXPECT_EQ(toy.matrix.end(), 6);
  EXPECT_EQ(toy.defense.instants, (std::vector<Time>{0, 3, 4}));
  EXPECT_EQ(toy.attack.instants, (std::vector<Time>{0, 4, 6}));
  EXPECT_EQ(toy.defense.labels.size(), 3u);
  EXPECT_EQ(toy.matrix.present_count(), 49u);
  EXPECT_EQ(toy.matrix.metric_name(), "true-positive rate");
  EXPECT_EQ(toy.matrix.horizon().unit_label, "day");
}

TEST(ParseMatrixCsv, EmptyDataSection) {
  EXPECT_THROW(parse_text("#defense_gens=0\n#attack_gens=0\n"), ValidationError);
  EXPECT_THROW(parse_text("#defense_gens=0\n#attack_gens=0\nt\\t',0\n"), ValidationError);
}

TEST(ParseMatrixCsv, NaIsMissing) {
  const auto f = parse_text("#defense_gens=0\n#attack_gens=0\nt\\t',0,1\n0,0.5,NA\n1,NA,0.25\n");
  EXPECT_EQ(f.matrix.present_count(), 2u);
  EXPECT_FALSE(f.matrix.present(0, 1));
  EXPECT_EQ(*f.matrix.at(1, 1), 0.25);
}

TEST(ParseMatrixCsv, MalformedRowReportsLine) {
  try {
    parse_text("#defense_gens=0\n#attack_gens=0\nt\\t',0,1\n0,0.5,0.5\n1,0.5,abc\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 5u);
  }
  try {
    parse_text("#defense_gens=0\n#attack_gens=0\nt\\t',0,1\n0,0.5\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 4u);
  }
}

TEST(ParseMatrixCsv, ListsEveryViolation) {
  try {
    parse_text("#defense_gens=0,0\n#attack_gens=1,0\nt\\t',0,1\n0,1.5,0.5\n1,0.5,0.5\n");
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.violations().size(), 3u);
  }
}

TEST(ParseMatrixCsv, AbsoluteTimesAreRebased) {
  const auto f = parse_text("#defense_gens=10,12\n#attack_gens=10\nt\\t',10,11,12\n10,1,1,1\n11,1,1,1\n12,1,1,1\n");
  EXPECT_EQ(f.matrix.horizon().offset, 10);
  EXPECT_EQ(f.defense.instants, (std::vector<Time>{0, 2}));
}

TEST(ParseMatrixCsv, SmallerIsBetterKeptRaw) {
  const auto f = parse_text("#orientation=smaller\n#defense_gens=0\n#attack_gens=0\nt\\t',0\n0,0.1\n");
  EXPECT_EQ(f.matrix.orientation(), Orientation::SmallerIsBetter);
  EXPECT_EQ(*f.matrix.at(0, 0), 0.1);
  EXPECT_THROW(parse_text("#orientation=up\n#defense_gens=0\n#attack_gens=0\nt\\t',0\n0,0.1\n"), ParseError);
}

TEST(WriteMatrixCsv, ParseOfWriteIsIdentity) {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 30; ++i) {
    MatrixFile f{testing::random_real_matrix(rng, 9, 0.25), testing::random_timeline(rng, Party::Defender, 9),
                 testing::random_timeline(rng, Party::Attacker, 9)};
    for (const Time t : f.defense.instants) f.defense.labels.push_back("d" + std::to_string(t));
    f.attack.probable = i % 2 == 0;
    std::ostringstream out;
    write_matrix_csv(out, f);
    const auto back = parse_text(out.str());
    EXPECT_EQ(back.matrix, f.matrix);
    EXPECT_EQ(back.defense, f.defense);
    EXPECT_EQ(back.attack, f.attack);
  }
}

TEST(WriteMatrixCsv, ToyRoundTripIsTextStable) {
  const auto toy = testing::toy_fixture();
  std::ostringstream a, b;
  write_matrix_csv(a, toy);
  write_matrix_csv(b, parse_text(a.str()));
  EXPECT_EQ(a.str(), b.str());
}

TEST(FormatDouble, ShortestRoundTrip) {
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(0.4), "0.4");
  EXPECT_EQ(format_double(1.0), "1");
}

TEST(ParseMatrixCsv, MissingFileIsIoError) {
  EXPECT_THROW(parse_matrix_csv(std::filesystem::path("/nonexistent/matrix.csv")), IoError);
}

// ---- alert logs ----

TEST(AlertLog, RatioEntries) {
  const auto recs = records_from(
      "defense_label,defense_time,attack_time,detected,total\n"
      "v2.9.4,0,0,4,10\n"
      "v2.9.4,0,1,0,7\n");
  ASSERT_EQ(recs.size(), 2u);
  const auto am = build_matrix_from_alert_log(recs);
  EXPECT_EQ(*am.matrix.at(0, 0), 0.4);
  EXPECT_EQ(*am.matrix.at(0, 1), 0.0);
  EXPECT_FALSE(am.matrix.present(1, 0));
  EXPECT_EQ(am.defense.instants, (std::vector<Time>{0}));
  EXPECT_EQ(am.defense.labels, (std::vector<std::string>{"v2.9.4"}));
  EXPECT_EQ(am.attack_times, (std::vector<Time>{0, 1}));
}

TEST(AlertLog, EighteenVersionsOverHoneypotSpan) {
  std::vector<AlertLogRecord> recs;
  for (Time t = 1; t <= 1294; ++t) {
    const auto version = (t - 1) * 18 / 1294;
    recs.push_back({"v" + std::to_string(version), t, 80 + (t % 1029), 3, 9});
  }
  const auto am = build_matrix_from_alert_log(recs);
  EXPECT_EQ(am.defense.instants.size(), 18u);
  EXPECT_EQ(am.matrix.horizon().offset, 1);
  EXPECT_EQ(am.matrix.end(), 1293);
  EXPECT_EQ(am.defense.instants.front(), 0);
}

TEST(AlertLog, RepeatedLabelKeepsFirstAppearance) {
  const std::vector<AlertLogRecord> recs = {
      {"a", 0, 0, 1, 2}, {"b", 1, 0, 1, 2}, {"a", 2, 0, 1, 2}, {"c", 3, 0, 1, 2}};
  const auto am = build_matrix_from_alert_log(recs);
  EXPECT_EQ(am.defense.instants, (std::vector<Time>{0, 1, 3}));
  EXPECT_EQ(am.defense.labels, (std::vector<std::string>{"a", "b", "c"}));
}

TEST(AlertLog, DuplicateCellListsBothRecords) {
  const std::vector<AlertLogRecord> recs = {{"a", 0, 0, 1, 2}, {"a", 0, 0, 2, 4}};
  try {
    build_matrix_from_alert_log(recs);
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    ASSERT_EQ(e.violations().size(), 1u);
    EXPECT_NE(e.violations()[0].find("(a,0,0,1,2)"), std::string::npos);
    EXPECT_NE(e.violations()[0].find("(a,0,0,2,4)"), std::string::npos);
  }
}

TEST(AlertLog, CountInvariants) {
  const std::vector<AlertLogRecord> recs = {{"a", 0, 0, 5, 4}, {"a", 0, 1, 0, 0}};
  try {
    build_matrix_from_alert_log(recs);
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.violations().size(), 2u);
  }
  EXPECT_THROW(build_matrix_from_alert_log({}), ValidationError);
}

TEST(AlertLog, ParseErrors) {
  EXPECT_THROW(records_from("a,0,0,1\n"), ParseError);
  EXPECT_THROW(records_from("a,0,0,-1,3\n"), ParseError);
  EXPECT_THROW(records_from("a,x,0,1,3\n"), ParseError);
  EXPECT_EQ(records_from("# comment\n\na,0,0,1,3\n").size(), 1u);
}

TEST(AlertLog, OutputAlwaysValidates) {
  std::mt19937_64 rng(22);
  std::uniform_int_distribution<int> total(1, 50);
  std::bernoulli_distribution keep(0.7), bump(0.2);
  for (int i = 0; i < 50; ++i) {
    std::vector<AlertLogRecord> recs;
    int version = 0;
    for (Time t = 3; t < 20; ++t) {
      if (bump(rng)) ++version;
      for (Time tp = 5; tp < 25; ++tp) {
        if (!keep(rng)) continue;
        const auto n = static_cast<std::uint64_t>(total(rng));
        recs.push_back({"v" + std::to_string(version), t, tp, rng() % (n + 1), n});
      }
    }
    if (recs.empty()) continue;
    const auto am = build_matrix_from_alert_log(recs);
    GenerationTimeline attack{Party::Attacker, am.attack_times, {}, false};
    EXPECT_TRUE(validate_inputs(am.matrix, {am.defense, attack}).ok());
  }
}

TEST(AlertLog, PackagedExample) {
  const auto recs = parse_alert_log(testing::data_dir() / "example_alert_log.csv");
  const auto am = build_matrix_from_alert_log(recs);
  EXPECT_EQ(am.defense.instants, (std::vector<Time>{0, 3, 5}));
  EXPECT_EQ(am.matrix.end(), 7);
  EXPECT_FALSE(am.matrix.present(1, 6));
}

}  // namespace
}  // namespace agility
