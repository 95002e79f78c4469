#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "json.hpp"
#include "nece/errors.h"
#include "nece/stats.h"

namespace nece {
namespace {

OddsRatioResult Row(std::string cls, std::string sub, double point, double lo,
                    double hi) {
  OddsRatioResult r;
  r.key.target = {{std::move(cls), std::move(sub)}, Role::kAgent};
  r.table = {7, 20, 2, 30};
  r.or_point = point;
  r.ci_low = lo;
  r.ci_high = hi;
  r.significant = lo > 1 || hi < 1;
  return r;
}

ErrorCode CsvCode(const std::string &text) {
  try {
    ParseResultsCsv(text);
  } catch (const Error &e) {
    return e.code();
  }
  return ErrorCode::kIo;
}

TEST(ResultsTest, CsvLayout) {
  std::vector<OddsRatioResult> rows = {Row("kill", "", 5.25, 1.5, 12.0)};
  std::string csv = ResultsToCsv(rows);
  EXPECT_EQ(csv, std::string(kResultsCsvHeader) +
                     "\nunigram,kill,,agent,,,,,2,7,5.25,1.5,12,true\n");
}

TEST(ResultsTest, CsvRoundTrip) {
  std::vector<OddsRatioResult> rows = {Row("domestic", "clean", 0.1 + 0.2, 0.01, 0.9),
                                       Row("nonverbal expression", "a,\"b\"", 1, 0.5, 2)};
  OddsRatioResult bigram = Row("harm", "body", 2, 0.5, 4);
  bigram.key.unit = AnalysisUnit::kBigramAfter;
  bigram.key.position = Position::kAfter;
  bigram.key.anchor = EventTypeKey{{"cry", ""}, Role::kPatient};
  rows.push_back(bigram);
  auto parsed = ParseResultsCsv(ResultsToCsv(rows));
  ASSERT_EQ(parsed.size(), rows.size());
  for (size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(parsed[i].key, rows[i].key);
    EXPECT_EQ(parsed[i].table.a, rows[i].table.a);
    EXPECT_EQ(parsed[i].table.c, rows[i].table.c);
    EXPECT_EQ(parsed[i].or_point, rows[i].or_point);
    EXPECT_EQ(parsed[i].ci_low, rows[i].ci_low);
    EXPECT_EQ(parsed[i].ci_high, rows[i].ci_high);
    EXPECT_EQ(parsed[i].significant, rows[i].significant);
  }
  EXPECT_EQ(ResultsToCsv(parsed), ResultsToCsv(rows));
}

TEST(ResultsTest, HeaderOnly) {
  EXPECT_TRUE(ParseResultsCsv(std::string(kResultsCsvHeader) + "\n").empty());
  EXPECT_TRUE(ParseResultsCsv("").empty());
  EXPECT_EQ(ResultsToCsv({}), std::string(kResultsCsvHeader) + "\n");
}

TEST(ResultsTest, BadCsv) {
  const std::string h = std::string(kResultsCsvHeader) + "\n";
  EXPECT_EQ(CsvCode("unit,class\n"), ErrorCode::kBadCsv);
  EXPECT_EQ(CsvCode(h + "unigram,kill,,agent\n"), ErrorCode::kBadCsv);
  EXPECT_EQ(CsvCode(h + "trigram,kill,,agent,,,,,2,7,5.25,1.5,12,true\n"),
            ErrorCode::kBadCsv);
  EXPECT_EQ(CsvCode(h + "unigram,kill,,agent,,,,,2,x,5.25,1.5,12,true\n"),
            ErrorCode::kBadCsv);
  EXPECT_EQ(CsvCode(h + "unigram,kill,,agent,,,,,2,7,5.25,1.5,12,yes\n"),
            ErrorCode::kBadCsv);
  EXPECT_EQ(CsvCode(h + "unigram,kill,,agent,,,,,2,7,5.25,13,12,true\n"),
            ErrorCode::kBadCsv);
  EXPECT_EQ(CsvCode(h + "unigram,\"kill,,agent,,,,,2,7,5.25,1.5,12,true\n"),
            ErrorCode::kBadCsv);
}

TEST(ResultsTest, JsonIncludesTable) {
  std::vector<OddsRatioResult> rows = {Row("kill", "", 5.25, 1.5, 12.0)};
  auto json = nlohmann::json::parse(ResultsToJson(rows));
  ASSERT_EQ(json.size(), 1u);
  EXPECT_EQ(json[0]["table"]["a"], 7);
  EXPECT_EQ(json[0]["table"]["d"], 30);
  EXPECT_TRUE(json[0]["anchor"].is_null());
  EXPECT_EQ(json[0]["odds_ratio_m_f"], 5.25);
}

TEST(ResultsTest, FormatDoubleRoundTrips) {
  std::mt19937_64 rng(61);
  std::uniform_real_distribution<double> u(-20, 20);
  for (int i = 0; i < 1000; ++i) {
    double v = std::exp(u(rng));
    EXPECT_EQ(std::stod(FormatDouble(v)), v);
  }
  EXPECT_EQ(FormatDouble(4.125), "4.125");
  EXPECT_EQ(FormatDouble(1.0), "1");
}

}  // namespace
}  // namespace nece
