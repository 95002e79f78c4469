#include "nece/cli.h"

#include <gtest/gtest.h>

#include <cstdlib>
#include <map>
#include <fstream>
#include <sstream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "json.hpp"
#include "nece/pipeline.h"
#include "test_util.h"

namespace nece {
namespace {

namespace fs = std::filesystem;

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun Nece(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = RunCli(args, out, err, testing::DataDir());
  return {code, out.str(), err.str()};
}

std::string Fixtures() { return testing::FixtureDir().string(); }
std::string Golden(const std::string &name) {
  return ReadFile(testing::FixtureDir() / "golden" / name);
}

nlohmann::json ManifestConfig(const fs::path &output) {
  return nlohmann::json::parse(ReadFile(ManifestPathFor(output)))["config"];
}

// Sets an environment variable for one scope.
class ScopedEnv {
 public:
  ScopedEnv(const char *name, const char *value) : name_(name) {
    ::setenv(name, value, 1);
  }
  ~ScopedEnv() { ::unsetenv(name_); }

 private:
  const char *name_;
};

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override { ::unsetenv("NECE_SEED"); }

  fs::path Chains() {
    fs::path chains = dir_ / "chains.json";
    if (!fs::exists(chains)) {
      CliRun r = Nece({"extract", "--input", Fixtures(), "--output", chains.string()});
      EXPECT_EQ(r.code, 0) << r.err;
    }
    return chains;
  }

  testing::TempDir dir_;
};

TEST_F(CliTest, ExtractMatchesGolden) {
  fs::path chains = dir_ / "out/chains.json";
  CliRun r = Nece({"extract", "--input", Fixtures(), "--output", chains.string(),
                "--seed", "42"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(ReadFile(chains), Golden("chains.json"));
  EXPECT_NE(r.err.find("broke 1 temporal cycle"), std::string::npos);
  auto manifest = nlohmann::json::parse(ReadFile(dir_ / "out/chains.manifest.json"));
  EXPECT_EQ(manifest["command"], "extract");
  EXPECT_EQ(manifest["warnings"].size(), 2u);
  EXPECT_EQ(manifest["input_digest"].get<std::string>().size(), 7u + 64u);
}

TEST_F(CliTest, AnalyzeMatchesGolden) {
  fs::path chains = Chains();
  for (const char *unit : {"unigram", "bigram_before", "bigram_after", "section"}) {
    fs::path out = dir_ / (std::string(unit) + ".csv");
    CliRun r = Nece({"analyze", "--chains", chains.string(), "--unit", unit, "--seed",
                  "42", "--output", out.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(ReadFile(out), Golden(std::string("results_") + unit + ".csv")) << unit;
    fs::path all = dir_ / (std::string(unit) + "_min1.csv");
    r = Nece({"analyze", "--chains", chains.string(), "--unit", unit, "--min-count",
              "1", "--output", all.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(ReadFile(all), Golden(std::string("results_") + unit + "_min1.csv"))
        << unit;
  }
}

TEST_F(CliTest, AnalyzeDefaultOutputBesideChains) {
  fs::path chains = Chains();
  CliRun r = Nece({"analyze", "--chains", chains.string(), "--unit", "unigram",
                "--json", (dir_ / "r.json").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(dir_ / "results_unigram.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "results_unigram.manifest.json"));
  auto json = nlohmann::json::parse(ReadFile(dir_ / "r.json"));
  EXPECT_EQ(json.size(), 3u);
}

TEST_F(CliTest, AnalyzeIsDeterministic) {
  fs::path chains = Chains();
  std::vector<std::string> outputs;
  for (const char *threads : {"1", "1", "8"}) {
    fs::path out = dir_ / ("r" + std::to_string(outputs.size()) + ".csv");
    CliRun r = Nece({"analyze", "--chains", chains.string(), "--unit", "unigram",
                  "--seed", "7", "--min-count", "1", "--threads", threads,
                  "--output", out.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    outputs.push_back(ReadFile(out));
  }
  EXPECT_EQ(outputs[0], outputs[1]);
  EXPECT_EQ(outputs[0], outputs[2]);
}

TEST_F(CliTest, MissingInputIsUsageError) {
  CliRun r = Nece({"extract", "--input", (dir_ / "nowhere").string(), "--output",
                (dir_ / "c.json").string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("not found"), std::string::npos);
  EXPECT_EQ(Nece({}).code, 2);
  EXPECT_EQ(Nece({"extract"}).code, 2);
  EXPECT_EQ(Nece({"frobnicate"}).code, 2);
  EXPECT_EQ(Nece({"analyze", "--chains", "x", "--unit", "trigram"}).code, 2);
  EXPECT_EQ(Nece({"analyze", "--chains", (dir_ / "none.json").string(), "--unit",
                  "unigram"})
                .code,
            2);
}

TEST_F(CliTest, MalformedDocumentNamesFileAndCode) {
  fs::path corpus = dir_ / "corpus";
  fs::create_directories(corpus);
  fs::copy_file(testing::FixtureDir() / "story_a.nece.json", corpus / "story_a.json");
  std::string text = ReadFile(testing::FixtureDir() / "story_b.nece.json");
  text.replace(text.find("\"verb\": 2,"), 10, "\"verb\": 999,");
  WriteFile(corpus / "broken.json", text);
  fs::path out = dir_ / "chains.json";
  CliRun r = Nece({"extract", "--input", corpus.string(), "--output", out.string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("broken.json"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("E_DANGLING_REF"), std::string::npos) << r.err;
  EXPECT_FALSE(fs::exists(out));

  CliRun v = Nece({"validate", corpus.string()});
  EXPECT_EQ(v.code, 1);
  EXPECT_NE(v.out.find("OK "), std::string::npos);
  EXPECT_NE(v.err.find("broken.json: E_DANGLING_REF"), std::string::npos);
  EXPECT_EQ(Nece({"validate", Fixtures()}).code, 0);
}

TEST_F(CliTest, BelowMinCountGivesHeaderOnly) {
  std::vector<StoryChains> stories;
  for (int s = 0; s < 2; ++s) {
    StoryChains story;
    story.story_id = "s" + std::to_string(s);
    story.characters.push_back(testing::MakeChain(
        1, Gender::kMale, {{"kill", ParticipantRole::kAgent}, {"cry", ParticipantRole::kAgent}}));
    story.characters.push_back(testing::MakeChain(
        2, Gender::kFemale, {{"kill", ParticipantRole::kAgent}, {"cry", ParticipantRole::kAgent}}));
    stories.push_back(story);
  }
  fs::path chains = dir_ / "four.json";
  WriteFile(chains, SerializeChains(stories));
  fs::path out = dir_ / "r.csv";
  CliRun r = Nece({"analyze", "--chains", chains.string(), "--unit", "unigram",
                "--min-count", "5", "--output", out.string()});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(ReadFile(out), std::string(kResultsCsvHeader) + "\n");
}

TEST_F(CliTest, SettingPrecedence) {
  fs::path chains = Chains();
  fs::path cfg = dir_ / "nece.toml";
  WriteFile(cfg, "seed = 7\nmin_count = 3\nexclude-classes = [\"travel\", \"other\"]\n");
  fs::path out = dir_ / "r.csv";
  auto analyze = [&](std::vector<std::string> extra) {
    std::vector<std::string> args = {"analyze", "--chains", chains.string(), "--unit",
                                     "unigram", "--bootstrap", "10", "--output",
                                     out.string()};
    args.insert(args.end(), extra.begin(), extra.end());
    CliRun r = Nece(args);
    EXPECT_EQ(r.code, 0) << r.err;
    return ManifestConfig(out);
  };
  EXPECT_EQ(analyze({})["rng_seed"], 42);
  auto from_file = analyze({"--config", cfg.string()});
  EXPECT_EQ(from_file["rng_seed"], 7);
  EXPECT_EQ(from_file["min_count"], 3);
  EXPECT_EQ(from_file["excluded_classes"], nlohmann::json({"other", "travel"}));
  EXPECT_EQ(analyze({"--config", cfg.string(), "--seed", "9"})["rng_seed"], 9);
  {
    ScopedEnv env("NECE_SEED", "123");
    EXPECT_EQ(analyze({})["rng_seed"], 123);
    EXPECT_EQ(analyze({"--config", cfg.string()})["rng_seed"], 7);
    EXPECT_EQ(analyze({"--seed", "5"})["rng_seed"], 5);
  }
  EXPECT_TRUE(analyze({"--haldane-always"})["haldane_always"]);
}

TEST_F(CliTest, BadConfigIsUsageError) {
  fs::path chains = Chains();
  fs::path cfg = dir_ / "bad.toml";
  WriteFile(cfg, "sede = 7\n");
  CliRun r = Nece({"analyze", "--chains", chains.string(), "--unit", "unigram",
                "--config", cfg.string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("E_BAD_CONFIG"), std::string::npos);
  WriteFile(cfg, "min_count = lots\n");
  EXPECT_EQ(Nece({"analyze", "--chains", chains.string(), "--unit", "unigram",
                  "--config", cfg.string()})
                .code,
            2);
  EXPECT_EQ(Nece({"analyze", "--chains", chains.string(), "--unit", "unigram",
                  "--confidence", "1.5"})
                .code,
            2);
}

int CountMarkers(const boost::property_tree::ptree &node) {
  int n = 0;
  for (const auto &[name, child] : node) {
    if (name == "circle") ++n;
    if (name != "<xmlattr>") n += CountMarkers(child);
  }
  return n;
}

TEST_F(CliTest, ReportWritesWellFormedCharts) {
  fs::path results = dir_ / "all.csv";
  std::string csv = Golden("results_unigram_min1.csv");
  csv += Golden("results_section_min1.csv").substr(kResultsCsvHeader.size() + 1);
  WriteFile(results, csv);
  fs::path out = dir_ / "charts";
  CliRun r = Nece({"report", "--results", results.string(), "--out-dir", out.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  auto rows = ParseResultsCsv(csv);
  std::map<std::string, int> per_unit;
  for (const auto &row : rows) per_unit[AnalysisUnitName(row.key.unit)]++;
  for (const char *unit : {"unigram", "bigram_before", "bigram_after", "section"}) {
    boost::property_tree::ptree tree;
    boost::property_tree::read_xml((out / (std::string(unit) + ".svg")).string(), tree);
    EXPECT_EQ(CountMarkers(tree), per_unit[unit]) << unit;
  }
  boost::property_tree::ptree share;
  boost::property_tree::read_xml((out / "significance_share.svg").string(), share);
  EXPECT_TRUE(fs::exists(out / "manifest.json"));
}

TEST_F(CliTest, ReportOnEmptyResults) {
  fs::path results = dir_ / "empty.csv";
  WriteFile(results, std::string(kResultsCsvHeader) + "\n");
  CliRun r = Nece({"report", "--results", results.string(), "--out-dir",
                (dir_ / "charts").string()});
  EXPECT_EQ(r.code, 0) << r.err;
  boost::property_tree::ptree tree;
  boost::property_tree::read_xml((dir_ / "charts/unigram.svg").string(), tree);
  EXPECT_EQ(CountMarkers(tree), 0);
  WriteFile(results, "garbage\n");
  EXPECT_EQ(Nece({"report", "--results", results.string(), "--out-dir",
                  (dir_ / "charts").string()})
                .code,
            1);
}

TEST_F(CliTest, LexiconQueries) {
  CliRun r = Nece({"lexicon", "lookup", "Comb"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "comb\tdomestic\tgrooming\tfemale\n");
  EXPECT_EQ(Nece({"lexicon", "lookup", "xyzzy"}).out, "UNMAPPED\n");
  r = Nece({"lexicon", "stats"});
  EXPECT_NE(r.out.find("classes\t97"), std::string::npos);
  EXPECT_EQ(Nece({"lexicon", "--data-dir", (dir_ / "none").string(), "stats"}).code, 1);
}

TEST_F(CliTest, Version) {
  CliRun r = Nece({"--version"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find(kToolVersion), std::string::npos);
}

}  // namespace
}  // namespace nece
