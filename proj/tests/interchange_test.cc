#include "nece/interchange.h"

#include <gtest/gtest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "json.hpp"
#include "nece/errors.h"
#include "test_util.h"

namespace nece {
namespace {

using nlohmann::json;

json MinimalDoc() {
  return json::parse(R"({
    "story_id": "s1",
    "tokens": [
      {"i": 0, "sent": 0, "text": "She", "lemma": "she", "pos": "PRON", "start": 0, "end": 3},
      {"i": 1, "sent": 0, "text": "washed", "lemma": "wash", "pos": "VERB", "start": 4, "end": 10},
      {"i": 2, "sent": 0, "text": "herself", "lemma": "herself", "pos": "PRON", "start": 11, "end": 18},
      {"i": 3, "sent": 1, "text": "She", "lemma": "she", "pos": "PRON", "start": 20, "end": 23},
      {"i": 4, "sent": 1, "text": "slept", "lemma": "sleep", "pos": "VERB", "start": 24, "end": 29}
    ],
    "clusters": [
      {"id": 2, "name": null, "mentions": [
        {"first": 0, "last": 0, "pronoun": true},
        {"first": 2, "last": 2, "pronoun": true},
        {"first": 3, "last": 3, "pronoun": true}]}
    ],
    "frames": [
      {"id": 0, "verb": 1, "lemma": "wash", "args": [
        {"role": "agent", "first": 0, "last": 0},
        {"role": "patient", "first": 2, "last": 2}]},
      {"id": 1, "verb": 4, "lemma": "sleep", "args": [
        {"role": "agent", "first": 3, "last": 3}]}
    ],
    "temporal": [{"e1": 0, "e2": 1, "rel": "before", "conf": 0.8}]
  })");
}

ErrorCode CodeOf(const json &doc) {
  try {
    ParseDocument(doc.dump());
  } catch (const Error &e) {
    return e.code();
  }
  ADD_FAILURE() << "document unexpectedly valid";
  return ErrorCode::kIo;
}

std::string DetailOf(const json &doc) {
  try {
    ParseDocument(doc.dump());
  } catch (const Error &e) {
    return e.detail();
  }
  return "";
}

TEST(InterchangeTest, EmptyStoryIsValid) {
  json doc = {{"story_id", "s0"},
              {"tokens", json::array({{{"i", 0}, {"sent", 0}, {"text", "Once"},
                                       {"lemma", "once"}, {"pos", "ADV"},
                                       {"start", 0}, {"end", 4}}})},
              {"clusters", json::array()},
              {"frames", json::array()},
              {"temporal", json::array()}};
  DocumentAnnotation parsed = ParseDocument(doc.dump());
  EXPECT_EQ(parsed.story_id, "s0");
  EXPECT_EQ(parsed.tokens.size(), 1u);
  EXPECT_TRUE(parsed.frames.empty());
  EXPECT_FALSE(parsed.source.has_value());
}

TEST(InterchangeTest, ParsesAllFields) {
  DocumentAnnotation doc = ParseDocument(MinimalDoc().dump());
  ASSERT_EQ(doc.tokens.size(), 5u);
  EXPECT_EQ(doc.tokens[1].lemma, "wash");
  EXPECT_EQ(doc.tokens[3].sentence, 1);
  EXPECT_EQ(doc.tokens[4].char_end, 29);
  ASSERT_EQ(doc.clusters.size(), 1u);
  EXPECT_FALSE(doc.clusters[0].name.has_value());
  EXPECT_EQ(doc.clusters[0].mentions.size(), 3u);
  ASSERT_EQ(doc.frames.size(), 2u);
  EXPECT_EQ(doc.frames[0].args[1].role, ArgRole::kPatient);
  ASSERT_EQ(doc.temporal.size(), 1u);
  EXPECT_EQ(doc.temporal[0].rel, TemporalLabel::kBefore);
  EXPECT_DOUBLE_EQ(doc.temporal[0].conf, 0.8);
}

TEST(InterchangeTest, VerbTokenOutOfRangeIsDangling) {
  json doc = MinimalDoc();
  doc["frames"][0]["verb"] = 99;
  EXPECT_EQ(CodeOf(doc), ErrorCode::kDanglingRef);
  EXPECT_NE(DetailOf(doc).find("frames[0].verb"), std::string::npos);
}

TEST(InterchangeTest, DanglingReferences) {
  json doc = MinimalDoc();
  doc["clusters"][0]["mentions"][0]["last"] = 5;
  EXPECT_EQ(CodeOf(doc), ErrorCode::kDanglingRef);

  doc = MinimalDoc();
  doc["frames"][1]["args"][0]["first"] = -1;
  EXPECT_EQ(CodeOf(doc), ErrorCode::kDanglingRef);

  doc = MinimalDoc();
  doc["temporal"][0]["e2"] = 7;
  EXPECT_EQ(CodeOf(doc), ErrorCode::kDanglingRef);
  EXPECT_NE(DetailOf(doc).find("temporal[0].e2"), std::string::npos);

  doc = MinimalDoc();
  doc["temporal"][0]["e2"] = 0;
  EXPECT_EQ(CodeOf(doc), ErrorCode::kDanglingRef);
}

TEST(InterchangeTest, Duplicates) {
  json doc = MinimalDoc();
  doc["frames"][1]["id"] = 0;
  EXPECT_EQ(CodeOf(doc), ErrorCode::kDuplicate);

  doc = MinimalDoc();
  doc["clusters"].push_back(doc["clusters"][0]);
  EXPECT_EQ(CodeOf(doc), ErrorCode::kDuplicate);

  doc = MinimalDoc();
  doc["temporal"].push_back({{"e1", 1}, {"e2", 0}, {"rel", "after"}, {"conf", 0.5}});
  EXPECT_EQ(CodeOf(doc), ErrorCode::kDuplicate);

  doc = MinimalDoc();
  doc["tokens"][2]["i"] = 1;
  EXPECT_EQ(CodeOf(doc), ErrorCode::kDuplicate);
}

TEST(InterchangeTest, SpanErrors) {
  json doc = MinimalDoc();
  doc["frames"][0]["args"][1]["first"] = 2;
  doc["frames"][0]["args"][1]["last"] = 1;
  EXPECT_EQ(CodeOf(doc), ErrorCode::kSpan);

  doc = MinimalDoc();
  doc["clusters"][0]["mentions"][1] = {{"first", 0}, {"last", 1}, {"pronoun", false}};
  EXPECT_EQ(CodeOf(doc), ErrorCode::kSpan);

  doc = MinimalDoc();
  doc["tokens"][0]["end"] = 0;
  EXPECT_EQ(CodeOf(doc), ErrorCode::kSpan);
}

TEST(InterchangeTest, SyntaxErrors) {
  EXPECT_THROW(ParseDocument("{not json"), Error);
  EXPECT_EQ(CodeOf(json::array()), ErrorCode::kSyntax);

  json doc = MinimalDoc();
  doc.erase("temporal");
  EXPECT_EQ(CodeOf(doc), ErrorCode::kSyntax);

  doc = MinimalDoc();
  doc["tokens"][1]["text"] = 7;
  EXPECT_EQ(CodeOf(doc), ErrorCode::kSyntax);

  doc = MinimalDoc();
  doc["temporal"][0]["rel"] = "during";
  EXPECT_EQ(CodeOf(doc), ErrorCode::kSyntax);

  doc = MinimalDoc();
  doc["temporal"][0]["conf"] = 1.5;
  EXPECT_EQ(CodeOf(doc), ErrorCode::kSyntax);

  doc = MinimalDoc();
  doc["frames"][0]["args"][0]["role"] = "instrument";
  EXPECT_EQ(CodeOf(doc), ErrorCode::kSyntax);

  doc = MinimalDoc();
  doc["clusters"][0]["mentions"] = json::array();
  EXPECT_EQ(CodeOf(doc), ErrorCode::kSyntax);

  doc = MinimalDoc();
  doc["tokens"][4]["sent"] = 0;
  EXPECT_EQ(CodeOf(doc), ErrorCode::kSyntax);

  doc = MinimalDoc();
  doc["tokens"][2]["i"] = 5;
  EXPECT_EQ(CodeOf(doc), ErrorCode::kSyntax);

  doc = MinimalDoc();
  doc["story_id"] = "";
  EXPECT_EQ(CodeOf(doc), ErrorCode::kSyntax);
}

TEST(InterchangeTest, ErrorMessageCarriesCode) {
  json doc = MinimalDoc();
  doc["frames"][0]["verb"] = 99;
  try {
    ParseDocument(doc.dump());
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(std::string(e.what()).rfind("E_DANGLING_REF: ", 0), 0u);
  }
}

TEST(InterchangeTest, RoundTripIsIdentity) {
  DocumentAnnotation doc = ParseDocument(MinimalDoc().dump());
  std::string bytes = SerializeDocument(doc);
  DocumentAnnotation again = ParseDocument(bytes);
  EXPECT_EQ(again, doc);
  EXPECT_EQ(SerializeDocument(again), bytes);
}

TEST(InterchangeTest, RoundTripFixtures) {
  for (const auto &path : ListCorpusFiles(testing::FixtureDir())) {
    DocumentAnnotation doc = LoadDocument(path);
    EXPECT_EQ(ParseDocument(SerializeDocument(doc)), doc) << path;
  }
}

TEST(InterchangeTest, ParsingIsPure) {
  std::string bytes = MinimalDoc().dump();
  DocumentAnnotation a = ParseDocument(bytes);
  DocumentAnnotation b = ParseDocument(bytes);
  EXPECT_EQ(a, b);
}

// Randomly perturbed documents either parse or fail with a known code;
// nothing else escapes.
TEST(InterchangeTest, PerturbedDocumentsFailCleanly) {
  std::mt19937 rng(5);
  const json base = MinimalDoc();
  const std::vector<json::json_pointer> targets = {
      json::json_pointer("/frames/0/verb"),
      json::json_pointer("/frames/1/args/0/last"),
      json::json_pointer("/clusters/0/mentions/1/first"),
      json::json_pointer("/temporal/0/e1"),
      json::json_pointer("/tokens/2/i"),
      json::json_pointer("/tokens/3/sent"),
  };
  for (int trial = 0; trial < 300; ++trial) {
    json doc = base;
    doc[targets[rng() % targets.size()]] = static_cast<int>(rng() % 9) - 2;
    try {
      DocumentAnnotation parsed = ParseDocument(doc.dump());
      EXPECT_EQ(ParseDocument(SerializeDocument(parsed)), parsed);
    } catch (const Error &e) {
      EXPECT_TRUE(e.code() == ErrorCode::kSyntax ||
                  e.code() == ErrorCode::kDanglingRef ||
                  e.code() == ErrorCode::kDuplicate ||
                  e.code() == ErrorCode::kSpan)
          << e.what();
    }
  }
}

TEST(InterchangeTest, FixtureCountsMatchManifest) {
  std::ifstream in(testing::FixtureDir() / "manifest.csv");
  ASSERT_TRUE(in);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "story_id,tokens,clusters,frames,relations");
  int rows = 0;
  while (std::getline(in, line)) {
    std::stringstream ss(line);
    std::string id, tokens, clusters, frames, relations;
    std::getline(ss, id, ',');
    std::getline(ss, tokens, ',');
    std::getline(ss, clusters, ',');
    std::getline(ss, frames, ',');
    std::getline(ss, relations, ',');
    DocumentAnnotation doc =
        LoadDocument(testing::FixtureDir() / (id + ".nece.json"));
    EXPECT_EQ(doc.story_id, id);
    EXPECT_EQ(doc.tokens.size(), std::stoul(tokens)) << id;
    EXPECT_EQ(doc.clusters.size(), std::stoul(clusters)) << id;
    EXPECT_EQ(doc.frames.size(), std::stoul(frames)) << id;
    EXPECT_EQ(doc.temporal.size(), std::stoul(relations)) << id;
    ++rows;
  }
  EXPECT_EQ(rows, 6);
}

TEST(InterchangeTest, ListCorpusFilesIsSortedAndFiltered) {
  testing::TempDir dir;
  for (const char *name : {"b.json", "a.json", "notes.txt"}) {
    std::ofstream(dir / name) << "{}";
  }
  std::filesystem::create_directory(dir / "sub.json");
  auto files = ListCorpusFiles(dir.path());
  ASSERT_EQ(files.size(), 2u);
  EXPECT_EQ(files[0].filename(), "a.json");
  EXPECT_EQ(files[1].filename(), "b.json");
}

TEST(InterchangeTest, MissingFileIsIoError) {
  try {
    LoadDocument("/nonexistent/story.json");
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::kIo);
  }
}

}  // namespace
}  // namespace nece
