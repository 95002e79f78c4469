#ifndef NECE_INTERCHANGE_H_
#define NECE_INTERCHANGE_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace nece {

// Story annotation interchange format. One JSON document per story carries
// the tokens, coreference clusters, semantic-role frames and pairwise
// temporal relations produced by the upstream annotators. All spans are
// inclusive token-index ranges.

struct Token {
  int index = 0;
  int sentence = 0;
  std::string text;
  std::string lemma;
  std::string pos;
  int64_t char_start = 0;
  int64_t char_end = 0;

  bool operator==(const Token &) const = default;
};

struct MentionSpan {
  int first = 0;
  int last = 0;
  bool pronoun = false;

  bool operator==(const MentionSpan &) const = default;
};

struct CharacterCluster {
  int id = 0;
  std::optional<std::string> name;
  std::vector<MentionSpan> mentions;

  bool operator==(const CharacterCluster &) const = default;
};

enum class ArgRole { kAgent, kPatient };

struct SrlArg {
  ArgRole role = ArgRole::kAgent;
  int first = 0;
  int last = 0;

  bool operator==(const SrlArg &) const = default;
};

struct SrlFrame {
  int id = 0;
  int verb_token = 0;
  std::string lemma;
  std::vector<SrlArg> args;

  bool operator==(const SrlFrame &) const = default;
};

enum class TemporalLabel { kBefore, kAfter, kSimultaneous, kVague };

struct TemporalRelation {
  int e1 = 0;
  int e2 = 0;
  TemporalLabel rel = TemporalLabel::kVague;
  double conf = 0.0;

  bool operator==(const TemporalRelation &) const = default;
};

struct DocumentAnnotation {
  std::string story_id;
  std::optional<std::string> source;
  std::vector<Token> tokens;
  std::vector<CharacterCluster> clusters;
  std::vector<SrlFrame> frames;
  std::vector<TemporalRelation> temporal;

  bool operator==(const DocumentAnnotation &) const = default;
};

const char *ArgRoleName(ArgRole role);
const char *TemporalLabelName(TemporalLabel label);

// Parses one interchange document and checks every structural invariant.
// Throws Error with E_SYNTAX, E_DANGLING_REF, E_DUPLICATE or E_SPAN; the
// detail names the offending field path (e.g. "frames[0].verb").
DocumentAnnotation ParseDocument(std::string_view bytes);

// Canonical JSON (fixed key order, 2-space indent, trailing newline).
std::string SerializeDocument(const DocumentAnnotation &doc);

// Reads a file and parses it. I/O failures are E_IO.
DocumentAnnotation LoadDocument(const std::filesystem::path &path);

// Reads a whole file into memory; throws E_IO.
std::string ReadFile(const std::filesystem::path &path);

// Interchange files in a corpus directory: regular files ending in ".json",
// non-recursive, sorted by filename.
std::vector<std::filesystem::path> ListCorpusFiles(
    const std::filesystem::path &dir);

}  // namespace nece

#endif  // NECE_INTERCHANGE_H_
