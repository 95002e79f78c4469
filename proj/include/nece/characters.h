#ifndef NECE_CHARACTERS_H_
#define NECE_CHARACTERS_H_

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "nece/interchange.h"

namespace nece {

enum class Gender { kFemale, kMale, kUnknown };

const char *GenderName(Gender g);
// Inverse of GenderName; nullopt for anything else.
std::optional<Gender> ParseGender(std::string_view s);

inline constexpr double kDefaultMainRatio = 0.67;

struct CharacterProfile {
  int cluster_id = 0;
  std::optional<std::string> name;
  int mention_count = 0;
  bool is_main = false;
  Gender gender = Gender::kUnknown;
};

// Gendered pronouns and gendered name words, loaded from two-column TSV
// files (word, gender) with a header row.
class GenderWords {
 public:
  GenderWords() = default;

  static GenderWords Parse(std::istream &pronouns, std::istream &name_words);
  static GenderWords Load(const std::filesystem::path &pronouns,
                          const std::filesystem::path &name_words);

  std::optional<Gender> Pronoun(std::string_view word) const;
  std::optional<Gender> NameWord(std::string_view word) const;

 private:
  std::unordered_map<std::string, Gender> pronouns_;
  std::unordered_map<std::string, Gender> name_words_;
};

// Mentions per cluster (names and pronouns) and the main-character flag:
// a cluster is main iff its count is at least ratio x the largest count.
// Genders are left unknown. Output follows cluster order in the document.
std::vector<CharacterProfile> SelectMainCharacters(
    const DocumentAnnotation &doc, double ratio = kDefaultMainRatio);

// Strict majority over gendered pronoun mentions; ties and pronoun-free
// clusters fall back to a strict majority over gendered words in the
// cluster name, then unknown.
Gender InferGender(const CharacterCluster &cluster,
                   std::span<const Token> tokens, const GenderWords &words);

// SelectMainCharacters followed by InferGender for every cluster.
std::vector<CharacterProfile> ProfileCharacters(const DocumentAnnotation &doc,
                                                const GenderWords &words,
                                                double ratio = kDefaultMainRatio);

}  // namespace nece

#endif  // NECE_CHARACTERS_H_
