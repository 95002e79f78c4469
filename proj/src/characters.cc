#include "nece/characters.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>

#include "nece/errors.h"
#include "nece/lexicon.h"

namespace nece {

namespace {

std::unordered_map<std::string, Gender> ParseWordList(std::istream &in,
                                                      const char *what) {
  std::unordered_map<std::string, Gender> words;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line_no == 1) continue;  // header
    size_t tab = line.find('\t');
    std::optional<Gender> g;
    if (tab != std::string::npos) g = ParseGender(line.substr(tab + 1));
    if (!g || *g == Gender::kUnknown || tab == 0) {
      throw Error(ErrorCode::kBadRow, std::string(what) + " line " +
                                          std::to_string(line_no) +
                                          ": expected <word>\\t<female|male>");
    }
    words[ToLower(line.substr(0, tab))] = *g;
  }
  return words;
}

// Majority of two tallies; nullopt on a tie (including 0-0).
std::optional<Gender> StrictMajority(int female, int male) {
  if (female > male) return Gender::kFemale;
  if (male > female) return Gender::kMale;
  return std::nullopt;
}

}  // namespace

const char *GenderName(Gender g) {
  switch (g) {
    case Gender::kFemale: return "female";
    case Gender::kMale: return "male";
    case Gender::kUnknown: return "unknown";
  }
  return "unknown";
}

std::optional<Gender> ParseGender(std::string_view s) {
  if (s == "female") return Gender::kFemale;
  if (s == "male") return Gender::kMale;
  if (s == "unknown") return Gender::kUnknown;
  return std::nullopt;
}

GenderWords GenderWords::Parse(std::istream &pronouns,
                               std::istream &name_words) {
  GenderWords words;
  words.pronouns_ = ParseWordList(pronouns, "pronouns");
  words.name_words_ = ParseWordList(name_words, "gendered words");
  return words;
}

GenderWords GenderWords::Load(const std::filesystem::path &pronouns,
                              const std::filesystem::path &name_words) {
  std::ifstream p(pronouns), w(name_words);
  if (!p) throw Error(ErrorCode::kIo, "cannot open " + pronouns.string());
  if (!w) throw Error(ErrorCode::kIo, "cannot open " + name_words.string());
  return Parse(p, w);
}

std::optional<Gender> GenderWords::Pronoun(std::string_view word) const {
  auto it = pronouns_.find(ToLower(word));
  if (it == pronouns_.end()) return std::nullopt;
  return it->second;
}

std::optional<Gender> GenderWords::NameWord(std::string_view word) const {
  auto it = name_words_.find(ToLower(word));
  if (it == name_words_.end()) return std::nullopt;
  return it->second;
}

std::vector<CharacterProfile> SelectMainCharacters(
    const DocumentAnnotation &doc, double ratio) {
  std::vector<CharacterProfile> profiles;
  profiles.reserve(doc.clusters.size());
  int max_count = 0;
  for (const CharacterCluster &c : doc.clusters) {
    CharacterProfile p;
    p.cluster_id = c.id;
    p.name = c.name;
    p.mention_count = static_cast<int>(c.mentions.size());
    max_count = std::max(max_count, p.mention_count);
    profiles.push_back(std::move(p));
  }
  // Integer threshold so that a count of exactly ratio x max qualifies
  // despite binary rounding of the ratio (0.67 * 100 > 67 in doubles).
  const double scaled = ratio * max_count;
  const int threshold = static_cast<int>(std::ceil(scaled - 1e-9 * std::max(1.0, scaled)));
  for (CharacterProfile &p : profiles) {
    p.is_main = p.mention_count >= threshold;
  }
  return profiles;
}

Gender InferGender(const CharacterCluster &cluster,
                   std::span<const Token> tokens, const GenderWords &words) {
  int female = 0, male = 0;
  for (const MentionSpan &m : cluster.mentions) {
    if (!m.pronoun) continue;
    // First gendered pronoun in the span decides the mention.
    for (int i = m.first; i <= m.last && i < static_cast<int>(tokens.size()); ++i) {
      if (auto g = words.Pronoun(tokens[i].text)) {
        (*g == Gender::kFemale ? female : male)++;
        break;
      }
    }
  }
  if (auto g = StrictMajority(female, male)) return *g;

  if (cluster.name) {
    int name_female = 0, name_male = 0;
    const std::string &name = *cluster.name;
    size_t i = 0;
    while (i < name.size()) {
      while (i < name.size() && !std::isalpha(static_cast<unsigned char>(name[i]))) ++i;
      size_t start = i;
      while (i < name.size() && std::isalpha(static_cast<unsigned char>(name[i]))) ++i;
      if (i > start) {
        if (auto g = words.NameWord(std::string_view(name).substr(start, i - start))) {
          (*g == Gender::kFemale ? name_female : name_male)++;
        }
      }
    }
    if (auto g = StrictMajority(name_female, name_male)) return *g;
  }
  return Gender::kUnknown;
}

std::vector<CharacterProfile> ProfileCharacters(const DocumentAnnotation &doc,
                                                const GenderWords &words,
                                                double ratio) {
  std::vector<CharacterProfile> profiles = SelectMainCharacters(doc, ratio);
  for (size_t i = 0; i < profiles.size(); ++i) {
    profiles[i].gender = InferGender(doc.clusters[i], doc.tokens, words);
  }
  return profiles;
}

}  // namespace nece
