#include "nece/lexicon.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "nece/errors.h"

namespace nece {

namespace {

std::vector<std::string> SplitTabs(const std::string &line) {
  std::vector<std::string> fields;
  size_t start = 0;
  while (true) {
    size_t tab = line.find('\t', start);
    fields.push_back(line.substr(start, tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  return fields;
}

std::optional<Stereotype> ParseStereotype(const std::string &s, int line_no) {
  if (s.empty()) return std::nullopt;
  if (s == "female") return Stereotype::kFemale;
  if (s == "male") return Stereotype::kMale;
  throw Error(ErrorCode::kBadRow, "line " + std::to_string(line_no) +
                                      ": unknown stereotype \"" + s + "\"");
}

Provenance ParseProvenance(const std::string &s, int line_no) {
  if (s == "verbnet_retained") return Provenance::kVerbnetRetained;
  if (s == "new_class") return Provenance::kNewClass;
  if (s == "resolved_polysemy") return Provenance::kResolvedPolysemy;
  if (s == "manual") return Provenance::kManual;
  throw Error(ErrorCode::kBadRow, "line " + std::to_string(line_no) +
                                      ": unknown provenance \"" + s + "\"");
}

}  // namespace

std::string ToLower(std::string_view s) {
  std::string out(s);
  for (char &c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

const char *StereotypeName(Stereotype s) {
  return s == Stereotype::kFemale ? "female" : "male";
}

const char *ProvenanceName(Provenance p) {
  switch (p) {
    case Provenance::kVerbnetRetained: return "verbnet_retained";
    case Provenance::kNewClass: return "new_class";
    case Provenance::kResolvedPolysemy: return "resolved_polysemy";
    case Provenance::kManual: return "manual";
  }
  return "manual";
}

const char *RoleName(Role role) {
  return role == Role::kAgent ? "agent" : "patient";
}

Lexicon Lexicon::Parse(std::istream &in) {
  Lexicon lex;
  std::string line;
  int line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!header_seen) {
      header_seen = true;
      if (line.rfind("lemma\t", 0) == 0) continue;
      throw Error(ErrorCode::kBadRow, "line 1: missing header row");
    }
    std::vector<std::string> f = SplitTabs(line);
    if (f.size() != 5) {
      throw Error(ErrorCode::kBadRow, "line " + std::to_string(line_no) +
                                          ": expected 5 fields, got " +
                                          std::to_string(f.size()));
    }
    LexiconEntry entry;
    entry.lemma = ToLower(f[0]);
    entry.type = {f[1], f[2]};
    if (entry.lemma.empty() || entry.type.event_class.empty()) {
      throw Error(ErrorCode::kBadRow, "line " + std::to_string(line_no) +
                                          ": empty lemma or class");
    }
    entry.stereotype = ParseStereotype(f[3], line_no);
    entry.provenance = ParseProvenance(f[4], line_no);

    if (lex.by_lemma_.count(entry.lemma)) {
      throw Error(ErrorCode::kDupLemma, "line " + std::to_string(line_no) +
                                            ": lemma \"" + entry.lemma +
                                            "\" already defined");
    }
    if (entry.stereotype) {
      auto [it, inserted] = lex.class_stereotype_.emplace(
          entry.type.event_class, *entry.stereotype);
      if (!inserted && it->second != *entry.stereotype) {
        throw Error(ErrorCode::kBadRow,
                    "line " + std::to_string(line_no) +
                        ": conflicting stereotype for class \"" +
                        entry.type.event_class + "\"");
      }
    }
    lex.by_lemma_.emplace(entry.lemma, lex.entries_.size());
    lex.entries_.push_back(std::move(entry));
  }
  return lex;
}

Lexicon Lexicon::Load(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  return Parse(in);
}

const LexiconEntry *Lexicon::Lookup(std::string_view lemma) const {
  auto it = by_lemma_.find(std::string(lemma));
  return it == by_lemma_.end() ? nullptr : &entries_[it->second];
}

EventType Lexicon::Classify(std::string_view lemma) const {
  if (const LexiconEntry *e = Lookup(ToLower(lemma))) return e->type;
  return {std::string(kOtherClass), ""};
}

std::optional<Stereotype> Lexicon::ClassStereotype(
    std::string_view event_class) const {
  auto it = class_stereotype_.find(event_class);
  if (it == class_stereotype_.end()) return std::nullopt;
  return it->second;
}

size_t Lexicon::ClassCount() const {
  std::set<std::string> classes;
  for (const auto &e : entries_) classes.insert(e.type.event_class);
  return classes.size();
}

size_t Lexicon::EventTypeCount() const {
  std::set<EventType> types;
  for (const auto &e : entries_) types.insert(e.type);
  return types.size();
}

size_t Lexicon::SubClassCount() const {
  std::set<EventType> types;
  for (const auto &e : entries_) {
    if (!e.type.sub_class.empty()) types.insert(e.type);
  }
  return types.size();
}

}  // namespace nece
