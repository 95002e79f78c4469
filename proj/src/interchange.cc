#include "nece/interchange.h"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_set>
#include <utility>

#include "json.hpp"
#include "nece/errors.h"

namespace nece {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

[[noreturn]] void Fail(ErrorCode code, const std::string &detail) {
  throw Error(code, detail);
}

const json &Field(const json &obj, const char *key, const std::string &path) {
  auto it = obj.find(key);
  if (it == obj.end()) Fail(ErrorCode::kSyntax, path + "." + key + ": missing");
  return *it;
}

void RequireObject(const json &value, const std::string &path) {
  if (!value.is_object()) Fail(ErrorCode::kSyntax, path + ": expected object");
}

const json &ArrayField(const json &obj, const char *key,
                       const std::string &path) {
  const json &value = Field(obj, key, path);
  if (!value.is_array()) {
    Fail(ErrorCode::kSyntax, path + "." + key + ": expected array");
  }
  return value;
}

int64_t IntField(const json &obj, const char *key, const std::string &path) {
  const json &value = Field(obj, key, path);
  if (!value.is_number_integer()) {
    Fail(ErrorCode::kSyntax, path + "." + key + ": expected integer");
  }
  return value.get<int64_t>();
}

// Index-like fields are range-checked separately so that out-of-range
// values surface as dangling references rather than syntax errors.
int IndexField(const json &obj, const char *key, const std::string &path) {
  int64_t v = IntField(obj, key, path);
  if (v < INT32_MIN || v > INT32_MAX) {
    Fail(ErrorCode::kDanglingRef, path + "." + key + ": " +
                                      std::to_string(v) + " out of range");
  }
  return static_cast<int>(v);
}

std::string StringField(const json &obj, const char *key,
                        const std::string &path) {
  const json &value = Field(obj, key, path);
  if (!value.is_string()) {
    Fail(ErrorCode::kSyntax, path + "." + key + ": expected string");
  }
  return value.get<std::string>();
}

std::optional<std::string> OptionalString(const json &obj, const char *key,
                                          const std::string &path) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) {
    Fail(ErrorCode::kSyntax, path + "." + key + ": expected string");
  }
  return it->get<std::string>();
}

bool BoolField(const json &obj, const char *key, const std::string &path) {
  const json &value = Field(obj, key, path);
  if (!value.is_boolean()) {
    Fail(ErrorCode::kSyntax, path + "." + key + ": expected boolean");
  }
  return value.get<bool>();
}

std::string Path(const char *array, size_t i) {
  return std::string(array) + "[" + std::to_string(i) + "]";
}

void CheckTokenRef(int index, size_t token_count, const std::string &field) {
  if (index < 0 || static_cast<size_t>(index) >= token_count) {
    Fail(ErrorCode::kDanglingRef,
         field + ": token " + std::to_string(index) + " out of range (" +
             std::to_string(token_count) + " tokens)");
  }
}

void CheckSpan(int first, int last, size_t token_count,
               const std::string &path) {
  CheckTokenRef(first, token_count, path + ".first");
  CheckTokenRef(last, token_count, path + ".last");
  if (first > last) {
    Fail(ErrorCode::kSpan, path + ": inverted span " + std::to_string(first) +
                               ".." + std::to_string(last));
  }
}

ArgRole ParseArgRole(const std::string &s, const std::string &path) {
  if (s == "agent") return ArgRole::kAgent;
  if (s == "patient") return ArgRole::kPatient;
  Fail(ErrorCode::kSyntax, path + ".role: unknown role \"" + s + "\"");
}

TemporalLabel ParseTemporalLabel(const std::string &s,
                                 const std::string &path) {
  if (s == "before") return TemporalLabel::kBefore;
  if (s == "after") return TemporalLabel::kAfter;
  if (s == "simultaneous") return TemporalLabel::kSimultaneous;
  if (s == "vague") return TemporalLabel::kVague;
  Fail(ErrorCode::kSyntax, path + ".rel: unknown relation \"" + s + "\"");
}

void ParseTokens(const json &root, DocumentAnnotation *doc) {
  const json &tokens = ArrayField(root, "tokens", "$");
  doc->tokens.reserve(tokens.size());
  for (size_t i = 0; i < tokens.size(); ++i) {
    const std::string path = Path("tokens", i);
    const json &t = tokens[i];
    RequireObject(t, path);
    Token token;
    token.index = IndexField(t, "i", path);
    token.sentence = IndexField(t, "sent", path);
    token.text = StringField(t, "text", path);
    token.lemma = StringField(t, "lemma", path);
    token.pos = StringField(t, "pos", path);
    token.char_start = IntField(t, "start", path);
    token.char_end = IntField(t, "end", path);

    if (token.index != static_cast<int>(i)) {
      // A repeated index is a duplicate; anything else breaks contiguity.
      ErrorCode code = (token.index >= 0 && token.index < static_cast<int>(i))
                           ? ErrorCode::kDuplicate
                           : ErrorCode::kSyntax;
      Fail(code, path + ".i: expected " + std::to_string(i) + ", got " +
                     std::to_string(token.index));
    }
    if (token.sentence < 0) {
      Fail(ErrorCode::kSyntax, path + ".sent: negative sentence index");
    }
    if (i > 0 && token.sentence < doc->tokens.back().sentence) {
      Fail(ErrorCode::kSyntax, path + ".sent: sentence index decreases");
    }
    if (token.char_start < 0 || token.char_start >= token.char_end) {
      Fail(ErrorCode::kSpan, path + ": invalid character range " +
                                 std::to_string(token.char_start) + ".." +
                                 std::to_string(token.char_end));
    }
    doc->tokens.push_back(std::move(token));
  }
}

void ParseClusters(const json &root, DocumentAnnotation *doc) {
  const json &clusters = ArrayField(root, "clusters", "$");
  std::unordered_set<int> ids;
  const size_t n = doc->tokens.size();
  for (size_t i = 0; i < clusters.size(); ++i) {
    const std::string path = Path("clusters", i);
    const json &c = clusters[i];
    RequireObject(c, path);
    CharacterCluster cluster;
    cluster.id = IndexField(c, "id", path);
    if (!ids.insert(cluster.id).second) {
      Fail(ErrorCode::kDuplicate,
           path + ".id: duplicate cluster id " + std::to_string(cluster.id));
    }
    cluster.name = OptionalString(c, "name", path);
    const json &mentions = ArrayField(c, "mentions", path);
    if (mentions.empty()) {
      Fail(ErrorCode::kSyntax, path + ".mentions: cluster has no mentions");
    }
    for (size_t m = 0; m < mentions.size(); ++m) {
      const std::string mpath = path + "." + Path("mentions", m);
      RequireObject(mentions[m], mpath);
      MentionSpan span;
      span.first = IndexField(mentions[m], "first", mpath);
      span.last = IndexField(mentions[m], "last", mpath);
      span.pronoun = BoolField(mentions[m], "pronoun", mpath);
      CheckSpan(span.first, span.last, n, mpath);
      cluster.mentions.push_back(span);
    }
    // Overlap check on a sorted copy; the stored order is preserved.
    std::vector<MentionSpan> sorted = cluster.mentions;
    std::sort(sorted.begin(), sorted.end(),
              [](const MentionSpan &a, const MentionSpan &b) {
                return a.first < b.first;
              });
    for (size_t m = 1; m < sorted.size(); ++m) {
      if (sorted[m].first <= sorted[m - 1].last) {
        Fail(ErrorCode::kSpan,
             path + ".mentions: overlapping mentions at tokens " +
                 std::to_string(sorted[m - 1].first) + ".." +
                 std::to_string(sorted[m - 1].last) + " and " +
                 std::to_string(sorted[m].first) + ".." +
                 std::to_string(sorted[m].last));
      }
    }
    doc->clusters.push_back(std::move(cluster));
  }
}

void ParseFrames(const json &root, DocumentAnnotation *doc) {
  const json &frames = ArrayField(root, "frames", "$");
  std::unordered_set<int> ids;
  const size_t n = doc->tokens.size();
  for (size_t i = 0; i < frames.size(); ++i) {
    const std::string path = Path("frames", i);
    const json &f = frames[i];
    RequireObject(f, path);
    SrlFrame frame;
    frame.id = IndexField(f, "id", path);
    if (!ids.insert(frame.id).second) {
      Fail(ErrorCode::kDuplicate,
           path + ".id: duplicate frame id " + std::to_string(frame.id));
    }
    frame.verb_token = IndexField(f, "verb", path);
    CheckTokenRef(frame.verb_token, n, path + ".verb");
    frame.lemma = StringField(f, "lemma", path);
    const json &args = ArrayField(f, "args", path);
    for (size_t a = 0; a < args.size(); ++a) {
      const std::string apath = path + "." + Path("args", a);
      RequireObject(args[a], apath);
      SrlArg arg;
      arg.role = ParseArgRole(StringField(args[a], "role", apath), apath);
      arg.first = IndexField(args[a], "first", apath);
      arg.last = IndexField(args[a], "last", apath);
      CheckSpan(arg.first, arg.last, n, apath);
      frame.args.push_back(arg);
    }
    doc->frames.push_back(std::move(frame));
  }
}

void ParseTemporal(const json &root, DocumentAnnotation *doc) {
  const json &relations = ArrayField(root, "temporal", "$");
  std::unordered_set<int> frame_ids;
  for (const SrlFrame &f : doc->frames) frame_ids.insert(f.id);
  std::set<std::pair<int, int>> pairs;
  for (size_t i = 0; i < relations.size(); ++i) {
    const std::string path = Path("temporal", i);
    const json &r = relations[i];
    RequireObject(r, path);
    TemporalRelation rel;
    rel.e1 = IndexField(r, "e1", path);
    rel.e2 = IndexField(r, "e2", path);
    rel.rel = ParseTemporalLabel(StringField(r, "rel", path), path);
    const json &conf = Field(r, "conf", path);
    if (!conf.is_number()) {
      Fail(ErrorCode::kSyntax, path + ".conf: expected number");
    }
    rel.conf = conf.get<double>();
    if (!(rel.conf >= 0.0 && rel.conf <= 1.0)) {
      Fail(ErrorCode::kSyntax, path + ".conf: outside [0,1]");
    }
    for (auto [key, id] : {std::pair{".e1", rel.e1}, std::pair{".e2", rel.e2}}) {
      if (!frame_ids.count(id)) {
        Fail(ErrorCode::kDanglingRef,
             path + key + ": unknown frame id " + std::to_string(id));
      }
    }
    if (rel.e1 == rel.e2) {
      Fail(ErrorCode::kDanglingRef,
           path + ": relation of frame " + std::to_string(rel.e1) +
               " to itself");
    }
    if (!pairs.insert(std::minmax(rel.e1, rel.e2)).second) {
      Fail(ErrorCode::kDuplicate,
           path + ": second relation for frame pair (" +
               std::to_string(rel.e1) + ", " + std::to_string(rel.e2) + ")");
    }
    doc->temporal.push_back(rel);
  }
}

}  // namespace

const char *ArgRoleName(ArgRole role) {
  return role == ArgRole::kAgent ? "agent" : "patient";
}

const char *TemporalLabelName(TemporalLabel label) {
  switch (label) {
    case TemporalLabel::kBefore: return "before";
    case TemporalLabel::kAfter: return "after";
    case TemporalLabel::kSimultaneous: return "simultaneous";
    case TemporalLabel::kVague: return "vague";
  }
  return "vague";
}

DocumentAnnotation ParseDocument(std::string_view bytes) {
  json root;
  try {
    root = json::parse(bytes.begin(), bytes.end());
  } catch (const json::parse_error &e) {
    Fail(ErrorCode::kSyntax, std::string("malformed JSON: ") + e.what());
  }
  RequireObject(root, "$");

  DocumentAnnotation doc;
  doc.story_id = StringField(root, "story_id", "$");
  if (doc.story_id.empty()) Fail(ErrorCode::kSyntax, "$.story_id: empty");
  doc.source = OptionalString(root, "source", "$");
  ParseTokens(root, &doc);
  ParseClusters(root, &doc);
  ParseFrames(root, &doc);
  ParseTemporal(root, &doc);
  return doc;
}

std::string SerializeDocument(const DocumentAnnotation &doc) {
  ordered_json root;
  root["story_id"] = doc.story_id;
  if (doc.source) root["source"] = *doc.source;

  ordered_json tokens = ordered_json::array();
  for (const Token &t : doc.tokens) {
    tokens.push_back({{"i", t.index},
                      {"sent", t.sentence},
                      {"text", t.text},
                      {"lemma", t.lemma},
                      {"pos", t.pos},
                      {"start", t.char_start},
                      {"end", t.char_end}});
  }
  root["tokens"] = std::move(tokens);

  ordered_json clusters = ordered_json::array();
  for (const CharacterCluster &c : doc.clusters) {
    ordered_json cluster;
    cluster["id"] = c.id;
    if (c.name) cluster["name"] = *c.name;
    ordered_json mentions = ordered_json::array();
    for (const MentionSpan &m : c.mentions) {
      mentions.push_back(
          {{"first", m.first}, {"last", m.last}, {"pronoun", m.pronoun}});
    }
    cluster["mentions"] = std::move(mentions);
    clusters.push_back(std::move(cluster));
  }
  root["clusters"] = std::move(clusters);

  ordered_json frames = ordered_json::array();
  for (const SrlFrame &f : doc.frames) {
    ordered_json args = ordered_json::array();
    for (const SrlArg &a : f.args) {
      args.push_back(
          {{"role", ArgRoleName(a.role)}, {"first", a.first}, {"last", a.last}});
    }
    frames.push_back({{"id", f.id},
                      {"verb", f.verb_token},
                      {"lemma", f.lemma},
                      {"args", std::move(args)}});
  }
  root["frames"] = std::move(frames);

  ordered_json temporal = ordered_json::array();
  for (const TemporalRelation &r : doc.temporal) {
    temporal.push_back({{"e1", r.e1},
                        {"e2", r.e2},
                        {"rel", TemporalLabelName(r.rel)},
                        {"conf", r.conf}});
  }
  root["temporal"] = std::move(temporal);
  return root.dump(2) + "\n";
}

std::string ReadFile(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

DocumentAnnotation LoadDocument(const std::filesystem::path &path) {
  return ParseDocument(ReadFile(path));
}

std::vector<std::filesystem::path> ListCorpusFiles(
    const std::filesystem::path &dir) {
  std::vector<std::filesystem::path> files;
  std::error_code ec;
  std::filesystem::directory_iterator it(dir, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot list " + dir.string());
  for (const auto &entry : it) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

}  // namespace nece
