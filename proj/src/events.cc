#include "nece/events.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <unordered_map>

#include "nece/errors.h"
#include "nece/stats.h"

namespace nece {

namespace {

bool Overlaps(int first1, int last1, int first2, int last2) {
  return first1 <= last2 && first2 <= last1;
}

}  // namespace

const char *ParticipantRoleName(ParticipantRole role) {
  switch (role) {
    case ParticipantRole::kAgent: return "agent";
    case ParticipantRole::kPatient: return "patient";
    case ParticipantRole::kBoth: return "both";
  }
  return "agent";
}

std::optional<ParticipantRole> ParseParticipantRole(std::string_view s) {
  if (s == "agent") return ParticipantRole::kAgent;
  if (s == "patient") return ParticipantRole::kPatient;
  if (s == "both") return ParticipantRole::kBoth;
  return std::nullopt;
}

std::vector<Role> ExpandRole(ParticipantRole role) {
  switch (role) {
    case ParticipantRole::kAgent: return {Role::kAgent};
    case ParticipantRole::kPatient: return {Role::kPatient};
    case ParticipantRole::kBoth: return {Role::kAgent, Role::kPatient};
  }
  return {};
}

Stoplist ParseStoplist(std::istream &in) {
  Stoplist stop;
  std::string line;
  while (std::getline(in, line)) {
    size_t b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos || line[b] == '#') continue;
    size_t e = line.find_last_not_of(" \t\r");
    stop.insert(ToLower(line.substr(b, e - b + 1)));
  }
  return stop;
}

Stoplist LoadStoplist(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  return ParseStoplist(in);
}

std::vector<EventRecord> ExtractEvents(
    const DocumentAnnotation &doc, std::span<const CharacterProfile> profiles,
    const Lexicon &lexicon) {
  std::unordered_map<int, bool> is_main;
  for (const CharacterProfile &p : profiles) is_main[p.cluster_id] = p.is_main;

  std::vector<EventRecord> events;
  events.reserve(doc.frames.size());
  for (const SrlFrame &frame : doc.frames) {
    EventRecord ev;
    ev.frame_id = frame.id;
    ev.lemma = ToLower(frame.lemma);
    ev.type = lexicon.Classify(ev.lemma);
    ev.text_position = frame.verb_token;

    // cluster id -> (agent, patient)
    std::map<int, std::pair<bool, bool>> roles;
    for (const CharacterCluster &cluster : doc.clusters) {
      for (const SrlArg &arg : frame.args) {
        for (const MentionSpan &m : cluster.mentions) {
          if (!Overlaps(m.first, m.last, arg.first, arg.last)) continue;
          auto &r = roles[cluster.id];
          (arg.role == ArgRole::kAgent ? r.first : r.second) = true;
          break;
        }
      }
    }
    for (const auto &[id, r] : roles) {
      ParticipantRole role = r.first && r.second ? ParticipantRole::kBoth
                             : r.first          ? ParticipantRole::kAgent
                                                : ParticipantRole::kPatient;
      ev.participants.push_back({id, role});
      auto it = is_main.find(id);
      if (it != is_main.end() && it->second) ev.has_main_participant = true;
    }
    events.push_back(std::move(ev));
  }
  return events;
}

void ScoreSalience(std::span<std::vector<EventRecord>> corpus,
                   const Stoplist &stoplist, double quantile) {
  if (corpus.empty()) {
    throw Error(ErrorCode::kEmptyCorpus, "salience needs at least one story");
  }
  // Document frequency per lemma.
  std::unordered_map<std::string, int> df;
  for (const auto &story : corpus) {
    std::unordered_map<std::string, bool> seen;
    for (const EventRecord &ev : story) {
      if (!seen[ev.lemma]) {
        seen[ev.lemma] = true;
        ++df[ev.lemma];
      }
    }
  }
  const double n_docs = static_cast<double>(corpus.size());

  for (auto &story : corpus) {
    if (story.empty()) continue;
    std::unordered_map<std::string, int> tf_count;
    for (const EventRecord &ev : story) ++tf_count[ev.lemma];
    const double total = static_cast<double>(story.size());

    std::vector<double> scores;
    scores.reserve(story.size());
    for (EventRecord &ev : story) {
      double tf = tf_count[ev.lemma] / total;
      double idf = std::log((n_docs + 1.0) / (df[ev.lemma] + 1.0)) + 1.0;
      ev.salience = tf * idf;
      scores.push_back(ev.salience);
    }
    std::sort(scores.begin(), scores.end());
    const double cutoff = QuantileSorted(scores, quantile);
    for (EventRecord &ev : story) {
      ev.salient = !stoplist.count(ev.lemma) && ev.salience >= cutoff;
    }
  }
}

}  // namespace nece
