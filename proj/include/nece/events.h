#ifndef NECE_EVENTS_H_
#define NECE_EVENTS_H_

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "nece/characters.h"
#include "nece/interchange.h"
#include "nece/lexicon.h"

namespace nece {

inline constexpr double kDefaultSalienceQuantile = 0.3;

enum class ParticipantRole { kAgent, kPatient, kBoth };

const char *ParticipantRoleName(ParticipantRole role);
std::optional<ParticipantRole> ParseParticipantRole(std::string_view s);

// Statistical roles a participant role contributes to: `both` counts once
// as agent and once as patient.
std::vector<Role> ExpandRole(ParticipantRole role);

struct Participant {
  int cluster_id = 0;
  ParticipantRole role = ParticipantRole::kAgent;

  bool operator==(const Participant &) const = default;
};

// One typed event per SRL frame.
struct EventRecord {
  int frame_id = 0;
  std::string lemma;
  EventType type;
  int text_position = 0;  // verb token index
  double salience = 0.0;
  bool salient = false;
  // Every cluster whose mentions overlap an argument span, ordered by
  // cluster id.
  std::vector<Participant> participants;
  // False when no main character participates. Such events are kept: they
  // still count towards tf-idf.
  bool has_main_participant = false;
};

// The auxiliary-verb stoplist: one lemma per line.
using Stoplist = std::unordered_set<std::string>;
Stoplist ParseStoplist(std::istream &in);
Stoplist LoadStoplist(const std::filesystem::path &path);

// Builds one EventRecord per frame, in frame order. The lemma is
// lowercased and typed through the lexicon ("other" when unmapped).
std::vector<EventRecord> ExtractEvents(
    const DocumentAnnotation &doc, std::span<const CharacterProfile> profiles,
    const Lexicon &lexicon);

// Corpus-wide tf-idf over event lemmas. Each inner vector is one story.
//   tf(l, d)  = events with lemma l in d / events in d
//   idf(l)    = ln((N + 1) / (df(l) + 1)) + 1
// An event is salient iff its lemma is not stoplisted and its score is at
// least the story's `quantile` (linear interpolation over all event scores
// of the story). Updates salience and salient in place.
// Throws E_EMPTY_CORPUS when `corpus` is empty.
void ScoreSalience(std::span<std::vector<EventRecord>> corpus,
                   const Stoplist &stoplist,
                   double quantile = kDefaultSalienceQuantile);

}  // namespace nece

#endif  // NECE_EVENTS_H_
