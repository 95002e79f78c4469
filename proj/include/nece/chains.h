#ifndef NECE_CHAINS_H_
#define NECE_CHAINS_H_

#include <array>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nece/characters.h"
#include "nece/events.h"
#include "nece/interchange.h"
#include "nece/lexicon.h"

namespace nece {

inline constexpr double kDefaultConfThreshold = 0.5;

// Classes dropped from chains before bigram extraction.
std::set<std::string> DefaultExcludedClasses();

// Total temporal order over a set of events.
struct EventOrder {
  // Indices into the input event span, earliest first.
  std::vector<size_t> order;
  // rank[i] is the position of event i in `order`.
  std::vector<int> rank;
  // Number of times a cycle had to be broken.
  int cycle_breaks = 0;
};

// Orders `events` (typically the salient events of `doc`) using the
// document's before/after relations with conf >= conf_threshold; other
// labels are ignored, as are relations touching events outside the span.
// Kahn's algorithm, always taking the ready event with the smallest text
// position. When a cycle blocks progress, the remaining event with the
// smallest text position is emitted anyway (its unresolved incoming edges
// are dropped) and a cycle break is counted.
EventOrder OrderEvents(const DocumentAnnotation &doc,
                       std::span<const EventRecord> events,
                       double conf_threshold = kDefaultConfThreshold);

// An event as seen from one character.
struct ChainLink {
  int frame_id = 0;
  std::string lemma;
  EventType type;
  ParticipantRole role = ParticipantRole::kAgent;
  int rank = 0;
  double salience = 0.0;

  bool operator==(const ChainLink &) const = default;
};

struct CharacterChain {
  int cluster_id = 0;
  std::optional<std::string> name;
  Gender gender = Gender::kUnknown;
  bool is_main = false;
  std::vector<ChainLink> links;  // strictly increasing rank

  bool operator==(const CharacterChain &) const = default;
};

struct StoryChains {
  std::string story_id;
  std::vector<CharacterChain> characters;

  bool operator==(const StoryChains &) const = default;
};

// One chain per profile, in profile order. Main characters get the ordered
// subsequence of `events` they participate in; other characters get an
// empty chain. Events not covered by `order` are skipped.
std::vector<CharacterChain> BuildChains(
    std::span<const CharacterProfile> profiles,
    std::span<const EventRecord> events, const EventOrder &order);

// Chains file: a JSON array of stories.
std::string SerializeChains(std::span<const StoryChains> stories);
// Throws E_SYNTAX on malformed input.
std::vector<StoryChains> ParseChains(std::string_view bytes);

// An event type with the participant role it was observed in.
struct TypedEvent {
  EventType type;
  ParticipantRole role = ParticipantRole::kAgent;

  bool operator==(const TypedEvent &) const = default;
};

struct EventBigram {
  TypedEvent prev;
  TypedEvent next;

  bool operator==(const EventBigram &) const = default;
};

// Drops links whose class is excluded, then emits adjacent pairs.
std::vector<EventBigram> ExtractBigrams(
    std::span<const ChainLink> chain, const std::set<std::string> &excluded);

enum class Section { kBeginning, kMiddle, kEnd };

const char *SectionName(Section s);

// Boundaries b such that section s covers positions [b[s], b[s+1]); the
// link at position i belongs to section floor(3 i / n). Requires n >= 1,
// else E_EMPTY_CHAIN.
std::array<size_t, 4> SectionBoundaries(size_t n);

// Beginning, middle and end thirds of a chain.
std::array<std::span<const ChainLink>, 3> SplitSections(
    std::span<const ChainLink> chain);

}  // namespace nece

#endif  // NECE_CHAINS_H_
