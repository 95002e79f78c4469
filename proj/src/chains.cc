#include "nece/chains.h"

#include <algorithm>
#include <queue>
#include <tuple>
#include <unordered_map>

#include "json.hpp"
#include "nece/errors.h"

namespace nece {

std::set<std::string> DefaultExcludedClasses() {
  return {"communication", "travel", "motion", std::string(kOtherClass)};
}

EventOrder OrderEvents(const DocumentAnnotation &doc,
                       std::span<const EventRecord> events,
                       double conf_threshold) {
  const size_t n = events.size();
  std::unordered_map<int, size_t> by_frame;
  for (size_t i = 0; i < n; ++i) by_frame.emplace(events[i].frame_id, i);

  std::vector<std::vector<size_t>> successors(n);
  std::vector<int> in_degree(n, 0);
  for (const TemporalRelation &rel : doc.temporal) {
    if (rel.conf < conf_threshold) continue;
    if (rel.rel != TemporalLabel::kBefore && rel.rel != TemporalLabel::kAfter) {
      continue;
    }
    auto from = by_frame.find(rel.e1);
    auto to = by_frame.find(rel.e2);
    if (from == by_frame.end() || to == by_frame.end()) continue;
    if (rel.rel == TemporalLabel::kAfter) std::swap(from, to);
    successors[from->second].push_back(to->second);
    ++in_degree[to->second];
  }

  // Earliest text position first; frame id and input index break ties.
  auto key = [&](size_t i) {
    return std::make_tuple(events[i].text_position, events[i].frame_id, i);
  };
  auto later = [&](size_t a, size_t b) { return key(a) > key(b); };
  std::priority_queue<size_t, std::vector<size_t>, decltype(later)> ready(later);
  for (size_t i = 0; i < n; ++i) {
    if (in_degree[i] == 0) ready.push(i);
  }

  EventOrder result;
  result.rank.assign(n, -1);
  std::vector<bool> done(n, false);
  auto emit = [&](size_t i) {
    done[i] = true;
    result.rank[i] = static_cast<int>(result.order.size());
    result.order.push_back(i);
    for (size_t s : successors[i]) {
      if (!done[s] && --in_degree[s] == 0) ready.push(s);
    }
  };

  while (result.order.size() < n) {
    if (ready.empty()) {
      // Cycle: force out the earliest remaining event.
      size_t pick = n;
      for (size_t i = 0; i < n; ++i) {
        if (!done[i] && (pick == n || key(i) < key(pick))) pick = i;
      }
      ++result.cycle_breaks;
      in_degree[pick] = 0;
      emit(pick);
      continue;
    }
    size_t next = ready.top();
    ready.pop();
    if (done[next]) continue;
    emit(next);
  }
  return result;
}

std::vector<CharacterChain> BuildChains(
    std::span<const CharacterProfile> profiles,
    std::span<const EventRecord> events, const EventOrder &order) {
  std::vector<CharacterChain> chains;
  chains.reserve(profiles.size());
  for (const CharacterProfile &p : profiles) {
    CharacterChain chain;
    chain.cluster_id = p.cluster_id;
    chain.name = p.name;
    chain.gender = p.gender;
    chain.is_main = p.is_main;
    if (p.is_main) {
      for (size_t idx : order.order) {
        const EventRecord &ev = events[idx];
        for (const Participant &part : ev.participants) {
          if (part.cluster_id != p.cluster_id) continue;
          chain.links.push_back({ev.frame_id, ev.lemma, ev.type, part.role,
                                 order.rank[idx], ev.salience});
          break;
        }
      }
    }
    chains.push_back(std::move(chain));
  }
  return chains;
}

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

[[noreturn]] void Bad(const std::string &detail) {
  throw Error(ErrorCode::kSyntax, "chains file: " + detail);
}

const json &Get(const json &obj, const char *key) {
  if (!obj.is_object()) Bad(std::string("expected object holding \"") + key + "\"");
  auto it = obj.find(key);
  if (it == obj.end()) Bad(std::string("missing \"") + key + "\"");
  return *it;
}

template <typename T>
T GetAs(const json &obj, const char *key) {
  try {
    return Get(obj, key).get<T>();
  } catch (const json::type_error &) {
    Bad(std::string("wrong type for \"") + key + "\"");
  }
}

std::string OptString(const json &obj, const char *key) {
  const json &v = Get(obj, key);
  if (v.is_null()) return "";
  if (!v.is_string()) Bad(std::string("wrong type for \"") + key + "\"");
  return v.get<std::string>();
}

}  // namespace

std::string SerializeChains(std::span<const StoryChains> stories) {
  ordered_json root = ordered_json::array();
  for (const StoryChains &story : stories) {
    ordered_json characters = ordered_json::array();
    for (const CharacterChain &c : story.characters) {
      ordered_json links = ordered_json::array();
      for (const ChainLink &l : c.links) {
        ordered_json link;
        link["frame"] = l.frame_id;
        link["lemma"] = l.lemma;
        link["class"] = l.type.event_class;
        link["subclass"] = l.type.sub_class.empty()
                               ? ordered_json(nullptr)
                               : ordered_json(l.type.sub_class);
        link["role"] = ParticipantRoleName(l.role);
        link["rank"] = l.rank;
        link["salient"] = true;
        link["salience"] = l.salience;
        links.push_back(std::move(link));
      }
      ordered_json ch;
      ch["cluster"] = c.cluster_id;
      ch["name"] = c.name ? ordered_json(*c.name) : ordered_json(nullptr);
      ch["gender"] = GenderName(c.gender);
      ch["main"] = c.is_main;
      ch["chain"] = std::move(links);
      characters.push_back(std::move(ch));
    }
    ordered_json s;
    s["story_id"] = story.story_id;
    s["characters"] = std::move(characters);
    root.push_back(std::move(s));
  }
  return root.dump(2) + "\n";
}

std::vector<StoryChains> ParseChains(std::string_view bytes) {
  json root;
  try {
    root = json::parse(bytes.begin(), bytes.end());
  } catch (const json::parse_error &e) {
    Bad(std::string("malformed JSON: ") + e.what());
  }
  if (!root.is_array()) Bad("expected a JSON array of stories");

  std::vector<StoryChains> stories;
  for (const json &s : root) {
    StoryChains story;
    story.story_id = GetAs<std::string>(s, "story_id");
    const json &characters = Get(s, "characters");
    if (!characters.is_array()) Bad("\"characters\" must be an array");
    for (const json &c : characters) {
      CharacterChain chain;
      chain.cluster_id = GetAs<int>(c, "cluster");
      if (std::string name = OptString(c, "name"); !name.empty()) chain.name = name;
      auto gender = ParseGender(GetAs<std::string>(c, "gender"));
      if (!gender) Bad("unknown gender in story " + story.story_id);
      chain.gender = *gender;
      chain.is_main = GetAs<bool>(c, "main");
      const json &links = Get(c, "chain");
      if (!links.is_array()) Bad("\"chain\" must be an array");
      int last_rank = -1;
      for (const json &l : links) {
        ChainLink link;
        link.frame_id = GetAs<int>(l, "frame");
        link.lemma = GetAs<std::string>(l, "lemma");
        link.type.event_class = GetAs<std::string>(l, "class");
        link.type.sub_class = OptString(l, "subclass");
        auto role = ParseParticipantRole(GetAs<std::string>(l, "role"));
        if (!role) Bad("unknown role in story " + story.story_id);
        link.role = *role;
        link.rank = GetAs<int>(l, "rank");
        if (link.rank <= last_rank) {
          Bad("ranks must strictly increase along a chain (story " +
              story.story_id + ")");
        }
        last_rank = link.rank;
        if (auto it = l.find("salience"); it != l.end() && it->is_number()) {
          link.salience = it->get<double>();
        }
        chain.links.push_back(std::move(link));
      }
      story.characters.push_back(std::move(chain));
    }
    stories.push_back(std::move(story));
  }
  return stories;
}

std::vector<EventBigram> ExtractBigrams(
    std::span<const ChainLink> chain, const std::set<std::string> &excluded) {
  std::vector<EventBigram> bigrams;
  const ChainLink *prev = nullptr;
  for (const ChainLink &link : chain) {
    if (excluded.count(link.type.event_class)) continue;
    if (prev) {
      bigrams.push_back({{prev->type, prev->role}, {link.type, link.role}});
    }
    prev = &link;
  }
  return bigrams;
}

const char *SectionName(Section s) {
  switch (s) {
    case Section::kBeginning: return "beginning";
    case Section::kMiddle: return "middle";
    case Section::kEnd: return "end";
  }
  return "beginning";
}

std::array<size_t, 4> SectionBoundaries(size_t n) {
  if (n == 0) throw Error(ErrorCode::kEmptyChain, "cannot split an empty chain");
  // First position of section s is ceil(s n / 3).
  return {0, (n + 2) / 3, (2 * n + 2) / 3, n};
}

std::array<std::span<const ChainLink>, 3> SplitSections(
    std::span<const ChainLink> chain) {
  auto b = SectionBoundaries(chain.size());
  return {chain.subspan(b[0], b[1] - b[0]), chain.subspan(b[1], b[2] - b[1]),
          chain.subspan(b[2], b[3] - b[2])};
}

}  // namespace nece
