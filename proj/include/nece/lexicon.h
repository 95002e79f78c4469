#ifndef NECE_LEXICON_H_
#define NECE_LEXICON_H_

#include <compare>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace nece {

// Class assigned to events whose lemma is not in the lexicon.
inline constexpr std::string_view kOtherClass = "other";

enum class Stereotype { kFemale, kMale };

enum class Provenance { kVerbnetRetained, kNewClass, kResolvedPolysemy, kManual };

const char *StereotypeName(Stereotype s);
const char *ProvenanceName(Provenance p);

// Event type: a class plus an optional sub-class (empty string when absent).
struct EventType {
  std::string event_class;
  std::string sub_class;

  auto operator<=>(const EventType &) const = default;
  bool operator==(const EventType &) const = default;
};

enum class Role { kAgent, kPatient };

const char *RoleName(Role role);

// Unit of statistical comparison: an event type with the character's role.
struct EventTypeKey {
  EventType type;
  Role role = Role::kAgent;

  auto operator<=>(const EventTypeKey &) const = default;
  bool operator==(const EventTypeKey &) const = default;
};

struct LexiconEntry {
  std::string lemma;
  EventType type;
  std::optional<Stereotype> stereotype;
  Provenance provenance = Provenance::kVerbnetRetained;
};

// Verb lemma -> event type table. Each lemma has at most one entry.
// Immutable after construction.
class Lexicon {
 public:
  Lexicon() = default;

  // Parses the TSV format: header row, then
  //   lemma <TAB> class <TAB> sub_class <TAB> stereotype <TAB> provenance
  // Blank lines are skipped. Throws E_BAD_ROW or E_DUP_LEMMA.
  static Lexicon Parse(std::istream &in);
  static Lexicon Load(const std::filesystem::path &path);

  // Exact match on the given lemma; nullptr when absent.
  const LexiconEntry *Lookup(std::string_view lemma) const;

  // Type for an event lemma: the lexicon entry's type for the lowercased
  // lemma, or {"other", ""} when unmapped.
  EventType Classify(std::string_view lemma) const;

  // Stereotype tag of a class, if any entry of that class carries one.
  std::optional<Stereotype> ClassStereotype(std::string_view event_class) const;

  size_t size() const { return entries_.size(); }
  const std::vector<LexiconEntry> &entries() const { return entries_; }

  // Distinct classes.
  size_t ClassCount() const;
  // Distinct (class, sub-class) pairs, counting a class used without a
  // sub-class as one type.
  size_t EventTypeCount() const;
  // Distinct (class, sub-class) pairs with a non-empty sub-class.
  size_t SubClassCount() const;

 private:
  std::vector<LexiconEntry> entries_;
  std::unordered_map<std::string, size_t> by_lemma_;
  std::map<std::string, Stereotype, std::less<>> class_stereotype_;
};

std::string ToLower(std::string_view s);

}  // namespace nece

#endif  // NECE_LEXICON_H_
