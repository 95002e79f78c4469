#ifndef NECE_STATS_H_
#define NECE_STATS_H_

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nece/chains.h"
#include "nece/lexicon.h"

namespace nece {

// Male/female counts of a target unit against its complement.
//   a: male target    b: male complement
//   c: female target  d: female complement
struct ContingencyTable {
  int64_t a = 0;
  int64_t b = 0;
  int64_t c = 0;
  int64_t d = 0;

  int64_t n_total() const { return a + c; }
  bool operator==(const ContingencyTable &) const = default;
};

// Male:female odds ratio (a/b)/(c/d). If any cell is zero, 0.5 is added
// to all four cells (Haldane-Anscombe); `always_correct` applies the 0.5
// unconditionally. An all-zero table gives 1.0.
double OddsRatio(const ContingencyTable &t, bool always_correct = false);

// Quantile of sorted data by linear interpolation between order
// statistics at position q (n - 1). Requires non-empty input.
double QuantileSorted(std::span<const double> sorted, double q);

// Two-sided percentile interval of positive replicate statistics at the
// given confidence. Interpolation between neighbouring order statistics is
// done on the log scale, so inverting every replicate inverts and swaps
// the endpoints.
std::pair<double, double> PercentileInterval(std::vector<double> values,
                                             double confidence);

enum class AnalysisUnit { kUnigram, kBigramBefore, kBigramAfter, kSection };

const char *AnalysisUnitName(AnalysisUnit unit);
std::optional<AnalysisUnit> ParseAnalysisUnit(std::string_view s);

// Where the target sits relative to the anchor (bigrams) or in the chain
// (sections).
enum class Position { kNone, kBefore, kAfter, kBeginning, kMiddle, kEnd };

const char *PositionName(Position p);  // "" for kNone
std::optional<Position> ParsePosition(std::string_view s);

struct AnalysisConfig {
  int min_count = 5;
  int bootstrap_reps = 1000;
  double confidence = 0.95;
  uint64_t rng_seed = 42;
  double main_ratio = kDefaultMainRatio;
  double salience_quantile = kDefaultSalienceQuantile;
  double conf_threshold = kDefaultConfThreshold;
  std::set<std::string> excluded_classes = DefaultExcludedClasses();
  bool haldane_always = false;
  int threads = 1;
};

// Throws E_BAD_CONFIG unless min_count >= 0, bootstrap_reps >= 1,
// 0 < confidence < 1, 0 < main_ratio <= 1, 0 <= salience_quantile <= 1,
// threads >= 1.
void ValidateConfig(const AnalysisConfig &cfg);

struct ResultKey {
  AnalysisUnit unit = AnalysisUnit::kUnigram;
  Position position = Position::kNone;
  std::optional<EventTypeKey> anchor;  // bigram units only
  EventTypeKey target;

  auto operator<=>(const ResultKey &) const = default;
  bool operator==(const ResultKey &) const = default;
};

struct OddsRatioResult {
  ResultKey key;
  ContingencyTable table;
  double or_point = 1.0;
  double ci_low = 1.0;
  double ci_high = 1.0;
  bool significant = false;
};

// Contingency tables for every key observed in the corpus under `unit`,
// in key order, before any min_count filtering. Only main characters of
// known gender contribute.
//   unigram:        target = (type, role); complement = all other
//                   (type, role) occurrences
//   bigram_before:  anchor = later event of a bigram, target = earlier
//                   event; complement = other bigrams with that anchor
//   bigram_after:   anchor = earlier event, target = later event
//   section:        unigram counts within each chain third separately
// Participants in role `both` count once as agent and once as patient.
std::vector<std::pair<ResultKey, ContingencyTable>> CountTables(
    std::span<const StoryChains> corpus, AnalysisUnit unit,
    const AnalysisConfig &cfg);

// Odds ratios with story-level percentile bootstrap intervals for every key
// whose a + c reaches cfg.min_count in the full corpus. Replicate r draws
// corpus.size() stories with replacement from a generator seeded with
// ChildSeed(cfg.rng_seed, r), so results do not depend on cfg.threads.
std::vector<OddsRatioResult> Analyze(std::span<const StoryChains> corpus,
                                     AnalysisUnit unit,
                                     const AnalysisConfig &cfg);

// Same computation for a single key. Throws E_BELOW_MIN_COUNT when the key
// occurs fewer than cfg.min_count times.
OddsRatioResult BootstrapCi(std::span<const StoryChains> corpus,
                            const ResultKey &key, const AnalysisConfig &cfg);

uint64_t ChildSeed(uint64_t seed, uint64_t replicate);

// Multiplicity of each of n stories in one bootstrap resample of size n.
std::vector<uint32_t> ResampleCounts(size_t n, uint64_t child_seed);

// Kendall's tau between two orderings of the same distinct items:
// 1 - 2 * discordant / C(n, 2). Throws E_MISMATCHED_ITEMS when the item
// sets differ or contain duplicates. Orders of fewer than two items give 1.
double KendallTau(std::span<const int64_t> order1,
                  std::span<const int64_t> order2);

struct ClassificationScores {
  double accuracy = 0.0;
  double macro_f1 = 0.0;
};

// Accuracy and unweighted mean per-class F1 over the classes present in
// gold or predicted. Throws E_LENGTH_MISMATCH on unequal or empty inputs.
ClassificationScores ClassificationMetrics(std::span<const std::string> gold,
                                           std::span<const std::string> predicted);

// Results files.

inline constexpr std::string_view kResultsCsvHeader =
    "unit,event_class,sub_class,role,anchor_class,anchor_sub_class,"
    "anchor_role,position,n_female,n_male,odds_ratio_m_f,ci_low,ci_high,"
    "significant";

std::string ResultsToCsv(std::span<const OddsRatioResult> results);
std::string ResultsToJson(std::span<const OddsRatioResult> results);

// Parses a results CSV. Only the a and c cells are recoverable (n_male,
// n_female); b and d are left zero. Throws E_BAD_CSV on a wrong header,
// wrong field count or bad values.
std::vector<OddsRatioResult> ParseResultsCsv(std::string_view text);

// Shortest decimal text that round-trips to the same double.
std::string FormatDouble(double v);

}  // namespace nece

#endif  // NECE_STATS_H_
