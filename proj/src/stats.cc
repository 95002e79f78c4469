#include "nece/stats.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <thread>
#include <unordered_map>

#include "nece/errors.h"

namespace nece {

double OddsRatio(const ContingencyTable &t, bool always_correct) {
  double a = static_cast<double>(t.a), b = static_cast<double>(t.b);
  double c = static_cast<double>(t.c), d = static_cast<double>(t.d);
  if (always_correct || t.a == 0 || t.b == 0 || t.c == 0 || t.d == 0) {
    a += 0.5;
    b += 0.5;
    c += 0.5;
    d += 0.5;
  }
  return (a * d) / (b * c);
}

double QuantileSorted(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw Error(ErrorCode::kEmptyCorpus, "quantile of no values");
  const double h = q * static_cast<double>(sorted.size() - 1);
  size_t lo = static_cast<size_t>(std::floor(h));
  if (lo >= sorted.size() - 1) return sorted.back();
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

namespace {

double LogQuantileSorted(std::span<const double> sorted, double q) {
  const double h = q * static_cast<double>(sorted.size() - 1);
  size_t lo = static_cast<size_t>(std::floor(h));
  if (lo >= sorted.size() - 1) return sorted.back();
  const double frac = h - static_cast<double>(lo);
  const double x0 = sorted[lo], x1 = sorted[lo + 1];
  if (frac == 0.0 || x0 == x1) return x0;
  if (x0 <= 0.0) return x0 + frac * (x1 - x0);
  return std::exp(std::log(x0) + frac * (std::log(x1) - std::log(x0)));
}

}  // namespace

std::pair<double, double> PercentileInterval(std::vector<double> values,
                                             double confidence) {
  if (values.empty()) throw Error(ErrorCode::kEmptyCorpus, "no replicates");
  std::sort(values.begin(), values.end());
  const double alpha = 1.0 - confidence;
  return {LogQuantileSorted(values, alpha / 2.0),
          LogQuantileSorted(values, 1.0 - alpha / 2.0)};
}

const char *AnalysisUnitName(AnalysisUnit unit) {
  switch (unit) {
    case AnalysisUnit::kUnigram: return "unigram";
    case AnalysisUnit::kBigramBefore: return "bigram_before";
    case AnalysisUnit::kBigramAfter: return "bigram_after";
    case AnalysisUnit::kSection: return "section";
  }
  return "unigram";
}

std::optional<AnalysisUnit> ParseAnalysisUnit(std::string_view s) {
  for (AnalysisUnit u : {AnalysisUnit::kUnigram, AnalysisUnit::kBigramBefore,
                         AnalysisUnit::kBigramAfter, AnalysisUnit::kSection}) {
    if (s == AnalysisUnitName(u)) return u;
  }
  return std::nullopt;
}

const char *PositionName(Position p) {
  switch (p) {
    case Position::kNone: return "";
    case Position::kBefore: return "before";
    case Position::kAfter: return "after";
    case Position::kBeginning: return "beginning";
    case Position::kMiddle: return "middle";
    case Position::kEnd: return "end";
  }
  return "";
}

std::optional<Position> ParsePosition(std::string_view s) {
  for (Position p : {Position::kNone, Position::kBefore, Position::kAfter,
                     Position::kBeginning, Position::kMiddle, Position::kEnd}) {
    if (s == PositionName(p)) return p;
  }
  return std::nullopt;
}

void ValidateConfig(const AnalysisConfig &cfg) {
  auto bad = [](const std::string &what) {
    throw Error(ErrorCode::kBadConfig, what);
  };
  if (cfg.min_count < 0) bad("min_count must be >= 0");
  if (cfg.bootstrap_reps < 1) bad("bootstrap_reps must be >= 1");
  if (!(cfg.confidence > 0.0 && cfg.confidence < 1.0)) {
    bad("confidence must be in (0, 1)");
  }
  if (!(cfg.main_ratio > 0.0 && cfg.main_ratio <= 1.0)) {
    bad("main_ratio must be in (0, 1]");
  }
  if (!(cfg.salience_quantile >= 0.0 && cfg.salience_quantile <= 1.0)) {
    bad("salience_quantile must be in [0, 1]");
  }
  if (cfg.threads < 1) bad("threads must be >= 1");
}

namespace {

// Scope within which target and complement are counted.
struct GroupKey {
  Position position = Position::kNone;
  std::optional<EventTypeKey> anchor;

  auto operator<=>(const GroupKey &) const = default;
};

struct MaleFemale {
  int64_t male = 0;
  int64_t female = 0;
};

struct StoryCells {
  // (cell index, counts), sorted by cell index
  std::vector<std::pair<size_t, MaleFemale>> cells;
  std::vector<std::pair<size_t, MaleFemale>> groups;
};

// Per-story sparse counts for every (group, target) cell of one unit.
struct CorpusTally {
  std::vector<ResultKey> keys;      // cell -> key
  std::vector<size_t> cell_group;   // cell -> group index
  size_t group_count = 0;
  std::vector<StoryCells> stories;
};

std::vector<EventTypeKey> KeysOf(const TypedEvent &ev) {
  std::vector<EventTypeKey> keys;
  for (Role r : ExpandRole(ev.role)) keys.push_back({ev.type, r});
  return keys;
}

template <typename Fn>
void ForEachObservation(const CharacterChain &chain, AnalysisUnit unit,
                        const AnalysisConfig &cfg, Fn &&fn) {
  switch (unit) {
    case AnalysisUnit::kUnigram:
      for (const ChainLink &link : chain.links) {
        for (const auto &k : KeysOf({link.type, link.role})) fn(GroupKey{}, k);
      }
      break;
    case AnalysisUnit::kBigramBefore:
    case AnalysisUnit::kBigramAfter: {
      const bool before = unit == AnalysisUnit::kBigramBefore;
      for (const EventBigram &bg : ExtractBigrams(chain.links, cfg.excluded_classes)) {
        for (const auto &p : KeysOf(bg.prev)) {
          for (const auto &n : KeysOf(bg.next)) {
            if (before) {
              fn(GroupKey{Position::kBefore, n}, p);
            } else {
              fn(GroupKey{Position::kAfter, p}, n);
            }
          }
        }
      }
      break;
    }
    case AnalysisUnit::kSection: {
      if (chain.links.empty()) break;
      auto sections = SplitSections(chain.links);
      const Position labels[3] = {Position::kBeginning, Position::kMiddle,
                                  Position::kEnd};
      for (int s = 0; s < 3; ++s) {
        for (const ChainLink &link : sections[s]) {
          for (const auto &k : KeysOf({link.type, link.role})) {
            fn(GroupKey{labels[s], std::nullopt}, k);
          }
        }
      }
      break;
    }
  }
}

CorpusTally Tally(std::span<const StoryChains> corpus, AnalysisUnit unit,
                  const AnalysisConfig &cfg) {
  using CellKey = std::pair<GroupKey, EventTypeKey>;
  std::vector<std::map<CellKey, MaleFemale>> per_story(corpus.size());
  std::map<CellKey, size_t> cell_index;
  std::map<GroupKey, size_t> group_index;

  for (size_t s = 0; s < corpus.size(); ++s) {
    for (const CharacterChain &chain : corpus[s].characters) {
      if (!chain.is_main || chain.gender == Gender::kUnknown) continue;
      const bool male = chain.gender == Gender::kMale;
      ForEachObservation(chain, unit, cfg,
                         [&](const GroupKey &g, const EventTypeKey &target) {
                           MaleFemale &mf = per_story[s][{g, target}];
                           (male ? mf.male : mf.female)++;
                           cell_index.emplace(CellKey{g, target}, 0);
                           group_index.emplace(g, 0);
                         });
    }
  }

  CorpusTally tally;
  size_t next = 0;
  for (auto &[g, idx] : group_index) idx = next++;
  tally.group_count = next;
  next = 0;
  for (auto &[ck, idx] : cell_index) {
    idx = next++;
    ResultKey key;
    key.unit = unit;
    key.position = ck.first.position;
    key.anchor = ck.first.anchor;
    key.target = ck.second;
    tally.keys.push_back(std::move(key));
    tally.cell_group.push_back(group_index.at(ck.first));
  }

  tally.stories.resize(corpus.size());
  for (size_t s = 0; s < corpus.size(); ++s) {
    std::map<size_t, MaleFemale> groups;
    for (const auto &[ck, mf] : per_story[s]) {
      size_t cell = cell_index.at(ck);
      tally.stories[s].cells.emplace_back(cell, mf);
      MaleFemale &g = groups[tally.cell_group[cell]];
      g.male += mf.male;
      g.female += mf.female;
    }
    tally.stories[s].groups.assign(groups.begin(), groups.end());
  }
  return tally;
}

// Weighted sums over stories: full corpus when weights is empty.
struct Totals {
  std::vector<MaleFemale> cells;
  std::vector<MaleFemale> groups;
};

void Accumulate(const CorpusTally &tally, std::span<const uint32_t> weights,
                Totals *totals) {
  totals->cells.assign(tally.keys.size(), {});
  totals->groups.assign(tally.group_count, {});
  for (size_t s = 0; s < tally.stories.size(); ++s) {
    const int64_t w = weights.empty() ? 1 : weights[s];
    if (w == 0) continue;
    for (const auto &[cell, mf] : tally.stories[s].cells) {
      totals->cells[cell].male += w * mf.male;
      totals->cells[cell].female += w * mf.female;
    }
    for (const auto &[group, mf] : tally.stories[s].groups) {
      totals->groups[group].male += w * mf.male;
      totals->groups[group].female += w * mf.female;
    }
  }
}

ContingencyTable TableFor(const CorpusTally &tally, const Totals &totals,
                          size_t cell) {
  const MaleFemale &t = totals.cells[cell];
  const MaleFemale &g = totals.groups[tally.cell_group[cell]];
  return {t.male, g.male - t.male, t.female, g.female - t.female};
}

// Runs the bootstrap for the selected cells and fills in the results.
void Bootstrap(const CorpusTally &tally, std::span<const size_t> cells,
               const AnalysisConfig &cfg, std::vector<OddsRatioResult> *out) {
  const size_t reps = static_cast<size_t>(cfg.bootstrap_reps);
  const size_t n = tally.stories.size();
  std::vector<std::vector<double>> replicates(cells.size(),
                                              std::vector<double>(reps));

  auto run = [&](size_t first, size_t stride) {
    Totals totals;
    for (size_t r = first; r < reps; r += stride) {
      std::vector<uint32_t> weights = ResampleCounts(n, ChildSeed(cfg.rng_seed, r));
      Accumulate(tally, weights, &totals);
      for (size_t k = 0; k < cells.size(); ++k) {
        replicates[k][r] =
            OddsRatio(TableFor(tally, totals, cells[k]), cfg.haldane_always);
      }
    }
  };
  const size_t workers =
      std::min(static_cast<size_t>(std::max(cfg.threads, 1)), std::max<size_t>(reps, 1));
  if (workers <= 1) {
    run(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (size_t t = 0; t < workers; ++t) pool.emplace_back(run, t, workers);
    for (auto &th : pool) th.join();
  }

  Totals full;
  Accumulate(tally, {}, &full);
  out->clear();
  out->reserve(cells.size());
  for (size_t k = 0; k < cells.size(); ++k) {
    OddsRatioResult res;
    res.key = tally.keys[cells[k]];
    res.table = TableFor(tally, full, cells[k]);
    res.or_point = OddsRatio(res.table, cfg.haldane_always);
    std::tie(res.ci_low, res.ci_high) =
        PercentileInterval(std::move(replicates[k]), cfg.confidence);
    res.significant = !(res.ci_low <= 1.0 && 1.0 <= res.ci_high);
    out->push_back(std::move(res));
  }
}

}  // namespace

std::vector<std::pair<ResultKey, ContingencyTable>> CountTables(
    std::span<const StoryChains> corpus, AnalysisUnit unit,
    const AnalysisConfig &cfg) {
  CorpusTally tally = Tally(corpus, unit, cfg);
  Totals full;
  Accumulate(tally, {}, &full);
  std::vector<std::pair<ResultKey, ContingencyTable>> tables;
  for (size_t cell = 0; cell < tally.keys.size(); ++cell) {
    tables.emplace_back(tally.keys[cell], TableFor(tally, full, cell));
  }
  return tables;
}

std::vector<OddsRatioResult> Analyze(std::span<const StoryChains> corpus,
                                     AnalysisUnit unit,
                                     const AnalysisConfig &cfg) {
  ValidateConfig(cfg);
  CorpusTally tally = Tally(corpus, unit, cfg);
  Totals full;
  Accumulate(tally, {}, &full);
  std::vector<size_t> cells;
  for (size_t cell = 0; cell < tally.keys.size(); ++cell) {
    if (full.cells[cell].male + full.cells[cell].female >= cfg.min_count) {
      cells.push_back(cell);
    }
  }
  std::vector<OddsRatioResult> results;
  if (!cells.empty()) Bootstrap(tally, cells, cfg, &results);
  return results;
}

OddsRatioResult BootstrapCi(std::span<const StoryChains> corpus,
                            const ResultKey &key, const AnalysisConfig &cfg) {
  ValidateConfig(cfg);
  CorpusTally tally = Tally(corpus, key.unit, cfg);
  auto it = std::lower_bound(tally.keys.begin(), tally.keys.end(), key);
  int64_t n = 0;
  size_t cell = 0;
  if (it != tally.keys.end() && *it == key) {
    cell = static_cast<size_t>(it - tally.keys.begin());
    Totals full;
    Accumulate(tally, {}, &full);
    n = full.cells[cell].male + full.cells[cell].female;
  }
  if (n < cfg.min_count || n == 0) {
    throw Error(ErrorCode::kBelowMinCount,
                "key occurs " + std::to_string(n) + " times, minimum is " +
                    std::to_string(cfg.min_count));
  }
  std::vector<OddsRatioResult> results;
  const size_t cells[1] = {cell};
  Bootstrap(tally, cells, cfg, &results);
  return results.front();
}

uint64_t ChildSeed(uint64_t seed, uint64_t replicate) {
  // splitmix64 finalizer over the seed and the replicate index.
  auto mix = [](uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return mix(mix(seed) ^ replicate);
}

std::vector<uint32_t> ResampleCounts(size_t n, uint64_t child_seed) {
  std::vector<uint32_t> counts(n, 0);
  if (n == 0) return counts;
  std::mt19937_64 gen(child_seed);
  // Rejection sampling keeps draws uniform and identical across standard
  // libraries (std::uniform_int_distribution is implementation-defined).
  const uint64_t range = n;
  const uint64_t limit = std::numeric_limits<uint64_t>::max() -
                         std::numeric_limits<uint64_t>::max() % range;
  for (size_t i = 0; i < n; ++i) {
    uint64_t x;
    do {
      x = gen();
    } while (x >= limit);
    ++counts[x % range];
  }
  return counts;
}

namespace {

// Counts inversions of `v` by merge sort.
int64_t CountInversions(std::vector<int64_t> &v, std::vector<int64_t> &buf,
                        size_t lo, size_t hi) {
  if (hi - lo < 2) return 0;
  size_t mid = lo + (hi - lo) / 2;
  int64_t inv = CountInversions(v, buf, lo, mid) + CountInversions(v, buf, mid, hi);
  size_t i = lo, j = mid, k = lo;
  while (i < mid && j < hi) {
    if (v[j] < v[i]) {
      inv += static_cast<int64_t>(mid - i);
      buf[k++] = v[j++];
    } else {
      buf[k++] = v[i++];
    }
  }
  while (i < mid) buf[k++] = v[i++];
  while (j < hi) buf[k++] = v[j++];
  std::copy(buf.begin() + lo, buf.begin() + hi, v.begin() + lo);
  return inv;
}

}  // namespace

double KendallTau(std::span<const int64_t> order1,
                  std::span<const int64_t> order2) {
  if (order1.size() != order2.size()) {
    throw Error(ErrorCode::kMismatchedItems, "orders have different lengths");
  }
  std::unordered_map<int64_t, int64_t> position;
  for (size_t i = 0; i < order2.size(); ++i) {
    if (!position.emplace(order2[i], static_cast<int64_t>(i)).second) {
      throw Error(ErrorCode::kMismatchedItems,
                  "duplicate item " + std::to_string(order2[i]));
    }
  }
  std::vector<int64_t> seq;
  seq.reserve(order1.size());
  std::unordered_map<int64_t, bool> seen;
  for (int64_t item : order1) {
    auto it = position.find(item);
    if (it == position.end() || seen[item]) {
      throw Error(ErrorCode::kMismatchedItems,
                  "item " + std::to_string(item) + " not matched in second order");
    }
    seen[item] = true;
    seq.push_back(it->second);
  }
  const size_t n = seq.size();
  if (n < 2) return 1.0;
  std::vector<int64_t> buf(n);
  const int64_t discordant = CountInversions(seq, buf, 0, n);
  const double pairs = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
  return 1.0 - 2.0 * static_cast<double>(discordant) / pairs;
}

ClassificationScores ClassificationMetrics(std::span<const std::string> gold,
                                           std::span<const std::string> predicted) {
  if (gold.size() != predicted.size() || gold.empty()) {
    throw Error(ErrorCode::kLengthMismatch,
                "gold has " + std::to_string(gold.size()) +
                    " labels, predicted has " + std::to_string(predicted.size()));
  }
  struct Counts {
    int tp = 0, fp = 0, fn = 0;
  };
  std::map<std::string, Counts> per_class;
  int correct = 0;
  for (size_t i = 0; i < gold.size(); ++i) {
    if (gold[i] == predicted[i]) {
      ++correct;
      ++per_class[gold[i]].tp;
    } else {
      ++per_class[gold[i]].fn;
      ++per_class[predicted[i]].fp;
    }
  }
  double f1_sum = 0.0;
  for (const auto &[label, c] : per_class) {
    const int denom = 2 * c.tp + c.fp + c.fn;
    f1_sum += denom == 0 ? 0.0 : 2.0 * c.tp / denom;
  }
  return {static_cast<double>(correct) / static_cast<double>(gold.size()),
          f1_sum / static_cast<double>(per_class.size())};
}

}  // namespace nece
