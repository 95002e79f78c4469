#ifndef NECE_PIPELINE_H_
#define NECE_PIPELINE_H_

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "nece/chains.h"
#include "nece/characters.h"
#include "nece/events.h"
#include "nece/interchange.h"
#include "nece/lexicon.h"
#include "nece/stats.h"

namespace nece {

inline constexpr char kToolVersion[] = "1.0.0";

// Exit codes shared by all subcommands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitDataError = 1;
inline constexpr int kExitUsage = 2;

// Shipped data tables.
struct Resources {
  Lexicon lexicon;
  GenderWords gender_words;
  Stoplist stoplist;

  // Loads event_lexicon.tsv, pronouns.tsv, gendered_words.tsv and
  // aux_stoplist.txt from `data_dir`.
  static Resources Load(const std::filesystem::path &data_dir);
};

struct ExtractOutput {
  std::vector<StoryChains> stories;  // sorted by story_id
  std::vector<std::string> warnings;
  int cycle_breaks = 0;
  int unmapped_events = 0;
};

// Runs character profiling, event typing, corpus salience, temporal
// ordering and chain building over parsed documents. Story ids must be
// unique (E_DUPLICATE otherwise) and `docs` non-empty (E_EMPTY_CORPUS).
ExtractOutput ExtractChains(std::span<const DocumentAnnotation> docs,
                            const Resources &res, const AnalysisConfig &cfg);

// Per-run record written next to every output.
struct RunManifest {
  std::string command;
  std::string config_json;  // serialized config snapshot
  std::string input_digest;
  std::vector<std::string> outputs;
  std::vector<std::string> warnings;

  std::string ToJson() const;
};

// SHA-256 (hex) over each file's name and contents, in the given order.
std::string DigestFiles(std::span<const std::filesystem::path> files);

// JSON snapshot of every config field.
std::string ConfigSnapshot(const AnalysisConfig &cfg);

// Where a run's manifest goes: "<stem>.manifest.json" beside `output`.
std::filesystem::path ManifestPathFor(const std::filesystem::path &output);

struct ExtractOptions {
  std::filesystem::path input_dir;
  std::filesystem::path output;
  std::filesystem::path data_dir;
  AnalysisConfig cfg;
};

struct AnalyzeOptions {
  std::filesystem::path chains;
  AnalysisUnit unit = AnalysisUnit::kUnigram;
  std::filesystem::path output;       // results CSV
  std::filesystem::path json_output;  // optional
  AnalysisConfig cfg;
};

struct ReportOptions {
  std::filesystem::path results;
  std::filesystem::path out_dir;
  std::filesystem::path data_dir;
};

// Subcommand bodies. Diagnostics go to `err`; progress lines to `out`.
int RunValidate(std::span<const std::filesystem::path> paths, std::ostream &out,
                std::ostream &err);
int RunExtract(const ExtractOptions &opts, std::ostream &out, std::ostream &err);
int RunAnalyze(const AnalyzeOptions &opts, std::ostream &out, std::ostream &err);
int RunReport(const ReportOptions &opts, std::ostream &out, std::ostream &err);

// Writes bytes to a file, creating parent directories; throws E_IO.
void WriteFile(const std::filesystem::path &path, std::string_view bytes);

// Work pool: calls fn(i) for i in [0, n) on up to `threads` threads.
void ParallelFor(size_t n, int threads, const std::function<void(size_t)> &fn);

}  // namespace nece

#endif  // NECE_PIPELINE_H_
