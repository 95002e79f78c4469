#include "nece/pipeline.h"

#include <openssl/evp.h>

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <ostream>
#include <thread>

#include "json.hpp"
#include "nece/errors.h"
#include "nece/report.h"

namespace nece {

namespace fs = std::filesystem;

Resources Resources::Load(const fs::path &data_dir) {
  Resources res;
  res.lexicon = Lexicon::Load(data_dir / "event_lexicon.tsv");
  res.gender_words = GenderWords::Load(data_dir / "pronouns.tsv",
                                       data_dir / "gendered_words.tsv");
  res.stoplist = LoadStoplist(data_dir / "aux_stoplist.txt");
  return res;
}

void ParallelFor(size_t n, int threads, const std::function<void(size_t)> &fn) {
  const size_t workers = std::min(n, static_cast<size_t>(std::max(threads, 1)));
  if (workers <= 1) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::vector<std::thread> pool;
  for (size_t t = 0; t < workers; ++t) {
    pool.emplace_back([&] {
      for (size_t i = next++; i < n; i = next++) fn(i);
    });
  }
  for (auto &th : pool) th.join();
}

ExtractOutput ExtractChains(std::span<const DocumentAnnotation> docs,
                            const Resources &res, const AnalysisConfig &cfg) {
  if (docs.empty()) throw Error(ErrorCode::kEmptyCorpus, "no documents to extract");

  // Story order is fixed by id so scheduling never changes the output.
  std::vector<size_t> by_id(docs.size());
  for (size_t i = 0; i < docs.size(); ++i) by_id[i] = i;
  std::sort(by_id.begin(), by_id.end(), [&](size_t a, size_t b) {
    return docs[a].story_id < docs[b].story_id;
  });
  for (size_t i = 1; i < by_id.size(); ++i) {
    if (docs[by_id[i]].story_id == docs[by_id[i - 1]].story_id) {
      throw Error(ErrorCode::kDuplicate,
                  "story_id \"" + docs[by_id[i]].story_id + "\" appears twice");
    }
  }

  const size_t n = docs.size();
  std::vector<std::vector<CharacterProfile>> profiles(n);
  std::vector<std::vector<EventRecord>> events(n);
  ParallelFor(n, cfg.threads, [&](size_t i) {
    const DocumentAnnotation &doc = docs[by_id[i]];
    profiles[i] = ProfileCharacters(doc, res.gender_words, cfg.main_ratio);
    events[i] = ExtractEvents(doc, profiles[i], res.lexicon);
  });

  ScoreSalience(events, res.stoplist, cfg.salience_quantile);

  ExtractOutput out;
  out.stories.resize(n);
  std::vector<int> cycle_breaks(n, 0);
  ParallelFor(n, cfg.threads, [&](size_t i) {
    const DocumentAnnotation &doc = docs[by_id[i]];
    std::vector<EventRecord> salient;
    for (const EventRecord &ev : events[i]) {
      if (ev.salient) salient.push_back(ev);
    }
    EventOrder order = OrderEvents(doc, salient, cfg.conf_threshold);
    cycle_breaks[i] = order.cycle_breaks;
    out.stories[i].story_id = doc.story_id;
    out.stories[i].characters = BuildChains(profiles[i], salient, order);
  });

  for (size_t i = 0; i < n; ++i) {
    if (cycle_breaks[i] > 0) {
      out.warnings.push_back("story " + out.stories[i].story_id + ": broke " +
                             std::to_string(cycle_breaks[i]) +
                             " temporal cycle(s)");
      out.cycle_breaks += cycle_breaks[i];
    }
    for (const EventRecord &ev : events[i]) {
      if (ev.type.event_class == kOtherClass) ++out.unmapped_events;
    }
  }
  if (out.unmapped_events > 0) {
    out.warnings.push_back(std::to_string(out.unmapped_events) +
                           " event(s) with unmapped lemmas typed as \"other\"");
  }
  return out;
}

std::string RunManifest::ToJson() const {
  nlohmann::ordered_json j;
  j["tool"] = "nece";
  j["version"] = kToolVersion;
  j["command"] = command;
  j["config"] = nlohmann::ordered_json::parse(config_json);
  j["input_digest"] = input_digest;
  j["outputs"] = outputs;
  j["warnings"] = warnings;
  return j.dump(2) + "\n";
}

std::string DigestFiles(std::span<const fs::path> files) {
  EVP_MD_CTX *ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  for (const fs::path &f : files) {
    const std::string name = f.filename().string();
    const std::string bytes = ReadFile(f);
    const uint64_t sizes[2] = {name.size(), bytes.size()};
    EVP_DigestUpdate(ctx, sizes, sizeof(sizes));
    EVP_DigestUpdate(ctx, name.data(), name.size());
    EVP_DigestUpdate(ctx, bytes.data(), bytes.size());
  }
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, md, &len);
  EVP_MD_CTX_free(ctx);
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof(buf), "%02x", md[i]);
    hex += buf;
  }
  return "sha256:" + hex;
}

std::string ConfigSnapshot(const AnalysisConfig &cfg) {
  nlohmann::ordered_json j;
  j["min_count"] = cfg.min_count;
  j["bootstrap_reps"] = cfg.bootstrap_reps;
  j["confidence"] = cfg.confidence;
  j["rng_seed"] = cfg.rng_seed;
  j["main_ratio"] = cfg.main_ratio;
  j["salience_quantile"] = cfg.salience_quantile;
  j["conf_threshold"] = cfg.conf_threshold;
  j["excluded_classes"] = cfg.excluded_classes;
  j["haldane_always"] = cfg.haldane_always;
  return j.dump();
}

fs::path ManifestPathFor(const fs::path &output) {
  fs::path p = output;
  return p.replace_filename(output.stem().string() + ".manifest.json");
}

void WriteFile(const fs::path &path, std::string_view bytes) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path.string());
}

int RunValidate(std::span<const fs::path> paths, std::ostream &out,
                std::ostream &err) {
  std::vector<fs::path> files;
  for (const fs::path &p : paths) {
    if (fs::is_directory(p)) {
      auto listed = ListCorpusFiles(p);
      files.insert(files.end(), listed.begin(), listed.end());
    } else if (fs::exists(p)) {
      files.push_back(p);
    } else {
      err << "nece validate: no such file or directory: " << p.string() << "\n";
      return kExitUsage;
    }
  }
  int failures = 0;
  for (const fs::path &f : files) {
    try {
      DocumentAnnotation doc = LoadDocument(f);
      out << "OK " << f.string() << " (" << doc.story_id << ": "
          << doc.tokens.size() << " tokens, " << doc.clusters.size()
          << " clusters, " << doc.frames.size() << " frames, "
          << doc.temporal.size() << " relations)\n";
    } catch (const Error &e) {
      ++failures;
      err << f.string() << ": " << e.what() << "\n";
    }
  }
  return failures ? kExitDataError : kExitOk;
}

int RunExtract(const ExtractOptions &opts, std::ostream &out, std::ostream &err) {
  if (!fs::is_directory(opts.input_dir)) {
    err << "nece extract: input directory not found: " << opts.input_dir.string()
        << "\n";
    return kExitUsage;
  }
  try {
    ValidateConfig(opts.cfg);
  } catch (const Error &e) {
    err << "nece extract: " << e.what() << "\n";
    return kExitUsage;
  }

  Resources res;
  std::vector<fs::path> files;
  try {
    res = Resources::Load(opts.data_dir);
    files = ListCorpusFiles(opts.input_dir);
  } catch (const Error &e) {
    err << "nece extract: " << e.what() << "\n";
    return kExitDataError;
  }

  std::vector<DocumentAnnotation> docs(files.size());
  std::vector<std::string> failures(files.size());
  ParallelFor(files.size(), opts.cfg.threads, [&](size_t i) {
    try {
      docs[i] = LoadDocument(files[i]);
    } catch (const Error &e) {
      failures[i] = e.what();
    }
  });
  bool failed = false;
  for (size_t i = 0; i < files.size(); ++i) {
    if (!failures[i].empty()) {
      err << files[i].string() << ": " << failures[i] << "\n";
      failed = true;
    }
  }
  if (failed) return kExitDataError;

  ExtractOutput extracted;
  try {
    extracted = ExtractChains(docs, res, opts.cfg);
  } catch (const Error &e) {
    err << "nece extract: " << e.what() << "\n";
    return kExitDataError;
  }

  RunManifest manifest;
  manifest.command = "extract";
  manifest.config_json = ConfigSnapshot(opts.cfg);
  manifest.input_digest = DigestFiles(files);
  manifest.outputs = {opts.output.string()};
  manifest.warnings = extracted.warnings;
  try {
    WriteFile(opts.output, SerializeChains(extracted.stories));
    WriteFile(ManifestPathFor(opts.output), manifest.ToJson());
  } catch (const Error &e) {
    err << "nece extract: " << e.what() << "\n";
    return kExitDataError;
  }
  for (const std::string &w : extracted.warnings) err << "warning: " << w << "\n";
  out << "extracted " << extracted.stories.size() << " stories -> "
      << opts.output.string() << "\n";
  return kExitOk;
}

int RunAnalyze(const AnalyzeOptions &opts, std::ostream &out, std::ostream &err) {
  if (!fs::is_regular_file(opts.chains)) {
    err << "nece analyze: chains file not found: " << opts.chains.string() << "\n";
    return kExitUsage;
  }
  try {
    ValidateConfig(opts.cfg);
  } catch (const Error &e) {
    err << "nece analyze: " << e.what() << "\n";
    return kExitUsage;
  }
  try {
    std::vector<StoryChains> stories = ParseChains(ReadFile(opts.chains));
    std::vector<OddsRatioResult> results = Analyze(stories, opts.unit, opts.cfg);

    RunManifest manifest;
    manifest.command = std::string("analyze --unit ") + AnalysisUnitName(opts.unit);
    manifest.config_json = ConfigSnapshot(opts.cfg);
    const fs::path inputs[1] = {opts.chains};
    manifest.input_digest = DigestFiles(inputs);
    manifest.outputs = {opts.output.string()};
    WriteFile(opts.output, ResultsToCsv(results));
    if (!opts.json_output.empty()) {
      WriteFile(opts.json_output, ResultsToJson(results));
      manifest.outputs.push_back(opts.json_output.string());
    }
    if (stories.empty()) manifest.warnings.push_back("chains file holds no stories");
    WriteFile(ManifestPathFor(opts.output), manifest.ToJson());
    out << results.size() << " " << AnalysisUnitName(opts.unit) << " rows -> "
        << opts.output.string() << "\n";
  } catch (const Error &e) {
    err << "nece analyze: " << e.what() << "\n";
    return kExitDataError;
  }
  return kExitOk;
}

int RunReport(const ReportOptions &opts, std::ostream &out, std::ostream &err) {
  if (!fs::is_regular_file(opts.results)) {
    err << "nece report: results file not found: " << opts.results.string() << "\n";
    return kExitUsage;
  }
  try {
    std::vector<OddsRatioResult> rows = ParseResultsCsv(ReadFile(opts.results));
    Lexicon lexicon = Lexicon::Load(opts.data_dir / "event_lexicon.tsv");

    RunManifest manifest;
    manifest.command = "report";
    manifest.config_json = "{}";
    const fs::path inputs[1] = {opts.results};
    manifest.input_digest = DigestFiles(inputs);
    for (AnalysisUnit unit : {AnalysisUnit::kUnigram, AnalysisUnit::kBigramBefore,
                              AnalysisUnit::kBigramAfter, AnalysisUnit::kSection}) {
      fs::path svg = opts.out_dir / (std::string(AnalysisUnitName(unit)) + ".svg");
      WriteFile(svg, RenderOddsRatioChart(rows, unit, lexicon));
      manifest.outputs.push_back(svg.string());
    }
    fs::path share = opts.out_dir / "significance_share.svg";
    WriteFile(share, RenderSignificanceShare(rows));
    manifest.outputs.push_back(share.string());
    WriteFile(opts.out_dir / "manifest.json", manifest.ToJson());
    out << "wrote " << manifest.outputs.size() << " charts for " << rows.size()
        << " rows -> " << opts.out_dir.string() << "\n";
  } catch (const Error &e) {
    err << "nece report: " << e.what() << "\n";
    return kExitDataError;
  }
  return kExitOk;
}

}  // namespace nece
