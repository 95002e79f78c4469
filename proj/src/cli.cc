#include "nece/cli.h"

#include <cstdlib>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "nece/errors.h"
#include "nece/pipeline.h"

namespace nece {

namespace fs = std::filesystem;

namespace {

using ConfigMap = std::map<std::string, std::string>;

const char *const kConfigKeys[] = {
    "seed",           "min-count",         "bootstrap",     "confidence",
    "main-ratio",     "salience-quantile", "conf-threshold", "exclude-classes",
    "haldane-always", "threads",
};

ConfigMap ReadConfigFile(const fs::path &path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open config " + path.string());
  std::vector<CLI::ConfigItem> items;
  try {
    items = CLI::ConfigTOML().from_config(in);
  } catch (const CLI::Error &e) {
    throw Error(ErrorCode::kBadConfig, path.string() + ": " + e.what());
  }
  ConfigMap map;
  for (const CLI::ConfigItem &item : items) {
    if (item.name == "++" || item.name == "--") continue;  // section markers
    std::string key = item.name;
    for (char &c : key) {
      if (c == '_') c = '-';
    }
    bool known = false;
    for (const char *k : kConfigKeys) known = known || key == k;
    if (!known) throw Error(ErrorCode::kBadConfig, path.string() + ": unknown key \"" + key + "\"");
    std::string value;
    for (size_t i = 0; i < item.inputs.size(); ++i) {
      if (i) value += ',';
      value += item.inputs[i];
    }
    map[key] = value;
  }
  return map;
}

std::set<std::string> SplitList(const std::string &s) {
  std::set<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    size_t b = item.find_first_not_of(" \t\"");
    size_t e = item.find_last_not_of(" \t\"");
    if (b != std::string::npos) out.insert(item.substr(b, e - b + 1));
  }
  return out;
}

template <typename T>
T ParseValue(const std::string &key, const std::string &text) {
  std::istringstream in(text);
  T v{};
  in >> v;
  if (in.fail() || !in.eof()) {
    throw Error(ErrorCode::kBadConfig, "bad value for " + key + ": \"" + text + "\"");
  }
  return v;
}

template <>
bool ParseValue<bool>(const std::string &key, const std::string &text) {
  if (text == "true" || text == "1") return true;
  if (text == "false" || text == "0") return false;
  throw Error(ErrorCode::kBadConfig, "bad value for " + key + ": \"" + text + "\"");
}

// Flags holding raw strings so that "was it given" stays observable.
struct ConfigFlags {
  std::string config_path;
  std::map<std::string, CLI::Option *> options;
  std::map<std::string, std::string> values;

  void Add(CLI::App *app, const std::string &key, const std::string &help) {
    options[key] = app->add_option("--" + key, values[key], help);
  }
  void AddFlag(CLI::App *app, const std::string &key, const std::string &help) {
    options[key] = app->add_flag("--" + key, help);
  }

  // Resolves flag > config file > defaults (NECE_SEED for the default
  // seed) into `cfg`.
  void Resolve(AnalysisConfig *cfg) const {
    ConfigMap file;
    if (!config_path.empty()) file = ReadConfigFile(config_path);
    auto lookup = [&](const std::string &key) -> std::optional<std::string> {
      auto opt = options.find(key);
      if (opt != options.end() && opt->second->count() > 0) {
        auto v = values.find(key);
        return v == values.end() ? std::string("true") : v->second;
      }
      auto f = file.find(key);
      if (f != file.end()) return f->second;
      return std::nullopt;
    };
    if (auto v = lookup("seed")) {
      cfg->rng_seed = ParseValue<uint64_t>("seed", *v);
    } else if (const char *env = std::getenv("NECE_SEED"); env && *env) {
      cfg->rng_seed = ParseValue<uint64_t>("NECE_SEED", env);
    }
    if (auto v = lookup("min-count")) cfg->min_count = ParseValue<int>("min-count", *v);
    if (auto v = lookup("bootstrap")) cfg->bootstrap_reps = ParseValue<int>("bootstrap", *v);
    if (auto v = lookup("confidence")) cfg->confidence = ParseValue<double>("confidence", *v);
    if (auto v = lookup("main-ratio")) cfg->main_ratio = ParseValue<double>("main-ratio", *v);
    if (auto v = lookup("salience-quantile")) {
      cfg->salience_quantile = ParseValue<double>("salience-quantile", *v);
    }
    if (auto v = lookup("conf-threshold")) {
      cfg->conf_threshold = ParseValue<double>("conf-threshold", *v);
    }
    if (auto v = lookup("exclude-classes")) cfg->excluded_classes = SplitList(*v);
    if (auto v = lookup("haldane-always")) {
      cfg->haldane_always = ParseValue<bool>("haldane-always", *v);
    }
    if (auto v = lookup("threads")) cfg->threads = ParseValue<int>("threads", *v);
  }
};

}  // namespace

int RunCli(const std::vector<std::string> &args, std::ostream &out,
           std::ostream &err, const fs::path &default_data_dir) {
  CLI::App app{"Narrative event chain extraction and gender bias statistics", "nece"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));

  // validate
  std::vector<std::string> validate_paths;
  CLI::App *validate = app.add_subcommand("validate", "Check interchange documents");
  validate->add_option("paths", validate_paths, "Files or corpus directories")->required();

  // extract
  ExtractOptions extract_opts;
  std::string data_dir = default_data_dir.string();
  std::string input_dir, output_path;
  ConfigFlags extract_flags;
  CLI::App *extract = app.add_subcommand("extract", "Build character event chains");
  extract->add_option("--input", input_dir, "Directory of interchange documents")->required();
  extract->add_option("--output", output_path, "Chains file to write")->required();
  extract->add_option("--data-dir", data_dir, "Directory holding the data tables");
  extract->add_option("--config", extract_flags.config_path, "Config file (key = value)");
  extract_flags.Add(extract, "seed", "Random seed (recorded in the manifest)");
  extract_flags.Add(extract, "main-ratio", "Main-character mention ratio (default 0.67)");
  extract_flags.Add(extract, "salience-quantile", "Per-story salience quantile (default 0.3)");
  extract_flags.Add(extract, "conf-threshold", "Temporal relation confidence cut (default 0.5)");
  extract_flags.Add(extract, "threads", "Worker threads");

  // analyze
  AnalyzeOptions analyze_opts;
  std::string chains_path, unit_name, results_path, json_path;
  ConfigFlags analyze_flags;
  CLI::App *analyze = app.add_subcommand("analyze", "Odds ratios with bootstrap intervals");
  analyze->add_option("--chains", chains_path, "Chains file from `extract`")->required();
  analyze->add_option("--unit", unit_name, "unigram | bigram_before | bigram_after | section")
      ->required()
      ->check(CLI::IsMember({"unigram", "bigram_before", "bigram_after", "section"}));
  analyze->add_option("--output", results_path,
                      "Results CSV (default: results_<unit>.csv beside the chains file)");
  analyze->add_option("--json", json_path, "Also write results as JSON");
  analyze->add_option("--config", analyze_flags.config_path, "Config file (key = value)");
  analyze_flags.Add(analyze, "seed", "Bootstrap seed (default 42, or NECE_SEED)");
  analyze_flags.Add(analyze, "min-count", "Minimum occurrences per key (default 5)");
  analyze_flags.Add(analyze, "bootstrap", "Bootstrap replicates (default 1000)");
  analyze_flags.Add(analyze, "confidence", "Interval confidence (default 0.95)");
  analyze_flags.Add(analyze, "exclude-classes",
                    "Classes dropped before bigrams (default communication,travel,motion,other)");
  analyze_flags.AddFlag(analyze, "haldane-always", "Add 0.5 to every table, not only zero ones");
  analyze_flags.Add(analyze, "threads", "Worker threads");

  // report
  ReportOptions report_opts;
  std::string report_results, report_dir;
  std::string report_data_dir = default_data_dir.string();
  CLI::App *report = app.add_subcommand("report", "Render SVG charts from a results CSV");
  report->add_option("--results", report_results, "Results CSV")->required();
  report->add_option("--out-dir", report_dir, "Output directory")->required();
  report->add_option("--data-dir", report_data_dir, "Directory holding the data tables");

  // lexicon
  CLI::App *lexicon = app.add_subcommand("lexicon", "Query the event lexicon");
  lexicon->require_subcommand(1);
  std::string lemma;
  std::string lexicon_data_dir = default_data_dir.string();
  lexicon->add_option("--data-dir", lexicon_data_dir, "Directory holding the data tables");
  CLI::App *lookup = lexicon->add_subcommand("lookup", "Print the entry for a lemma");
  lookup->add_option("lemma", lemma, "Verb lemma")->required();
  CLI::App *lexstats = lexicon->add_subcommand("stats", "Print class and sub-class counts");

  std::vector<const char *> argv = {"nece"};
  for (const std::string &a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (validate->parsed()) {
      std::vector<fs::path> paths(validate_paths.begin(), validate_paths.end());
      return RunValidate(paths, out, err);
    }
    if (extract->parsed()) {
      extract_flags.Resolve(&extract_opts.cfg);
      extract_opts.input_dir = input_dir;
      extract_opts.output = output_path;
      extract_opts.data_dir = data_dir;
      return RunExtract(extract_opts, out, err);
    }
    if (analyze->parsed()) {
      analyze_flags.Resolve(&analyze_opts.cfg);
      analyze_opts.chains = chains_path;
      analyze_opts.unit = *ParseAnalysisUnit(unit_name);
      analyze_opts.output = results_path.empty()
                                ? fs::path(chains_path).parent_path() /
                                      ("results_" + unit_name + ".csv")
                                : fs::path(results_path);
      analyze_opts.json_output = json_path;
      return RunAnalyze(analyze_opts, out, err);
    }
    if (report->parsed()) {
      report_opts.results = report_results;
      report_opts.out_dir = report_dir;
      report_opts.data_dir = report_data_dir;
      return RunReport(report_opts, out, err);
    }
    if (lexicon->parsed()) {
      Lexicon lex = Lexicon::Load(fs::path(lexicon_data_dir) / "event_lexicon.tsv");
      if (lookup->parsed()) {
        if (const LexiconEntry *e = lex.Lookup(ToLower(lemma))) {
          out << e->lemma << "\t" << e->type.event_class << "\t" << e->type.sub_class
              << "\t" << (e->stereotype ? StereotypeName(*e->stereotype) : "") << "\n";
        } else {
          out << "UNMAPPED\n";
        }
        return kExitOk;
      }
      if (lexstats->parsed()) {
        out << "lemmas\t" << lex.size() << "\n"
            << "classes\t" << lex.ClassCount() << "\n"
            << "event_types\t" << lex.EventTypeCount() << "\n"
            << "named_sub_classes\t" << lex.SubClassCount() << "\n";
        return kExitOk;
      }
    }
  } catch (const Error &e) {
    err << "nece: " << e.what() << "\n";
    return e.code() == ErrorCode::kBadConfig ? kExitUsage : kExitDataError;
  }
  return kExitUsage;
}

}  // namespace nece
