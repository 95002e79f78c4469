#ifndef NECE_CLI_H_
#define NECE_CLI_H_

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace nece {

// Entry point of the `nece` command. `args` excludes the program name.
//
// Settings resolve as: command-line flag, then `--config` file (TOML-style
// `key = value`; keys are the long flag names, `_` and `-` interchangeable),
// then defaults. NECE_SEED replaces the default seed only.
int RunCli(const std::vector<std::string> &args, std::ostream &out,
           std::ostream &err, const std::filesystem::path &default_data_dir);

}  // namespace nece

#endif  // NECE_CLI_H_
