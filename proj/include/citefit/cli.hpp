#ifndef CITEFIT_CLI_HPP
#define CITEFIT_CLI_HPP

#include "citefit/metrics.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace citefit::cli {

// Knobs shared by every stage. Echoed verbatim into each artifact header
// (a `# config {...}` comment line in CSV, a "config" object in JSON) so
// any emitted number can be traced back to the settings that produced it.
// Precedence: command-line flags > config file > these defaults.
struct RunConfig {
    std::string tau_convention = "age_plus_one";
    double zero_shift = 1.0;
    bool strict_years = false;
    size_t top_n = 20;
    uint64_t seed = 1;
    std::string output_format = "csv"; // tabular artifacts: csv | json
    std::optional<int> collection_year;
    std::string name_overrides; // path to raw,canonical CSV; empty = none

    metrics::Conventions conventions() const; // validates tau_convention
    std::string to_json() const;              // single line, keys sorted
    static RunConfig from_json_file(const std::string& path);
};

// Entry point behind the citefit binary. Exit codes: 0 success, 2 usage
// error, 1 stage failure; failures print one JSON line on stderr naming
// the stage, error type and message.
int run(int argc, const char* const* argv);
int run(const std::vector<std::string>& args); // args after the program name

} // namespace citefit::cli

#endif
