#pragma once

#include <map>
#include <string>
#include <vector>

#include "afmcf/errors.hpp"

namespace afmcf {

/// Key=value option resolution for one subcommand: defaults, then config
/// file (`--config FILE`, one `key=value` per line, `#` comments), then
/// command line (`--key value` or `--key=value`). Unknown keys are rejected
/// with the offending key named. Every value that an invocation actually
/// resolves is recorded and echoed into output artifact headers.
class RunConfig {
public:
    struct Option {
        std::string key;
        bool takes_value = true;
        std::string help;
    };

    RunConfig(std::string subcommand, std::vector<Option> options);

    /// Parses the argument tokens that follow the subcommand name.
    void parse(const std::vector<std::string>& args);

    bool has(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback);
    std::string require_string(const std::string& key);
    double get_double(const std::string& key, double fallback);
    int get_int(const std::string& key, int fallback);
    bool get_flag(const std::string& key);

    const std::string& subcommand() const { return subcommand_; }

    /// "subcmd key=value key=value ..." with keys sorted; deterministic.
    std::string effective_line() const;

    std::string help_text() const;

private:
    const Option* find_option(const std::string& key) const;
    void load_config_file(const std::string& path);
    void record(const std::string& key, const std::string& value);

    std::string subcommand_;
    std::vector<Option> options_;
    std::map<std::string, std::string> values_;
    std::map<std::string, std::string> effective_;
};

/// Entry point behind the afmcf executable. Exit codes: 0 success, 1 usage,
/// 2 blowup, 3 admissibility, 4 I/O.
int run_main(int argc, const char* const* argv);

} // namespace afmcf
