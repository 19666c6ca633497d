#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "mdiqd/experiment.hpp"

namespace mdiqd {

struct ConfigEntry {
    std::string section;
    std::string key;
    std::string value;
    std::size_t line = 0;
};

// INI-style text: [section] headers, key = value lines, '#' comments. The
// sections and keys are exactly the ones describe_config() emits, so a
// run_config.txt written next to any experiment reloads as-is. Malformed
// lines throw with the offending line number.
std::vector<ConfigEntry> parse_config_text(const std::string& text,
                                           const std::string& origin);

std::vector<ConfigEntry> load_config_file(const std::filesystem::path& file);

// Applies entries onto a config. Unknown sections or keys, and values that
// do not parse, throw std::runtime_error with "<origin>:<line>" context.
void apply_config_entries(ExperimentConfig& cfg,
                          const std::vector<ConfigEntry>& entries,
                          const std::string& origin);

}  // namespace mdiqd
