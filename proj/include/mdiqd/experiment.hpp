#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mdiqd/bb84.hpp"
#include "mdiqd/cost.hpp"
#include "mdiqd/dialogue.hpp"
#include "mdiqd/finite_key.hpp"
#include "mdiqd/transcript_io.hpp"
#include "mdiqd/utp.hpp"

namespace mdiqd {

enum class ExperimentMode : std::uint8_t {
    Bb84,
    Dialogue,
    Attack,
    Leakage,
    KeyLen,
    Cost,
    Verify
};

const char* to_string(ExperimentMode m);
std::optional<ExperimentMode> mode_from_string(std::string_view s);

struct ExperimentConfig {
    ExperimentMode mode = ExperimentMode::Dialogue;
    std::vector<std::uint64_t> seeds = {1};
    std::filesystem::path out_dir = "out";
    unsigned threads = 0;  // 0 = hardware concurrency

    // dialogue / attack channel noise
    double p_flip = 0.0;

    SecurityParams dialogue{1000, 0.1, 0.11, 1e-10};
    UtpStrategy utp;

    Bb84Config bb84{10000};

    FiniteKeyParams finite_key{10000, 10000, 1.0, 0.01, 1e-10, 5e-11, 5e-11, 0.0};

    CostQuery cost;

    // verify mode
    std::filesystem::path verify_file;
    std::optional<bool> verify_restricted;

    void validate() const;
};

struct ExperimentResult {
    int exit_status = 0;
    std::vector<AggregateRow> rows;
    std::vector<std::filesystem::path> artifacts;
    std::vector<std::string> messages;  // warnings and verify findings
};

// Runs the selected mode over all seeds (fanned out to a worker pool, merged
// back in seed order), writes one transcript file per session plus one
// aggregate CSV, and records the fully resolved configuration alongside the
// outputs. Nonzero exit status signals an invariant violation or abort-only
// modes' failures (verify).
ExperimentResult run_experiment(const ExperimentConfig& cfg);

// The provenance header written next to every experiment's outputs.
std::string describe_config(const ExperimentConfig& cfg);

}  // namespace mdiqd
