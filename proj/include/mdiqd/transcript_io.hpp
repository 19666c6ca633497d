#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mdiqd/bb84.hpp"
#include "mdiqd/dialogue.hpp"
#include "mdiqd/leakage.hpp"

namespace mdiqd {

// One JSON object per round:
//   {"round":0,"a":1,"a_prime":0,"b":1,"announcement":"psi+","kept":true,
//    "g_a":0,"g_b":1,"revealed":false}
// g_a/g_b are present only on kept rounds.
void write_transcript_jsonl(const SessionTranscript& t,
                            const std::filesystem::path& file);

// Per-signal record of a key-establishment session (see README for fields).
void write_bb84_jsonl(const Bb84Outcome& o, const std::filesystem::path& file);

struct AggregateRow {
    std::uint64_t seed = 0;
    std::size_t m = 0;
    std::size_t kept_count = 0;
    std::size_t revealed_count = 0;
    double observed_qber = 0.0;
    double nu = 0.0;
    bool aborted = false;
    double guess_error_rate = 0.0;
    double leak_bits_expected = 0.0;
};

// Columns: seed,m,kept_count,revealed_count,observed_qber,nu,aborted,
//          guess_error_rate,leak_bits_expected
void write_aggregate_csv(const std::vector<AggregateRow>& rows,
                         const std::filesystem::path& file);

// Columns: announcement,posterior00,posterior01,posterior10,posterior11,
//          entropy_bits,leak_bits — one row per announcement including the
// restricted analyzer's inconclusive event.
void write_leakage_csv(const std::filesystem::path& file);

// Same rows as the CSV, one JSON object per line.
void write_leakage_jsonl(const std::filesystem::path& file);

struct VerifyResult {
    bool ok = true;
    std::size_t rounds = 0;
    std::size_t kept_count = 0;
    std::size_t revealed_count = 0;
    double recomputed_qber = 0.0;
    bool restricted = false;
    std::vector<std::string> violations;
};

// Re-checks a dialogue transcript file: schema, kept-set membership, guess
// presence, decode consistency, revealed-implies-kept. The analyzer mode is
// inferred from the announcements unless forced.
VerifyResult verify_transcript_file(const std::filesystem::path& file,
                                    std::optional<bool> restricted = std::nullopt);

}  // namespace mdiqd
