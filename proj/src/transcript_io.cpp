#include "mdiqd/transcript_io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace mdiqd {

namespace {

using ordered_json = nlohmann::ordered_json;

std::ofstream open_out(const std::filesystem::path& file) {
    if (file.has_parent_path()) {
        std::filesystem::create_directories(file.parent_path());
    }
    std::ofstream out(file, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open for writing: " + file.string());
    }
    return out;
}

// Fixed-format double so CSV bytes do not depend on stream state.
std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

}  // namespace

void write_transcript_jsonl(const SessionTranscript& t,
                            const std::filesystem::path& file) {
    std::ofstream out = open_out(file);
    for (const RoundRecord& r : t.rounds) {
        ordered_json line;
        line["round"] = r.index;
        line["a"] = static_cast<int>(r.a_bit);
        line["a_prime"] = static_cast<int>(r.a_prime_bit);
        line["b"] = static_cast<int>(r.b_bit);
        line["announcement"] = to_string(r.announcement);
        line["kept"] = r.kept;
        if (r.kept) {
            line["g_a"] = static_cast<int>(r.g_a);
            line["g_b"] = static_cast<int>(r.g_b);
        }
        line["revealed"] = r.revealed;
        out << line.dump() << '\n';
    }
}

void write_bb84_jsonl(const Bb84Outcome& o, const std::filesystem::path& file) {
    std::ofstream out = open_out(file);
    for (std::size_t i = 0; i < o.sifted_alice.size(); ++i) {
        ordered_json line;
        line["sifted_index"] = i;
        line["alice"] = static_cast<int>(o.sifted_alice[i]);
        line["bob"] = static_cast<int>(o.sifted_bob[i]);
        if (!o.eve_sifted_guesses.empty()) {
            line["eve"] = static_cast<int>(o.eve_sifted_guesses[i]);
        }
        line["sampled"] = o.sampled[i] != 0;
        out << line.dump() << '\n';
    }
}

void write_aggregate_csv(const std::vector<AggregateRow>& rows,
                         const std::filesystem::path& file) {
    std::ofstream out = open_out(file);
    out << "seed,m,kept_count,revealed_count,observed_qber,nu,aborted,"
           "guess_error_rate,leak_bits_expected\n";
    for (const AggregateRow& r : rows) {
        out << r.seed << ',' << r.m << ',' << r.kept_count << ','
            << r.revealed_count << ',' << fmt(r.observed_qber) << ','
            << fmt(r.nu) << ',' << (r.aborted ? 1 : 0) << ','
            << fmt(r.guess_error_rate) << ',' << fmt(r.leak_bits_expected)
            << '\n';
    }
}

void write_leakage_csv(const std::filesystem::path& file) {
    const LeakageReport rep = mdiqd_announcement_entropy(false);
    std::ofstream out = open_out(file);
    out << "announcement,posterior00,posterior01,posterior10,posterior11,"
           "entropy_bits,leak_bits\n";
    for (std::size_t o = 0; o < 4; ++o) {
        const BitPairPosterior& p = rep.posterior[o];
        out << to_string(kConclusiveOutcomes[o]);
        for (std::size_t pair = 0; pair < 4; ++pair) {
            out << ',' << fmt(p.probability(pair));
        }
        out << ',' << fmt(rep.entropy_bits[o]) << ',' << fmt(rep.leak_bits[o])
            << '\n';
    }
    const BitPairPosterior inc = restricted_inconclusive_posterior();
    out << to_string(BellOutcome::Inconclusive);
    for (std::size_t pair = 0; pair < 4; ++pair) {
        out << ',' << fmt(inc.probability(pair));
    }
    const double h = inc.entropy_bits();
    out << ',' << fmt(h) << ',' << fmt(2.0 - h) << '\n';
}

void write_leakage_jsonl(const std::filesystem::path& file) {
    const LeakageReport rep = mdiqd_announcement_entropy(false);
    std::ofstream out = open_out(file);
    const char* pair_names[4] = {"00", "01", "10", "11"};
    auto emit = [&](BellOutcome o, const BitPairPosterior& p, double entropy) {
        ordered_json line;
        line["announcement"] = to_string(o);
        ordered_json posterior;
        for (std::size_t pair = 0; pair < 4; ++pair) {
            posterior[pair_names[pair]] = p.probability(pair);
        }
        line["posterior"] = posterior;
        line["entropy_bits"] = entropy;
        line["leak_bits"] = 2.0 - entropy;
        out << line.dump() << '\n';
    };
    for (std::size_t o = 0; o < 4; ++o) {
        emit(kConclusiveOutcomes[o], rep.posterior[o], rep.entropy_bits[o]);
    }
    const BitPairPosterior inc = restricted_inconclusive_posterior();
    emit(BellOutcome::Inconclusive, inc, inc.entropy_bits());
}

namespace {

void violation(VerifyResult& res, std::size_t line_no, const std::string& msg) {
    res.ok = false;
    if (res.violations.size() < 50) {
        res.violations.push_back("line " + std::to_string(line_no) + ": " + msg);
    }
}

}  // namespace

VerifyResult verify_transcript_file(const std::filesystem::path& file,
                                    std::optional<bool> restricted) {
    std::ifstream in(file, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open transcript: " + file.string());
    }

    struct Row {
        std::size_t line_no;
        int a, a_prime, b;
        BellOutcome announcement;
        bool kept, revealed;
        std::optional<int> g_a, g_b;
    };
    std::vector<Row> rows;
    VerifyResult res;

    std::string line;
    std::size_t line_no = 0;
    bool saw_inconclusive = false;
    bool saw_kept_phi_minus = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        ordered_json j;
        try {
            j = ordered_json::parse(line);
        } catch (const std::exception& e) {
            violation(res, line_no, std::string("not valid JSON: ") + e.what());
            continue;
        }
        Row row{};
        row.line_no = line_no;
        try {
            row.a = j.at("a").get<int>();
            row.a_prime = j.at("a_prime").get<int>();
            row.b = j.at("b").get<int>();
            row.kept = j.at("kept").get<bool>();
            row.revealed = j.at("revealed").get<bool>();
            if (j.at("round").get<std::uint64_t>() != rows.size()) {
                violation(res, line_no, "round indices must be 0,1,2,... in order");
            }
            const auto ann = bell_outcome_from_string(
                j.at("announcement").get<std::string>());
            if (!ann) {
                violation(res, line_no, "unknown announcement string");
                continue;
            }
            row.announcement = *ann;
            if (j.contains("g_a")) row.g_a = j.at("g_a").get<int>();
            if (j.contains("g_b")) row.g_b = j.at("g_b").get<int>();
        } catch (const std::exception& e) {
            violation(res, line_no, std::string("schema: ") + e.what());
            continue;
        }
        for (int v : {row.a, row.a_prime, row.b}) {
            if (v != 0 && v != 1) violation(res, line_no, "bit field outside {0,1}");
        }
        if (row.announcement == BellOutcome::Inconclusive) saw_inconclusive = true;
        if (row.kept && row.announcement == BellOutcome::PhiMinus) {
            saw_kept_phi_minus = true;
        }
        rows.push_back(row);
    }

    res.rounds = rows.size();
    res.restricted = restricted.value_or(saw_inconclusive && !saw_kept_phi_minus);

    std::size_t errors = 0;
    for (const Row& row : rows) {
        const bool should_keep =
            res.restricted ? row.announcement == BellOutcome::PsiPlus
                           : (row.announcement == BellOutcome::PhiMinus ||
                              row.announcement == BellOutcome::PsiPlus);
        if (row.kept != should_keep) {
            violation(res, row.line_no, "kept flag inconsistent with announcement");
        }
        if (!res.restricted && row.announcement == BellOutcome::Inconclusive) {
            violation(res, row.line_no,
                      "inconclusive announcement is impossible with a full analyzer");
        }
        if (row.kept != (row.g_a.has_value() && row.g_b.has_value())) {
            violation(res, row.line_no, "g_a/g_b must be present iff kept");
        }
        if (row.revealed && !row.kept) {
            violation(res, row.line_no, "revealed round is not kept");
        }
        if (row.kept && row.g_a && row.g_b) {
            const PrepBasis basis = basis_from_key_bit(row.b);
            if (*row.g_a != decode(row.a, basis, row.announcement) ||
                *row.g_b != decode(row.a_prime, basis, row.announcement)) {
                violation(res, row.line_no, "guess does not match decode rule");
            }
        }
        if (row.kept) ++res.kept_count;
        if (row.revealed) {
            ++res.revealed_count;
            if (row.g_a && row.g_b) {
                errors += *row.g_a != row.a_prime;
                errors += *row.g_b != row.a;
            }
        }
    }
    res.recomputed_qber =
        res.revealed_count == 0
            ? 0.0
            : static_cast<double>(errors) / static_cast<double>(2 * res.revealed_count);
    if (rows.empty()) {
        res.ok = false;
        res.violations.push_back("transcript is empty");
    }
    return res;
}

}  // namespace mdiqd
