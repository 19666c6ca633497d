#include "mdiqd/experiment.hpp"

#include <atomic>
#include <charconv>
#include <cstdio>
#include <exception>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "mdiqd/leakage.hpp"

namespace mdiqd {

const char* to_string(ExperimentMode m) {
    switch (m) {
        case ExperimentMode::Bb84: return "bb84";
        case ExperimentMode::Dialogue: return "dialogue";
        case ExperimentMode::Attack: return "attack";
        case ExperimentMode::Leakage: return "leakage";
        case ExperimentMode::KeyLen: return "keylen";
        case ExperimentMode::Cost: return "cost";
        case ExperimentMode::Verify: return "verify";
    }
    return "?";
}

std::optional<ExperimentMode> mode_from_string(std::string_view s) {
    if (s == "bb84") return ExperimentMode::Bb84;
    if (s == "dialogue") return ExperimentMode::Dialogue;
    if (s == "attack") return ExperimentMode::Attack;
    if (s == "leakage") return ExperimentMode::Leakage;
    if (s == "keylen") return ExperimentMode::KeyLen;
    if (s == "cost") return ExperimentMode::Cost;
    if (s == "verify") return ExperimentMode::Verify;
    return std::nullopt;
}

void ExperimentConfig::validate() const {
    if (seeds.empty()) throw std::invalid_argument("ExperimentConfig: at least one seed required");
    switch (mode) {
        case ExperimentMode::Dialogue:
        case ExperimentMode::Attack:
            if (mode == ExperimentMode::Dialogue) {
                dialogue.validate();
                utp.validate();
                if (!(p_flip >= 0.0 && p_flip <= 0.5)) {
                    throw std::invalid_argument("ExperimentConfig: p_flip outside [0, 1/2]");
                }
            } else {
                bb84.validate();
            }
            break;
        case ExperimentMode::Bb84:
            bb84.validate();
            break;
        case ExperimentMode::KeyLen:
            finite_key.validate();
            break;
        case ExperimentMode::Cost:
            cost.validate();
            break;
        case ExperimentMode::Verify:
            if (verify_file.empty()) {
                throw std::invalid_argument("ExperimentConfig: verify mode needs a transcript file");
            }
            break;
        case ExperimentMode::Leakage:
            break;
    }
}

namespace {

// Shortest representation that parses back to the identical double, so a
// reloaded run_config.txt reproduces the run bit-for-bit.
std::string fmt(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

// Fans indices over a small pool; every worker owns its slot, so merge order
// is the seed order no matter how the scheduler interleaves.
template <typename Fn>
void parallel_over_seeds(std::size_t count, unsigned threads, Fn&& fn) {
    unsigned n_threads = threads != 0 ? threads : std::thread::hardware_concurrency();
    if (n_threads < 1) n_threads = 1;
    if (n_threads > count) n_threads = static_cast<unsigned>(count);

    if (n_threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (unsigned t = 0; t < n_threads; ++t) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count) return;
                fn(i);
            }
        });
    }
    for (std::thread& th : pool) th.join();
}

struct SessionSlot {
    AggregateRow row;
    bool has_row = false;
    std::filesystem::path artifact;
    std::string error;
    bool invariant_violation = false;
};

AggregateRow dialogue_row(const SessionTranscript& t, std::uint64_t seed,
                          double kept_leak_bits) {
    AggregateRow row;
    row.seed = seed;
    row.m = t.params.m;
    row.kept_count = t.kept_count;
    row.revealed_count = t.revealed_count;
    row.observed_qber = t.observed_qber;
    row.nu = t.nu;
    row.aborted = t.aborted;
    std::size_t comparisons = 0, errors = 0;
    for (const RoundRecord& r : t.rounds) {
        if (!r.kept || r.revealed) continue;
        comparisons += 2;
        errors += r.g_a != r.a_prime_bit;
        errors += r.g_b != r.a_bit;
    }
    row.guess_error_rate =
        comparisons == 0 ? 0.0
                         : static_cast<double>(errors) / static_cast<double>(comparisons);
    row.leak_bits_expected = kept_leak_bits;
    return row;
}

AggregateRow bb84_row(const Bb84Outcome& o, const Bb84Config& cfg,
                      std::uint64_t seed) {
    AggregateRow row;
    row.seed = seed;
    row.m = cfg.n_signals;
    row.kept_count = o.sifted_alice.size();
    row.revealed_count = o.sample_bits;
    row.observed_qber = o.observed_qber;
    row.nu = o.mu;
    row.aborted = o.aborted;
    std::size_t errors = 0;
    for (std::size_t i = 0; i < o.sifted_alice.size(); ++i) {
        errors += o.sifted_alice[i] != o.sifted_bob[i];
    }
    row.guess_error_rate =
        o.sifted_alice.empty()
            ? 0.0
            : static_cast<double>(errors) / static_cast<double>(o.sifted_alice.size());
    row.leak_bits_expected =
        o.eve_sifted_guesses.empty()
            ? 0.0
            : empirical_mutual_information(o.eve_sifted_guesses, o.sifted_alice);
    return row;
}

}  // namespace

std::string describe_config(const ExperimentConfig& cfg) {
    std::ostringstream s;
    s << "[run]\n";
    s << "mode = " << to_string(cfg.mode) << "\n";
    s << "seed = ";
    for (std::size_t i = 0; i < cfg.seeds.size(); ++i) {
        s << (i ? "," : "") << cfg.seeds[i];
    }
    s << "\n";
    s << "out = " << cfg.out_dir.string() << "\n";
    s << "threads = " << cfg.threads << "\n";
    s << "\n[dialogue]\n";
    s << "m = " << cfg.dialogue.m << "\n";
    s << "gamma = " << fmt(cfg.dialogue.gamma) << "\n";
    s << "q-threshold = " << fmt(cfg.dialogue.q_threshold) << "\n";
    s << "eps = " << fmt(cfg.dialogue.eps_qsdc) << "\n";
    s << "qber = " << fmt(cfg.p_flip) << "\n";
    s << "utp = " << to_string(cfg.utp.kind) << "\n";
    s << "lie-target = " << to_string(cfg.utp.lie_target) << "\n";
    s << "p-lie = " << fmt(cfg.utp.p_lie) << "\n";
    s << "\n[bb84]\n";
    s << "n-signals = " << cfg.bb84.n_signals << "\n";
    s << "eve = " << (cfg.bb84.eve == EveStrategy::InterceptResend ? "intercept-resend" : "none") << "\n";
    s << "qber = " << fmt(cfg.bb84.p_flip) << "\n";
    s << "sample-fraction = " << fmt(cfg.bb84.sample_fraction) << "\n";
    s << "q-threshold = " << fmt(cfg.bb84.tolerable_qber) << "\n";
    s << "source-quality = " << fmt(cfg.bb84.source_quality) << "\n";
    s << "eps = " << fmt(cfg.bb84.eps_qkd) << "\n";
    s << "eps-q = " << fmt(cfg.bb84.eps_q) << "\n";
    s << "f-ec = " << fmt(cfg.bb84.f_ec) << "\n";
    s << "\n[keylen]\n";
    s << "n = " << cfg.finite_key.n << "\n";
    s << "k = " << cfg.finite_key.k << "\n";
    s << "source-quality = " << fmt(cfg.finite_key.q) << "\n";
    s << "qber = " << fmt(cfg.finite_key.qber) << "\n";
    s << "eps-q = " << fmt(cfg.finite_key.eps_q) << "\n";
    s << "eps-cor = " << fmt(cfg.finite_key.eps_cor) << "\n";
    s << "eps-bar = " << fmt(cfg.finite_key.eps_bar) << "\n";
    s << "leak-ec = " << fmt(cfg.finite_key.leak_ec) << "\n";
    s << "\n[cost]\n";
    s << "security-bits = " << cfg.cost.security_bits << "\n";
    s << "dialogue-uses = " << cfg.cost.dialogue_uses << "\n";
    s << "rate = " << fmt(cfg.cost.rate) << "\n";
    s << "qber = " << fmt(cfg.cost.qber) << "\n";
    s << "\n[verify]\n";
    s << "file = " << cfg.verify_file.string() << "\n";
    s << "restricted = "
      << (cfg.verify_restricted ? (*cfg.verify_restricted ? "1" : "0") : "auto")
      << "\n";
    return s.str();
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    ExperimentResult result;

    if (cfg.mode == ExperimentMode::Verify) {
        const VerifyResult v =
            verify_transcript_file(cfg.verify_file, cfg.verify_restricted);
        result.exit_status = v.ok ? 0 : 1;
        result.messages = v.violations;
        std::ostringstream s;
        s << "rounds=" << v.rounds << " kept=" << v.kept_count
          << " revealed=" << v.revealed_count
          << " qber=" << fmt(v.recomputed_qber)
          << " restricted=" << (v.restricted ? 1 : 0)
          << " ok=" << (v.ok ? 1 : 0);
        result.messages.push_back(s.str());
        return result;
    }

    std::filesystem::create_directories(cfg.out_dir);
    {
        std::ofstream meta(cfg.out_dir / "run_config.txt", std::ios::binary);
        meta << describe_config(cfg);
        result.artifacts.push_back(cfg.out_dir / "run_config.txt");
    }

    switch (cfg.mode) {
        case ExperimentMode::Leakage: {
            const auto path = cfg.out_dir / "leakage.csv";
            write_leakage_csv(path);
            result.artifacts.push_back(path);
            write_leakage_jsonl(cfg.out_dir / "leakage.jsonl");
            result.artifacts.push_back(cfg.out_dir / "leakage.jsonl");

            Rng rng(cfg.seeds.front());
            const NguyenReport ng = nguyen_simulate_and_leak(100000, rng);
            std::ofstream out(cfg.out_dir / "nguyen.csv", std::ios::binary);
            out << "announcement,n_candidates,candidates,leak_bits,empirical_frequency\n";
            for (std::size_t o = 0; o < 4; ++o) {
                out << to_string(kConclusiveOutcomes[o]) << ','
                    << ng.candidates[o].size() << ',';
                for (std::size_t i = 0; i < ng.candidates[o].size(); ++i) {
                    const auto& [bob, alice] = ng.candidates[o][i];
                    out << (i ? ";" : "") << int(bob >> 1) << (bob & 1) << ':'
                        << int(alice >> 1) << (alice & 1);
                }
                out << ',' << fmt(ng.leak_bits) << ','
                    << fmt(ng.announcement_frequency[o]) << '\n';
            }
            result.artifacts.push_back(cfg.out_dir / "nguyen.csv");
            return result;
        }
        case ExperimentMode::KeyLen: {
            const KeyLengthResult kl = secure_key_length_detail(cfg.finite_key);
            std::ofstream out(cfg.out_dir / "keylen.csv", std::ios::binary);
            out << "n,k,source_quality,qber,eps_q,eps_cor,eps_bar,leak_ec,mu,l,"
                   "abort_recommended\n";
            out << cfg.finite_key.n << ',' << cfg.finite_key.k << ','
                << fmt(cfg.finite_key.q) << ',' << fmt(cfg.finite_key.qber) << ','
                << fmt(cfg.finite_key.eps_q) << ',' << fmt(cfg.finite_key.eps_cor)
                << ',' << fmt(cfg.finite_key.eps_bar) << ','
                << fmt(cfg.finite_key.leak_ec) << ',' << fmt(kl.mu) << ',' << kl.l
                << ',' << (kl.abort_recommended ? 1 : 0) << '\n';
            result.artifacts.push_back(cfg.out_dir / "keylen.csv");
            std::ostringstream s;
            s << "l = " << kl.l << " (mu = " << fmt(kl.mu)
              << (kl.abort_recommended ? ", abort recommended)" : ")");
            result.messages.push_back(s.str());
            return result;
        }
        case ExperimentMode::Cost: {
            const CostReport r = cost_compare(cfg.cost);
            std::ofstream out(cfg.out_dir / "cost.csv", std::ios::binary);
            out << "security_bits,dialogue_uses,rate,direct_key_bits,"
                   "direct_naive_qubits,direct_finite_raw_bits,direct_finite_qubits,"
                   "seed_bits,seed_naive_qubits,seed_finite_raw_bits,seed_finite_qubits\n";
            out << cfg.cost.security_bits << ',' << cfg.cost.dialogue_uses << ','
                << fmt(cfg.cost.rate) << ',' << r.direct_key_bits << ','
                << r.direct_naive_qubits << ',' << r.direct_finite_raw_bits << ','
                << r.direct_finite_qubits << ',' << r.seed_bits << ','
                << r.seed_naive_qubits << ',' << r.seed_finite_raw_bits << ','
                << r.seed_finite_qubits << '\n';
            result.artifacts.push_back(cfg.out_dir / "cost.csv");
            return result;
        }
        default:
            break;
    }

    // Session modes: one transcript per seed, aggregate merged in seed order.
    const std::size_t n_sessions = cfg.seeds.size();
    std::vector<SessionSlot> slots(n_sessions);

    const bool is_dialogue = cfg.mode == ExperimentMode::Dialogue;
    double kept_leak_bits = 0.0;
    if (is_dialogue) {
        const LeakageReport rep = mdiqd_announcement_entropy(true);
        kept_leak_bits = cfg.utp.restricted_analyzer()
                             ? rep.leak_bits[2]  // Psi+ only
                             : rep.expected_leak_bits;
    }

    Bb84Config bb84_cfg = cfg.bb84;
    if (cfg.mode == ExperimentMode::Attack) {
        bb84_cfg.eve = EveStrategy::InterceptResend;
    }

    parallel_over_seeds(n_sessions, cfg.threads, [&](std::size_t i) {
        SessionSlot& slot = slots[i];
        const std::uint64_t seed = cfg.seeds[i];
        try {
            Rng rng(seed);
            if (is_dialogue) {
                const std::size_t m = cfg.dialogue.m;
                Bits b(m), a(m), ap(m);
                for (std::size_t j = 0; j < m; ++j) b[j] = static_cast<std::uint8_t>(rng.bit());
                for (std::size_t j = 0; j < m; ++j) a[j] = static_cast<std::uint8_t>(rng.bit());
                for (std::size_t j = 0; j < m; ++j) ap[j] = static_cast<std::uint8_t>(rng.bit());
                const SessionTranscript t = run_dialogue(
                    b, a, ap, cfg.dialogue, cfg.utp, cfg.p_flip, rng);
                slot.artifact =
                    cfg.out_dir / ("dialogue_seed" + std::to_string(seed) + ".jsonl");
                write_transcript_jsonl(t, slot.artifact);
                const VerifyResult v = verify_transcript_file(
                    slot.artifact, t.restricted_analyzer);
                if (!v.ok || v.rounds != m) {
                    slot.invariant_violation = true;
                    slot.error = "transcript self-check failed for seed " +
                                 std::to_string(seed);
                }
                slot.row = dialogue_row(t, seed, kept_leak_bits);
                slot.has_row = true;
            } else {
                const Bb84Outcome o = run_bb84(bb84_cfg, rng);
                slot.artifact = cfg.out_dir / (std::string(to_string(cfg.mode)) +
                                               "_seed" + std::to_string(seed) +
                                               ".jsonl");
                write_bb84_jsonl(o, slot.artifact);
                if (o.sifted_alice.size() != o.sifted_bob.size() ||
                    (o.aborted && o.secure_length != 0)) {
                    slot.invariant_violation = true;
                    slot.error = "bb84 invariant violation for seed " +
                                 std::to_string(seed);
                }
                slot.row = bb84_row(o, bb84_cfg, seed);
                slot.has_row = true;
            }
        } catch (const std::exception& e) {
            slot.invariant_violation = true;
            slot.error = "seed " + std::to_string(seed) + ": " + e.what();
        }
    });

    for (SessionSlot& slot : slots) {
        if (slot.invariant_violation) {
            result.exit_status = 1;
            result.messages.push_back(slot.error);
        }
        if (slot.has_row) {
            result.rows.push_back(slot.row);
            result.artifacts.push_back(slot.artifact);
        }
    }
    const auto agg = cfg.out_dir / "aggregate.csv";
    write_aggregate_csv(result.rows, agg);
    result.artifacts.push_back(agg);
    return result;
}

}  // namespace mdiqd
