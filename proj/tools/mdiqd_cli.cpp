// Command-line front end: reproducible protocol experiments, leakage tables,
// finite-key lengths and cost comparisons, all driven by seeds and flags.
// --config loads the same INI text that every run writes next to its
// outputs; explicit flags override the file.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mdiqd/config_text.hpp"
#include "mdiqd/experiment.hpp"

namespace {

int run(const mdiqd::ExperimentConfig& cfg) {
    const mdiqd::ExperimentResult res = mdiqd::run_experiment(cfg);
    for (const std::string& msg : res.messages) {
        std::cout << msg << "\n";
    }
    if (cfg.mode != mdiqd::ExperimentMode::Verify) {
        for (const auto& row : res.rows) {
            std::printf(
                "seed %llu: m=%zu kept=%zu revealed=%zu qber=%.6g nu=%.6g "
                "aborted=%d guess_error=%.6g leak=%.6g\n",
                static_cast<unsigned long long>(row.seed), row.m, row.kept_count,
                row.revealed_count, row.observed_qber, row.nu,
                row.aborted ? 1 : 0, row.guess_error_rate,
                row.leak_bits_expected);
        }
        for (const auto& p : res.artifacts) {
            std::cout << "wrote " << p.string() << "\n";
        }
    }
    return res.exit_status;
}

std::string find_config_arg(int argc, char** argv) {
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--config" && i + 1 < argc) return argv[i + 1];
        if (arg.rfind("--config=", 0) == 0) return arg.substr(9);
    }
    return "";
}

}  // namespace

int main(int argc, char** argv) {
    mdiqd::ExperimentConfig cfg;

    // The config file provides the base values; flags parsed below override.
    const std::string config_path = find_config_arg(argc, argv);
    if (!config_path.empty()) {
        try {
            mdiqd::apply_config_entries(cfg, mdiqd::load_config_file(config_path),
                                        config_path);
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            return 2;
        }
    }

    CLI::App app{"Measurement-device-independent quantum dialogue simulator"};
    app.fallthrough();

    std::string ignored_config;
    std::string mode_name;
    std::string utp_name;
    std::string lie_target;
    std::string eve_name;
    std::string out_dir;
    std::string verify_file;
    bool restricted_analyzer = false;
    int verify_restricted = -2;  // -2 unset, -1 auto, 0/1 forced
    double keylen_f_ec = -1.0;   // >= 0: leak_ec = f_ec * n * h(qber)

    app.add_option("--config", ignored_config,
                   "INI config file (sections [run], [dialogue], [bb84], "
                   "[keylen], [cost], [verify])");
    app.add_option("--mode", mode_name,
                   "bb84|dialogue|attack|leakage|keylen|cost|verify (or use the verb subcommand)");
    app.add_option("--seed", cfg.seeds, "session seeds")->delimiter(',');
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--threads", cfg.threads, "worker threads (0 = auto)");

    // dialogue phase
    app.add_option("--m", cfg.dialogue.m, "dialogue rounds");
    app.add_option("--gamma", cfg.dialogue.gamma,
                   "fraction of kept rounds revealed for error estimation");
    app.add_option("--qber", cfg.p_flip, "channel flip probability per qubit");
    app.add_option("--q-threshold", cfg.dialogue.q_threshold,
                   "abort threshold on observed QBER");
    app.add_option("--eps", cfg.dialogue.eps_qsdc,
                   "total dialogue security parameter");
    app.add_option("--utp", utp_name,
                   "honest|honest-restricted|random|biased-lie|measure-record");
    app.add_flag("--restricted-analyzer", restricted_analyzer,
                 "linear-optics analyzer (only Psi+ kept); same as --utp honest-restricted");
    app.add_option("--lie-target", lie_target,
                   "biased-lie announcement: phi+|phi-|psi+|psi-");
    app.add_option("--p-lie", cfg.utp.p_lie, "biased-lie probability");

    // key establishment phase
    app.add_option("--n-signals", cfg.bb84.n_signals, "BB84 signals per session");
    app.add_option("--eve", eve_name, "none|intercept-resend");
    app.add_option("--bb84-qber", cfg.bb84.p_flip, "BB84 channel flip probability");
    app.add_option("--sample-fraction", cfg.bb84.sample_fraction,
                   "sifted share used for estimation");
    app.add_option("--bb84-q-threshold", cfg.bb84.tolerable_qber,
                   "BB84 abort threshold / tolerable Q");
    app.add_option("--bb84-eps", cfg.bb84.eps_qkd,
                   "total QKD security parameter (split between eps_cor and eps_bar)");
    app.add_option("--f-ec", cfg.bb84.f_ec,
                   "error-correction inefficiency in leak_ec = f_ec n h(Q)");

    // keylen mode
    app.add_option("--n", cfg.finite_key.n, "raw key bits");
    app.add_option("--k", cfg.finite_key.k, "estimation bits");
    app.add_option("--source-quality", cfg.finite_key.q, "source quality q");
    app.add_option("--keylen-qber", cfg.finite_key.qber,
                   "tolerable QBER Q for the bound");
    app.add_option("--eps-q", cfg.finite_key.eps_q,
                   "failure probability of the deviation bound");
    app.add_option("--eps-cor", cfg.finite_key.eps_cor, "correctness parameter");
    app.add_option("--eps-bar", cfg.finite_key.eps_bar, "smoothing parameter");
    app.add_option("--leak-ec", cfg.finite_key.leak_ec,
                   "bits disclosed by error correction");
    app.add_option("--keylen-f-ec", keylen_f_ec,
                   "derive leak_ec = f_ec * n * h(Q) instead of --leak-ec");

    // cost mode
    app.add_option("--security-bits,-M", cfg.cost.security_bits,
                   "required security bits M");
    app.add_option("--dialogue-uses,-T", cfg.cost.dialogue_uses,
                   "dialogue repetitions T");
    app.add_option("--rate", cfg.cost.rate, "finite-key generation rate r");

    // verify mode
    app.add_option("--file", verify_file, "transcript to verify");
    app.add_option("--restricted", verify_restricted,
                   "force analyzer mode: 0 standard, 1 restricted, -1 auto");

    for (const char* verb :
         {"bb84", "dialogue", "attack", "leakage", "keylen", "cost", "verify"}) {
        CLI::App* sub = app.add_subcommand(verb, "");
        sub->callback([&mode_name, verb] { mode_name = verb; });
    }
    app.require_subcommand(0, 1);

    CLI11_PARSE(app, argc, argv);

    if (!mode_name.empty()) {
        const auto mode = mdiqd::mode_from_string(mode_name);
        if (!mode) {
            std::cerr << "unknown mode: " << mode_name << "\n";
            return 2;
        }
        cfg.mode = *mode;
    } else if (config_path.empty()) {
        std::cerr << "no mode selected; use a verb (bb84, dialogue, attack, "
                     "leakage, keylen, cost, verify), --mode, or a config file\n";
        return 2;
    }
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (!verify_file.empty()) cfg.verify_file = verify_file;

    if (restricted_analyzer) utp_name = "honest-restricted";
    if (!utp_name.empty()) {
        const auto kind = mdiqd::utp_kind_from_string(utp_name);
        if (!kind) {
            std::cerr << "unknown UTP strategy: " << utp_name << "\n";
            return 2;
        }
        cfg.utp.kind = *kind;
    }
    if (!lie_target.empty()) {
        const auto target = mdiqd::bell_outcome_from_string(lie_target);
        if (!target || *target == mdiqd::BellOutcome::Inconclusive) {
            std::cerr << "lie target must be phi+, phi-, psi+ or psi-\n";
            return 2;
        }
        cfg.utp.lie_target = *target;
    }
    if (!eve_name.empty()) {
        if (eve_name == "none") {
            cfg.bb84.eve = mdiqd::EveStrategy::None;
        } else if (eve_name == "intercept-resend") {
            cfg.bb84.eve = mdiqd::EveStrategy::InterceptResend;
        } else {
            std::cerr << "unknown eve strategy: " << eve_name << "\n";
            return 2;
        }
    }
    if (keylen_f_ec >= 0.0) {
        cfg.finite_key.leak_ec = mdiqd::default_leak_ec(
            cfg.finite_key.n, cfg.finite_key.qber, keylen_f_ec);
    }
    if (verify_restricted == -1) cfg.verify_restricted.reset();
    if (verify_restricted == 0) cfg.verify_restricted = false;
    if (verify_restricted == 1) cfg.verify_restricted = true;

    try {
        return run(cfg);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
