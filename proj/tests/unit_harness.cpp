#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mdiqd/config_text.hpp"
#include "mdiqd/experiment.hpp"

using namespace mdiqd;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::path("harness_test_out") / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string read_bytes(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::vector<std::string> read_lines(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE(in.good());
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty()) lines.push_back(line);
    }
    return lines;
}

}  // namespace

TEST_CASE("dialogue experiment writes schema-stable transcripts") {
    ExperimentConfig cfg;
    cfg.mode = ExperimentMode::Dialogue;
    cfg.seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    cfg.dialogue.m = 200;
    cfg.out_dir = fresh_dir("dialogue");
    const ExperimentResult res = run_experiment(cfg);
    CHECK(res.exit_status == 0);
    REQUIRE(res.rows.size() == 10);
    for (const AggregateRow& row : res.rows) {
        CHECK(row.observed_qber == 0.0);
        CHECK(!row.aborted);
        CHECK(row.guess_error_rate == 0.0);
        CHECK(row.leak_bits_expected == 0.0);
    }

    for (std::uint64_t seed : cfg.seeds) {
        const fs::path file =
            cfg.out_dir / ("dialogue_seed" + std::to_string(seed) + ".jsonl");
        const std::vector<std::string> lines = read_lines(file);
        REQUIRE(lines.size() == cfg.dialogue.m);
        for (const std::string& line : lines) {
            const auto j = nlohmann::json::parse(line);
            for (const char* field : {"round", "a", "a_prime", "b", "announcement",
                                      "kept", "revealed"}) {
                CHECK(j.contains(field));
            }
            const std::string ann = j.at("announcement").get<std::string>();
            CHECK(bell_outcome_from_string(ann).has_value());
            CHECK(j.at("kept").is_boolean());
            CHECK((j.contains("g_a") == j.at("kept").get<bool>()));
            CHECK((j.contains("g_b") == j.at("kept").get<bool>()));
        }
    }

    CHECK(fs::exists(cfg.out_dir / "aggregate.csv"));
    CHECK(fs::exists(cfg.out_dir / "run_config.txt"));
    const std::vector<std::string> agg = read_lines(cfg.out_dir / "aggregate.csv");
    REQUIRE(agg.size() == 11);  // header + one row per seed
    CHECK(agg[0] ==
          "seed,m,kept_count,revealed_count,observed_qber,nu,aborted,"
          "guess_error_rate,leak_bits_expected");
}

TEST_CASE("identical configs give byte-identical outputs") {
    ExperimentConfig cfg;
    cfg.mode = ExperimentMode::Dialogue;
    cfg.seeds = {11, 12, 13};
    cfg.dialogue.m = 300;
    cfg.p_flip = 0.02;
    cfg.out_dir = fresh_dir("det_a");

    run_experiment(cfg);
    std::map<std::string, std::string> first;
    for (const auto& entry : fs::directory_iterator(cfg.out_dir)) {
        first[entry.path().filename().string()] = read_bytes(entry.path());
    }

    // Same config, same directory, overwritten in place.
    run_experiment(cfg);
    for (const auto& [name, bytes] : first) {
        CHECK(read_bytes(cfg.out_dir / name) == bytes);
    }

    // Thread count is scheduling, not configuration: transcripts and
    // aggregates must not depend on it.
    ExperimentConfig threaded = cfg;
    threaded.threads = 2;
    threaded.out_dir = fresh_dir("det_b");
    run_experiment(threaded);
    for (const auto& [name, bytes] : first) {
        if (name == "run_config.txt") continue;  // records the thread count
        CHECK(read_bytes(threaded.out_dir / name) == bytes);
    }
}

TEST_CASE("attack mode aborts and reports eavesdropper information") {
    ExperimentConfig cfg;
    cfg.mode = ExperimentMode::Attack;
    cfg.seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16, 17, 18, 19, 20};
    cfg.bb84.n_signals = 10000;
    cfg.bb84.tolerable_qber = 0.11;
    cfg.out_dir = fresh_dir("attack");
    const ExperimentResult res = run_experiment(cfg);
    CHECK(res.exit_status == 0);
    REQUIRE(res.rows.size() == 20);
    for (const AggregateRow& row : res.rows) {
        CHECK(row.aborted);
        CHECK(row.observed_qber > 0.2);
        CHECK(row.leak_bits_expected > 0.1);
    }
}

TEST_CASE("leakage mode emits all five announcement rows") {
    ExperimentConfig cfg;
    cfg.mode = ExperimentMode::Leakage;
    cfg.out_dir = fresh_dir("leakage");
    const ExperimentResult res = run_experiment(cfg);
    CHECK(res.exit_status == 0);

    const std::vector<std::string> lines = read_lines(cfg.out_dir / "leakage.csv");
    REQUIRE(lines.size() == 6);
    CHECK(lines[0] ==
          "announcement,posterior00,posterior01,posterior10,posterior11,"
          "entropy_bits,leak_bits");
    std::map<std::string, std::string> by_announcement;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto comma = lines[i].find(',');
        by_announcement[lines[i].substr(0, comma)] = lines[i];
    }
    REQUIRE(by_announcement.size() == 5);
    // Kept announcements leak nothing.
    CHECK(by_announcement["phi-"].substr(by_announcement["phi-"].rfind(',') + 1) == "0");
    CHECK(by_announcement["psi+"].substr(by_announcement["psi+"].rfind(',') + 1) == "0");
    CHECK(by_announcement["phi+"].substr(by_announcement["phi+"].rfind(',') + 1) == "1");
    CHECK(by_announcement["psi-"].substr(by_announcement["psi-"].rfind(',') + 1) == "1");
    CHECK(by_announcement.count("inconclusive") == 1);

    CHECK(fs::exists(cfg.out_dir / "nguyen.csv"));

    // The JSONL stream mirrors the CSV rows.
    const std::vector<std::string> jsonl = read_lines(cfg.out_dir / "leakage.jsonl");
    REQUIRE(jsonl.size() == 5);
    for (const std::string& line : jsonl) {
        const auto j = nlohmann::json::parse(line);
        CHECK(j.contains("announcement"));
        CHECK(j.at("posterior").size() == 4);
        CHECK(j.at("leak_bits").is_number());
    }
    CHECK(nlohmann::json::parse(jsonl[1]).at("leak_bits").get<double>() == 0.0);
}

TEST_CASE("verify accepts genuine transcripts and rejects tampering") {
    ExperimentConfig cfg;
    cfg.mode = ExperimentMode::Dialogue;
    cfg.seeds = {21};
    cfg.dialogue.m = 150;
    cfg.out_dir = fresh_dir("verify");
    run_experiment(cfg);
    const fs::path file = cfg.out_dir / "dialogue_seed21.jsonl";

    const VerifyResult good = verify_transcript_file(file);
    CHECK(good.ok);
    CHECK(good.rounds == 150);
    CHECK(!good.restricted);

    // Flip one kept flag.
    std::vector<std::string> lines = read_lines(file);
    bool tampered = false;
    for (std::string& line : lines) {
        auto j = nlohmann::ordered_json::parse(line);
        if (!j.at("kept").get<bool>()) {
            j["kept"] = true;
            j["g_a"] = 0;
            j["g_b"] = 0;
            line = j.dump();
            tampered = true;
            break;
        }
    }
    REQUIRE(tampered);
    const fs::path bad = cfg.out_dir / "tampered.jsonl";
    {
        std::ofstream out(bad, std::ios::binary);
        for (const std::string& line : lines) out << line << '\n';
    }
    const VerifyResult broken = verify_transcript_file(bad);
    CHECK(!broken.ok);
    CHECK(!broken.violations.empty());

    // Verify mode surfaces the failure through the exit status.
    ExperimentConfig vcfg;
    vcfg.mode = ExperimentMode::Verify;
    vcfg.verify_file = bad;
    CHECK(run_experiment(vcfg).exit_status == 1);
    vcfg.verify_file = file;
    CHECK(run_experiment(vcfg).exit_status == 0);
}

TEST_CASE("restricted transcripts verify under mode inference") {
    ExperimentConfig cfg;
    cfg.mode = ExperimentMode::Dialogue;
    cfg.seeds = {31};
    cfg.dialogue.m = 400;
    cfg.utp = UtpStrategy::honest_restricted();
    cfg.out_dir = fresh_dir("restricted");
    const ExperimentResult res = run_experiment(cfg);
    CHECK(res.exit_status == 0);
    const VerifyResult v =
        verify_transcript_file(cfg.out_dir / "dialogue_seed31.jsonl");
    CHECK(v.ok);
    CHECK(v.restricted);
}

TEST_CASE("keylen and cost modes write their reports") {
    ExperimentConfig cfg;
    cfg.mode = ExperimentMode::KeyLen;
    cfg.finite_key.n = 7500;
    cfg.finite_key.k = 7500;
    cfg.finite_key.qber = 0.01;
    cfg.finite_key.leak_ec = default_leak_ec(7500, 0.01, 1.1);
    cfg.out_dir = fresh_dir("keylen");
    CHECK(run_experiment(cfg).exit_status == 0);
    CHECK(fs::exists(cfg.out_dir / "keylen.csv"));

    ExperimentConfig ccfg;
    ccfg.mode = ExperimentMode::Cost;
    ccfg.out_dir = fresh_dir("cost");
    CHECK(run_experiment(ccfg).exit_status == 0);
    const std::vector<std::string> lines = read_lines(ccfg.out_dir / "cost.csv");
    REQUIRE(lines.size() == 2);
    CHECK(lines[1] == "128,512,0.117,2048,8192,17504,70016,256,1024,2188,8752");
}

TEST_CASE("config validation messages") {
    ExperimentConfig cfg;
    cfg.seeds.clear();
    CHECK_THROWS_AS(run_experiment(cfg), std::invalid_argument);
    cfg.seeds = {1};
    cfg.mode = ExperimentMode::Verify;
    CHECK_THROWS_AS(run_experiment(cfg), std::invalid_argument);
}

TEST_CASE("run_config text reloads into the identical configuration") {
    ExperimentConfig cfg;
    cfg.mode = ExperimentMode::Attack;
    cfg.seeds = {3, 9, 27};
    cfg.threads = 2;
    cfg.p_flip = 1.0 / 3.0;  // must survive the text round trip exactly
    cfg.dialogue.m = 4321;
    cfg.dialogue.gamma = 0.25;
    cfg.utp = UtpStrategy::biased_lie(BellOutcome::PsiMinus, 0.125);
    cfg.bb84.n_signals = 12345;
    cfg.bb84.eve = EveStrategy::InterceptResend;
    cfg.bb84.tolerable_qber = 0.07;
    cfg.cost.security_bits = 96;
    cfg.out_dir = "some/dir";

    ExperimentConfig reloaded;
    apply_config_entries(
        reloaded, parse_config_text(describe_config(cfg), "mem"), "mem");

    CHECK(reloaded.mode == cfg.mode);
    CHECK(reloaded.seeds == cfg.seeds);
    CHECK(reloaded.threads == cfg.threads);
    CHECK(reloaded.p_flip == cfg.p_flip);
    CHECK(reloaded.dialogue.m == cfg.dialogue.m);
    CHECK(reloaded.dialogue.gamma == cfg.dialogue.gamma);
    CHECK(reloaded.utp.kind == cfg.utp.kind);
    CHECK(reloaded.utp.lie_target == cfg.utp.lie_target);
    CHECK(reloaded.utp.p_lie == cfg.utp.p_lie);
    CHECK(reloaded.bb84.n_signals == cfg.bb84.n_signals);
    CHECK(reloaded.bb84.eve == cfg.bb84.eve);
    CHECK(reloaded.bb84.tolerable_qber == cfg.bb84.tolerable_qber);
    CHECK(reloaded.cost.security_bits == cfg.cost.security_bits);
    CHECK(reloaded.out_dir == cfg.out_dir);
    // The regenerated text is byte-identical, so provenance survives chains
    // of reload-and-run.
    CHECK(describe_config(reloaded) == describe_config(cfg));
}

TEST_CASE("config errors carry the line number") {
    ExperimentConfig cfg;
    const std::string bad_key = "[dialogue]\nm = 100\nbogus = 3\n";
    try {
        apply_config_entries(cfg, parse_config_text(bad_key, "conf"), "conf");
        FAIL("expected a parse failure");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find("conf:3") != std::string::npos);
    }

    const std::string bad_value = "[dialogue]\ngamma = fast\n";
    try {
        apply_config_entries(cfg, parse_config_text(bad_value, "conf"), "conf");
        FAIL("expected a parse failure");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find("conf:2") != std::string::npos);
    }

    CHECK_THROWS_AS(parse_config_text("[oops\nx = 1\n", "conf"),
                    std::runtime_error);
}
