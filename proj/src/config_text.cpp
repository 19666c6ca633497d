#include "mdiqd/config_text.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mdiqd {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

[[noreturn]] void fail(const std::string& origin, std::size_t line,
                       const std::string& msg) {
    throw std::runtime_error(origin + ":" + std::to_string(line) + ": " + msg);
}

double to_double(const ConfigEntry& e, const std::string& origin) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(e.value, &pos);
        if (pos != e.value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        fail(origin, e.line, "cannot parse '" + e.value + "' as a number for " +
                                 e.section + "." + e.key);
    }
}

std::uint64_t to_u64(const ConfigEntry& e, const std::string& origin) {
    std::uint64_t v = 0;
    const auto [ptr, ec] =
        std::from_chars(e.value.data(), e.value.data() + e.value.size(), v);
    if (ec != std::errc{} || ptr != e.value.data() + e.value.size()) {
        fail(origin, e.line, "cannot parse '" + e.value + "' as an integer for " +
                                 e.section + "." + e.key);
    }
    return v;
}

std::vector<std::uint64_t> to_u64_list(const ConfigEntry& e,
                                       const std::string& origin) {
    std::vector<std::uint64_t> out;
    std::stringstream ss(e.value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        ConfigEntry part = e;
        part.value = trim(item);
        out.push_back(to_u64(part, origin));
    }
    if (out.empty()) fail(origin, e.line, "empty list for " + e.key);
    return out;
}

}  // namespace

std::vector<ConfigEntry> parse_config_text(const std::string& text,
                                           const std::string& origin) {
    std::vector<ConfigEntry> entries;
    std::istringstream in(text);
    std::string raw;
    std::string section;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line = trim(raw);
        if (line.empty() || line[0] == '#' || line[0] == ';') continue;
        if (line.front() == '[') {
            if (line.back() != ']' || line.size() < 3) {
                fail(origin, line_no, "malformed section header '" + line + "'");
            }
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            fail(origin, line_no, "expected 'key = value', got '" + line + "'");
        }
        ConfigEntry e;
        e.section = section;
        e.key = trim(line.substr(0, eq));
        e.value = trim(line.substr(eq + 1));
        e.line = line_no;
        if (e.key.empty()) fail(origin, line_no, "empty key");
        entries.push_back(e);
    }
    return entries;
}

std::vector<ConfigEntry> load_config_file(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open config file: " + file.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), file.string());
}

void apply_config_entries(ExperimentConfig& cfg,
                          const std::vector<ConfigEntry>& entries,
                          const std::string& origin) {
    for (const ConfigEntry& e : entries) {
        const std::string where = e.section + "." + e.key;
        if (e.section == "run") {
            if (e.key == "mode") {
                const auto mode = mode_from_string(e.value);
                if (!mode) fail(origin, e.line, "unknown mode '" + e.value + "'");
                cfg.mode = *mode;
            } else if (e.key == "seed") {
                cfg.seeds = to_u64_list(e, origin);
            } else if (e.key == "out") {
                cfg.out_dir = e.value;
            } else if (e.key == "threads") {
                cfg.threads = static_cast<unsigned>(to_u64(e, origin));
            } else {
                fail(origin, e.line, "unknown key '" + where + "'");
            }
        } else if (e.section == "dialogue") {
            if (e.key == "m") cfg.dialogue.m = to_u64(e, origin);
            else if (e.key == "gamma") cfg.dialogue.gamma = to_double(e, origin);
            else if (e.key == "q-threshold") cfg.dialogue.q_threshold = to_double(e, origin);
            else if (e.key == "eps") cfg.dialogue.eps_qsdc = to_double(e, origin);
            else if (e.key == "qber") cfg.p_flip = to_double(e, origin);
            else if (e.key == "utp") {
                const auto kind = utp_kind_from_string(e.value);
                if (!kind) fail(origin, e.line, "unknown utp strategy '" + e.value + "'");
                cfg.utp.kind = *kind;
            } else if (e.key == "lie-target") {
                const auto target = bell_outcome_from_string(e.value);
                if (!target) fail(origin, e.line, "unknown lie target '" + e.value + "'");
                cfg.utp.lie_target = *target;
            } else if (e.key == "p-lie") {
                cfg.utp.p_lie = to_double(e, origin);
            } else {
                fail(origin, e.line, "unknown key '" + where + "'");
            }
        } else if (e.section == "bb84") {
            if (e.key == "n-signals") cfg.bb84.n_signals = to_u64(e, origin);
            else if (e.key == "eve") {
                if (e.value == "none") cfg.bb84.eve = EveStrategy::None;
                else if (e.value == "intercept-resend") cfg.bb84.eve = EveStrategy::InterceptResend;
                else fail(origin, e.line, "unknown eve strategy '" + e.value + "'");
            }
            else if (e.key == "qber") cfg.bb84.p_flip = to_double(e, origin);
            else if (e.key == "sample-fraction") cfg.bb84.sample_fraction = to_double(e, origin);
            else if (e.key == "q-threshold") cfg.bb84.tolerable_qber = to_double(e, origin);
            else if (e.key == "source-quality") cfg.bb84.source_quality = to_double(e, origin);
            else if (e.key == "eps") cfg.bb84.eps_qkd = to_double(e, origin);
            else if (e.key == "eps-q") cfg.bb84.eps_q = to_double(e, origin);
            else if (e.key == "f-ec") cfg.bb84.f_ec = to_double(e, origin);
            else fail(origin, e.line, "unknown key '" + where + "'");
        } else if (e.section == "keylen") {
            if (e.key == "n") cfg.finite_key.n = to_u64(e, origin);
            else if (e.key == "k") cfg.finite_key.k = to_u64(e, origin);
            else if (e.key == "source-quality") cfg.finite_key.q = to_double(e, origin);
            else if (e.key == "qber") cfg.finite_key.qber = to_double(e, origin);
            else if (e.key == "eps-q") cfg.finite_key.eps_q = to_double(e, origin);
            else if (e.key == "eps-cor") cfg.finite_key.eps_cor = to_double(e, origin);
            else if (e.key == "eps-bar") cfg.finite_key.eps_bar = to_double(e, origin);
            else if (e.key == "leak-ec") cfg.finite_key.leak_ec = to_double(e, origin);
            else fail(origin, e.line, "unknown key '" + where + "'");
        } else if (e.section == "cost") {
            if (e.key == "security-bits") cfg.cost.security_bits = to_u64(e, origin);
            else if (e.key == "dialogue-uses") cfg.cost.dialogue_uses = to_u64(e, origin);
            else if (e.key == "rate") cfg.cost.rate = to_double(e, origin);
            else if (e.key == "qber") cfg.cost.qber = to_double(e, origin);
            else fail(origin, e.line, "unknown key '" + where + "'");
        } else if (e.section == "verify") {
            if (e.key == "file") cfg.verify_file = e.value;
            else if (e.key == "restricted") {
                if (e.value == "auto") cfg.verify_restricted.reset();
                else if (e.value == "0") cfg.verify_restricted = false;
                else if (e.value == "1") cfg.verify_restricted = true;
                else fail(origin, e.line, "restricted must be auto, 0 or 1");
            } else {
                fail(origin, e.line, "unknown key '" + where + "'");
            }
        } else {
            fail(origin, e.line, "unknown section '" + e.section + "'");
        }
    }
}

}  // namespace mdiqd
