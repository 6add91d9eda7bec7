#include "tp/config.hpp"

#include <cctype>
#include <ctime>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace tp {

const char* kCodeVersion = "0.1.0";

std::uint64_t fnv1a_hash(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    size_t b = s.find_last_not_of(" \t\r");
    return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        size_t pos = 0;
        double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw config_error("config: value of '" + key + "' is not a number: " + value);
    }
}

long parse_int(const std::string& key, const std::string& value) {
    try {
        size_t pos = 0;
        long v = std::stol(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw config_error("config: value of '" + key + "' is not an integer: " + value);
    }
}

std::vector<double> parse_list(const std::string& key, const std::string& value) {
    std::vector<double> out;
    std::istringstream in(value);
    std::string tok;
    while (in >> tok) out.push_back(parse_double(key, tok));
    if (out.empty()) throw config_error("config: list '" + key + "' is empty");
    return out;
}

} // namespace

ExperimentSpec parse_config_text(const std::string& text, const std::string& command) {
    ExperimentSpec spec;
    spec.command = command;
    spec.spec_hash = fnv1a_hash(command + "\n" + text);

    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string s = trim(line);
        if (s.empty() || s[0] == '#' || s[0] == ';') continue;
        if (s.front() == '[' && s.back() == ']') {
            section = trim(s.substr(1, s.size() - 2));
            continue;
        }
        size_t eq = s.find('=');
        if (eq == std::string::npos)
            throw config_error("config: line " + std::to_string(lineno) +
                               " is not 'key = value'");
        std::string key = trim(s.substr(0, eq));
        std::string value = trim(s.substr(eq + 1));
        std::string qual = section.empty() ? key : section + "." + key;

        if (qual == "domain.periods") spec.periods = parse_int(key, value);
        else if (qual == "domain.points") spec.points = parse_int(key, value);
        else if (qual == "domain.slow_periods") spec.slow_periods = parse_int(key, value);
        else if (qual == "domain.slow_points") spec.slow_points = parse_int(key, value);
        else if (qual == "sh.eps") spec.eps = parse_double(key, value);
        else if (qual == "sh.h") spec.h_fast = parse_double(key, value);
        else if (qual == "sh.nu0") spec.nu[0] = cdouble(parse_double(key, value), 0.0);
        else if (qual == "sh.nu1_re") spec.nu[1] = cdouble(parse_double(key, value), spec.nu.count(1) ? spec.nu[1].imag() : 0.0);
        else if (qual == "sh.nu1_im") spec.nu[1] = cdouble(spec.nu.count(1) ? spec.nu[1].real() : 0.0, parse_double(key, value));
        else if (qual == "sh.nu2_re") spec.nu[2] = cdouble(parse_double(key, value), spec.nu.count(2) ? spec.nu[2].imag() : 0.0);
        else if (qual == "sh.nu2_im") spec.nu[2] = cdouble(spec.nu.count(2) ? spec.nu[2].real() : 0.0, parse_double(key, value));
        else if (qual == "sh.nu3_re") spec.nu[3] = cdouble(parse_double(key, value), spec.nu.count(3) ? spec.nu[3].imag() : 0.0);
        else if (qual == "sh.nu3_im") spec.nu[3] = cdouble(spec.nu.count(3) ? spec.nu[3].real() : 0.0, parse_double(key, value));
        else if (qual == "model.order") spec.order = parse_int(key, value);
        else if (qual == "model.theta") spec.theta = parse_int(key, value);
        else if (qual == "model.h_slow") spec.h_slow = parse_double(key, value);
        else if (qual == "sections.rho_in") spec.sections.rho_in = parse_double(key, value);
        else if (qual == "sections.rho_mid") spec.sections.rho_mid = parse_double(key, value);
        else if (qual == "sections.rho_out") spec.sections.rho_out = parse_double(key, value);
        else if (qual == "sections.zeta") spec.sections.zeta = parse_double(key, value);
        else if (qual == "sections.K") spec.sections.K = parse_double(key, value);
        else if (qual == "ic.family") spec.ic_family = value;
        else if (qual == "ic.amplitude") spec.amplitude = parse_double(key, value);
        else if (qual == "ic.center") spec.ic_center = parse_double(key, value);
        else if (qual == "ic.width") spec.ic_width = parse_double(key, value);
        else if (qual == "experiment.name") spec.experiment = value;
        else if (qual == "experiment.eps_list") spec.eps_list = parse_list(key, value);
        else if (qual == "experiment.delta_list") spec.delta_list = parse_list(key, value);
        else if (qual == "experiment.r_list") spec.r_list = parse_list(key, value);
        else if (qual == "experiment.threshold") spec.threshold = parse_double(key, value);
        else if (qual == "experiment.delay_mode") spec.delay_mode = value;
        else if (qual == "experiment.t_end") spec.t_end = parse_double(key, value);
        else if (qual == "run.seed") spec.seed = static_cast<std::uint64_t>(parse_int(key, value));
        else if (qual == "run.workers") spec.workers = parse_int(key, value);
        else if (qual == "output.dir") spec.out_dir = value;
        else throw config_error("config: unknown key '" + qual + "'");
    }

    // domain checks (named constraints)
    if (spec.eps <= 0.0 || spec.eps >= 1.0) {
        if (spec.command != "derive") throw config_error("eps must be in (0,1)");
    }
    if (spec.order < 4 || spec.order > 6) throw config_error("order must be in 4..6");
    if (spec.theta < 0 || spec.theta > 4) throw config_error("theta must be in 0..4");
    if (spec.sections.rho_in <= 0.0) throw config_error("rho_in must be positive");
    if (spec.sections.rho_out <= 0.0) throw config_error("rho_out must be positive");
    if (spec.sections.zeta <= 0.0) throw config_error("zeta must be positive");
    if (spec.sections.K <= 0.0) throw config_error("K must be positive");
    (void)spec.fast_grid(); // throws on bad grid parameters
    (void)spec.slow_grid();

    if (spec.command == "sweep" && spec.experiment == "delay") {
        double margin = 1.0 - spec.sections.rho_out / spec.sections.rho_in;
        if (margin < 0.1)
            spec.warnings.push_back(
                "delay margin is thin: rho_out/rho_in leaves omega < 0.1");
    }
    return spec;
}

ExperimentSpec parse_config(const std::string& path, const std::string& command) {
    if (path.empty()) return parse_config_text("", command);
    std::ifstream in(path, std::ios::binary);
    if (!in) throw config_error("config: cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), command);
}

void RunManifest::write(const std::string& path) const {
    nlohmann::json j;
    char hash[32];
    std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(spec_hash));
    j["spec_hash"] = hash;
    j["code_version"] = code_version;
    j["command"] = command;
    j["started_utc"] = started_utc;
    j["finished_utc"] = finished_utc;
    nlohmann::json runs = nlohmann::json::array();
    for (const auto& [id, status] : run_status) runs.push_back({{"run", id}, {"status", status}});
    j["runs"] = runs;
    j["emitted_files"] = emitted_files;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw config_error("RunManifest: cannot open " + path);
    out << j.dump(2) << "\n";
}

} // namespace tp
