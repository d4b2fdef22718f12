#include "qkd/run_config.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace qkd {

std::vector<double> GridSpec::expand() const {
    if (step <= 0.0 || hi < lo) throw ConfigError("grid: need lo <= hi, step > 0");
    std::vector<double> out;
    for (double v = lo; v <= hi + 1e-9 * step; v += step) out.push_back(v);
    return out;
}

GridSpec parse_grid(const std::string& text) {
    GridSpec g;
    char extra = 0;
    if (std::sscanf(text.c_str(), "%lf:%lf:%lf%c", &g.lo, &g.hi, &g.step,
                    &extra) != 3)
        throw ConfigError("grid: expected lo:hi:step, got '" + text + "'");
    return g;
}

namespace {

std::string trim(const std::string& s) {
    size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

double to_double(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError("config: bad numeric value for '" + key + "': " + v);
    }
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("config: bad boolean value for '" + key + "': " + v);
}

}  // namespace

void apply_config_file(RunConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string stripped = trim(line);
        if (stripped.empty()) continue;
        const size_t eq = stripped.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: line " + std::to_string(line_no) +
                              " is not 'key = value'");
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("config: empty key or value at line " +
                              std::to_string(line_no));

        if (key == "protocol") cfg.protocol = value;
        else if (key == "qber") cfg.qber = to_double(key, value);
        else if (key == "qber_grid") cfg.qber_grid = parse_grid(value);
        else if (key == "visibility_grid") cfg.visibility_grid = parse_grid(value);
        else if (key == "sweep") cfg.sweep_range = parse_grid(value);
        else if (key == "alpha") cfg.alpha = to_double(key, value);
        else if (key == "eta") cfg.eta = to_double(key, value);
        else if (key == "p_dark") cfg.p_dark = to_double(key, value);
        else if (key == "visibility") cfg.visibility = to_double(key, value);
        else if (key == "format") cfg.format = value;
        else if (key == "output") cfg.output = value;
        else if (key == "preprocessing") cfg.preprocessing = to_bool(key, value);
        else if (key == "n_max") cfg.n_max = static_cast<int>(to_double(key, value));
        else if (key == "threads")
            cfg.threads = static_cast<unsigned>(to_double(key, value));
        else if (key == "find_threshold")
            cfg.find_threshold = to_bool(key, value);
        else
            throw ConfigError("config: unknown key '" + key + "'");
    }
}

void validate(const RunConfig& cfg) {
    if (cfg.protocol != "sarg04" && cfg.protocol != "sarg04-2set" &&
        cfg.protocol != "bb84")
        throw ConfigError("protocol must be sarg04, sarg04-2set or bb84");
    if (cfg.qber && (*cfg.qber < 0.0 || *cfg.qber > 0.45))
        throw ConfigError("qber must lie in [0, 0.45]");
    if (cfg.alpha < 0.0) throw ConfigError("alpha must be >= 0");
    if (cfg.eta <= 0.0 || cfg.eta > 1.0) throw ConfigError("eta must lie in (0, 1]");
    if (cfg.p_dark < 0.0 || cfg.p_dark >= 1.0)
        throw ConfigError("p_dark must lie in [0, 1)");
    if (cfg.visibility < 0.0 || cfg.visibility > 1.0)
        throw ConfigError("visibility must lie in [0, 1]");
    if (cfg.n_max < 3 || cfg.n_max > 10)
        throw ConfigError("n_max must lie in [3, 10]");
    if (cfg.format != "csv" && cfg.format != "json")
        throw ConfigError("format must be csv or json");
    if (cfg.sweep_range) {
        if (cfg.sweep_range->lo <= 0.0)
            throw ConfigError("sweep distances must be positive");
        (void)cfg.sweep_range->expand();
    }
    if (cfg.qber_grid) (void)cfg.qber_grid->expand();
    if (cfg.visibility_grid) (void)cfg.visibility_grid->expand();
}

Protocol protocol_from_string(const std::string& name) {
    if (name == "sarg04") return Protocol::Sarg04FourSet;
    if (name == "sarg04-2set") return Protocol::Sarg04TwoSet;
    if (name == "bb84") return Protocol::Bb84;
    throw ConfigError("unknown protocol '" + name + "'");
}

std::string format_sig12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

namespace {

const char* bool_csv(bool b) { return b ? "true" : "false"; }

}  // namespace

std::string sweep_csv(const std::vector<SweepRecord>& records) {
    std::ostringstream out;
    out << "distance_km,mu_opt,q_opt,r_sk,qber,p_u1,p_s2,p_s3,p_i32,feasible\n";
    for (const auto& r : records) {
        const bool f = r.feasible;
        out << format_sig12(r.distance_km) << ',' << format_sig12(r.mu_opt)
            << ',' << format_sig12(r.q_opt) << ',' << format_sig12(r.r_sk)
            << ',' << format_sig12(r.qber) << ','
            << format_sig12(f ? r.eve_strategy.p_u1 : 0.0) << ','
            << format_sig12(f ? r.eve_strategy.storage_prob(2) : 0.0) << ','
            << format_sig12(f ? r.eve_strategy.storage_prob(3) : 0.0) << ','
            << format_sig12(f ? r.eve_strategy.p_i32 : 0.0) << ','
            << bool_csv(f) << '\n';
    }
    return out.str();
}

std::string sweep_json(const std::vector<SweepRecord>& records) {
    std::ostringstream out;
    out << "[\n";
    for (size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        const bool f = r.feasible;
        out << "  {\"distance_km\": " << format_sig12(r.distance_km)
            << ", \"mu_opt\": " << format_sig12(r.mu_opt)
            << ", \"q_opt\": " << format_sig12(r.q_opt)
            << ", \"r_sk\": " << format_sig12(r.r_sk)
            << ", \"qber\": " << format_sig12(r.qber)
            << ", \"p_u1\": " << format_sig12(f ? r.eve_strategy.p_u1 : 0.0)
            << ", \"p_s2\": "
            << format_sig12(f ? r.eve_strategy.storage_prob(2) : 0.0)
            << ", \"p_s3\": "
            << format_sig12(f ? r.eve_strategy.storage_prob(3) : 0.0)
            << ", \"p_i32\": " << format_sig12(f ? r.eve_strategy.p_i32 : 0.0)
            << ", \"feasible\": " << (f ? "true" : "false") << '}'
            << (i + 1 < records.size() ? "," : "") << '\n';
    }
    out << "]\n";
    return out.str();
}

std::string compare_csv(const std::vector<CompareRow>& rows) {
    std::ostringstream out;
    out << "qber,lower_sarg04,lower_bb84,upper_sarg04,vis_sarg04,vis_bb84\n";
    for (const auto& r : rows)
        out << format_sig12(r.qber) << ',' << format_sig12(r.lower_sarg04)
            << ',' << format_sig12(r.lower_bb84) << ','
            << format_sig12(r.upper_sarg04) << ',' << format_sig12(r.vis_sarg04)
            << ',' << format_sig12(r.vis_bb84) << '\n';
    return out.str();
}

std::string compare_json(const std::vector<CompareRow>& rows) {
    std::ostringstream out;
    out << "[\n";
    for (size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        out << "  {\"qber\": " << format_sig12(r.qber)
            << ", \"lower_sarg04\": " << format_sig12(r.lower_sarg04)
            << ", \"lower_bb84\": " << format_sig12(r.lower_bb84)
            << ", \"upper_sarg04\": " << format_sig12(r.upper_sarg04)
            << ", \"vis_sarg04\": " << format_sig12(r.vis_sarg04)
            << ", \"vis_bb84\": " << format_sig12(r.vis_bb84) << '}'
            << (i + 1 < rows.size() ? "," : "") << '\n';
    }
    out << "]\n";
    return out.str();
}

std::string visibility_csv(const std::vector<VisibilityRow>& rows) {
    std::ostringstream out;
    out << "visibility,qber_sarg04,qber_bb84\n";
    for (const auto& r : rows)
        out << format_sig12(r.visibility) << ',' << format_sig12(r.qber_sarg04)
            << ',' << format_sig12(r.qber_bb84) << '\n';
    return out.str();
}

std::string visibility_json(const std::vector<VisibilityRow>& rows) {
    std::ostringstream out;
    out << "[\n";
    for (size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        out << "  {\"visibility\": " << format_sig12(r.visibility)
            << ", \"qber_sarg04\": " << format_sig12(r.qber_sarg04)
            << ", \"qber_bb84\": " << format_sig12(r.qber_bb84) << '}'
            << (i + 1 < rows.size() ? "," : "") << '\n';
    }
    out << "]\n";
    return out.str();
}

std::string upper_grid_csv(const std::vector<UpperGridRow>& rows) {
    std::ostringstream out;
    out << "qber,r_sk,q_opt\n";
    for (const auto& r : rows)
        out << format_sig12(r.qber) << ',' << format_sig12(r.r_sk) << ','
            << format_sig12(r.q_opt) << '\n';
    return out.str();
}

std::string upper_grid_json(const std::vector<UpperGridRow>& rows) {
    std::ostringstream out;
    out << "[\n";
    for (size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        out << "  {\"qber\": " << format_sig12(r.qber)
            << ", \"r_sk\": " << format_sig12(r.r_sk)
            << ", \"q_opt\": " << format_sig12(r.q_opt) << '}'
            << (i + 1 < rows.size() ? "," : "") << '\n';
    }
    out << "]\n";
    return out.str();
}

}  // namespace qkd
