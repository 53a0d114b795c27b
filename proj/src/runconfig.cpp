#include "cftlat/runconfig.hpp"

#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace cftlat {

void RunConfig::validate() const {
    if (p < 3 || q < 3) throw std::invalid_argument("model: p and q must be >= 3");
    if (std::gcd(p, q) != 1) throw std::invalid_argument("model: p and q must be coprime");
    if (precision_digits != kPrecisionDigits)
        throw std::invalid_argument(
            "precision: this build works at a fixed 64 decimal digits");
    if (open_level < 0 || open_level > 10)
        throw std::invalid_argument("open_level: supported range is 0..10");
    if (closed_weight < 0 || closed_weight > 20)
        throw std::invalid_argument("closed_weight: supported range is 0..20");
    if (!(quad_tol > 0 && quad_tol <= 1e-3))
        throw std::invalid_argument("quad_tol: need 0 < tol <= 1e-3");
    if (series_order < 3) throw std::invalid_argument("series_order: need >= 3");
    if (trace_points < 64) throw std::invalid_argument("trace_points: need >= 64");
    for (double r : ratio_grid)
        if (!(r > 0 && r < 0.5))
            throw std::invalid_argument("grid: R/d values must lie in (0, 1/2)");
    if (symmetry != "all" && symmetry != "first-row" && symmetry != "z2" &&
        symmetry.find(',') == std::string::npos)
        throw std::invalid_argument("symmetry: all | first-row | z2 | explicit list");
}

std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> out;
    if (text.empty()) return out;
    auto colon = std::count(text.begin(), text.end(), ':');
    if (colon == 2) {
        std::istringstream ss(text);
        std::string a, b, n;
        std::getline(ss, a, ':');
        std::getline(ss, b, ':');
        std::getline(ss, n, ':');
        double lo = std::stod(a), hi = std::stod(b);
        int cnt = std::stoi(n);
        if (cnt < 1) throw std::invalid_argument("grid: count must be >= 1");
        for (int i = 0; i < cnt; ++i)
            out.push_back(cnt == 1 ? lo : lo + (hi - lo) * i / (cnt - 1));
        return out;
    }
    std::istringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) if (!tok.empty()) out.push_back(std::stod(tok));
    return out;
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open " + path);
    RunConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        // trim
        auto notspace = [](int ch) { return !std::isspace(ch); };
        line.erase(line.begin(), std::find_if(line.begin(), line.end(), notspace));
        line.erase(std::find_if(line.rbegin(), line.rend(), notspace).base(), line.end());
        if (line.empty()) continue;
        if (line.front() == '[' && line.back() == ']') continue; // section header
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected key = value");
        std::string key = line.substr(0, eq), val = line.substr(eq + 1);
        key.erase(std::find_if(key.rbegin(), key.rend(), notspace).base(), key.end());
        val.erase(val.begin(), std::find_if(val.begin(), val.end(), notspace));

        if (key == "p") cfg.p = std::stoi(val);
        else if (key == "q") cfg.q = std::stoi(val);
        else if (key == "symmetry") cfg.symmetry = val;
        else if (key == "delta0") cfg.delta0 = val;
        else if (key == "open_level") cfg.open_level = std::stoi(val);
        else if (key == "closed_weight") cfg.closed_weight = std::stoi(val);
        else if (key == "h_max") cfg.h_max = val;
        else if (key == "grid") cfg.ratio_grid = parse_grid(val);
        else if (key == "precision") cfg.precision_digits = static_cast<unsigned>(std::stoul(val));
        else if (key == "quad_tol") cfg.quad_tol = std::stod(val);
        else if (key == "series_order") cfg.series_order = std::stoi(val);
        else if (key == "trace_points") cfg.trace_points = std::stoi(val);
        else if (key == "threads") cfg.threads = std::stoi(val);
        else if (key == "cache_dir") cfg.cache_dir = val;
        else if (key == "out_dir") cfg.out_dir = val;
        else
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": unknown key '" + key + "'");
    }
    return cfg;
}

} // namespace cftlat
