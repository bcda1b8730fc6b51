#pragma once

#include <fstream>
#include <sstream>

#include "dp/spectral.hpp"

namespace dp {

inline std::string trimmed(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(trimmed(item));
    return out;
}

// Mode list syntax: "1:0.005+0.0i, 2:0.002+0.001i". The imaginary part may be
// omitted; negative modes are filled by conjugation when the state is built.
inline std::map<int, cplx> parse_init_modes(const std::string& text) {
    std::map<int, cplx> out;
    for (const std::string& entry : split(text, ',')) {
        if (entry.empty()) continue;
        auto colon = entry.find(':');
        if (colon == std::string::npos) throw ConfigError("bad init entry: " + entry);
        int j = std::stoi(entry.substr(0, colon));
        std::string v = trimmed(entry.substr(colon + 1));
        double re = 0, im = 0;
        if (!v.empty() && v.back() == 'i') {
            v.pop_back();
            size_t pos = v.find_last_of("+-", v.size() - 1);
            if (pos == std::string::npos || pos == 0)
                throw ConfigError("bad complex literal: " + entry);
            re = std::stod(v.substr(0, pos));
            im = std::stod(v.substr(pos));
        } else {
            re = std::stod(v);
        }
        out[j] = cplx(re, im);
    }
    return out;
}

inline bool parse_bool(const std::string& v) {
    if (v == "1" || v == "true" || v == "on" || v == "yes") return true;
    if (v == "0" || v == "false" || v == "off" || v == "no") return false;
    throw ConfigError("bad boolean: " + v);
}

inline SimConfig parse_sim_config(std::istream& in) {
    SimConfig cfg;
    std::string line;
    while (std::getline(in, line)) {
        std::string s = trimmed(line);
        if (s.empty() || s[0] == '#') continue;
        auto eq = s.find('=');
        if (eq == std::string::npos) throw ConfigError("expected key=value: " + s);
        std::string key = trimmed(s.substr(0, eq));
        std::string val = trimmed(s.substr(eq + 1));
        if (key == "c") cfg.c = std::stod(val);
        else if (key == "grid") cfg.grid = std::stoul(val);
        else if (key == "dt") cfg.dt = std::stod(val);
        else if (key == "t_end") cfg.t_end = std::stod(val);
        else if (key == "amplitude") cfg.amplitude = std::stod(val);
        else if (key == "seed") cfg.seed = std::stoull(val);
        else if (key == "dealias") cfg.dealias = parse_bool(val);
        else if (key == "mollifier_eps") cfg.mollifier_eps = std::stod(val);
        else if (key == "sample_every") cfg.sample_every = std::stoul(val);
        else if (key == "blowup_factor") cfg.blowup_factor = std::stod(val);
        else if (key == "out") cfg.out = val;
        else if (key == "init") cfg.init_modes = parse_init_modes(val);
        else if (key == "gammas") {
            cfg.gammas.clear();
            for (const auto& t : split(val, ',')) if (!t.empty()) cfg.gammas.push_back(std::stoul(t));
        } else if (key == "sobolev") {
            cfg.sobolev.clear();
            for (const auto& t : split(val, ',')) if (!t.empty()) cfg.sobolev.push_back(std::stod(t));
        } else if (key == "k_quads") {
            cfg.k_quads.clear();
            for (const auto& t : split(val, ',')) if (!t.empty()) cfg.k_quads.push_back(std::stoul(t));
        } else {
            throw ConfigError("unknown config key: " + key);
        }
    }
    if (cfg.c == 0.0) throw ZeroParameter("c must be nonzero");
    if (cfg.dt <= 0.0) throw ConfigError("dt must be positive");
    if (cfg.grid == 0 || (cfg.grid & (cfg.grid - 1)) != 0)
        throw ConfigError("grid must be a power of two");
    return cfg;
}

inline SimConfig load_sim_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config: " + path);
    return parse_sim_config(f);
}

inline void write_diagnostics_csv(std::ostream& os, const SimConfig& cfg,
                                  const DiagnosticsSeries& series) {
    os << "t,H,M0,M1";
    for (unsigned n : cfg.gammas) os << ",gamma_" << n;
    for (double s : cfg.sobolev) os << ",H" << s << "_norm";
    for (unsigned n : cfg.k_quads) os << ",K" << n << "_quad";
    os << "\n";
    os.precision(17);
    for (const auto& d : series.samples) {
        os << d.t << "," << d.H << "," << d.M0 << "," << d.M1;
        for (unsigned n : cfg.gammas) os << "," << d.gamma.at(n);
        for (double s : cfg.sobolev) os << "," << d.sobolev.at(s);
        for (unsigned n : cfg.k_quads) os << "," << d.k_quadratic.at(n);
        os << "\n";
    }
}

} // namespace dp
