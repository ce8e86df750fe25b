#include "mlring/params.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

namespace mlring {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& text, int line) {
    const char* begin = text.c_str();
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0' || errno == ERANGE || !std::isfinite(v)) {
        throw ConfigError("line " + std::to_string(line) + ": value for '" + key +
                          "' is not a finite number: '" + text + "'");
    }
    return v;
}

}  // namespace

void LaserParams::validate() const {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw ConfigError(std::string(name) + " must be positive and finite");
        }
    };
    positive(gamma_g, "gamma_g");
    positive(gamma_q, "gamma_q");
    positive(gamma, "gamma");
    positive(kappa, "kappa");
    positive(E_g, "E_g");
    positive(E_q, "E_q");
    positive(T, "T");
    for (double v : {q0, eta_g, eta_q, psi, eta}) {
        if (!std::isfinite(v)) throw ConfigError("parameters must be finite");
    }
    if (n < 2 || n % 2 != 0) throw ConfigError("n must be even and at least 2");
}

LaserParams parse_params(std::istream& in, LaserParams base) {
    std::map<std::string, double LaserParams::*> fields{
        {"gamma_g", &LaserParams::gamma_g}, {"gamma_q", &LaserParams::gamma_q},
        {"gamma", &LaserParams::gamma},     {"kappa", &LaserParams::kappa},
        {"q0", &LaserParams::q0},           {"E_g", &LaserParams::E_g},
        {"E_q", &LaserParams::E_q},         {"T", &LaserParams::T},
        {"eta_g", &LaserParams::eta_g},     {"eta_q", &LaserParams::eta_q},
        {"psi", &LaserParams::psi},         {"eta", &LaserParams::eta},
    };
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        const std::string text = trim(raw);
        if (text.empty()) continue;
        const auto eq = text.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(line) + ": expected key=value");
        }
        const std::string key = trim(text.substr(0, eq));
        const std::string value = trim(text.substr(eq + 1));
        if (key == "n") {
            const double v = parse_double(key, value, line);
            if (v != std::floor(v)) throw ConfigError("n must be an integer");
            base.n = static_cast<int>(v);
        } else if (auto it = fields.find(key); it != fields.end()) {
            base.*(it->second) = parse_double(key, value, line);
        } else {
            throw ConfigError("line " + std::to_string(line) + ": unknown key '" + key + "'");
        }
    }
    base.validate();
    return base;
}

LaserParams load_params(const std::filesystem::path& path, LaserParams base) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    return parse_params(in, base);
}

std::string format_params(const LaserParams& p) {
    std::ostringstream out;
    auto put = [&out](const char* key, double v) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.12g", v);
        out << key << '=' << buf << '\n';
    };
    put("gamma_g", p.gamma_g);
    put("gamma_q", p.gamma_q);
    put("gamma", p.gamma);
    put("kappa", p.kappa);
    put("q0", p.q0);
    put("E_g", p.E_g);
    put("E_q", p.E_q);
    put("T", p.T);
    put("eta_g", p.eta_g);
    put("eta_q", p.eta_q);
    put("psi", p.psi);
    put("eta", p.eta);
    out << "n=" << p.n << '\n';
    return out.str();
}

}  // namespace mlring
