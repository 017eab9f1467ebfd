#include "lps/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace lps {

namespace {

[[noreturn]] void bad_value(const std::string& key, const std::string& why) {
    throw std::invalid_argument("config: " + key + " " + why);
}

double parse_double(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        double d = std::stod(v, &pos);
        if (pos != v.size() || !std::isfinite(d)) bad_value(key, "is not a finite number");
        return d;
    } catch (const std::invalid_argument&) {
        bad_value(key, "is not a number: " + v);
    } catch (const std::out_of_range&) {
        bad_value(key, "is out of range: " + v);
    }
}

long long parse_int(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        long long i = std::stoll(v, &pos);
        if (pos != v.size()) bad_value(key, "is not an integer: " + v);
        return i;
    } catch (const std::invalid_argument&) {
        bad_value(key, "is not an integer: " + v);
    } catch (const std::out_of_range&) {
        bad_value(key, "is out of range: " + v);
    }
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    bad_value(key, "is not a boolean (true/false/1/0): " + v);
}

}  // namespace

void PipelineConfig::validate() const {
    if (!(sigma_c2 > 0)) bad_value("sigma_c2", "must be > 0");
    if (drop_frac < 0 || drop_frac >= 1) bad_value("drop_frac", "must be in [0,1)");
    if (n_target < 4) bad_value("n_target", "must be >= 4");
    if (!(slic_compactness > 0)) bad_value("slic_compactness", "must be > 0");
    if (l0_lambda < 0) bad_value("l0_lambda", "must be >= 0");
    if (!(l0_kappa > 1)) bad_value("l0_kappa", "must be > 1");
    if (!(thres > 0)) bad_value("thres", "must be > 0");
    if (window < 1) bad_value("window", "must be >= 1");
    if (max_iters <= window) bad_value("max_iters", "must exceed window");
    if (m_windows < 1) bad_value("m_windows", "must be >= 1");
    if (gamma1 < 0 || gamma1 > 1) bad_value("gamma1", "must be in [0,1]");
    if (!(gamma2 > 0)) bad_value("gamma2", "must be > 0");
    if (p1 < 1) bad_value("p1", "must be >= 1");
    if (p2 < p1) bad_value("p2", "must be >= p1");
    if (!(alpha > 0)) bad_value("alpha", "must be > 0");
    if (!(beta > 0)) bad_value("beta", "must be > 0");
    if (!(k_adaptive > 0)) bad_value("k_adaptive", "must be > 0");
    if (!(beta2 > 0)) bad_value("beta2", "must be > 0");
    if (k1 < 0) bad_value("k1", "must be >= 0");
    if (k2 < 0) bad_value("k2", "must be >= 0");
    if (resize_max_dim < 0) bad_value("resize_max_dim", "must be >= 0");
}

void PipelineConfig::apply(const std::string& key, const std::string& value) {
    if (key == "sigma_c2") sigma_c2 = parse_double(key, value);
    else if (key == "drop_frac") drop_frac = parse_double(key, value);
    else if (key == "n_target") n_target = static_cast<int>(parse_int(key, value));
    else if (key == "slic_compactness") slic_compactness = parse_double(key, value);
    else if (key == "l0_lambda") l0_lambda = parse_double(key, value);
    else if (key == "l0_kappa") l0_kappa = parse_double(key, value);
    else if (key == "thres") thres = parse_double(key, value);
    else if (key == "window") window = static_cast<int>(parse_int(key, value));
    else if (key == "max_iters") max_iters = static_cast<int>(parse_int(key, value));
    else if (key == "m_windows") m_windows = static_cast<int>(parse_int(key, value));
    else if (key == "gamma1") gamma1 = parse_double(key, value);
    else if (key == "gamma2") gamma2 = parse_double(key, value);
    else if (key == "invert_gate") invert_gate = parse_bool(key, value);
    else if (key == "p1") p1 = static_cast<int>(parse_int(key, value));
    else if (key == "p2") p2 = static_cast<int>(parse_int(key, value));
    else if (key == "alpha") alpha = parse_double(key, value);
    else if (key == "beta") beta = parse_double(key, value);
    else if (key == "k_adaptive") k_adaptive = parse_double(key, value);
    else if (key == "beta2") beta2 = parse_double(key, value);
    else if (key == "k1") k1 = parse_double(key, value);
    else if (key == "k2") k2 = parse_double(key, value);
    else if (key == "seed") seed = static_cast<std::uint64_t>(parse_int(key, value));
    else if (key == "resize_max_dim") resize_max_dim = static_cast<int>(parse_int(key, value));
    else if (key == "smoothing") smoothing = parse_bool(key, value);
    else throw std::invalid_argument("config: unknown key: " + key);
}

PipelineConfig PipelineConfig::from_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("config: cannot open file: " + path);
    PipelineConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        auto last = line.find_last_not_of(" \t\r");
        line = line.substr(first, last - first + 1);
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: line " + std::to_string(lineno) +
                                        " is not key=value: " + line);
        auto trim = [](std::string s) {
            auto a = s.find_first_not_of(" \t");
            auto b = s.find_last_not_of(" \t");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        cfg.apply(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    cfg.validate();
    return cfg;
}

void PipelineConfig::apply_overrides(const std::vector<std::string>& key_value_pairs) {
    for (const std::string& kv : key_value_pairs) {
        auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: override is not key=value: " + kv);
        apply(kv.substr(0, eq), kv.substr(eq + 1));
    }
    validate();
}

std::map<std::string, std::string> PipelineConfig::to_map() const {
    auto num = [](double v) {
        std::ostringstream o;
        o.precision(17);
        o << v;
        return o.str();
    };
    return {
        {"sigma_c2", num(sigma_c2)},
        {"drop_frac", num(drop_frac)},
        {"n_target", std::to_string(n_target)},
        {"slic_compactness", num(slic_compactness)},
        {"l0_lambda", num(l0_lambda)},
        {"l0_kappa", num(l0_kappa)},
        {"thres", num(thres)},
        {"window", std::to_string(window)},
        {"max_iters", std::to_string(max_iters)},
        {"m_windows", std::to_string(m_windows)},
        {"gamma1", num(gamma1)},
        {"gamma2", num(gamma2)},
        {"invert_gate", invert_gate ? "true" : "false"},
        {"p1", std::to_string(p1)},
        {"p2", std::to_string(p2)},
        {"alpha", num(alpha)},
        {"beta", num(beta)},
        {"k_adaptive", num(k_adaptive)},
        {"beta2", num(beta2)},
        {"k1", num(k1)},
        {"k2", num(k2)},
        {"seed", std::to_string(seed)},
        {"resize_max_dim", std::to_string(resize_max_dim)},
        {"smoothing", smoothing ? "true" : "false"},
    };
}

}  // namespace lps
