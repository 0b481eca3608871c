#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>

#include "ewd/harness.hpp"

namespace ewd {

namespace {

std::string trim(std::string_view s) {
    size_t b = 0;
    size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) {
        b++;
    }
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) {
        e--;
    }
    return std::string(s.substr(b, e - b));
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char ch) { return std::tolower(ch); });
    return s;
}

uint64_t parse_count(std::string_view key, std::string_view text) {
    std::string t = trim(text);
    // Allow scientific shorthand such as 1e4.
    double v = parse_real(t);
    if (!(v >= 0) || v != std::floor(v) || v > 1.8e19) {
        throw std::invalid_argument("key '" + std::string(key) + "' needs a non-negative integer, got '" + t + "'");
    }
    return static_cast<uint64_t>(v);
}

bool parse_bool(std::string_view key, std::string_view text) {
    std::string t = lower(trim(text));
    if (t == "1" || t == "true" || t == "yes" || t == "on") {
        return true;
    }
    if (t == "0" || t == "false" || t == "no" || t == "off") {
        return false;
    }
    throw std::invalid_argument("key '" + std::string(key) + "' needs a boolean, got '" + t + "'");
}

std::vector<std::string> split_list(std::string_view text) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in{std::string(text)};
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (!item.empty()) {
            out.push_back(item);
        }
    }
    return out;
}

// "a,b,c" or an inclusive range "start:stop:step".
std::vector<double> parse_real_list(std::string_view text) {
    std::vector<double> out;
    for (const auto &item : split_list(text)) {
        auto c1 = item.find(':');
        if (c1 == std::string::npos) {
            out.push_back(parse_real(item));
            continue;
        }
        auto c2 = item.find(':', c1 + 1);
        if (c2 == std::string::npos) {
            throw std::invalid_argument("range must be start:stop:step, got '" + item + "'");
        }
        double start = parse_real(item.substr(0, c1));
        double stop = parse_real(item.substr(c1 + 1, c2 - c1 - 1));
        double step = parse_real(item.substr(c2 + 1));
        if (!(step > 0) || stop < start) {
            throw std::invalid_argument("bad range '" + item + "'");
        }
        auto n = static_cast<long>(std::floor((stop - start) / step + 1e-9));
        for (long k = 0; k <= n; k++) {
            // Rounded so that 0.16 + 3 * 0.01 prints as 0.19.
            out.push_back(std::round((start + k * step) * 1e12) / 1e12);
        }
    }
    return out;
}

}  // namespace

double parse_real(std::string_view text) {
    std::string t = lower(trim(text));
    if (t == "inf" || t == "+inf" || t == "infinity") {
        return kInfinity;
    }
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
        throw std::invalid_argument("not a number: '" + t + "'");
    }
    return v;
}

void apply_config_value(ExperimentConfig &config, std::string_view raw_key, std::string_view value) {
    std::string key = lower(trim(raw_key));
    std::replace(key.begin(), key.end(), '-', '_');
    if (key == "code") {
        config.code = parse_code_kind(trim(value));
    } else if (key == "distances" || key == "distance" || key == "d") {
        config.distances.clear();
        for (const auto &item : split_list(value)) {
            config.distances.push_back(static_cast<int>(parse_count(key, item)));
        }
    } else if (key == "p" || key == "error_rates") {
        config.error_rates = parse_real_list(value);
    } else if (key == "alpha") {
        config.noise.alpha_x = config.noise.alpha_y = parse_real(value);
        config.noise.eta.reset();
    } else if (key == "alpha_x") {
        config.noise.alpha_x = parse_real(value);
        config.noise.eta.reset();
    } else if (key == "alpha_y") {
        config.noise.alpha_y = parse_real(value);
        config.noise.eta.reset();
    } else if (key == "eta") {
        config.noise.eta = parse_real(value);
    } else if (key == "decoder") {
        config.decoder = parse_decoder(trim(value));
    } else if (key == "n_syndromes" || key == "n") {
        config.n_syndromes = parse_count(key, value);
    } else if (key == "seed") {
        config.seed = parse_count(key, value);
    } else if (key == "p_sample") {
        config.sampler.p_sample = parse_real(value);
    } else if (key == "steps") {
        config.sampler.steps = parse_count(key, value);
    } else if (key == "record_stride") {
        config.sampler.record_stride = parse_count(key, value);
    } else if (key == "explore_trivial") {
        config.sampler.explore_trivial = parse_bool(key, value);
    } else if (key == "pt_layers") {
        config.pt.n_layers = static_cast<int>(parse_count(key, value));
    } else if (key == "pt_steps_per_sweep") {
        config.pt.steps_per_sweep = parse_count(key, value);
    } else if (key == "pt_sweeps") {
        config.pt.total_sweeps = parse_count(key, value);
    } else if (key == "pt_burn_in") {
        config.pt.burn_in_fraction = parse_real(value);
    } else if (key == "out") {
        config.out = trim(value);
    } else if (key == "records") {
        config.records = trim(value);
    } else {
        throw std::invalid_argument("unknown configuration key '" + key + "'");
    }
}

ExperimentConfig parse_config(std::istream &in) {
    ExperimentConfig config;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        line_no++;
        auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.erase(hash);
        }
        if (trim(line).empty()) {
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("config line " + std::to_string(line_no) + ": expected key = value");
        }
        try {
            apply_config_value(config, line.substr(0, eq), line.substr(eq + 1));
        } catch (const std::exception &e) {
            throw std::invalid_argument("config line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return config;
}

ExperimentConfig load_config(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("cannot open config file '" + path + "'");
    }
    return parse_config(in);
}

void ExperimentConfig::validate() const {
    if (distances.empty()) {
        throw std::invalid_argument("no code distances given");
    }
    for (int d : distances) {
        if (d < 3 || d % 2 == 0) {
            throw std::invalid_argument("code distance must be odd and >= 3, got " + std::to_string(d));
        }
        if (decoder == DecoderKind::ExactMLD && static_cast<size_t>(d) * d - 1 > kMaxEnumeratedGenerators) {
            throw std::invalid_argument("exact-mld decoder supports d <= 5");
        }
    }
    if (error_rates.empty()) {
        throw std::invalid_argument("no error rates given");
    }
    for (double p : error_rates) {
        if (!(p >= 0.0 && p < 1.0)) {
            throw std::invalid_argument("error rate must lie in [0, 1)");
        }
        if (p > 0.0) {
            noise.at(p);  // surfaces domain errors early
        } else if (decoder == DecoderKind::MCMC_PT) {
            throw std::invalid_argument("mcmc-pt decoder needs p > 0");
        }
    }
    if (!noise.eta && (!(noise.alpha_x >= 1.0) || !(noise.alpha_y >= 1.0))) {
        throw std::invalid_argument("alpha must be >= 1");
    }
    if (n_syndromes < 1) {
        throw std::invalid_argument("n_syndromes must be >= 1");
    }
    if (!(sampler.p_sample > 0.0 && sampler.p_sample < 1.0)) {
        throw std::invalid_argument("p_sample must lie in (0, 1)");
    }
    if (sampler.record_stride < 1 || (sampler.steps && sampler.steps < sampler.record_stride)) {
        throw std::invalid_argument("need steps >= record_stride >= 1");
    }
    if (pt.n_layers < 2) {
        throw std::invalid_argument("pt_layers must be >= 2");
    }
}

}  // namespace ewd
