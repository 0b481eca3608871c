#include "ewd/decoder.hpp"

#include <absl/container/flat_hash_map.h>

#include <algorithm>
#include <cmath>

#include "ewd/walker.hpp"

namespace ewd {

namespace {

constexpr double kNegInf = -kInfinity;

// Priority order for ties.
constexpr std::array<ClassLabel, 4> kTiePriority = {ClassLabel::I, ClassLabel::Z, ClassLabel::X, ClassLabel::Y};

double log_term(double log_count, double w, double beta) {
    if (std::isinf(w)) {
        return kNegInf;
    }
    if (beta == 0.0) {
        return log_count;
    }
    return log_count - beta * w;
}

double log_sum_exp(const double *xs, size_t n) {
    double m = kNegInf;
    for (size_t i = 0; i < n; i++) {
        m = std::max(m, xs[i]);
    }
    if (std::isinf(m)) {
        return m;
    }
    double s = 0.0;
    for (size_t i = 0; i < n; i++) {
        s += std::exp(xs[i] - m);
    }
    return m + std::log(s);
}

std::array<double, 4> normalize_logs(const std::array<double, 4> &log_z) {
    double total = log_sum_exp(log_z.data(), 4);
    if (std::isinf(total)) {
        throw NoDataError("no finite-weight chains observed in any class");
    }
    std::array<double, 4> p{};
    double sum = 0.0;
    for (size_t k = 0; k < 4; k++) {
        p[k] = std::exp(log_z[k] - total);
        sum += p[k];
    }
    for (auto &x : p) {
        x /= sum;
    }
    return p;
}

// beta -> inf: mass only on classes whose lightest weight is the global minimum.
std::array<double, 4> limit_probabilities(const Octet &octet) {
    double w_min = kInfinity;
    for (const auto &e : octet) {
        if (e.explored()) {
            w_min = std::min(w_min, e.w_star);
        }
    }
    if (std::isinf(w_min)) {
        throw NoDataError("no finite-weight chains observed in any class");
    }
    std::array<double, 4> p{};
    double total = 0.0;
    for (size_t k = 0; k < 4; k++) {
        if (octet[k].explored() && octet[k].w_star <= w_min + kWeightTolerance) {
            p[k] = static_cast<double>(octet[k].n_star);
            total += p[k];
        }
    }
    for (auto &x : p) {
        x /= total;
    }
    return p;
}

bool any_explored(const Octet &octet) {
    return std::any_of(octet.begin(), octet.end(), [](const OctetEntry &e) { return e.explored(); });
}

}  // namespace

uint64_t default_steps(int distance) {
    uint64_t d = static_cast<uint64_t>(distance);
    return 25 * d * d * d * d * d;
}

OctetEntry lightest(const ClassHistogram &h) {
    OctetEntry e;
    if (h.empty()) {
        return e;
    }
    e.w_star = h.entries.begin()->first;
    for (const auto &[w, n] : h.entries) {
        if (w > e.w_star + kWeightTolerance) {
            break;
        }
        e.n_star += n;
    }
    return e;
}

Octet octet_of(const std::array<ClassHistogram, 4> &hists) {
    Octet o;
    for (size_t k = 0; k < 4; k++) {
        o[k] = lightest(hists[k]);
    }
    return o;
}

ClassLabel choose_class(const std::array<double, 4> &probabilities) {
    ClassLabel best = kTiePriority[0];
    for (ClassLabel c : kTiePriority) {
        if (probabilities[class_index(c)] > probabilities[class_index(best)]) {
            best = c;
        }
    }
    return best;
}

std::array<double, 4> class_probabilities(const Octet &octet, double beta) {
    if (!any_explored(octet)) {
        throw NoDataError("class probabilities need at least one explored class");
    }
    if (std::isinf(beta) && beta > 0) {
        return limit_probabilities(octet);
    }
    std::array<double, 4> log_z{};
    for (size_t k = 0; k < 4; k++) {
        log_z[k] = octet[k].explored()
                       ? log_term(std::log(static_cast<double>(octet[k].n_star)), octet[k].w_star, beta)
                       : kNegInf;
    }
    return normalize_logs(log_z);
}

std::array<double, 4> class_probabilities(const std::array<ClassHistogram, 4> &hists, double beta,
                                          ProbabilityMode mode) {
    Octet octet = octet_of(hists);
    if (mode == ProbabilityMode::EWD || (std::isinf(beta) && beta > 0)) {
        return class_probabilities(octet, beta);
    }
    if (!any_explored(octet)) {
        throw NoDataError("class probabilities need at least one explored class");
    }
    std::array<double, 4> log_z{};
    std::vector<double> terms;
    for (size_t k = 0; k < 4; k++) {
        terms.clear();
        for (const auto &[w, n] : hists[k].entries) {
            terms.push_back(log_term(std::log(static_cast<double>(n)), w, beta));
        }
        log_z[k] = log_sum_exp(terms.data(), terms.size());
    }
    return normalize_logs(log_z);
}

ClassLabel limit_choice(const Octet &octet) {
    ClassLabel best = kTiePriority[0];
    bool have = false;
    for (ClassLabel c : kTiePriority) {
        const auto &e = octet[class_index(c)];
        if (!e.explored()) {
            continue;
        }
        const auto &b = octet[class_index(best)];
        if (!have || e.w_star < b.w_star - kWeightTolerance ||
            (std::abs(e.w_star - b.w_star) <= kWeightTolerance && e.n_star > b.n_star)) {
            best = c;
            have = true;
        }
    }
    if (!have) {
        throw NoDataError("no explored class");
    }
    return best;
}

double dominance_diagnostic(const ClassHistogram &h, double beta) {
    if (h.empty()) {
        throw NoDataError("dominance of an empty histogram");
    }
    OctetEntry top = lightest(h);
    if (std::isinf(top.w_star) || (std::isinf(beta) && beta > 0)) {
        return 1.0;
    }
    std::vector<double> terms;
    for (const auto &[w, n] : h.entries) {
        terms.push_back(log_term(std::log(static_cast<double>(n)), w, beta));
    }
    double lead = log_term(std::log(static_cast<double>(top.n_star)), top.w_star, beta);
    return std::min(1.0, std::exp(lead - log_sum_exp(terms.data(), terms.size())));
}

ClassHistogram metropolis_explore(const CodeLayout &layout, const NoiseParams &sample_noise,
                                  const SamplerConfig &config, const PauliChain &start, Rng &rng,
                                  std::vector<PauliChain> *recorded) {
    uint64_t steps = config.steps ? config.steps : default_steps(layout.distance());
    uint64_t stride = std::max<uint64_t>(1, config.record_stride);
    ChainWalker walker(layout, sample_noise.alpha_x, sample_noise.alpha_y, sample_noise.beta, start);
    absl::flat_hash_map<ChainKey, double> seen;
    seen.reserve(static_cast<size_t>(std::min<uint64_t>(steps / stride + 1, 1u << 20)));

    auto record = [&] {
        auto [it, inserted] = seen.try_emplace(walker.key(), walker.weight());
        if (inserted && recorded) {
            recorded->push_back(walker.chain());
        }
    };
    record();
    uint64_t until_record = stride;
    for (uint64_t t = 1; t <= steps; t++) {
        walker.step(rng);
        if (--until_record == 0) {
            record();
            until_record = stride;
        }
    }

    ClassHistogram h;
    h.label = logical_class(layout, start);
    for (const auto &[key, w] : seen) {
        h.add(w);
    }
    return h;
}

Decision decode(const CodeLayout &layout, const Syndrome &s, const NoiseParams &physical,
                const SamplerConfig &config, ProbabilityMode mode) {
    Decision out;
    if (s.is_trivial() && !config.explore_trivial) {
        out.fast_path = true;
        return out;
    }
    NoiseParams sample_noise = noise_from_alpha(config.p_sample, physical.alpha_x, physical.alpha_y);
    std::array<ClassHistogram, 4> hists;
    for (ClassLabel c : kAllClasses) {
        Rng rng(derive_seed(config.seed, {class_index(c)}));
        PauliChain start = initial_chain(layout, s, c, rng);
        hists[class_index(c)] = metropolis_explore(layout, sample_noise, config, start, rng);
        hists[class_index(c)].label = c;
    }
    out.octet = octet_of(hists);
    out.probabilities = class_probabilities(hists, physical.beta, mode);
    out.chosen = choose_class(out.probabilities);
    for (size_t k = 0; k < 4; k++) {
        out.dominance[k] = hists[k].empty() ? 1.0 : dominance_diagnostic(hists[k], physical.beta);
    }
    if (config.keep_histograms) {
        out.histograms = std::move(hists);
    }
    return out;
}

}  // namespace ewd
