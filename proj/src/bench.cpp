#include "principar/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <numeric>
#include <random>
#include <unordered_set>

namespace principar {

std::vector<std::string> synthetic_keys(std::size_t entries, std::uint64_t seed) {
    static constexpr std::string_view kOnsets[] = {"b", "c", "d", "f", "g", "l", "m", "n", "p", "r",
                                                   "s", "t", "v", "br", "st", "tr", "pl", "gr"};
    static constexpr std::string_view kVowels[] = {"a", "e", "i", "o", "u", "ai", "ou"};
    std::mt19937_64 rng(seed);
    std::unordered_set<std::string> seen;
    std::vector<std::string> keys;
    keys.reserve(entries);
    while (keys.size() < entries) {
        int syllables = std::uniform_int_distribution<int>(2, 4)(rng);
        std::string w;
        for (int s = 0; s < syllables; ++s) {
            w += kOnsets[rng() % std::size(kOnsets)];
            w += kVowels[rng() % std::size(kVowels)];
        }
        w += "x";  // keeps generated words clear of the suffix rules
        if (seen.insert(w).second) keys.push_back(std::move(w));
    }
    return keys;
}

std::string synthetic_lexicon(const FeatureRegistry& reg, std::size_t entries, std::uint64_t seed) {
    (void)reg.require("cat");
    std::mt19937_64 rng(seed ^ 0x5eedull);
    std::string out;
    for (const auto& k : synthetic_keys(entries, seed)) {
        switch (rng() % 4) {
            case 0:
                out += "(" + k + " (subcat ((cat n) (nform norm))))\n";
                break;
            case 1:
                out += "(" + k + " (subcat ((cat v) -passive) (((cat n) (case acc)))))\n";
                break;
            case 2:
                out += "(" + k + " (subcat ((cat v) -passive)) (subcat ((cat n) (nform norm))))\n";
                break;
            default:
                out += "(" + k + " (subcat ((cat v) (vform ed) (tense past) -passive) (((cat n) (case acc)))))\n";
                break;
        }
    }
    return out;
}

namespace {

using Clock = std::chrono::steady_clock;

double micros(Clock::duration d) { return std::chrono::duration<double, std::micro>(d).count(); }

void summarize(std::vector<double>& samples, double& mean, double& median) {
    if (samples.empty()) return;
    mean = std::accumulate(samples.begin(), samples.end(), 0.0) / static_cast<double>(samples.size());
    auto mid = samples.begin() + static_cast<std::ptrdiff_t>(samples.size() / 2);
    std::nth_element(samples.begin(), mid, samples.end());
    median = *mid;
}

}  // namespace

LatencyReport bench_lexicon(const FeatureRegistry& reg, const std::string& dir, std::size_t entries,
                            std::size_t lookups, std::uint64_t seed) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    LatencyReport r;
    r.entries = entries;
    const std::string table = (fs::path(dir) / "secondary.plex").string();
    auto t0 = Clock::now();
    r.table = compile_secondary(synthetic_lexicon(reg, entries, seed), table);
    r.build_seconds = std::chrono::duration<double>(Clock::now() - t0).count();

    auto keys = synthetic_keys(entries, seed);
    std::mt19937_64 rng(seed + 1);
    std::vector<double> cold, warm;
    cold.reserve(lookups);
    warm.reserve(lookups);
    std::unique_ptr<LexiconStore> store;
    std::size_t last_pass = 0;
    while (cold.size() < lookups) {
        // A fresh store per pass keeps every lookup a primary miss.
        store = std::make_unique<LexiconStore>(reg, "", table);
        last_pass = 0;
        std::shuffle(keys.begin(), keys.end(), rng);
        for (const auto& k : keys) {
            if (cold.size() >= lookups) break;
            auto s = Clock::now();
            auto e = store->get(k);
            cold.push_back(micros(Clock::now() - s));
            ++last_pass;
            if (!e) throw LexiconError("synthetic key missing from table: " + k);
        }
    }
    std::uniform_int_distribution<std::size_t> pick(0, last_pass - 1);
    for (std::size_t i = 0; i < lookups; ++i) {
        const auto& k = keys[pick(rng)];
        auto s = Clock::now();
        auto e = store->get(k);
        warm.push_back(micros(Clock::now() - s));
        if (!e) throw LexiconError("cached key missing: " + k);
    }
    r.cold_lookups = cold.size();
    r.warm_lookups = warm.size();
    summarize(cold, r.cold_mean_us, r.cold_median_us);
    summarize(warm, r.warm_mean_us, r.warm_median_us);
    return r;
}

Cfg ambiguous_cfg() {
    Cfg g;
    g.nonterminals = {"S"};
    g.terminals = {"a"};
    g.productions = {{"S", {"S", "S"}}, {"S", {"a"}}};
    return g;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const auto n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

ScalingReport bench_scaling(const std::vector<int>& lengths, double min_seconds_per_length) {
    ScalingReport r;
    auto g = compile_cfg(ambiguous_cfg());
    std::vector<double> xs;
    for (int n : lengths) {
        std::vector<std::string> sentence(static_cast<std::size_t>(n), "a");
        int runs = 0;
        std::uint64_t items = 0;
        auto start = Clock::now();
        double elapsed = 0;
        do {
            auto res = parse_tokens(*g.net, *g.lexicon, sentence);
            items = res.stats.items;
            ++runs;
            elapsed = std::chrono::duration<double>(Clock::now() - start).count();
        } while (elapsed < min_seconds_per_length);
        r.lengths.push_back(n);
        r.seconds.push_back(elapsed / runs);
        r.items.push_back(items);
        xs.push_back(n);
    }
    r.slope = loglog_slope(xs, r.seconds);
    return r;
}

}  // namespace principar
