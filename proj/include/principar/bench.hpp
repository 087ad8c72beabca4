#pragma once

// Reproducible workloads for the lexicon latency and parse-time scaling
// measurements.

#include <cstdint>
#include <string>
#include <vector>

#include "principar/cfg.hpp"
#include "principar/lexicon.hpp"

namespace principar {

/// Text lexicon with `entries` distinct words. Uses only `cat`, `nform`,
/// `case`, `vform`, `tense` and `passive`; the output depends only on the seed.
std::string synthetic_lexicon(const FeatureRegistry& reg, std::size_t entries, std::uint64_t seed);

/// Keys of a synthetic lexicon, in generation order.
std::vector<std::string> synthetic_keys(std::size_t entries, std::uint64_t seed);

struct LatencyReport {
    std::size_t entries = 0;
    std::size_t cold_lookups = 0;
    std::size_t warm_lookups = 0;
    double build_seconds = 0;
    double cold_mean_us = 0;
    double cold_median_us = 0;
    double warm_mean_us = 0;
    double warm_median_us = 0;
    TableStats table;
};

/// Compiles a synthetic lexicon into `dir/secondary.plex`, then times cold
/// lookups (fresh primary table, every key a miss) and warm lookups (keys
/// already cached in memory).
LatencyReport bench_lexicon(const FeatureRegistry& reg, const std::string& dir, std::size_t entries,
                            std::size_t lookups, std::uint64_t seed);

/// `S -> S S | a`: every bracketing of a^n is a tree.
Cfg ambiguous_cfg();

struct ScalingReport {
    std::vector<int> lengths;
    std::vector<double> seconds;  // per parse
    std::vector<std::uint64_t> items;
    double slope = 0;
};

/// Parses a^n for each length, repeating short inputs to get stable timings,
/// and fits log(time) against log(n).
ScalingReport bench_scaling(const std::vector<int>& lengths, double min_seconds_per_length = 0.2);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace principar
