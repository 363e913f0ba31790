#pragma once

#include <map>
#include <string>

#include "symban/bandits.hpp"

namespace symban {

/// Flat experiment configuration: parsed from a `key = value` file with
/// CLI-flag overrides applied on top (last writer wins).
struct ExperimentConfig {
    // environment
    int d = 4;
    int d0 = 2;
    PartitionClass partition_class = PartitionClass::NonCrossing;
    double sigma = 0.1;
    ArmSetKind arm_set = ArmSetKind::Sphere;
    std::optional<double> eps0;
    double theta_scale = 1.0;
    // algorithm
    AlgorithmName algorithm = AlgorithmName::EMC;
    SelectorKind selector = SelectorKind::Greedy;
    std::optional<int> t1;
    std::optional<int> t2;
    std::optional<double> lasso_lambda;
    double safety_c = 2.0;
    int candidate_arms_per_round = 256;
    double ridge_lambda = 1.0;
    double oful_delta = 0.0;        // 0 = 1/T
    double theta_norm_bound = 0.0;  // 0 = environment bound
    std::uint64_t pool_cap = 10'000'000;
    // harness
    std::int64_t T = 1000;
    std::uint64_t seed = 0;
    std::vector<std::uint64_t> seeds;
    std::int64_t stride = 0;  // 0 = max(1, T / 1000)
    int parallelism = 1;
    std::string out;

    void validate() const;  // throws ConfigError with the offending field
    std::int64_t effective_stride() const;
    AlgorithmConfig algorithm_config() const;
    EnvConfig env_config(std::uint64_t run_seed) const;
    std::map<std::string, std::string> snapshot() const;
};

// Set one field from its textual key (the config-file and CLI names
// coincide). Throws ConfigError on unknown keys or unparsable values.
void apply_key_value(ExperimentConfig& config, const std::string& key,
                     const std::string& value);

// Parse a flat `key = value` file ('#' comments, blank lines ignored).
ExperimentConfig parse_config_file(const std::string& path);

// Parse a seed list: comma-separated values, each either an integer or an
// inclusive range `a..b`.
std::vector<std::uint64_t> parse_seed_list(const std::string& text);

struct ExperimentRecord {
    std::map<std::string, std::string> config_snapshot;
    std::uint64_t seed = 0;
    std::string algorithm;
    std::optional<Partition> selected_partition;
    // cumulative noiseless regret sampled every `stride` rounds (the last
    // point always lands on T)
    std::vector<std::pair<std::int64_t, double>> cumulative_regret;
    double wall_time_ms = 0.0;
    std::map<std::string, std::string> metadata;
    bool ok = true;
    std::string error;
};

// One seeded run. Streams: the environment is generated from
// Rng::derive(seed, 1) and the trajectory from Rng::derive(seed, 2), so
// records are independent of sweep parallelism.
ExperimentRecord run_experiment(const ExperimentConfig& config, std::uint64_t seed);

// Order-stable seed sweep; per-seed failures are recorded, not thrown.
std::vector<ExperimentRecord> sweep(const ExperimentConfig& config,
                                    const std::vector<std::uint64_t>& seeds,
                                    int parallelism);

// CSV with header `seed,algorithm,t,cumulative_regret`, full double
// precision, one row per recorded point.
std::string csv_string(const std::vector<ExperimentRecord>& records);
void emit_csv(const std::vector<ExperimentRecord>& records, const std::string& path);

// Median regret polyline per algorithm with a shaded interquartile band.
std::string svg_string(const std::vector<ExperimentRecord>& records);
void render_svg(const std::vector<ExperimentRecord>& records, const std::string& path);

}  // namespace symban
