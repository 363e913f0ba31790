#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "symban/environment.hpp"
#include "symban/model_selection.hpp"

namespace symban {

enum class AlgorithmName { EMC, EMC_WS, OFUL_FULL, ESTC_LASSO };
enum class SelectorKind { BruteForce, Greedy };

const char* to_string(AlgorithmName name);
AlgorithmName algorithm_from_string(std::string_view name);
const char* to_string(SelectorKind s);
SelectorKind selector_from_string(std::string_view name);

struct OfulParams {
    double ridge_lambda = 1.0;
    double delta = 0.0;             // 0 means 1/T
    double theta_norm_bound = 0.0;  // 0 means the environment's bound
};

struct AlgorithmConfig {
    AlgorithmName name = AlgorithmName::EMC;
    std::optional<int> t1;  // exploration length; default from t1_default
    std::optional<int> t2;  // EMC-WS exploration length
    int d0 = 1;
    PartitionClass partition_class = PartitionClass::NonCrossing;
    SelectorKind selector = SelectorKind::Greedy;
    std::optional<double> lasso_lambda;  // default 2 sigma sqrt(2 ln(2d) / t1)
    OfulParams oful;
    int candidate_arms_per_round = 256;  // continuous arm sets only
    double safety_c = 2.0;               // hidden constant in t2_default
    double eps0 = 0.0;                   // separation used by t2_default
    std::uint64_t pool_cap = 10'000'000;
};

struct RoundRecord {
    std::int64_t t = 0;
    Eigen::VectorXd arm;
    double observed_reward = 0.0;
    double instantaneous_regret = 0.0;
};

struct Trajectory {
    std::vector<RoundRecord> rounds;
    std::optional<Partition> selected_partition;
    std::int64_t phase_boundary = 0;
    std::vector<std::string> warnings;

    // cumulative noiseless regret at each recorded round
    std::vector<double> cumulative_regret() const;
    double final_regret() const;
};

// Exploration length of the explore-models-then-commit schedule:
// ceil(r_max^{-2/3} sigma^{2/3} c_min^{-1/3} k_x^{1/3} d0^{1/3} T^{2/3}
//      ln(d T)^{1/3}), clamped to [1, T-1].
int t1_default(std::int64_t T, int d0, int d, double sigma, double c_min, double k_x,
               double r_max);

// Exploration length under well-separated models:
// ceil(safety_c sigma^2 k_x^2 d0 ln(d T) / (c_min^2 eps0^2)), clamped to
// [1, T-1].
int t2_default(std::int64_t T, int d0, int d, double sigma, double c_min, double k_x,
               double eps0, double safety_c);

// Explore t1 rounds with the exploratory sampler, select the
// residual-minimizing subspace, then commit to the greedy arm of the
// fitted parameter.
Trajectory run_emc(const BanditEnvironment& env, std::int64_t T, const AlgorithmConfig& cfg,
                   Rng& rng);

// Explore t2 rounds, select, then run optimism (OFUL) in the selected
// subspace's reduced coordinates.
Trajectory run_emc_ws(const BanditEnvironment& env, std::int64_t T,
                      const AlgorithmConfig& cfg, Rng& rng);

// Plain OFUL in the ambient d dimensions (baseline).
Trajectory run_oful_full(const BanditEnvironment& env, std::int64_t T,
                         const AlgorithmConfig& cfg, Rng& rng);

// Explore-then-commit with Lasso on the prefix-sum reparametrization
// u_j = sum_{i <= j} x_i, theta_i = sum_{j >= i} phi_j (the sparse view
// of interval partitions).
Trajectory run_estc_lasso(const BanditEnvironment& env, std::int64_t T,
                          const AlgorithmConfig& cfg, Rng& rng);

// Dispatch by cfg.name.
Trajectory run_algorithm(const BanditEnvironment& env, std::int64_t T,
                         const AlgorithmConfig& cfg, Rng& rng);

struct LassoResult {
    Eigen::VectorXd phi;
    bool converged = true;
    int sweeps = 0;
};

// Cyclic coordinate descent with soft thresholding on
// (1/2n) ||Y - U phi||^2 + lambda ||phi||_1.
LassoResult lasso_coordinate_descent(const Eigen::MatrixXd& U, const Eigen::VectorXd& Y,
                                     double lambda, double tol = 1e-8,
                                     int max_sweeps = 10000);

// The prefix-sum feature transform used by ESTC and its inverse on
// parameters (phi_i = theta_i - theta_{i+1}, phi_d = theta_d).
Eigen::VectorXd prefix_sum_features(const Eigen::VectorXd& x);
Eigen::VectorXd suffix_sum_parameters(const Eigen::VectorXd& phi);

}  // namespace symban
