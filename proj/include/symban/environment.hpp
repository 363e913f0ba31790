#pragma once

#include <optional>
#include <string>

#include "symban/subspace.hpp"

namespace symban {

enum class ArmSetKind { Sphere, Cube, Finite };

const char* to_string(ArmSetKind k);
ArmSetKind arm_set_from_string(std::string_view name);

/// Ground-truth bandit instance: theta_star is block-constant on
/// true_partition, rewards are <x, theta_star> + sigma * N(0,1).
struct BanditEnvironment {
    int d = 0;
    ArmSetKind arm_set = ArmSetKind::Sphere;
    std::vector<Eigen::VectorXd> finite_arms;  // Finite only
    Eigen::VectorXd theta_star;
    Partition true_partition{Partition::finest(1)};
    double sigma = 0.0;
    double r_max = 0.0;   // max |<x, theta_star>| over the arm set
    double k_x = 0.0;     // max ||x||^2 over the arm set
    double c_min = 1.0;   // exploratory-distribution value C_min
    Eigen::VectorXd optimal_arm;
    double optimal_value = 0.0;
    Eigen::VectorXd finite_exploration_weights;  // Finite only
};

struct EnvConfig {
    int d = 4;
    int d0 = 2;
    PartitionClass partition_class = PartitionClass::NonCrossing;
    double sigma = 0.1;
    ArmSetKind arm_set = ArmSetKind::Sphere;
    std::optional<double> eps0;  // well-separated mode
    double theta_scale = 1.0;
    std::uint64_t seed = 0;
};

// Class-c partition with exactly d0 blocks via a merge walk from the
// finest partition (uniform choice among legal one-step coarsenings; not
// uniform over the class). A non-nesting walk can rarely dead-end and is
// restarted.
Partition random_partition(int d, int d0, PartitionClass c, Rng& rng);

// Per-block values uniform on [-theta_scale, theta_scale]; with eps0 set,
// rejection-sample until cross-block gaps are all >= eps0.
Eigen::VectorXd random_theta(const Partition& p, std::optional<double> eps0,
                             double theta_scale, Rng& rng);

// One reward observation.
double pull(const BanditEnvironment& env, const Eigen::VectorXd& x, Rng& rng);

// Noiseless regret of playing x; clamped at zero against roundoff.
double instantaneous_regret(const BanditEnvironment& env, const Eigen::VectorXd& x);

// Reward-maximizing arm for an arbitrary direction v (closed form on the
// sphere and cube, brute force on finite sets).
Eigen::VectorXd best_arm_for(const BanditEnvironment& env, const Eigen::VectorXd& v);

// One exploratory arm: uniform on the sqrt(d) sphere, a Rademacher corner
// of the cube, or a draw from the finite set's exploratory weights.
Eigen::VectorXd sample_exploration_arm(const BanditEnvironment& env, Rng& rng);

// Build an instance from config (theta normalized to ||theta|| = 1 unless
// eps0 mode is active).
BanditEnvironment make_environment(const EnvConfig& config, Rng& rng);

// Finite-arm instance with explicit ground truth.
BanditEnvironment make_finite_environment(std::vector<Eigen::VectorXd> arms,
                                          Eigen::VectorXd theta_star,
                                          Partition true_partition, double sigma);

// Stress family: cube arm set, theta uniform on {-eps, +eps}^d, true
// partition the sign partition (at most two blocks).
BanditEnvironment lower_bound_instance(int d, double epsilon, Rng& rng);

// Flat key = value snapshot (keys: d, d0, class, sigma, arm_set,
// theta_star, partition, seed) for exact replay.
std::string snapshot(const BanditEnvironment& env, const EnvConfig& config);

}  // namespace symban
