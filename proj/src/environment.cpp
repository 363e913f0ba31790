#include "symban/environment.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "symban/errors.hpp"

namespace symban {

const char* to_string(ArmSetKind k) {
    switch (k) {
        case ArmSetKind::Sphere: return "sphere";
        case ArmSetKind::Cube: return "cube";
        case ArmSetKind::Finite: return "finite";
    }
    return "?";
}

ArmSetKind arm_set_from_string(std::string_view name) {
    if (name == "sphere") return ArmSetKind::Sphere;
    if (name == "cube") return ArmSetKind::Cube;
    if (name == "finite") return ArmSetKind::Finite;
    throw ArgumentError("unknown arm set: " + std::string(name));
}

Partition random_partition(int d, int d0, PartitionClass c, Rng& rng) {
    if (d0 < 1 || d0 > d) throw ArgumentError("random_partition: d0 out of [1, d]");
    for (;;) {
        Partition p = Partition::finest(d);
        try {
            while (p.block_count() > d0) {
                auto pairs = coarsen_pairs(p, c);
                auto [a, b] = pairs[rng.uniform_int(pairs.size())];
                p = merge_blocks(p, a, b);
            }
            return p;
        } catch (const NoCoarseningError&) {
            // non-nesting walks can dead-end (NN is not a lattice); retry
            continue;
        }
    }
}

Eigen::VectorXd random_theta(const Partition& p, std::optional<double> eps0,
                             double theta_scale, Rng& rng) {
    const int k = p.block_count();
    if (eps0 && *eps0 > 0.0 && *eps0 * (k - 1) > 2.0 * theta_scale)
        throw InfeasibleSeparation("random_theta: eps0 * (blocks - 1) > 2 * theta_scale");
    const SubspaceModel m(p);
    auto block_margin = [&](const Eigen::VectorXd& coeffs) {
        double margin = std::numeric_limits<double>::infinity();
        for (int a = 0; a < k; ++a)
            for (int b = a + 1; b < k; ++b)
                margin = std::min(margin, std::abs(coeffs[a] - coeffs[b]));
        return margin;
    };
    Eigen::VectorXd coeffs(k);
    for (int attempt = 0; attempt < 100000; ++attempt) {
        for (int b = 0; b < k; ++b) coeffs[b] = rng.uniform(-theta_scale, theta_scale);
        if (!eps0 || *eps0 <= 0.0 || block_margin(coeffs) >= *eps0) return m.expand(coeffs);
    }
    throw InfeasibleSeparation("random_theta: rejection budget exhausted");
}

double pull(const BanditEnvironment& env, const Eigen::VectorXd& x, Rng& rng) {
    if (x.size() != env.d) throw DimensionMismatch("pull: arm length != d");
    return x.dot(env.theta_star) + env.sigma * rng.normal();
}

double instantaneous_regret(const BanditEnvironment& env, const Eigen::VectorXd& x) {
    const double r = env.optimal_value - x.dot(env.theta_star);
    if (r < -1e-9 * (1.0 + std::abs(env.optimal_value)))
        throw Error("instantaneous_regret: arm beats the optimum; broken environment");
    return std::max(0.0, r);
}

Eigen::VectorXd best_arm_for(const BanditEnvironment& env, const Eigen::VectorXd& v) {
    if (v.size() != env.d) throw DimensionMismatch("best_arm_for: length != d");
    switch (env.arm_set) {
        case ArmSetKind::Sphere: {
            const double norm = v.norm();
            if (norm == 0.0)
                return Eigen::VectorXd::Unit(env.d, 0) * std::sqrt(double(env.d));
            return v * (std::sqrt(double(env.d)) / norm);
        }
        case ArmSetKind::Cube: {
            Eigen::VectorXd arm(env.d);
            for (int i = 0; i < env.d; ++i) arm[i] = v[i] < 0.0 ? -1.0 : 1.0;
            return arm;
        }
        case ArmSetKind::Finite: {
            const Eigen::VectorXd* best = nullptr;
            double best_val = 0.0;
            for (const auto& x : env.finite_arms) {
                const double val = x.dot(v);
                if (best == nullptr || val > best_val) {
                    best = &x;
                    best_val = val;
                }
            }
            return *best;
        }
    }
    throw Error("best_arm_for: unreachable");
}

Eigen::VectorXd sample_exploration_arm(const BanditEnvironment& env, Rng& rng) {
    switch (env.arm_set) {
        case ArmSetKind::Sphere:
            return sphere_exploration_sampler(env.d, rng);
        case ArmSetKind::Cube: {
            // Rademacher corners: E[x x^T] = I, so C_min = 1
            Eigen::VectorXd x(env.d);
            for (int i = 0; i < env.d; ++i) x[i] = rng.uniform() < 0.5 ? -1.0 : 1.0;
            return x;
        }
        case ArmSetKind::Finite: {
            const double u = rng.uniform();
            double acc = 0.0;
            for (int i = 0; i < env.finite_exploration_weights.size(); ++i) {
                acc += env.finite_exploration_weights[i];
                if (u < acc) return env.finite_arms[static_cast<size_t>(i)];
            }
            return env.finite_arms.back();
        }
    }
    throw Error("sample_exploration_arm: unreachable");
}

namespace {

void finalize(BanditEnvironment& env) {
    env.optimal_arm = best_arm_for(env, env.theta_star);
    env.optimal_value = env.optimal_arm.dot(env.theta_star);
    switch (env.arm_set) {
        case ArmSetKind::Sphere:
            env.k_x = double(env.d);
            env.r_max = std::sqrt(double(env.d)) * env.theta_star.norm();
            env.c_min = 1.0;
            break;
        case ArmSetKind::Cube:
            env.k_x = double(env.d);
            env.r_max = env.theta_star.lpNorm<1>();
            env.c_min = 1.0;
            break;
        case ArmSetKind::Finite: {
            env.k_x = 0.0;
            env.r_max = 0.0;
            for (const auto& x : env.finite_arms) {
                env.k_x = std::max(env.k_x, x.squaredNorm());
                env.r_max = std::max(env.r_max, std::abs(x.dot(env.theta_star)));
            }
            auto design = exploratory_distribution(env.finite_arms);
            env.finite_exploration_weights = design.weights;
            env.c_min = design.c_min;
            break;
        }
    }
}

}  // namespace

BanditEnvironment make_environment(const EnvConfig& config, Rng& rng) {
    if (config.d < 1) throw ArgumentError("make_environment: d must be positive");
    if (config.d0 < 1 || config.d0 > config.d)
        throw ArgumentError("make_environment: d0 out of [1, d]");
    if (config.sigma < 0.0) throw ArgumentError("make_environment: sigma < 0");
    if (config.arm_set == ArmSetKind::Finite)
        throw ArgumentError("make_environment: finite arm sets need explicit arms");

    BanditEnvironment env;
    env.d = config.d;
    env.arm_set = config.arm_set;
    env.sigma = config.sigma;
    env.true_partition = random_partition(config.d, config.d0, config.partition_class, rng);
    env.theta_star = random_theta(env.true_partition, config.eps0, config.theta_scale, rng);
    if (!config.eps0 || *config.eps0 <= 0.0) {
        // unit-norm theta keeps regret levels comparable across draws;
        // rescaling would shrink the eps0 gaps, so skip it in that mode
        const double norm = env.theta_star.norm();
        if (norm > 0.0) env.theta_star /= norm;
    }
    finalize(env);
    return env;
}

BanditEnvironment make_finite_environment(std::vector<Eigen::VectorXd> arms,
                                          Eigen::VectorXd theta_star,
                                          Partition true_partition, double sigma) {
    if (arms.empty()) throw EmptyArmSet("make_finite_environment: no arms");
    BanditEnvironment env;
    env.d = static_cast<int>(theta_star.size());
    if (true_partition.ground_set_size() != env.d)
        throw DimensionMismatch("make_finite_environment: partition size != d");
    for (const auto& x : arms)
        if (x.size() != env.d) throw DimensionMismatch("make_finite_environment: ragged arms");
    env.arm_set = ArmSetKind::Finite;
    env.finite_arms = std::move(arms);
    env.theta_star = std::move(theta_star);
    env.true_partition = std::move(true_partition);
    env.sigma = sigma;
    finalize(env);
    return env;
}

BanditEnvironment lower_bound_instance(int d, double epsilon, Rng& rng) {
    if (epsilon <= 0.0) throw ArgumentError("lower_bound_instance: epsilon must be positive");
    BanditEnvironment env;
    env.d = d;
    env.arm_set = ArmSetKind::Cube;
    env.sigma = 1.0;
    env.theta_star.resize(d);
    std::vector<int> plus, minus;
    for (int i = 0; i < d; ++i) {
        const bool up = rng.uniform() < 0.5;
        env.theta_star[i] = up ? epsilon : -epsilon;
        (up ? plus : minus).push_back(i + 1);
    }
    std::vector<std::vector<int>> blocks;
    if (!plus.empty()) blocks.push_back(plus);
    if (!minus.empty()) blocks.push_back(minus);
    env.true_partition = Partition(std::move(blocks), d);
    finalize(env);
    return env;
}

std::string snapshot(const BanditEnvironment& env, const EnvConfig& config) {
    std::ostringstream out;
    out.precision(17);
    out << "d = " << env.d << '\n';
    out << "d0 = " << env.true_partition.block_count() << '\n';
    out << "class = " << to_string(config.partition_class) << '\n';
    out << "sigma = " << env.sigma << '\n';
    out << "arm_set = " << to_string(env.arm_set) << '\n';
    out << "theta_star = ";
    for (int i = 0; i < env.d; ++i) out << (i ? "," : "") << env.theta_star[i];
    out << '\n';
    out << "partition = " << to_string(env.true_partition) << '\n';
    out << "seed = " << config.seed << '\n';
    return out.str();
}

}  // namespace symban
