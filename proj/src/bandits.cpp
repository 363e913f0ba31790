#include "symban/bandits.hpp"

#include <Eigen/Cholesky>
#include <cmath>

#include "symban/errors.hpp"

namespace symban {

const char* to_string(AlgorithmName name) {
    switch (name) {
        case AlgorithmName::EMC: return "emc";
        case AlgorithmName::EMC_WS: return "emc-ws";
        case AlgorithmName::OFUL_FULL: return "oful";
        case AlgorithmName::ESTC_LASSO: return "estc-lasso";
    }
    return "?";
}

AlgorithmName algorithm_from_string(std::string_view name) {
    if (name == "emc") return AlgorithmName::EMC;
    if (name == "emc-ws") return AlgorithmName::EMC_WS;
    if (name == "oful") return AlgorithmName::OFUL_FULL;
    if (name == "estc-lasso") return AlgorithmName::ESTC_LASSO;
    throw ArgumentError("unknown algorithm: " + std::string(name));
}

const char* to_string(SelectorKind s) {
    return s == SelectorKind::BruteForce ? "brute-force" : "greedy";
}

SelectorKind selector_from_string(std::string_view name) {
    if (name == "brute-force" || name == "bruteforce") return SelectorKind::BruteForce;
    if (name == "greedy") return SelectorKind::Greedy;
    throw ArgumentError("unknown selector: " + std::string(name));
}

std::vector<double> Trajectory::cumulative_regret() const {
    std::vector<double> out;
    out.reserve(rounds.size());
    double acc = 0.0;
    for (const auto& r : rounds) {
        acc += r.instantaneous_regret;
        out.push_back(acc);
    }
    return out;
}

double Trajectory::final_regret() const {
    double acc = 0.0;
    for (const auto& r : rounds) acc += r.instantaneous_regret;
    return acc;
}

namespace {

void require_positive(double v, const char* what) {
    if (!(v > 0.0)) throw ArgumentError(std::string("phase length: ") + what +
                                        " must be positive");
}

int clamp_phase(double value, std::int64_t T) {
    if (!(T >= 2)) return 1;
    const double c = std::ceil(value);
    if (c < 1.0) return 1;
    if (c > static_cast<double>(T - 1)) return static_cast<int>(T - 1);
    return static_cast<int>(c);
}

}  // namespace

int t1_default(std::int64_t T, int d0, int d, double sigma, double c_min, double k_x,
               double r_max) {
    require_positive(static_cast<double>(T), "T");
    require_positive(static_cast<double>(d0), "d0");
    require_positive(static_cast<double>(d), "d");
    require_positive(sigma, "sigma");
    require_positive(c_min, "c_min");
    require_positive(k_x, "k_x");
    require_positive(r_max, "r_max");
    const double value = std::pow(r_max, -2.0 / 3.0) * std::pow(sigma, 2.0 / 3.0) *
                         std::pow(c_min, -1.0 / 3.0) * std::pow(k_x, 1.0 / 3.0) *
                         std::pow(static_cast<double>(d0), 1.0 / 3.0) *
                         std::pow(static_cast<double>(T), 2.0 / 3.0) *
                         std::cbrt(std::log(static_cast<double>(d) * static_cast<double>(T)));
    return clamp_phase(value, T);
}

int t2_default(std::int64_t T, int d0, int d, double sigma, double c_min, double k_x,
               double eps0, double safety_c) {
    require_positive(static_cast<double>(T), "T");
    require_positive(static_cast<double>(d0), "d0");
    require_positive(static_cast<double>(d), "d");
    require_positive(sigma, "sigma");
    require_positive(c_min, "c_min");
    require_positive(k_x, "k_x");
    require_positive(eps0, "eps0");
    require_positive(safety_c, "safety_c");
    const double value = safety_c * sigma * sigma * k_x * k_x * static_cast<double>(d0) *
                         std::log(static_cast<double>(d) * static_cast<double>(T)) /
                         (c_min * c_min * eps0 * eps0);
    return clamp_phase(value, T);
}

namespace {

void record_round(Trajectory& traj, const BanditEnvironment& env, std::int64_t t,
                  Eigen::VectorXd arm, double reward) {
    RoundRecord r;
    r.t = t;
    r.instantaneous_regret = instantaneous_regret(env, arm);
    r.arm = std::move(arm);
    r.observed_reward = reward;
    traj.rounds.push_back(std::move(r));
}

// Exploration phase shared by EMC / EMC-WS / ESTC.
DesignSample explore(Trajectory& traj, const BanditEnvironment& env, int horizon, Rng& rng) {
    DesignSample data;
    data.X.resize(horizon, env.d);
    data.Y.resize(horizon);
    for (int t = 1; t <= horizon; ++t) {
        Eigen::VectorXd x = sample_exploration_arm(env, rng);
        const double y = pull(env, x, rng);
        data.X.row(t - 1) = x;
        data.Y[t - 1] = y;
        record_round(traj, env, t, std::move(x), y);
    }
    return data;
}

SelectionResult select_model(const DesignSample& data, const BanditEnvironment& env,
                             const AlgorithmConfig& cfg) {
    if (cfg.selector == SelectorKind::Greedy)
        return select_greedy(data, cfg.d0, cfg.partition_class);
    return select_bruteforce(
        data, build_model_pool(env.d, cfg.d0, cfg.partition_class, cfg.pool_cap));
}

int exploration_length(const BanditEnvironment& env, std::int64_t T,
                       const AlgorithmConfig& cfg) {
    int t1;
    if (cfg.t1) {
        t1 = *cfg.t1;
    } else {
        t1 = t1_default(T, cfg.d0, env.d, env.sigma, env.c_min, env.k_x, env.r_max);
    }
    if (t1 < 1 || t1 >= T) throw InvalidPhase("t1 must satisfy 1 <= t1 < T");
    return t1;
}

void commit_greedily(Trajectory& traj, const BanditEnvironment& env,
                     const Eigen::VectorXd& theta_hat, std::int64_t from, std::int64_t T,
                     Rng& rng) {
    // reward maximization: argmax_x <theta_hat, x>
    const Eigen::VectorXd arm = best_arm_for(env, theta_hat);
    for (std::int64_t t = from; t <= T; ++t)
        record_round(traj, env, t, arm, pull(env, arm, rng));
}

// Optimism loop in the reduced coordinates of a model. Runs rounds
// [from, T]; phase-local time indexes the confidence radius.
void run_oful_phase(Trajectory& traj, const BanditEnvironment& env, const SubspaceModel& m,
                    std::int64_t from, std::int64_t T, const AlgorithmConfig& cfg, Rng& rng) {
    const int k = m.k();
    const double ridge = cfg.oful.ridge_lambda;
    const double delta = cfg.oful.delta > 0.0 ? cfg.oful.delta : 1.0 / static_cast<double>(T);
    const double bound =
        cfg.oful.theta_norm_bound > 0.0 ? cfg.oful.theta_norm_bound : env.theta_star.norm();

    Eigen::MatrixXd V = ridge * Eigen::MatrixXd::Identity(k, k);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(k);
    double max_feature_norm = 0.0;

    std::vector<Eigen::VectorXd> candidates;
    for (std::int64_t t = from; t <= T; ++t) {
        const std::int64_t t_phase = t - from + 1;
        const Eigen::LDLT<Eigen::MatrixXd> vldlt(V);
        const Eigen::VectorXd theta_red = vldlt.solve(b);

        candidates.clear();
        if (env.arm_set == ArmSetKind::Finite) {
            candidates = env.finite_arms;
        } else {
            for (int i = 0; i < cfg.candidate_arms_per_round; ++i)
                candidates.push_back(sample_exploration_arm(env, rng));
            // the greedy arm of the current estimate as an extra candidate
            candidates.push_back(best_arm_for(env, m.expand(theta_red)));
        }

        std::vector<Eigen::VectorXd> features;
        features.reserve(candidates.size());
        for (const auto& x : candidates) {
            features.push_back(reduced_features(x, m));
            max_feature_norm = std::max(max_feature_norm, features.back().norm());
        }
        const double radius =
            env.sigma * std::sqrt(k * std::log((1.0 + t_phase * max_feature_norm *
                                                          max_feature_norm / ridge) /
                                               delta)) +
            std::sqrt(ridge) * bound;

        int best = 0;
        double best_ucb = -std::numeric_limits<double>::infinity();
        for (size_t i = 0; i < candidates.size(); ++i) {
            const Eigen::VectorXd& phi = features[i];
            const double width = std::sqrt(std::max(0.0, phi.dot(vldlt.solve(phi))));
            const double ucb = theta_red.dot(phi) + radius * width;
            if (ucb > best_ucb) {
                best_ucb = ucb;
                best = static_cast<int>(i);
            }
        }

        const Eigen::VectorXd& phi = features[static_cast<size_t>(best)];
        const double y = pull(env, candidates[static_cast<size_t>(best)], rng);
        V += phi * phi.transpose();
        b += y * phi;
        record_round(traj, env, t, candidates[static_cast<size_t>(best)], y);
    }
}

}  // namespace

Trajectory run_emc(const BanditEnvironment& env, std::int64_t T, const AlgorithmConfig& cfg,
                   Rng& rng) {
    Trajectory traj;
    const int t1 = exploration_length(env, T, cfg);
    traj.phase_boundary = t1;
    const DesignSample data = explore(traj, env, t1, rng);
    SelectionResult sel = select_model(data, env, cfg);
    traj.selected_partition = sel.model.partition();
    commit_greedily(traj, env, sel.fit.theta_hat, t1 + 1, T, rng);
    return traj;
}

Trajectory run_emc_ws(const BanditEnvironment& env, std::int64_t T,
                      const AlgorithmConfig& cfg, Rng& rng) {
    Trajectory traj;
    int t2;
    if (cfg.t2) {
        t2 = *cfg.t2;
    } else {
        t2 = t2_default(T, cfg.d0, env.d, env.sigma, env.c_min, env.k_x, cfg.eps0,
                        cfg.safety_c);
    }
    if (t2 < 1 || t2 >= T) throw InvalidPhase("t2 must satisfy 1 <= t2 < T");
    traj.phase_boundary = t2;
    const DesignSample data = explore(traj, env, t2, rng);
    SelectionResult sel = select_model(data, env, cfg);
    traj.selected_partition = sel.model.partition();
    run_oful_phase(traj, env, sel.model, t2 + 1, T, cfg, rng);
    return traj;
}

Trajectory run_oful_full(const BanditEnvironment& env, std::int64_t T,
                         const AlgorithmConfig& cfg, Rng& rng) {
    if (T < 1) throw ArgumentError("run_oful_full: T must be positive");
    Trajectory traj;
    traj.phase_boundary = 0;
    run_oful_phase(traj, env, SubspaceModel(Partition::finest(env.d)), 1, T, cfg, rng);
    return traj;
}

Eigen::VectorXd prefix_sum_features(const Eigen::VectorXd& x) {
    Eigen::VectorXd u(x.size());
    double acc = 0.0;
    for (int i = 0; i < x.size(); ++i) {
        acc += x[i];
        u[i] = acc;
    }
    return u;
}

Eigen::VectorXd suffix_sum_parameters(const Eigen::VectorXd& phi) {
    Eigen::VectorXd theta(phi.size());
    double acc = 0.0;
    for (int i = static_cast<int>(phi.size()) - 1; i >= 0; --i) {
        acc += phi[i];
        theta[i] = acc;
    }
    return theta;
}

LassoResult lasso_coordinate_descent(const Eigen::MatrixXd& U, const Eigen::VectorXd& Y,
                                     double lambda, double tol, int max_sweeps) {
    if (U.rows() != Y.size()) throw DimensionMismatch("lasso: U rows != Y length");
    if (lambda < 0.0) throw ArgumentError("lasso: lambda < 0");
    const int n = static_cast<int>(U.rows());
    const int p = static_cast<int>(U.cols());

    LassoResult res;
    res.phi = Eigen::VectorXd::Zero(p);
    Eigen::VectorXd col_sq(p);
    for (int j = 0; j < p; ++j) col_sq[j] = U.col(j).squaredNorm() / n;
    Eigen::VectorXd r = Y;

    auto soft = [](double z, double g) {
        if (z > g) return z - g;
        if (z < -g) return z + g;
        return 0.0;
    };

    for (int sweep = 1; sweep <= max_sweeps; ++sweep) {
        double max_delta = 0.0;
        for (int j = 0; j < p; ++j) {
            if (col_sq[j] == 0.0) continue;
            const double old = res.phi[j];
            const double rho = U.col(j).dot(r) / n + col_sq[j] * old;
            const double next = soft(rho, lambda) / col_sq[j];
            if (next != old) {
                r -= (next - old) * U.col(j);
                res.phi[j] = next;
                max_delta = std::max(max_delta, std::abs(next - old));
            }
        }
        res.sweeps = sweep;
        if (max_delta < tol) return res;
    }
    res.converged = false;
    return res;
}

Trajectory run_estc_lasso(const BanditEnvironment& env, std::int64_t T,
                          const AlgorithmConfig& cfg, Rng& rng) {
    Trajectory traj;
    const int t1 = exploration_length(env, T, cfg);
    traj.phase_boundary = t1;
    const DesignSample data = explore(traj, env, t1, rng);

    Eigen::MatrixXd U(t1, env.d);
    for (int i = 0; i < t1; ++i) U.row(i) = prefix_sum_features(data.X.row(i));
    const double lambda = cfg.lasso_lambda
                              ? *cfg.lasso_lambda
                              : 2.0 * env.sigma * std::sqrt(2.0 * std::log(2.0 * env.d) / t1);
    LassoResult lasso = lasso_coordinate_descent(U, data.Y, lambda);
    if (!lasso.converged)
        traj.warnings.push_back("lasso: max sweeps reached before tolerance");

    commit_greedily(traj, env, suffix_sum_parameters(lasso.phi), t1 + 1, T, rng);
    return traj;
}

Trajectory run_algorithm(const BanditEnvironment& env, std::int64_t T,
                         const AlgorithmConfig& cfg, Rng& rng) {
    switch (cfg.name) {
        case AlgorithmName::EMC: return run_emc(env, T, cfg, rng);
        case AlgorithmName::EMC_WS: return run_emc_ws(env, T, cfg, rng);
        case AlgorithmName::OFUL_FULL: return run_oful_full(env, T, cfg, rng);
        case AlgorithmName::ESTC_LASSO: return run_estc_lasso(env, T, cfg, rng);
    }
    throw Error("run_algorithm: unreachable");
}

}  // namespace symban
