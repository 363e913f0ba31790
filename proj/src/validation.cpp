#include "symban/validation.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include "symban/errors.hpp"

namespace symban {

const char* to_string(ValidationSuite s) {
    switch (s) {
        case ValidationSuite::Counts: return "counts";
        case ValidationSuite::Rip: return "rip";
        case ValidationSuite::Selection: return "selection";
        case ValidationSuite::Lemma1: return "lemma1";
        case ValidationSuite::RegretSlope: return "regret_slope";
    }
    return "?";
}

ValidationSuite validation_suite_from_string(std::string_view name) {
    if (name == "counts") return ValidationSuite::Counts;
    if (name == "rip") return ValidationSuite::Rip;
    if (name == "selection") return ValidationSuite::Selection;
    if (name == "lemma1") return ValidationSuite::Lemma1;
    if (name == "regret_slope") return ValidationSuite::RegretSlope;
    throw ArgumentError("unknown validation suite: " + std::string(name));
}

bool ValidationReport::all_pass() const {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

namespace {

std::string fmt(double v, int prec = 4) {
    std::ostringstream os;
    os.precision(prec);
    os << v;
    return os.str();
}

// least-squares slope of log(y) against log(x)
double loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    const size_t n = xs.size();
    double mx = 0, my = 0;
    std::vector<double> lx(n), ly(n);
    for (size_t i = 0; i < n; ++i) {
        lx[i] = std::log(xs[i]);
        ly[i] = std::log(std::max(ys[i], 1e-300));
        mx += lx[i];
        my += ly[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double num = 0, den = 0;
    for (size_t i = 0; i < n; ++i) {
        num += (lx[i] - mx) * (ly[i] - my);
        den += (lx[i] - mx) * (lx[i] - mx);
    }
    return num / den;
}

double median(std::vector<double> xs) {
    std::sort(xs.begin(), xs.end());
    const size_t n = xs.size();
    return n % 2 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

Eigen::MatrixXd sphere_design(int n, int d, Rng& rng) {
    Eigen::MatrixXd X(n, d);
    for (int i = 0; i < n; ++i) X.row(i) = sphere_exploration_sampler(d, rng);
    return X;
}

// ---- criterion 1: combinatorics oracle equivalence --------------------

ValidationReport criterion_counts() {
    ValidationReport rep{"combinatorics oracle equivalence", {}};
    int checked = 0, failed = 0;
    for (int d = 1; d <= 9; ++d) {
        for (auto c : {PartitionClass::All, PartitionClass::NonCrossing,
                       PartitionClass::NonNesting, PartitionClass::Interval}) {
            std::vector<std::uint64_t> by_k(static_cast<size_t>(d) + 1, 0);
            for (const auto& p : enumerate_partitions(d, c, d))
                ++by_k[static_cast<size_t>(p.block_count())];
            for (int k = 1; k <= d; ++k) {
                ++checked;
                if (by_k[static_cast<size_t>(k)] != count_partitions(d, k, c)) ++failed;
            }
        }
    }
    rep.checks.push_back({"enumeration counts vs closed forms (d <= 9, 4 classes)",
                          failed == 0,
                          std::to_string(checked) + " identities, " +
                              std::to_string(failed) + " mismatches"});

    const bool spots = count_partitions(4, 2, PartitionClass::All) == 7 &&
                       enumerate_partitions(4, PartitionClass::NonCrossing, 4).size() == 14 &&
                       count_partitions(4, 2, PartitionClass::NonCrossing) == 6;
    rep.checks.push_back({"spot values S(4,2)=7, C_4=14, N(4,2)=6", spots, ""});
    return rep;
}

// ---- criterion 2: projection / regression properties ------------------

ValidationReport criterion_projection_properties() {
    ValidationReport rep{"projection and regression properties", {}};
    Rng rng(20240001);
    const double tol = 1e-10;
    int trials = 0, failures = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const int d = 2 + static_cast<int>(rng.uniform_int(11));  // 2..12
        Partition p = random_partition(
            d, 1 + static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(d))),
            PartitionClass::All, rng);
        SubspaceModel m(p);
        Eigen::VectorXd x(d), y(d);
        for (int i = 0; i < d; ++i) {
            x[i] = rng.normal();
            y[i] = rng.normal();
        }
        const Eigen::VectorXd px = project_point(x, m);
        bool ok = (project_point(px, m) - px).norm() <= tol * (1.0 + px.norm());
        ok = ok && std::abs(px.dot(y) - x.dot(project_point(y, m))) <=
                       tol * (1.0 + x.norm() * y.norm());
        ok = ok && px.norm() <= x.norm() * (1.0 + tol);

        const int n = 3 + static_cast<int>(rng.uniform_int(30));
        Eigen::MatrixXd X(n, d);
        Eigen::VectorXd Y(n);
        for (int r = 0; r < n; ++r) {
            for (int c = 0; c < d; ++c) X(r, c) = rng.normal();
            Y[r] = rng.normal();
        }
        const double base = fit_subspace({X, Y}, m).residual_sq;

        // stabilizer invariance of the residual
        Permutation g = sample_stabilizer_permutation(p, rng);
        Eigen::MatrixXd Xg(n, d);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < d; ++c) Xg(r, c) = X(r, g.image[static_cast<size_t>(c)] - 1);
        const double permuted = fit_subspace({Xg, Y}, m).residual_sq;
        ok = ok && std::abs(permuted - base) <= tol * (1.0 + base);

        // refinement-monotone residuals
        if (p.block_count() >= 2) {
            auto cs = coarsen(p, PartitionClass::All);
            const double coarse =
                fit_subspace({X, Y}, SubspaceModel(cs[rng.uniform_int(cs.size())]))
                    .residual_sq;
            ok = ok && coarse >= base - tol * (1.0 + coarse);
        }
        ++trials;
        if (!ok) ++failures;
    }
    rep.checks.push_back({"idempotence/self-adjointness/contraction/invariance/monotonicity",
                          failures == 0,
                          std::to_string(trials) + " instances, " +
                              std::to_string(failures) + " failures"});
    return rep;
}

// ---- criterion 3: RIP concentration ------------------------------------

ValidationReport criterion_rip() {
    ValidationReport rep{"RIP concentration on random designs", {}};
    const int d = 20;
    auto delta_at = [&](int n, std::uint64_t seed) {
        Rng rng(seed);
        std::vector<SubspaceModel> models;
        models.emplace_back(random_partition(d, 3, PartitionClass::All, rng));
        models.emplace_back(random_partition(d, 3, PartitionClass::All, rng));
        Eigen::MatrixXd A(n, d);
        const double scale = 1.0 / std::sqrt(static_cast<double>(n));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < d; ++j) A(i, j) = scale * rng.normal();
        return rip_constant(A, models);
    };

    int below_half = 0;
    for (int s = 0; s < 100; ++s)
        if (delta_at(200, 30000 + static_cast<std::uint64_t>(s)) < 0.5) ++below_half;
    rep.checks.push_back({"delta < 1/2 at n=200, d=20 (target >= 95/100)", below_half >= 95,
                          std::to_string(below_half) + "/100 seeds"});

    std::vector<double> medians;
    for (int n : {50, 100, 200, 400}) {
        std::vector<double> deltas;
        for (int s = 0; s < 100; ++s)
            deltas.push_back(delta_at(n, 31000 + static_cast<std::uint64_t>(s)));
        medians.push_back(median(deltas));
    }
    const bool monotone = medians[0] > medians[1] && medians[1] > medians[2] &&
                          medians[2] > medians[3];
    rep.checks.push_back(
        {"median delta decreasing over n in {50,100,200,400}", monotone,
         fmt(medians[0]) + " > " + fmt(medians[1]) + " > " + fmt(medians[2]) + " > " +
             fmt(medians[3])});
    return rep;
}

// ---- criterion 4: model-selection prediction error ---------------------

ValidationReport criterion_prediction_error() {
    ValidationReport rep{"model-selection prediction error", {}};
    const int d = 10, d0 = 3, n = 300;
    const double sigma = 0.1;
    const auto pool = build_model_pool(d, d0, PartitionClass::NonCrossing);
    const double bound =
        20.0 * sigma * sigma * std::log(static_cast<double>(pool.size()) / 0.05);

    int within = 0;
    const int seeds = 200;
    for (int s = 0; s < seeds; ++s) {
        Rng rng(40000 + static_cast<std::uint64_t>(s));
        Partition truth = random_partition(d, d0, PartitionClass::NonCrossing, rng);
        Eigen::VectorXd theta = random_theta(truth, std::nullopt, 1.0, rng);
        theta /= theta.norm();
        Eigen::MatrixXd X = sphere_design(n, d, rng);
        Eigen::VectorXd Y = X * theta;
        for (int i = 0; i < n; ++i) Y[i] += sigma * rng.normal();

        auto sel = select_bruteforce({X, Y}, pool);
        const double pred_err = (X * sel.fit.theta_hat - X * theta).squaredNorm();
        if (pred_err <= bound) ++within;
    }
    rep.checks.push_back(
        {"||f_hat - X theta*||^2 <= 20 sigma^2 ln(M/0.05) (target >= 95%)",
         within >= static_cast<int>(0.95 * seeds),
         std::to_string(within) + "/" + std::to_string(seeds) + " within bound " +
             fmt(bound) + ", M = " + std::to_string(pool.size())});
    return rep;
}

// ---- criterion 5: exploration risk rate --------------------------------

ValidationReport criterion_exploration_rate() {
    ValidationReport rep{"exploration risk rate", {}};
    const int d = 20, d0 = 4;
    const double sigma = 0.1;
    const std::vector<double> horizons = {250, 1000, 4000};

    std::vector<std::vector<double>> errs(horizons.size());
    for (int s = 0; s < 100; ++s) {
        Rng rng(50000 + static_cast<std::uint64_t>(s));
        Partition truth = random_partition(d, d0, PartitionClass::NonCrossing, rng);
        Eigen::VectorXd theta = random_theta(truth, std::nullopt, 1.0, rng);
        theta /= theta.norm();
        for (size_t h = 0; h < horizons.size(); ++h) {
            const int t1 = static_cast<int>(horizons[h]);
            Eigen::MatrixXd X = sphere_design(t1, d, rng);
            Eigen::VectorXd Y = X * theta;
            for (int i = 0; i < t1; ++i) Y[i] += sigma * rng.normal();
            auto sel = select_greedy({X, Y}, d0, PartitionClass::NonCrossing);
            errs[h].push_back((sel.fit.theta_hat - theta).norm());
        }
    }
    std::vector<double> med;
    for (auto& e : errs) med.push_back(median(e));
    const double slope = loglog_slope(horizons, med);
    rep.checks.push_back(
        {"power-law exponent of ||theta_hat - theta*|| vs t1 in [-0.65, -0.35]",
         slope >= -0.65 && slope <= -0.35,
         "exponent " + fmt(slope) + ", medians " + fmt(med[0]) + "/" + fmt(med[1]) + "/" +
             fmt(med[2])});
    return rep;
}

// ---- criterion 6: true-model recovery ----------------------------------

ValidationReport criterion_recovery() {
    ValidationReport rep{"true-model recovery under separation", {}};
    const int d = 20, d0 = 4;
    const double sigma = 0.1, eps0 = 0.5;
    const std::int64_t T = 10000;
    const int t2 = t2_default(T, d0, d, sigma, 1.0, static_cast<double>(d), eps0, 2.0);

    int recovered = 0;
    const int seeds = 100;
    for (int s = 0; s < seeds; ++s) {
        Rng rng(60000 + static_cast<std::uint64_t>(s));
        Partition truth = random_partition(d, d0, PartitionClass::NonCrossing, rng);
        Eigen::VectorXd theta = random_theta(truth, eps0, 1.0, rng);
        Eigen::MatrixXd X = sphere_design(t2, d, rng);
        Eigen::VectorXd Y = X * theta;
        for (int i = 0; i < t2; ++i) Y[i] += sigma * rng.normal();
        auto sel = select_greedy({X, Y}, d0, PartitionClass::NonCrossing);
        if (sel.model.partition() == truth) ++recovered;
    }
    rep.checks.push_back({"true partition recovered with t2 = t2_default (target >= 90/100)",
                          recovered >= 90,
                          std::to_string(recovered) + "/100 at t2 = " + std::to_string(t2)});
    return rep;
}

// ---- criterion 7: regret-rate slopes -----------------------------------

ExperimentConfig slope_config() {
    ExperimentConfig cfg;
    cfg.d = 100;
    cfg.d0 = 15;
    cfg.sigma = 0.1;
    cfg.partition_class = PartitionClass::NonCrossing;
    cfg.arm_set = ArmSetKind::Sphere;
    cfg.selector = SelectorKind::Greedy;
    cfg.stride = 0;
    return cfg;
}

ValidationReport criterion_regret_slope() {
    ValidationReport rep{"regret-rate slopes", {}};
    const std::vector<double> horizons = {5000, 10000, 20000};
    std::vector<std::uint64_t> seeds;
    for (std::uint64_t s = 1; s <= 10; ++s) seeds.push_back(s);

    // EMC: t1 from the schedule, full-range slope
    std::vector<double> emc_median;
    for (double T : horizons) {
        ExperimentConfig cfg = slope_config();
        cfg.algorithm = AlgorithmName::EMC;
        cfg.T = static_cast<std::int64_t>(T);
        std::vector<double> finals;
        for (auto& rec : sweep(cfg, seeds, 2)) {
            if (!rec.ok) throw Error("criterion 7: EMC run failed: " + rec.error);
            finals.push_back(rec.cumulative_regret.back().second);
        }
        emc_median.push_back(median(finals));
    }
    const double emc_slope = loglog_slope(horizons, emc_median);
    rep.checks.push_back({"EMC log-log slope of median regret in [0.5, 0.85]",
                          emc_slope >= 0.5 && emc_slope <= 0.85,
                          "slope " + fmt(emc_slope) + ", medians " + fmt(emc_median[0]) +
                              "/" + fmt(emc_median[1]) + "/" + fmt(emc_median[2])});

    // EMC-WS: pinned exploration t2 = 2000 and separation eps0 = 0.12;
    // slope measured on the OFUL phase alone
    const int t2 = 2000;
    std::vector<double> ws_median;
    for (double T : horizons) {
        ExperimentConfig cfg = slope_config();
        cfg.algorithm = AlgorithmName::EMC_WS;
        cfg.T = static_cast<std::int64_t>(T);
        cfg.t2 = t2;
        cfg.eps0 = 0.12;
        cfg.candidate_arms_per_round = 128;
        std::vector<double> phase;
        for (auto& rec : sweep(cfg, seeds, 2)) {
            if (!rec.ok) throw Error("criterion 7: EMC-WS run failed: " + rec.error);
            double at_t2 = 0.0;
            for (const auto& [t, reg] : rec.cumulative_regret)
                if (t <= t2) at_t2 = reg;
            phase.push_back(rec.cumulative_regret.back().second - at_t2);
        }
        ws_median.push_back(median(phase));
    }
    std::vector<double> phase_lengths;
    for (double T : horizons) phase_lengths.push_back(T - t2);
    const double ws_slope = loglog_slope(phase_lengths, ws_median);
    rep.checks.push_back({"EMC-WS log-log slope over the OFUL phase in [0.4, 0.65]",
                          ws_slope >= 0.4 && ws_slope <= 0.65,
                          "slope " + fmt(ws_slope) + ", medians " + fmt(ws_median[0]) + "/" +
                              fmt(ws_median[1]) + "/" + fmt(ws_median[2])});
    return rep;
}

// ---- criterion 8: EMC vs ESTC-Lasso figure-level comparison ------------

ValidationReport criterion_figure_comparison() {
    ValidationReport rep{"EMC vs ESTC-Lasso final regret", {}};
    const std::int64_t T = 20000;
    std::vector<std::uint64_t> seeds;
    for (std::uint64_t s = 1; s <= 10; ++s) seeds.push_back(s);

    const std::pair<int, int> sizes[] = {{100, 15}, {80, 10}, {40, 4}};
    for (auto [d, d0] : sizes) {
        for (auto cls : {PartitionClass::NonCrossing, PartitionClass::NonNesting,
                         PartitionClass::Interval}) {
            ExperimentConfig cfg;
            cfg.d = d;
            cfg.d0 = d0;
            cfg.sigma = 0.1;
            cfg.partition_class = cls;
            cfg.selector = SelectorKind::Greedy;
            cfg.T = T;

            cfg.algorithm = AlgorithmName::EMC;
            auto emc = sweep(cfg, seeds, 2);
            cfg.algorithm = AlgorithmName::ESTC_LASSO;
            auto estc = sweep(cfg, seeds, 2);

            int wins = 0;
            for (size_t i = 0; i < seeds.size(); ++i) {
                if (!emc[i].ok || !estc[i].ok) continue;
                const double emc_final = emc[i].cumulative_regret.back().second;
                const double estc_final = estc[i].cumulative_regret.back().second;
                if (cls == PartitionClass::Interval) {
                    if (emc_final <= 2.0 * estc_final) ++wins;
                } else {
                    if (emc_final < estc_final) ++wins;
                }
            }
            const std::string name =
                std::string(cls == PartitionClass::Interval ? "EMC <= 2x ESTC"
                                                            : "EMC < ESTC") +
                " on " + to_string(cls) + " d=" + std::to_string(d) +
                " d0=" + std::to_string(d0) + " (target >= 8/10)";
            rep.checks.push_back({name, wins >= 8, std::to_string(wins) + "/10 seeds"});
        }
    }
    return rep;
}

// ---- criterion 9: greedy cost ------------------------------------------

ValidationReport criterion_greedy_cost() {
    ValidationReport rep{"greedy lattice search cost", {}};
    Rng rng(70001);
    const int d = 100, d0 = 15, n = 2000;
    Partition truth = random_partition(d, d0, PartitionClass::NonCrossing, rng);
    Eigen::VectorXd theta = random_theta(truth, std::nullopt, 1.0, rng);
    theta /= theta.norm();
    Eigen::MatrixXd X = sphere_design(n, d, rng);
    Eigen::VectorXd Y = X * theta;
    for (int i = 0; i < n; ++i) Y[i] += 0.1 * rng.normal();

    const auto start = std::chrono::steady_clock::now();
    auto sel = select_greedy({X, Y}, d0, PartitionClass::NonCrossing);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    rep.checks.push_back({"select_greedy at d=100, d0=15, n=2000 under 60 s", secs < 60.0,
                          fmt(secs) + " s, residual " + fmt(sel.fit.residual_sq)});
    return rep;
}

// ---- criterion 10: sweep determinism ------------------------------------

ValidationReport criterion_determinism() {
    ValidationReport rep{"sweep determinism across parallelism", {}};
    ExperimentConfig cfg;
    cfg.d = 20;
    cfg.d0 = 4;
    cfg.sigma = 0.1;
    cfg.T = 2000;
    cfg.algorithm = AlgorithmName::EMC;
    cfg.selector = SelectorKind::Greedy;
    std::vector<std::uint64_t> seeds;
    for (std::uint64_t s = 1; s <= 8; ++s) seeds.push_back(s);

    const std::string serial = csv_string(sweep(cfg, seeds, 1));
    const std::string parallel = csv_string(sweep(cfg, seeds, 8));
    const std::string again = csv_string(sweep(cfg, seeds, 8));
    rep.checks.push_back({"byte-identical CSV at parallelism 1 and 8",
                          serial == parallel && parallel == again,
                          std::to_string(serial.size()) + " bytes"});
    return rep;
}

}  // namespace

ValidationReport run_criterion(int index) {
    switch (index) {
        case 1: return criterion_counts();
        case 2: return criterion_projection_properties();
        case 3: return criterion_rip();
        case 4: return criterion_prediction_error();
        case 5: return criterion_exploration_rate();
        case 6: return criterion_recovery();
        case 7: return criterion_regret_slope();
        case 8: return criterion_figure_comparison();
        case 9: return criterion_greedy_cost();
        case 10: return criterion_determinism();
        default: throw ArgumentError("criterion index out of 1..10");
    }
}

ValidationReport validate(ValidationSuite suite) {
    switch (suite) {
        case ValidationSuite::Counts: return run_criterion(1);
        case ValidationSuite::Rip: return run_criterion(3);
        case ValidationSuite::Selection: {
            ValidationReport rep = run_criterion(4);
            ValidationReport rec = run_criterion(6);
            rep.title = "model selection (prediction error + recovery)";
            for (auto& c : rec.checks) rep.checks.push_back(std::move(c));
            return rep;
        }
        case ValidationSuite::Lemma1: return run_criterion(5);
        case ValidationSuite::RegretSlope: return run_criterion(7);
    }
    throw ArgumentError("validate: unreachable");
}

}  // namespace symban
