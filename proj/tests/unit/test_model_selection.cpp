#include <doctest.h>

#include <limits>

#include "symban/model_selection.hpp"

using namespace symban;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

MatrixXd random_matrix(int n, int d, Rng& rng) {
    MatrixXd X(n, d);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < d; ++j) X(i, j) = rng.normal();
    return X;
}

Partition random_class_partition(int d, int blocks, PartitionClass c, Rng& rng) {
    Partition p = Partition::finest(d);
    while (p.block_count() > blocks) {
        auto cs = coarsen(p, c);
        p = cs[rng.uniform_int(cs.size())];
    }
    return p;
}

// Reference greedy: same contract as select_greedy, but every candidate
// is refit from scratch with fit_subspace. Slow and independent of the
// Gram fast path.
Partition reference_greedy_partition(const DesignSample& data, int d0, PartitionClass c) {
    const int d = static_cast<int>(data.X.cols());
    const double y_sq = data.Y.squaredNorm();
    Partition p = Partition::finest(d);
    while (p.block_count() > d0) {
        bool have = false;
        double best_res = 0.0;
        Partition best = p;
        for (const auto& q : coarsen(p, c)) {
            const double r = fit_subspace(data, SubspaceModel(q)).residual_sq;
            if (!have) {
                have = true;
                best_res = r;
                best = q;
            } else if (std::abs(r - best_res) <= 1e-12 * std::max(y_sq, 1e-300)) {
                if (q < best) best = q;
            } else if (r < best_res) {
                best_res = r;
                best = q;
            }
        }
        p = std::move(best);
    }
    return p;
}

}  // namespace

TEST_CASE("select_bruteforce picks the unique exact fit of minimal dimension") {
    Rng rng(101);
    const int d = 6;
    Partition truth({{1, 2, 3}, {4, 5}, {6}}, 6);
    SubspaceModel tm(truth);
    VectorXd theta = tm.expand((VectorXd(3) << 1.0, -0.5, 2.0).finished());

    MatrixXd X = random_matrix(40, d, rng);
    DesignSample data{X, X * theta};

    auto pool = build_model_pool(d, 3, PartitionClass::NonCrossing);
    auto res = select_bruteforce(data, pool);
    CHECK(res.model.partition() == truth);
    CHECK(res.fit.residual_sq <= 1e-16);
    CHECK(res.candidates_examined == static_cast<std::int64_t>(pool.size()));

    // singleton pool returns its only member regardless of data
    std::vector<SubspaceModel> one{SubspaceModel(Partition::finest(d))};
    CHECK(select_bruteforce(data, one).model.partition() == Partition::finest(d));

    CHECK_THROWS_AS(select_bruteforce(data, {}), EmptyPool);
}

TEST_CASE("select_bruteforce is deterministic") {
    Rng rng(103);
    const int d = 5;
    MatrixXd X = random_matrix(20, d, rng);
    VectorXd y(20);
    for (int i = 0; i < 20; ++i) y[i] = rng.normal();
    auto pool = build_model_pool(d, 3, PartitionClass::All);
    auto r1 = select_bruteforce({X, y}, pool);
    auto r2 = select_bruteforce({X, y}, pool);
    CHECK(r1.model.partition() == r2.model.partition());
    CHECK(r1.fit.residual_sq == r2.fit.residual_sq);
}

TEST_CASE("select_greedy degenerate d0 = d returns the finest partition") {
    Rng rng(107);
    MatrixXd X = random_matrix(10, 4, rng);
    VectorXd y(10);
    for (int i = 0; i < 10; ++i) y[i] = rng.normal();
    auto res = select_greedy({X, y}, 4, PartitionClass::NonCrossing);
    CHECK(res.model.partition() == Partition::finest(4));
    CHECK(res.residual_trace.empty());
    CHECK(res.candidates_examined == 0);

    CHECK_THROWS_AS(select_greedy({X, y}, 0, PartitionClass::All), ArgumentError);
    CHECK_THROWS_AS(select_greedy({X, y}, 5, PartitionClass::All), ArgumentError);
}

TEST_CASE("select_greedy matches the refit reference on random data") {
    Rng rng(109);
    for (int trial = 0; trial < 25; ++trial) {
        const int d = 4 + static_cast<int>(rng.uniform_int(4));  // 4..7
        const int n = 6 + static_cast<int>(rng.uniform_int(30));
        const int d0 = 1 + static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(d)));
        const auto cls = std::array{PartitionClass::All, PartitionClass::NonCrossing,
                                    PartitionClass::Interval}[rng.uniform_int(3)];
        MatrixXd X = random_matrix(n, d, rng);
        VectorXd y(n);
        for (int i = 0; i < n; ++i) y[i] = rng.normal();
        DesignSample data{X, y};

        CAPTURE(trial);
        CAPTURE(d);
        CAPTURE(n);
        CAPTURE(d0);
        auto fast = select_greedy(data, d0, cls);
        CHECK(fast.model.partition() == reference_greedy_partition(data, d0, cls));
        // final fit is the honest refit
        CHECK(fast.fit.residual_sq ==
              doctest::Approx(fit_subspace(data, fast.model).residual_sq));
        if (!fast.residual_trace.empty()) {
            CHECK(fast.residual_trace.back().first == d0);
            CHECK(fast.residual_trace.back().second ==
                  doctest::Approx(fast.fit.residual_sq).epsilon(1e-6));
        }
    }
}

TEST_CASE("greedy reaches residual zero on noiseless block-constant data") {
    Rng rng(113);
    for (auto cls : {PartitionClass::NonCrossing, PartitionClass::Interval}) {
        for (int trial = 0; trial < 10; ++trial) {
            const int d = 8, d0 = 3, n = 60;
            Partition truth = random_class_partition(d, d0, cls, rng);
            SubspaceModel tm(truth);
            VectorXd coeffs(d0);
            for (int b = 0; b < d0; ++b) coeffs[b] = rng.uniform(-1, 1) + 2.0 * b;
            VectorXd theta = tm.expand(coeffs);
            MatrixXd X = random_matrix(n, d, rng);
            DesignSample data{X, X * theta};

            auto greedy = select_greedy(data, d0, cls);
            CHECK(greedy.fit.residual_sq <= 1e-14);

            auto brute = select_bruteforce(data, build_model_pool(d, d0, cls));
            CHECK(brute.fit.residual_sq <= 1e-14);
            CHECK(greedy.fit.residual_sq == doctest::Approx(brute.fit.residual_sq).epsilon(1e-8));
        }
    }
}

TEST_CASE("brute force residual lower-bounds greedy when comparable") {
    Rng rng(127);
    const int d = 7, d0 = 3, n = 40;
    for (int trial = 0; trial < 10; ++trial) {
        MatrixXd X = random_matrix(n, d, rng);
        VectorXd y(n);
        for (int i = 0; i < n; ++i) y[i] = rng.normal();
        DesignSample data{X, y};
        auto greedy = select_greedy(data, d0, PartitionClass::NonCrossing);
        auto brute = select_bruteforce(data, build_model_pool(d, d0, PartitionClass::NonCrossing));
        CHECK(brute.fit.residual_sq <= greedy.fit.residual_sq * (1.0 + 1e-10) + 1e-12);
    }
}

TEST_CASE("well-separated recovery by brute force (noise 0.1)") {
    // d=8, d0=3, gap 0.5 between block values, n=400 isotropic rows
    Rng rng(131);
    int hits = 0;
    const int seeds = 100;
    for (int s = 0; s < seeds; ++s) {
        const int d = 8, d0 = 3, n = 400;
        Partition truth = random_class_partition(d, d0, PartitionClass::NonCrossing, rng);
        VectorXd coeffs(d0);
        for (int b = 0; b < d0; ++b) coeffs[b] = 0.5 * b + 0.25 * rng.uniform();
        VectorXd theta = SubspaceModel(truth).expand(coeffs);

        MatrixXd X(n, d);
        for (int i = 0; i < n; ++i) X.row(i) = sphere_exploration_sampler(d, rng);
        VectorXd y = X * theta;
        for (int i = 0; i < n; ++i) y[i] += 0.1 * rng.normal();

        auto res = select_bruteforce({X, y}, build_model_pool(d, d0, PartitionClass::NonCrossing));
        if (res.model.partition() == truth) ++hits;
    }
    CHECK(hits >= 95);
}

TEST_CASE("separation_margin") {
    CHECK(separation_margin((VectorXd(3) << 1, 1, 3).finished(), Partition({{1, 2}, {3}}, 3)) ==
          doctest::Approx(2.0));
    CHECK(separation_margin(VectorXd::Constant(3, 0.7), Partition::finest(3)) ==
          doctest::Approx(0.0));
    CHECK(separation_margin((VectorXd(3) << 0.0, 0.5, 1.0).finished(), Partition::finest(3)) ==
          doctest::Approx(0.5));
    CHECK(separation_margin((VectorXd(4) << 1, 2, 3, 4).finished(), Partition::coarsest(4)) ==
          std::numeric_limits<double>::infinity());
    CHECK_THROWS_AS(separation_margin(VectorXd::Zero(3), Partition::finest(4)),
                    DimensionMismatch);
}
