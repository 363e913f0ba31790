#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "symban/harness.hpp"

using namespace symban;

namespace {

ExperimentConfig small_config() {
    ExperimentConfig cfg;
    cfg.d = 6;
    cfg.d0 = 2;
    cfg.sigma = 0.1;
    cfg.T = 100;
    cfg.algorithm = AlgorithmName::EMC;
    cfg.selector = SelectorKind::Greedy;
    cfg.partition_class = PartitionClass::NonCrossing;
    return cfg;
}

}  // namespace

TEST_CASE("config parsing and overrides") {
    const char* path = "test_config.tmp";
    {
        std::ofstream out(path);
        out << "# comment\n"
            << "d = 12\n"
            << "d0 = 3\n"
            << "sigma = 0.25\n"
            << "algorithm = estc-lasso\n"
            << "class = interval\n"
            << "T = 500\n"
            << "seeds = 1,3,5..7\n";
    }
    ExperimentConfig cfg = parse_config_file(path);
    std::remove(path);
    CHECK(cfg.d == 12);
    CHECK(cfg.d0 == 3);
    CHECK(cfg.sigma == 0.25);
    CHECK(cfg.algorithm == AlgorithmName::ESTC_LASSO);
    CHECK(cfg.partition_class == PartitionClass::Interval);
    CHECK(cfg.seeds == std::vector<std::uint64_t>{1, 3, 5, 6, 7});

    // last writer wins
    apply_key_value(cfg, "d", "8");
    CHECK(cfg.d == 8);

    CHECK_THROWS_AS(apply_key_value(cfg, "nonsense", "1"), ConfigError);
    CHECK_THROWS_AS(apply_key_value(cfg, "d", "abc"), ConfigError);
    try {
        apply_key_value(cfg, "sigma", "oops");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.field == "sigma");
    }
}

TEST_CASE("config validation names the offending field") {
    ExperimentConfig cfg = small_config();
    cfg.d0 = 9;  // > d
    try {
        cfg.validate();
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.field == "d0");
    }
    cfg = small_config();
    cfg.t1 = 100;  // == T
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("run_experiment produces a strided record") {
    ExperimentConfig cfg = small_config();
    cfg.stride = 10;
    ExperimentRecord rec = run_experiment(cfg, 4);
    CHECK(rec.ok);
    CHECK(rec.algorithm == "emc");
    CHECK(rec.cumulative_regret.size() == 10);  // ceil(100/10)
    CHECK(rec.cumulative_regret.back().first == 100);
    for (size_t i = 1; i < rec.cumulative_regret.size(); ++i) {
        CHECK(rec.cumulative_regret[i].second >= rec.cumulative_regret[i - 1].second);
        CHECK(rec.cumulative_regret[i].first ==
              rec.cumulative_regret[i - 1].first + 10);
    }
    CHECK(rec.metadata.at("rng") == std::string(Rng::algorithm_name()));
    CHECK(rec.selected_partition.has_value());

    // stride not dividing T: last point still lands on T
    cfg.stride = 30;
    ExperimentRecord rec2 = run_experiment(cfg, 4);
    CHECK(rec2.cumulative_regret.size() == 4);  // 30, 60, 90, 100
    CHECK(rec2.cumulative_regret.back().first == 100);
}

TEST_CASE("sweep is order-stable, parallelism-independent, and failure-tolerant") {
    ExperimentConfig cfg = small_config();
    std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5, 6};
    auto serial = sweep(cfg, seeds, 1);
    auto parallel = sweep(cfg, seeds, 4);
    REQUIRE(serial.size() == 6);
    CHECK(csv_string(serial) == csv_string(parallel));
    for (size_t i = 0; i < seeds.size(); ++i) CHECK(serial[i].seed == seeds[i]);

    CHECK_THROWS_AS(sweep(cfg, {}, 1), ArgumentError);

    // a failing configuration is recorded per-seed, not thrown
    cfg.t1 = 99;
    cfg.t2 = 99;
    cfg.algorithm = AlgorithmName::EMC_WS;
    cfg.eps0 = 0.0;  // t2 is set, so this is fine; force failure via sigma
    cfg.sigma = -1.0;
    CHECK_THROWS_AS(sweep(cfg, seeds, 1), ConfigError);  // config-level: throws
    cfg.sigma = 0.1;
    cfg.d0 = 2;
    cfg.t2 = 99;
    auto recs = sweep(cfg, {1}, 1);
    CHECK(recs[0].ok);
}

TEST_CASE("csv output schema and round trip") {
    ExperimentConfig cfg = small_config();
    cfg.stride = 25;
    auto records = sweep(cfg, {7, 8}, 1);
    const std::string csv = csv_string(records);

    std::istringstream in(csv);
    std::string line;
    REQUIRE(std::getline(in, line));
    CHECK(line == "seed,algorithm,t,cumulative_regret");
    size_t rows = 0;
    size_t idx[2] = {0, 0};
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string seed_s, algo_s, t_s, reg_s;
        REQUIRE(std::getline(ls, seed_s, ','));
        REQUIRE(std::getline(ls, algo_s, ','));
        REQUIRE(std::getline(ls, t_s, ','));
        REQUIRE(std::getline(ls, reg_s, ','));
        const std::uint64_t seed = std::stoull(seed_s);
        REQUIRE((seed == 7 || seed == 8));
        const size_t r = seed == 7 ? 0 : 1;
        const auto& expect = records[r].cumulative_regret[idx[r]++];
        CHECK(algo_s == "emc");
        CHECK(std::stoll(t_s) == expect.first);
        // full precision round trip
        CHECK(std::stod(reg_s) == expect.second);
        ++rows;
    }
    CHECK(rows == 8);  // two records x ceil(100/25)

    const char* path = "roundtrip.tmp.csv";
    emit_csv(records, path);
    std::ifstream back(path, std::ios::binary);
    std::stringstream buf;
    buf << back.rdbuf();
    CHECK(buf.str() == csv);
    std::remove(path);
}

TEST_CASE("svg rendering: one polyline per algorithm, labeled axes") {
    ExperimentConfig cfg = small_config();
    auto emc = sweep(cfg, {1, 2, 3}, 1);
    cfg.algorithm = AlgorithmName::ESTC_LASSO;
    auto estc = sweep(cfg, {1, 2, 3}, 1);
    std::vector<ExperimentRecord> all;
    for (const auto& r : emc) all.push_back(r);
    for (const auto& r : estc) all.push_back(r);

    const std::string svg = svg_string(all);
    size_t polylines = 0;
    for (size_t pos = 0; (pos = svg.find("<polyline", pos)) != std::string::npos; ++pos)
        ++polylines;
    CHECK(polylines == 2);
    CHECK(svg.find(">t</text>") != std::string::npos);
    CHECK(svg.find("cumulative regret") != std::string::npos);
    CHECK(svg.find("emc") != std::string::npos);
    CHECK(svg.find("estc-lasso") != std::string::npos);
    CHECK(svg.find("fill-opacity") != std::string::npos);  // IQR band

    // single algorithm: one polyline
    CHECK(svg_string(emc).find("estc") == std::string::npos);
}

TEST_CASE("experiment records are reproducible end to end") {
    ExperimentConfig cfg = small_config();
    cfg.algorithm = AlgorithmName::EMC_WS;
    cfg.t2 = 30;
    cfg.candidate_arms_per_round = 8;
    ExperimentRecord a = run_experiment(cfg, 42);
    ExperimentRecord b = run_experiment(cfg, 42);
    REQUIRE(a.ok);
    REQUIRE(b.ok);
    REQUIRE(a.cumulative_regret.size() == b.cumulative_regret.size());
    for (size_t i = 0; i < a.cumulative_regret.size(); ++i) {
        CHECK(a.cumulative_regret[i].first == b.cumulative_regret[i].first);
        CHECK(a.cumulative_regret[i].second == b.cumulative_regret[i].second);
    }
    CHECK(to_string(*a.selected_partition) == to_string(*b.selected_partition));
}
