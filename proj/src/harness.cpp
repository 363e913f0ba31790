#include "symban/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include "symban/errors.hpp"

namespace symban {

namespace {

int parse_int(const std::string& key, const std::string& value) {
    int out = 0;
    const auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || p != value.data() + value.size())
        throw ConfigError(key, "expected an integer, got '" + value + "'");
    return out;
}

std::int64_t parse_i64(const std::string& key, const std::string& value) {
    std::int64_t out = 0;
    const auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || p != value.data() + value.size())
        throw ConfigError(key, "expected an integer, got '" + value + "'");
    return out;
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    std::uint64_t out = 0;
    const auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || p != value.data() + value.size())
        throw ConfigError(key, "expected a non-negative integer, got '" + value + "'");
    return out;
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        size_t pos = 0;
        const double out = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return out;
    } catch (const std::exception&) {
        throw ConfigError(key, "expected a number, got '" + value + "'");
    }
}

std::string trim(std::string s) {
    const auto issp = [](unsigned char c) { return std::isspace(c) != 0; };
    while (!s.empty() && issp(s.front())) s.erase(s.begin());
    while (!s.empty() && issp(s.back())) s.pop_back();
    return s;
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

void ExperimentConfig::validate() const {
    if (d < 1) throw ConfigError("d", "must be >= 1");
    if (d0 < 1 || d0 > d) throw ConfigError("d0", "must satisfy 1 <= d0 <= d");
    if (sigma < 0.0) throw ConfigError("sigma", "must be >= 0");
    if (T < 1) throw ConfigError("T", "must be >= 1");
    if (t1 && (*t1 < 1 || *t1 >= T)) throw ConfigError("t1", "must satisfy 1 <= t1 < T");
    if (t2 && (*t2 < 1 || *t2 >= T)) throw ConfigError("t2", "must satisfy 1 <= t2 < T");
    if (eps0 && *eps0 < 0.0) throw ConfigError("eps0", "must be >= 0");
    if (theta_scale <= 0.0) throw ConfigError("theta_scale", "must be > 0");
    if (candidate_arms_per_round < 1) throw ConfigError("candidate_arms", "must be >= 1");
    if (stride < 0) throw ConfigError("stride", "must be >= 0");
    if (parallelism < 1) throw ConfigError("parallelism", "must be >= 1");
    if (safety_c <= 0.0) throw ConfigError("safety_c", "must be > 0");
    if (ridge_lambda <= 0.0) throw ConfigError("ridge_lambda", "must be > 0");
    if (arm_set == ArmSetKind::Finite)
        throw ConfigError("arm_set", "finite arm sets are only available via the API");
}

std::int64_t ExperimentConfig::effective_stride() const {
    return stride > 0 ? stride : std::max<std::int64_t>(1, T / 1000);
}

AlgorithmConfig ExperimentConfig::algorithm_config() const {
    AlgorithmConfig cfg;
    cfg.name = algorithm;
    cfg.t1 = t1;
    cfg.t2 = t2;
    cfg.d0 = d0;
    cfg.partition_class = partition_class;
    cfg.selector = selector;
    cfg.lasso_lambda = lasso_lambda;
    cfg.oful.ridge_lambda = ridge_lambda;
    cfg.oful.delta = oful_delta;
    cfg.oful.theta_norm_bound = theta_norm_bound;
    cfg.candidate_arms_per_round = candidate_arms_per_round;
    cfg.safety_c = safety_c;
    cfg.eps0 = eps0.value_or(0.0);
    cfg.pool_cap = pool_cap;
    return cfg;
}

EnvConfig ExperimentConfig::env_config(std::uint64_t run_seed) const {
    EnvConfig env;
    env.d = d;
    env.d0 = d0;
    env.partition_class = partition_class;
    env.sigma = sigma;
    env.arm_set = arm_set;
    env.eps0 = eps0;
    env.theta_scale = theta_scale;
    env.seed = run_seed;
    return env;
}

std::map<std::string, std::string> ExperimentConfig::snapshot() const {
    std::map<std::string, std::string> snap;
    snap["d"] = std::to_string(d);
    snap["d0"] = std::to_string(d0);
    snap["class"] = to_string(partition_class);
    snap["sigma"] = format_double(sigma);
    snap["arm_set"] = to_string(arm_set);
    snap["algorithm"] = to_string(algorithm);
    snap["selector"] = to_string(selector);
    snap["T"] = std::to_string(T);
    snap["stride"] = std::to_string(effective_stride());
    snap["theta_scale"] = format_double(theta_scale);
    if (eps0) snap["eps0"] = format_double(*eps0);
    if (t1) snap["t1"] = std::to_string(*t1);
    if (t2) snap["t2"] = std::to_string(*t2);
    if (lasso_lambda) snap["lasso_lambda"] = format_double(*lasso_lambda);
    return snap;
}

void apply_key_value(ExperimentConfig& config, const std::string& key,
                     const std::string& value) {
    if (key == "d") config.d = parse_int(key, value);
    else if (key == "d0") config.d0 = parse_int(key, value);
    else if (key == "class") {
        try {
            config.partition_class = partition_class_from_string(value);
        } catch (const ArgumentError& e) {
            throw ConfigError(key, e.what());
        }
    } else if (key == "sigma") config.sigma = parse_double(key, value);
    else if (key == "arm_set") {
        try {
            config.arm_set = arm_set_from_string(value);
        } catch (const ArgumentError& e) {
            throw ConfigError(key, e.what());
        }
    } else if (key == "eps0") config.eps0 = parse_double(key, value);
    else if (key == "theta_scale") config.theta_scale = parse_double(key, value);
    else if (key == "algorithm") {
        try {
            config.algorithm = algorithm_from_string(value);
        } catch (const ArgumentError& e) {
            throw ConfigError(key, e.what());
        }
    } else if (key == "selector") {
        try {
            config.selector = selector_from_string(value);
        } catch (const ArgumentError& e) {
            throw ConfigError(key, e.what());
        }
    } else if (key == "t1") config.t1 = parse_int(key, value);
    else if (key == "t2") config.t2 = parse_int(key, value);
    else if (key == "lasso_lambda") config.lasso_lambda = parse_double(key, value);
    else if (key == "safety_c") config.safety_c = parse_double(key, value);
    else if (key == "candidate_arms") config.candidate_arms_per_round = parse_int(key, value);
    else if (key == "ridge_lambda") config.ridge_lambda = parse_double(key, value);
    else if (key == "oful_delta") config.oful_delta = parse_double(key, value);
    else if (key == "theta_norm_bound") config.theta_norm_bound = parse_double(key, value);
    else if (key == "pool_cap") config.pool_cap = parse_u64(key, value);
    else if (key == "T") config.T = parse_i64(key, value);
    else if (key == "seed") config.seed = parse_u64(key, value);
    else if (key == "seeds") config.seeds = parse_seed_list(value);
    else if (key == "stride") config.stride = parse_i64(key, value);
    else if (key == "parallelism") config.parallelism = parse_int(key, value);
    else if (key == "out") config.out = value;
    else throw ConfigError(key, "unknown key");
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file: " + path);
    ExperimentConfig config;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno), "expected key = value");
        apply_key_value(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return config;
}

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
    std::vector<std::uint64_t> seeds;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        const auto dots = item.find("..");
        if (dots != std::string::npos) {
            const std::uint64_t lo = parse_u64("seeds", trim(item.substr(0, dots)));
            const std::uint64_t hi = parse_u64("seeds", trim(item.substr(dots + 2)));
            if (hi < lo) throw ConfigError("seeds", "range " + item + " is backwards");
            for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
        } else {
            seeds.push_back(parse_u64("seeds", item));
        }
    }
    if (seeds.empty()) throw ConfigError("seeds", "empty seed list");
    return seeds;
}

ExperimentRecord run_experiment(const ExperimentConfig& config, std::uint64_t seed) {
    config.validate();
    ExperimentRecord rec;
    rec.seed = seed;
    rec.algorithm = to_string(config.algorithm);
    rec.config_snapshot = config.snapshot();
    rec.config_snapshot["seed"] = std::to_string(seed);
    rec.metadata["rng"] = Rng::algorithm_name();
    rec.metadata["stream_split"] = "env=derive(seed,1) algo=derive(seed,2)";

    const auto start = std::chrono::steady_clock::now();
    try {
        Rng env_rng = Rng::derive(seed, 1);
        const BanditEnvironment env = make_environment(config.env_config(seed), env_rng);
        Rng algo_rng = Rng::derive(seed, 2);
        const Trajectory traj =
            run_algorithm(env, config.T, config.algorithm_config(), algo_rng);

        rec.selected_partition = traj.selected_partition;
        if (traj.selected_partition)
            rec.metadata["selected_partition"] = to_string(*traj.selected_partition);
        rec.metadata["phase_boundary"] = std::to_string(traj.phase_boundary);
        if (!traj.warnings.empty()) {
            std::string joined;
            for (const auto& w : traj.warnings) joined += (joined.empty() ? "" : "; ") + w;
            rec.metadata["warnings"] = joined;
        }

        const std::int64_t stride = config.effective_stride();
        double acc = 0.0;
        std::int64_t next = stride;
        for (const auto& r : traj.rounds) {
            acc += r.instantaneous_regret;
            if (r.t == std::min(next, config.T)) {
                rec.cumulative_regret.emplace_back(r.t, acc);
                next += stride;
            }
        }
        if (rec.cumulative_regret.empty() || rec.cumulative_regret.back().first != config.T)
            rec.cumulative_regret.emplace_back(config.T, acc);
    } catch (const std::exception& e) {
        rec.ok = false;
        rec.error = e.what();
    }
    rec.wall_time_ms = std::chrono::duration<double, std::milli>(
                           std::chrono::steady_clock::now() - start)
                           .count();
    return rec;
}

std::vector<ExperimentRecord> sweep(const ExperimentConfig& config,
                                    const std::vector<std::uint64_t>& seeds,
                                    int parallelism) {
    if (seeds.empty()) throw ArgumentError("sweep: empty seed list");
    config.validate();
    std::vector<ExperimentRecord> records(seeds.size());
    std::atomic<size_t> cursor{0};
    auto worker = [&] {
        for (;;) {
            const size_t i = cursor.fetch_add(1);
            if (i >= seeds.size()) return;
            records[i] = run_experiment(config, seeds[i]);
        }
    };
    const int threads = std::min<int>(parallelism, static_cast<int>(seeds.size()));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<size_t>(threads));
        for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    return records;
}

std::string csv_string(const std::vector<ExperimentRecord>& records) {
    std::string out = "seed,algorithm,t,cumulative_regret\n";
    for (const auto& rec : records) {
        if (!rec.ok) continue;
        for (const auto& [t, reg] : rec.cumulative_regret) {
            out += std::to_string(rec.seed);
            out += ',';
            out += rec.algorithm;
            out += ',';
            out += std::to_string(t);
            out += ',';
            out += format_double(reg);
            out += '\n';
        }
    }
    return out;
}

void emit_csv(const std::vector<ExperimentRecord>& records, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << csv_string(records);
    if (!out) throw IoError("write failed: " + path);
}

namespace {

double quantile(std::vector<double> xs, double q) {
    std::sort(xs.begin(), xs.end());
    const double pos = q * (static_cast<double>(xs.size()) - 1.0);
    const size_t lo = static_cast<size_t>(pos);
    const size_t hi = std::min(lo + 1, xs.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return xs[lo] * (1.0 - frac) + xs[hi] * frac;
}

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf"};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

}  // namespace

std::string svg_string(const std::vector<ExperimentRecord>& records) {
    // group by algorithm, preserving first-seen order
    std::vector<std::string> algo_order;
    std::map<std::string, std::vector<const ExperimentRecord*>> by_algo;
    for (const auto& rec : records) {
        if (!rec.ok || rec.cumulative_regret.empty()) continue;
        if (!by_algo.count(rec.algorithm)) algo_order.push_back(rec.algorithm);
        by_algo[rec.algorithm].push_back(&rec);
    }
    if (by_algo.empty()) throw ArgumentError("render_svg: no successful records");

    struct Band {
        std::vector<std::int64_t> t;
        std::vector<double> med, lo, hi;
    };
    std::map<std::string, Band> bands;
    double t_max = 1.0, y_max = 1e-9;
    for (const auto& algo : algo_order) {
        const auto& group = by_algo[algo];
        const size_t points = group.front()->cumulative_regret.size();
        Band band;
        for (size_t i = 0; i < points; ++i) {
            std::vector<double> vals;
            for (const auto* rec : group)
                if (i < rec->cumulative_regret.size())
                    vals.push_back(rec->cumulative_regret[i].second);
            band.t.push_back(group.front()->cumulative_regret[i].first);
            band.med.push_back(quantile(vals, 0.5));
            band.lo.push_back(quantile(vals, 0.25));
            band.hi.push_back(quantile(vals, 0.75));
            t_max = std::max(t_max, static_cast<double>(band.t.back()));
            y_max = std::max(y_max, band.hi.back());
        }
        bands[algo] = std::move(band);
    }
    y_max *= 1.05;

    const double width = 900, height = 600;
    const double left = 80, right = 30, top = 40, bottom = 60;
    const double pw = width - left - right, ph = height - top - bottom;
    auto X = [&](double t) { return left + pw * t / t_max; };
    auto Y = [&](double v) { return top + ph * (1.0 - v / y_max); };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    // axes
    svg << "<line x1=\"" << left << "\" y1=\"" << top + ph << "\" x2=\"" << left + pw
        << "\" y2=\"" << top + ph << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\""
        << top + ph << "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 5; ++i) {
        const double tv = t_max * i / 5.0, yv = y_max * i / 5.0;
        svg << "<line x1=\"" << X(tv) << "\" y1=\"" << top + ph << "\" x2=\"" << X(tv)
            << "\" y2=\"" << top + ph + 5 << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << X(tv) << "\" y=\"" << top + ph + 20
            << "\" font-size=\"12\" text-anchor=\"middle\">" << fmt(tv) << "</text>\n";
        svg << "<line x1=\"" << left - 5 << "\" y1=\"" << Y(yv) << "\" x2=\"" << left
            << "\" y2=\"" << Y(yv) << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << left - 8 << "\" y=\"" << Y(yv) + 4
            << "\" font-size=\"12\" text-anchor=\"end\">" << fmt(yv) << "</text>\n";
    }
    svg << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 15
        << "\" font-size=\"14\" text-anchor=\"middle\">t</text>\n";
    svg << "<text x=\"20\" y=\"" << top + ph / 2
        << "\" font-size=\"14\" text-anchor=\"middle\" transform=\"rotate(-90 20 "
        << top + ph / 2 << ")\">cumulative regret</text>\n";

    int color_idx = 0;
    for (const auto& algo : algo_order) {
        const Band& band = bands[algo];
        const char* color = kPalette[color_idx % 7];

        // interquartile band
        svg << "<path d=\"M";
        for (size_t i = 0; i < band.t.size(); ++i)
            svg << (i ? " L" : "") << fmt(X(static_cast<double>(band.t[i]))) << ' '
                << fmt(Y(band.lo[i]));
        for (size_t i = band.t.size(); i-- > 0;)
            svg << " L" << fmt(X(static_cast<double>(band.t[i]))) << ' ' << fmt(Y(band.hi[i]));
        svg << " Z\" fill=\"" << color << "\" fill-opacity=\"0.2\" stroke=\"none\"/>\n";

        // median polyline
        svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
        for (size_t i = 0; i < band.t.size(); ++i)
            svg << (i ? " " : "") << fmt(X(static_cast<double>(band.t[i]))) << ','
                << fmt(Y(band.med[i]));
        svg << "\"/>\n";

        svg << "<text x=\"" << left + pw - 10 << "\" y=\"" << top + 18 + 18 * color_idx
            << "\" font-size=\"13\" text-anchor=\"end\" fill=\"" << color << "\">" << algo
            << "</text>\n";
        ++color_idx;
    }
    svg << "</svg>\n";
    return svg.str();
}

void render_svg(const std::vector<ExperimentRecord>& records, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << svg_string(records);
    if (!out) throw IoError("write failed: " + path);
}

}  // namespace symban
