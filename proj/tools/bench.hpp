#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

#include "commands.hpp"

namespace chainpart::cli {

struct TimingCaps {
    index_t max_samples = 10000;
    double max_seconds = 5.0;
};

/// Runs fn once to warm up, then samples until either cap is hit (at least once).
template <class F>
std::vector<double> sample_seconds(F&& fn, const TimingCaps& caps) {
    using clock = std::chrono::steady_clock;
    fn();
    std::vector<double> t;
    const auto start = clock::now();
    do {
        const auto a = clock::now();
        fn();
        const auto b = clock::now();
        t.push_back(std::chrono::duration<double>(b - a).count());
        if (std::chrono::duration<double>(b - start).count() >= caps.max_seconds) break;
    } while (static_cast<index_t>(t.size()) < caps.max_samples);
    return t;
}

inline double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
    std::nth_element(v.begin(), mid, v.end());
    if (v.size() % 2) return *mid;
    return (*mid + *std::max_element(v.begin(), mid)) / 2.0;
}

/// One partitioner of the grid: a strategy name with an optional algorithm.
struct BenchEntry {
    std::string obj;
    std::string alg;

    std::string label() const { return alg.empty() ? obj : obj + "/" + alg; }
    std::string model() const { return to_string(strategy(obj).kind); }

    /// "obj" or "obj:alg".
    static BenchEntry parse(const std::string& text) {
        const auto colon = text.find(':');
        BenchEntry e{text.substr(0, colon), colon == std::string::npos ? "" : text.substr(colon + 1)};
        strategy(e.obj);
        parse_algorithm(e.alg);
        return e;
    }
};

struct BenchOptions {
    std::string dir;
    std::vector<BenchEntry> entries;
    std::vector<index_t> parts{2, 4, 8};
    RunConfig base;  // eps, coefficients, balance, block size, seed
    index_t trials = 100;
    TimingCaps caps;
    bool timing = true;
    std::string out = "bench.csv";
    std::string profile = "profile.csv";
};

struct BenchRecord {
    std::string matrix;
    index_t m = 0, n = 0, N = 0;
    std::string partitioner, objective, model, algorithm;  // model: cost the metric is measured in
    std::string k_label;  // requested K, or "-" for variable part counts
    index_t parts = 0;
    double eps = 0.0;
    std::string status = "ok";
    std::string note;  // failure reason
    double cost = 0.0, metric = 0.0;
    index_t probes = 0, queries = 0, trials = 0;
    double seconds = 0.0, spmv_seconds = 0.0, spmv_units = 0.0;
};

inline const char* bench_header() {
    return "matrix,m,n,nnz,partitioner,objective,model,algorithm,K,parts,eps,status,cost,metric,probes,queries,trials,"
           "seconds,spmv_seconds,spmv_units";
}

inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
}

/// Shortest text that reads back to the same double.
inline std::string num(double x) { return std::isfinite(x) ? json(x).dump() : (x > 0 ? "inf" : "-inf"); }

inline std::string csv_row(const BenchRecord& r) {
    std::ostringstream o;
    o << csv_field(r.matrix) << ',' << r.m << ',' << r.n << ',' << r.N << ',' << csv_field(r.partitioner) << ','
      << r.objective << ',' << r.model << ',' << r.algorithm << ',' << r.k_label << ',' << r.parts << ',' << num(r.eps) << ','
      << r.status;
    if (r.status == "ok")
        o << ',' << num(r.cost) << ',' << num(r.metric) << ',' << r.probes << ',' << r.queries << ',' << r.trials
          << ',' << num(r.seconds) << ',' << num(r.spmv_seconds) << ',' << num(r.spmv_units);
    else
        o << ",,,,,,,,";
    return o.str();
}

inline const std::vector<double>& profile_deviations() {
    static const std::vector<double> d = {0.0, 0.01, 0.02, 0.05, 0.1, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0};
    return d;
}

/**
 * @brief Performance profile: per partitioner, the fraction of its groups in
 * which it lands within each relative deviation of the group's best value.
 *
 * Quality groups are (matrix, K, model) over the metric column; time
 * groups are (matrix, K) over SpMV units. Failed cells never qualify.
 */
inline std::string performance_profile(const std::vector<BenchRecord>& recs, bool timing) {
    std::ostringstream o;
    o << "measure,partitioner,deviation,fraction\n";
    auto emit = [&](const char* measure, auto key, auto value) {
        std::map<std::string, double> best;
        for (const auto& r : recs)
            if (r.status == "ok") {
                auto [it, fresh] = best.emplace(key(r), value(r));
                if (!fresh) it->second = std::min(it->second, value(r));
            }
        std::vector<std::string> order;
        std::map<std::string, std::vector<double>> dev;
        for (const auto& r : recs) {
            if (!dev.count(r.partitioner)) order.push_back(r.partitioner);
            auto& d = dev[r.partitioner];
            if (r.status != "ok") {
                d.push_back(kInf);
                continue;
            }
            const double b = best.at(key(r)), v = value(r);
            d.push_back(v == b ? 0.0 : b == 0.0 ? kInf : (v - b) / std::abs(b));
        }
        for (const auto& p : order) {
            const auto& d = dev[p];
            for (double tau : profile_deviations()) {
                const auto hits = std::count_if(d.begin(), d.end(), [&](double x) { return x <= tau; });
                o << measure << ',' << csv_field(p) << ',' << num(tau) << ','
                  << num(static_cast<double>(hits) / static_cast<double>(d.size())) << '\n';
            }
        }
    };
    emit("quality", [](const BenchRecord& r) { return r.matrix + '\n' + r.k_label + '\n' + r.model; },
         [](const BenchRecord& r) { return r.metric; });
    if (timing)
        emit("time", [](const BenchRecord& r) { return r.matrix + '\n' + r.k_label; },
             [](const BenchRecord& r) { return r.spmv_units; });
    return o.str();
}

inline unsigned bench_threads() {
    unsigned t = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("CHAINPART_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) t = std::min<unsigned>(t, static_cast<unsigned>(v));
    }
    return t;
}

/// Calls work(i) for i in [0, count) on up to threads workers.
template <class F>
void parallel_for(std::size_t count, unsigned threads, F&& work) {
    std::atomic<std::size_t> next{0};
    auto loop = [&] {
        for (std::size_t i = next++; i < count; i = next++) work(i);
    };
    const unsigned n = static_cast<unsigned>(std::min<std::size_t>(threads, count));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < n; ++t) pool.emplace_back(loop);
    loop();
    for (auto& th : pool) th.join();
}

/**
 * @brief Runs the grid over every .mtx file of a directory.
 *
 * Quality runs go through the worker pool; timing runs afterwards, one at a
 * time. Returns the number of cells that failed.
 */
inline index_t run_bench(const BenchOptions& opt, std::ostream& log) {
    namespace fs = std::filesystem;
    std::vector<fs::path> files;
    std::error_code ec;
    if (!fs::is_directory(opt.dir, ec)) throw IoError("'" + opt.dir + "' is not a directory");
    for (const auto& e : fs::directory_iterator(opt.dir))
        if (e.is_regular_file() && e.path().extension() == ".mtx") files.push_back(e.path());
    std::sort(files.begin(), files.end());

    struct Loaded {
        std::string name;
        CsrMatrix A;
        double spmv = 0.0;
    };
    std::vector<Loaded> mats;
    for (const auto& f : files) {
        try {
            RunConfig c = opt.base;
            c.matrix = f.string();
            mats.push_back({f.filename().string(), load_input(c)});
        } catch (const std::exception& e) {
            log << "skipping " << f.filename().string() << ": " << e.what() << '\n';
        }
    }

    struct Cell {
        std::size_t mat;
        BenchEntry entry;
        index_t K;
        bool variable;
    };
    std::vector<Cell> cells;
    for (std::size_t i = 0; i < mats.size(); ++i)
        for (const auto& e : opt.entries) {
            if (strategy(e.obj).family == Family::Block) {
                cells.push_back({i, e, 0, true});
                continue;
            }
            for (index_t K : opt.parts) cells.push_back({i, e, K, false});
        }

    std::vector<BenchRecord> recs(cells.size());
    auto config_of = [&](const Cell& c) {
        RunConfig cfg = opt.base;
        cfg.obj = c.entry.obj;
        cfg.alg = c.entry.alg;
        if (!c.variable) cfg.K = c.K;
        return cfg;
    };
    parallel_for(cells.size(), bench_threads(), [&](std::size_t i) {
        const Cell& c = cells[i];
        const Loaded& L = mats[c.mat];
        BenchRecord& r = recs[i];
        r.matrix = L.name;
        r.m = L.A.rows();
        r.n = L.A.cols();
        r.N = L.A.nnz();
        r.partitioner = c.entry.label();
        r.objective = c.entry.obj;
        r.model = c.entry.model();
        r.k_label = c.variable ? "-" : std::to_string(c.K);
        r.eps = opt.base.eps;
        try {
            RunConfig cfg = config_of(c);
            const index_t trials = strategy(cfg.obj).randomized ? std::max<index_t>(1, opt.trials) : 1;
            double cost = 0.0, metric = 0.0;
            for (index_t t = 0; t < trials; ++t) {
                cfg.seed = opt.base.seed + static_cast<std::uint64_t>(t);
                const auto o = run_partition(L.A, cfg);
                cost += o.cost;
                metric += o.metric;
                r.algorithm = o.algorithm;
                r.probes = o.probes;
                r.queries = o.queries;
                r.parts = o.split ? o.split->parts() : o.rows.parts();
            }
            r.cost = cost / static_cast<double>(trials);
            r.metric = metric / static_cast<double>(trials);
            r.trials = trials;
        } catch (const InfeasibleError& e) {
            r.status = "infeasible";
            r.note = e.what();
        } catch (const std::exception& e) {
            r.status = "error";
            r.note = e.what();
            r.algorithm = c.entry.alg;
            r.metric = kInf;
        }
    });
    index_t failed = 0;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (recs[i].status != "ok") {
            ++failed;
            log << recs[i].matrix << ' ' << recs[i].partitioner << " K=" << recs[i].k_label << ": " << recs[i].status
                << " (" << recs[i].note << ")\n";
        }
    }

    if (opt.timing) {
        for (auto& L : mats) {
            std::vector<double> x(L.A.cols(), 1.0), y(L.A.rows());
            L.spmv = median(sample_seconds([&] { spmv(L.A, x, y); }, opt.caps));
        }
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (recs[i].status != "ok") continue;
            const Loaded& L = mats[cells[i].mat];
            RunConfig cfg = config_of(cells[i]);
            const auto t = sample_seconds([&] { run_partition(L.A, cfg); }, opt.caps);
            recs[i].seconds = *std::min_element(t.begin(), t.end());
            recs[i].spmv_seconds = L.spmv;
            recs[i].spmv_units = L.spmv > 0 ? recs[i].seconds / L.spmv : 0.0;
        }
    }

    std::string csv = std::string(bench_header()) + "\n";
    for (const auto& r : recs) csv += csv_row(r) + "\n";
    write_text(opt.out, csv);
    write_text(opt.profile, performance_profile(recs, opt.timing));
    return failed;
}

}  // namespace chainpart::cli
