#include <iostream>

#include <CLI11.hpp>

#include "bench.hpp"
#include "commands.hpp"
#include "selftest.hpp"

using namespace chainpart;
using namespace chainpart::cli;

namespace {

void add_model_options(CLI::App* app, RunConfig& cfg) {
    std::string names;
    for (const auto& s : strategies()) names += std::string(names.empty() ? "" : ", ") + s.name;
    app->add_option("--obj", cfg.obj, "Objective: " + names)->capture_default_str();
    app->add_option("--c-row", cfg.c_row, "Cost per row (default 10)");
    app->add_option("--c-entry", cfg.c_entry, "Cost per nonzero (default 1)");
    app->add_option("--c-message", cfg.c_message, "Cost per received entry (default 100)");
    app->add_option("--w-min", cfg.w_min, "Row degree floor of the monotonized cost (default: smallest row degree)");
    app->add_option("--balance", cfg.balance, "Nonzero slack of total-cost partitioners; negative disables")
        ->capture_default_str();
    app->add_option("--block-size", cfg.block_size, "Rows per block of the block strategies")->capture_default_str();
    app->add_flag("--symmetric", cfg.symmetric, "Symmetrize the pattern of a square input first");
}

void add_run_options(CLI::App* app, RunConfig& cfg) {
    add_model_options(app, cfg);
    app->add_option("--alg", cfg.alg, "exact, approx, lazy, dynamic, dynamic-simul or quadrangle");
    app->add_option("--eps", cfg.eps, "Relative tolerance of approx and lazy")->capture_default_str();
    app->add_option("--seed", cfg.seed, "Seed of randomized strategies")->capture_default_str();
}

void print(const json& j) { std::cout << j.dump(2) << '\n'; }

template <class F>
int guarded(F&& body) {
    try {
        return body();
    } catch (const InfeasibleError& e) {
        std::cerr << "infeasible: " << e.what() << '\n';
        return kInfeasible;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kIo;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Contiguous sparse matrix partitioning"};
    app.set_config("--config", "", "TOML or INI file; keys go under [partition], [evaluate] or [bench]");
    app.require_subcommand(1);

    RunConfig run;
    auto* part = app.add_subcommand("partition", "Partition the rows of a matrix");
    part->add_option("matrix", run.matrix, "Matrix Market file")->required();
    add_run_options(part, run);
    part->add_option("-K,--parts", run.K, "Number of parts")->capture_default_str();
    part->add_option("--fixed-phi", run.fixed_phi, "Column partition (map JSON) for balance-conn");
    part->add_option("--fixed-pi", run.fixed_pi, "Row partition (split JSON) for the assign strategies");
    part->add_option("--out", run.out, "Write the partition here");
    std::string pi_out;
    part->add_option("--pi-out", pi_out, "Assign strategies: write the row partition here");

    RunConfig eval;
    std::string eval_partition;
    auto* ev = app.add_subcommand("evaluate", "Report the costs of a stored row partition");
    ev->add_option("matrix", eval.matrix, "Matrix Market file")->required();
    ev->add_option("partition", eval_partition, "Row partition (split JSON)")->required();
    add_model_options(ev, eval);
    ev->add_option("--fixed-phi", eval.fixed_phi, "Column partition (map JSON)");

    BenchOptions bench;
    std::vector<std::string> bench_entries;
    bool no_timing = false;
    auto* be = app.add_subcommand("bench", "Run a partitioner grid over a directory of .mtx files");
    be->add_option("dir", bench.dir, "Directory of Matrix Market files")->required();
    add_run_options(be, bench.base);
    be->add_option("-K,--parts", bench.parts, "Part counts of the grid")->capture_default_str();
    be->add_option("--partitioner", bench_entries, "Grid entries obj or obj:alg (default: every objective)");
    be->add_option("--trials", bench.trials, "Runs averaged for randomized strategies")->capture_default_str();
    be->add_option("--max-samples", bench.caps.max_samples, "Timing samples per cell")->capture_default_str();
    be->add_option("--max-time", bench.caps.max_seconds, "Timing seconds per cell")->capture_default_str();
    be->add_flag("--no-timing", no_timing, "Skip timing");
    be->add_option("--out", bench.out, "Record CSV")->capture_default_str();
    be->add_option("--profile", bench.profile, "Performance profile CSV")->capture_default_str();

    std::string reorder_in, reorder_out, reorder_method = "rcm", perm_out;
    auto* re = app.add_subcommand("reorder", "Write a bandwidth-reducing permutation of a matrix");
    re->add_option("input", reorder_in, "Matrix Market file")->required();
    re->add_option("output", reorder_out, "Permuted Matrix Market file")->required();
    re->add_option("--method", reorder_method, "Reordering method")->check(CLI::IsMember({"rcm"}))->capture_default_str();
    re->add_option("--perm-out", perm_out, "Write the permutations (JSON) here");

    auto* st = app.add_subcommand("selftest", "Run the built-in oracle checks");

    bool dom_selftest = false;
    auto* dc = app.add_subcommand("domcount", "Dominance counter diagnostics");
    dc->add_flag("--selftest", dom_selftest, "Compare the counters against a scan")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::FileError& e) {
        std::cerr << e.what() << '\n';
        return kIo;
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kUsage;
    }

    if (*part) {
        return guarded([&] {
            const auto A = load_input(run);
            std::optional<MapPartition> phi;
            std::optional<SplitPartition> pi;
            if (!run.fixed_phi.empty()) phi = load_map(run.fixed_phi);
            if (!run.fixed_pi.empty()) pi = load_split(run.fixed_pi);
            const auto o = run_partition(A, run, phi ? &*phi : nullptr, pi ? &*pi : nullptr);
            if (!run.out.empty()) write_json(run.out, o.split ? to_json(*o.split) : to_json(*o.map));
            if (!pi_out.empty()) {
                if (!o.map) throw UsageError("--pi-out only applies to the assign strategies");
                write_json(pi_out, to_json(o.rows));
            }
            print(to_json(o));
            return kOk;
        });
    }
    if (*ev) {
        return guarded([&] {
            const auto A = load_input(eval);
            const auto P = load_split(eval_partition);
            std::optional<MapPartition> phi;
            if (!eval.fixed_phi.empty()) phi = load_map(eval.fixed_phi);
            print(run_evaluate(A, eval, P, phi ? &*phi : nullptr));
            return kOk;
        });
    }
    if (*be) {
        return guarded([&] {
            if (bench_entries.empty())
                for (const auto& s : strategies()) bench.entries.push_back({s.name, ""});
            for (const auto& e : bench_entries) bench.entries.push_back(BenchEntry::parse(e));
            bench.timing = !no_timing;
            const index_t failed = run_bench(bench, std::cerr);
            std::cerr << "wrote " << bench.out << " and " << bench.profile << " (" << failed << " failed cells)\n";
            return kOk;
        });
    }
    if (*re) {
        return guarded([&] {
            const auto A = load_matrix_market(reorder_in);
            const auto r = rcm_order(A);
            std::ostringstream text;
            write_matrix_market(text, permute(A, r.rows, r.cols));
            write_text(reorder_out, text.str());
            if (!perm_out.empty()) write_json(perm_out, to_json(r));
            std::cout << "bandwidth " << bandwidth(A) << " -> " << bandwidth(permute(A, r.rows, r.cols)) << '\n';
            return kOk;
        });
    }
    if (*st) return run_selftest(std::cout, false) ? kOk : kSelftestFailed;
    if (*dc) return run_selftest(std::cout, true) ? kOk : kSelftestFailed;
    return kUsage;
}
