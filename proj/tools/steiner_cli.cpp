// Benchmark driver over the shared library's C interface.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "steiner.h"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CLI::ValidationError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// a positional may be an .stp file or a directory to scan
std::vector<std::string> collect_instances(const std::vector<std::string>& inputs) {
    std::vector<std::string> files;
    for (const auto& input : inputs) {
        std::filesystem::path p(input);
        if (std::filesystem::is_directory(p)) {
            for (const auto& entry : std::filesystem::directory_iterator(p))
                if (entry.is_regular_file() && entry.path().extension() == ".stp")
                    files.push_back(entry.path().string());
        } else {
            files.push_back(input);
        }
    }
    std::sort(files.begin(), files.end());
    return files;
}

int fail_with_last_error(const std::string& what) {
    std::cerr << what << ": " << steiner_last_error() << "\n";
    return 1;
}

void write_output(const std::string& out_path, const char* text) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path);
    out << text;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Steiner tree benchmark harness"};
    app.require_subcommand(1);

    // ---- run ----
    auto* run = app.add_subcommand("run", "run one configuration over instances");
    std::string algo = "tm", gen = "all:smart", dist = "apsp", sp = "prefer";
    std::string win = "abs", save = "static", presep = "initial", rounding = "sample";
    std::string reduce = "off", singlepass = "off", consep = "off", stronger = "off";
    std::string bound = "off", prune = "on";
    int k = 3, workers = 1;
    unsigned long long seed = 0, mem = 2ull << 30;
    double time_s = 60.0;
    std::string bounds_path, out_path;
    std::vector<std::string> inputs;
    run->add_option("--algo", algo, "tm|kmb|mehlhorn|gcf|lca|lp|exact");
    run->add_option("--k", k, "restriction parameter");
    run->add_option("--gen", gen, "all:naive|all:smart|all:dw|voronoi|ondemand");
    run->add_option("--dist", dist, "apsp|sssp");
    run->add_option("--sp", sp, "prefer|forbid");
    run->add_option("--win", win, "abs|rel|loss");
    run->add_option("--save", save, "matrix|static|dynamic");
    run->add_option("--reduce", reduce, "on|off");
    run->add_option("--singlepass", singlepass, "on|off");
    run->add_option("--presep", presep, "initial|ondemand");
    run->add_option("--consep", consep, "on|off");
    run->add_option("--stronger", stronger, "on|off");
    run->add_option("--bound", bound, "on|off");
    run->add_option("--prune", prune, "on|off");
    run->add_option("--rounding", rounding, "sample|max");
    run->add_option("--seed", seed, "rng seed");
    run->add_option("--time", time_s, "per-instance budget, seconds");
    run->add_option("--mem", mem, "per-instance budget, bytes");
    run->add_option("--workers", workers, "parallel instances");
    run->add_option("--bounds", bounds_path, "best-known bounds file");
    run->add_option("--out", out_path, "CSV output file (default stdout)");
    run->add_option("paths", inputs, ".stp files or directories")->required();

    // ---- report ----
    auto* report = app.add_subcommand("report", "summarize run CSVs as markdown");
    std::string rep_bounds, rep_groups, rep_out;
    std::vector<std::string> csv_paths;
    report->add_option("--bounds", rep_bounds, "best-known bounds file");
    report->add_option("--groups", rep_groups, "group<TAB>instance table");
    report->add_option("--out", rep_out, "markdown output file (default stdout)");
    report->add_option("csvs", csv_paths, "RunRecord CSV files")->required();

    // ---- rho ----
    auto* rho = app.add_subcommand("rho", "worst-case k-restriction ratio");
    int rho_k_arg = 3;
    rho->add_option("--k", rho_k_arg, "restriction parameter")->required();

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) {
        std::ostringstream spec;
        spec << "algo=" << algo << ";k=" << k << ";gen=" << gen << ";dist=" << dist
             << ";sp=" << sp << ";win=" << win << ";save=" << save << ";reduce=" << reduce
             << ";singlepass=" << singlepass << ";presep=" << presep << ";consep=" << consep
             << ";stronger=" << stronger << ";bound=" << bound << ";prune=" << prune
             << ";rounding=" << rounding << ";seed=" << seed << ";time=" << time_s
             << ";mem=" << mem;
        char* warnings = nullptr;
        if (steiner_check_spec(spec.str().c_str(), &warnings) != STEINER_OK)
            return fail_with_last_error("invalid configuration");
        if (warnings) {
            std::cerr << "warning: " << warnings << "\n";
            steiner_string_free(warnings);
        }
        auto files = collect_instances(inputs);
        if (files.empty()) {
            std::cerr << "no .stp instances found\n";
            return 1;
        }
        std::vector<const char*> raw;
        for (const auto& f : files) raw.push_back(f.c_str());
        char* csv = nullptr;
        if (steiner_run_batch(spec.str().c_str(), raw.data(), static_cast<int>(raw.size()),
                              workers, bounds_path.empty() ? nullptr : bounds_path.c_str(),
                              &csv) != STEINER_OK)
            return fail_with_last_error("run failed");
        write_output(out_path, csv);
        steiner_string_free(csv);
        return 0;
    }

    if (report->parsed()) {
        std::vector<std::string> texts;
        for (const auto& path : csv_paths) texts.push_back(read_file(path));
        std::vector<const char*> raw;
        for (const auto& t : texts) raw.push_back(t.c_str());
        std::string bounds_text = rep_bounds.empty() ? "" : read_file(rep_bounds);
        std::string groups_text = rep_groups.empty() ? "" : read_file(rep_groups);
        char* md = nullptr;
        if (steiner_report(raw.data(), static_cast<int>(raw.size()),
                           rep_bounds.empty() ? nullptr : bounds_text.c_str(),
                           rep_groups.empty() ? nullptr : groups_text.c_str(),
                           &md) != STEINER_OK)
            return fail_with_last_error("report failed");
        write_output(rep_out, md);
        steiner_string_free(md);
        return 0;
    }

    double value = 0.0;
    if (steiner_rho_k(rho_k_arg, &value) != STEINER_OK)
        return fail_with_last_error("rho failed");
    std::printf("%.6f\n", value);
    return 0;
}
