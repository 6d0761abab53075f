#include "steiner/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "steiner/exact.hpp"
#include "steiner/gcf.hpp"
#include "steiner/lp.hpp"
#include "steiner/two_approx.hpp"

namespace steiner {

namespace {

const std::set<std::string> kAlgos = {"tm", "kmb", "mehlhorn", "gcf", "lca", "lp", "exact"};
const std::set<std::string> kGens = {"all:naive", "all:smart", "all:dw", "voronoi",
                                     "ondemand"};

bool parse_onoff(const std::string& v, const std::string& key) {
    if (v == "on") return true;
    if (v == "off") return false;
    throw std::invalid_argument("spec: " + key + " takes on or off");
}

std::string onoff(bool v) { return v ? "on" : "off"; }

}  // namespace

RunSpec parse_run_spec(const std::string& text) {
    RunSpec spec;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ';')) {
        if (item.empty()) continue;
        auto eq = item.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("spec: expected key=value, got '" + item + "'");
        std::string key = item.substr(0, eq), value = item.substr(eq + 1);
        if (key == "algo") {
            spec.algo = value;
        } else if (key == "k") {
            spec.k = std::stoi(value);
        } else if (key == "gen") {
            spec.gen = value;
        } else if (key == "dist") {
            spec.dist = value;
        } else if (key == "sp") {
            spec.sp = value;
        } else if (key == "win") {
            spec.win = value;
        } else if (key == "save") {
            spec.save = value;
        } else if (key == "reduce") {
            spec.reduce = parse_onoff(value, key);
        } else if (key == "singlepass") {
            spec.singlepass = parse_onoff(value, key);
        } else if (key == "presep") {
            spec.presep = value;
        } else if (key == "consep") {
            spec.consep = parse_onoff(value, key);
        } else if (key == "stronger") {
            spec.stronger = parse_onoff(value, key);
        } else if (key == "bound") {
            spec.bound = parse_onoff(value, key);
        } else if (key == "prune") {
            spec.prune = parse_onoff(value, key);
        } else if (key == "rounding") {
            spec.rounding = value;
        } else if (key == "seed") {
            spec.seed = std::stoull(value);
        } else if (key == "time") {
            spec.time_s = std::stod(value);
        } else if (key == "mem") {
            spec.mem_bytes = static_cast<std::size_t>(std::stoull(value));
        } else {
            throw std::invalid_argument("spec: unknown key '" + key + "'");
        }
    }
    auto check = check_spec(spec);
    if (!check.error.empty()) throw std::invalid_argument(check.error);
    return spec;
}

std::string format_run_spec(const RunSpec& spec) {
    std::ostringstream os;
    os << "algo=" << spec.algo << ";k=" << spec.k;
    bool components = spec.algo == "gcf" || spec.algo == "lca" || spec.algo == "lp";
    if (components) os << ";gen=" << spec.gen;
    if (spec.algo != "tm" && spec.algo != "mehlhorn" && spec.algo != "exact")
        os << ";dist=" << spec.dist << ";sp=" << spec.sp;
    if (spec.algo == "gcf" || spec.algo == "lca")
        os << ";win=" << spec.win << ";save=" << spec.save << ";reduce=" << onoff(spec.reduce)
           << ";singlepass=" << onoff(spec.singlepass);
    if (spec.algo == "lp")
        os << ";presep=" << spec.presep << ";consep=" << onoff(spec.consep)
           << ";stronger=" << onoff(spec.stronger) << ";bound=" << onoff(spec.bound)
           << ";prune=" << onoff(spec.prune) << ";rounding=" << spec.rounding
           << ";seed=" << spec.seed;
    return os.str();
}

SpecCheck check_spec(const RunSpec& spec) {
    SpecCheck out;
    auto fail = [&](const std::string& msg) { out.error = "spec: " + msg; };
    if (!kAlgos.count(spec.algo)) {
        fail("unknown algorithm '" + spec.algo + "'");
        return out;
    }
    if (spec.k < 2) {
        fail("k must be at least 2");
        return out;
    }
    if (!kGens.count(spec.gen)) {
        fail("unknown generation strategy '" + spec.gen + "'");
        return out;
    }
    if (spec.dist != "apsp" && spec.dist != "sssp") {
        fail("dist takes apsp or sssp");
        return out;
    }
    if (spec.sp != "prefer" && spec.sp != "forbid") {
        fail("sp takes prefer or forbid");
        return out;
    }
    if (spec.win != "abs" && spec.win != "rel" && spec.win != "loss") {
        fail("win takes abs, rel or loss");
        return out;
    }
    if (spec.save != "matrix" && spec.save != "static" && spec.save != "dynamic") {
        fail("save takes matrix, static or dynamic");
        return out;
    }
    if (spec.presep != "initial" && spec.presep != "ondemand") {
        fail("presep takes initial or ondemand");
        return out;
    }
    if (spec.rounding != "sample" && spec.rounding != "max") {
        fail("rounding takes sample or max");
        return out;
    }
    if (spec.time_s < 0) {
        fail("time budget must be nonnegative");
        return out;
    }
    if (spec.mem_bytes == 0) {
        fail("memory budget must be positive");
        return out;
    }
    if (spec.algo == "lca" && spec.win != "loss") {
        fail("lca contracts losses and requires win=loss");
        return out;
    }
    if (spec.gen == "ondemand") {
        if (spec.algo != "gcf") {
            fail("gen=ondemand is specific to gcf");
        } else if (spec.win != "abs") {
            fail("gen=ondemand requires win=abs");
        } else if (spec.k != 3) {
            fail("gen=ondemand requires k=3");
        } else if (spec.reduce || spec.singlepass) {
            fail("gen=ondemand excludes reduce and singlepass");
        }
        if (!out.error.empty()) return out;
    }
    if (spec.gen == "voronoi" && spec.k >= 4)
        out.warnings.push_back(
            "gen=voronoi only guarantees a minimum 3-restricted tree; components may be "
            "suboptimal for k >= 4");
    return out;
}

namespace {

GcfOptions gcf_options(const RunSpec& spec,
                       std::chrono::steady_clock::time_point deadline) {
    GcfOptions opts;
    opts.win = spec.win == "abs" ? WinKind::abs
               : spec.win == "rel" ? WinKind::rel
                                   : WinKind::loss;
    opts.save = spec.save == "matrix" ? SaveMode::matrix
                : spec.save == "static" ? SaveMode::static_tree
                                        : SaveMode::dynamic_tree;
    opts.reduce = spec.reduce;
    opts.singlepass = spec.singlepass;
    opts.loss_contract = spec.algo == "lca";
    opts.deadline = deadline;
    return opts;
}

ComponentSet generate(const RunSpec& spec, const Instance& inst,
                      const DistanceOracle& oracle) {
    if (spec.gen == "all:naive") return gen_all_naive(inst, oracle, spec.k);
    if (spec.gen == "all:smart") return gen_all_smart(inst, oracle, spec.k);
    if (spec.gen == "all:dw") return gen_all_dw(inst, spec.k);
    if (spec.gen == "voronoi")
        return gen_voronoi(inst, oracle, voronoi_regions(inst), spec.k);
    throw std::logic_error("generate: unexpected strategy");
}

// oracle footprint: one (double, pred, valid) entry per covered pair
std::size_t oracle_bytes(const Instance& inst, DistMode mode) {
    std::size_t rows = mode == DistMode::apsp
                           ? static_cast<std::size_t>(inst.num_nodes())
                           : inst.terminals().size();
    return rows * static_cast<std::size_t>(inst.num_nodes()) * 13;
}

bool is_large(const Instance& inst) {
    return static_cast<int>(inst.edges().size()) > 16000 || inst.num_nodes() > 8000;
}

}  // namespace

SteinerTree solve_spec(const RunSpec& spec, const Instance& inst) {
    auto check = check_spec(spec);
    if (!check.error.empty()) throw std::invalid_argument(check.error);

    auto deadline = std::chrono::steady_clock::now() +
                    std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                        std::chrono::duration<double>(spec.time_s));
    auto check_deadline = [&] {
        if (std::chrono::steady_clock::now() > deadline)
            throw TimeoutError("bench: time budget exceeded");
    };
    check_deadline();

    DistMode mode = spec.dist == "apsp" ? DistMode::apsp : DistMode::sssp;
    if (spec.algo == "exact") mode = DistMode::apsp;  // the table roots anywhere
    bool needs_oracle = spec.algo != "tm" && spec.algo != "mehlhorn";
    if (needs_oracle && oracle_bytes(inst, mode) > spec.mem_bytes) throw std::bad_alloc();

    if (spec.algo == "tm") return tm(inst);
    if (spec.algo == "mehlhorn") return mehlhorn(inst);

    SpPolicy policy = spec.sp == "prefer" ? SpPolicy::prefer : SpPolicy::forbid;
    auto oracle = shortest_paths(inst, mode, policy);
    check_deadline();
    if (spec.algo == "kmb") return kmb(inst, oracle);
    if (spec.algo == "exact")
        return prune_to_steiner_tree(inst, DreyfusWagner::solve(inst, oracle).edge_indices);
    if (spec.algo == "gcf" || spec.algo == "lca") {
        auto opts = gcf_options(spec, deadline);
        if (spec.gen == "ondemand") return run_gcf_ondemand(inst, oracle, opts).tree;
        auto set = generate(spec, inst, oracle);
        check_deadline();
        return run_gcf(inst, oracle, set, opts).tree;
    }
    // lp
    auto set = generate(spec, inst, oracle);
    check_deadline();
    RoundOptions opts;
    opts.ser.presep_initial = spec.presep == "initial";
    opts.ser.consep = spec.consep;
    opts.ser.stronger = spec.stronger;
    opts.ser.bound = spec.bound;
    opts.ser.deadline = deadline;
    opts.deterministic = spec.rounding == "max";
    opts.prune = spec.prune;
    opts.seed = spec.seed;
    opts.k = spec.k;
    return round_iterative(inst, set, opts);
}

RunRecord run_one(const RunSpec& spec, const Instance& inst, const std::string& name,
                  const BoundsTable* bounds) {
    RunRecord rec;
    rec.instance = name;
    rec.algo = spec.algo;
    rec.k = spec.k;
    std::string cov = coverage_group(inst);
    rec.flags = format_run_spec(spec) + ";cov=" + cov.substr(cov.find(' ') + 1) +
                ";large=" + (is_large(inst) ? "1" : "0");

    auto start = std::chrono::steady_clock::now();
    try {
        SteinerTree tree = solve_spec(spec, inst);
        rec.cost = tree.cost;
        rec.status = "success";
        if (bounds) {
            auto it = bounds->find(name);
            if (it != bounds->end()) rec.gap_permil = gap_permil(tree.cost, it->second);
        }
    } catch (const TimeoutError&) {
        rec.status = "timeout";
    } catch (const std::bad_alloc&) {
        rec.status = "memlimit";
    } catch (const std::exception& e) {
        // the solvers' own table guards count against the memory budget
        rec.status = std::string(e.what()).find("table") != std::string::npos ? "memlimit"
                                                                              : "error";
    }
    rec.time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rec;
}

std::vector<RunRecord> run_batch(const RunSpec& spec, const std::vector<std::string>& paths,
                                 int workers, const BoundsTable* bounds) {
    std::vector<RunRecord> records(paths.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        while (true) {
            std::size_t i = next.fetch_add(1);
            if (i >= paths.size()) return;
            std::string name = std::filesystem::path(paths[i]).stem().string();
            try {
                auto inst = parse_stp_file(paths[i]);
                records[i] = run_one(spec, inst, name, bounds);
            } catch (const std::exception&) {
                records[i].instance = name;
                records[i].algo = spec.algo;
                records[i].flags = format_run_spec(spec);
                records[i].k = spec.k;
                records[i].status = "error";
            }
        }
    };
    workers = std::max(1, std::min<int>(workers, static_cast<int>(paths.size())));
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    return records;
}

GroupsTable parse_groups(const std::string& text) {
    GroupsTable groups;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos)
            throw std::runtime_error("groups: line " + std::to_string(lineno) +
                                     " is not group<TAB>instance");
        groups[line.substr(0, tab)].push_back(line.substr(tab + 1));
    }
    return groups;
}

GroupsTable parse_groups_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("groups: cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_groups(buf.str());
}

namespace {

struct ConfigKey {
    std::string config;  // canonical spec string, instance markers stripped
    std::string cov;     // coverage decile, "" when unknown
    bool large = false;
};

ConfigKey split_flags(const std::string& flags) {
    ConfigKey key;
    std::istringstream in(flags);
    std::string item;
    std::vector<std::string> rest;
    while (std::getline(in, item, ';')) {
        if (item.rfind("cov=", 0) == 0)
            key.cov = item.substr(4);
        else if (item.rfind("large=", 0) == 0)
            key.large = item.substr(6) == "1";
        else
            rest.push_back(item);
    }
    for (std::size_t i = 0; i < rest.size(); ++i) key.config += (i ? ";" : "") + rest[i];
    return key;
}

struct Cell {
    int count = 0;
    int success = 0;
    int optimal = 0;
    int with_bound = 0;
    double gap_sum = 0.0;
    double time_sum = 0.0;
};

std::string fmt(double v, int digits = 2) {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(digits);
    os << v;
    return os.str();
}

void emit_table(std::ostringstream& os, const std::string& title,
                const std::vector<std::string>& configs,
                const std::map<std::string, std::map<std::string, Cell>>& rows) {
    os << "## " << title << "\n\n";
    os << "| group | configuration | instances | success % | optimal % | avg gap ‰ | "
          "avg time s |\n";
    os << "|---|---|---|---|---|---|---|\n";
    for (const auto& [group, per_config] : rows)
        for (const auto& config : configs) {
            auto it = per_config.find(config);
            if (it == per_config.end() || it->second.count == 0) continue;
            const Cell& c = it->second;
            os << "| " << group << " | " << config << " | " << c.count << " | "
               << fmt(100.0 * c.success / c.count, 1) << " | ";
            if (c.with_bound > 0)
                os << fmt(100.0 * c.optimal / c.with_bound, 1) << " | "
                   << fmt(c.gap_sum / c.with_bound, 2) << " | ";
            else
                os << "- | - | ";
            if (c.success > 0)
                os << fmt(c.time_sum / c.success, 3);
            else
                os << "-";
            os << " |\n";
        }
    os << "\n";
}

}  // namespace

std::string report_markdown(const std::vector<RunRecord>& records, const BoundsTable& bounds,
                            const GroupsTable& groups) {
    std::vector<std::string> configs;
    std::set<std::string> missing_bounds;
    struct Row {
        const RunRecord* rec;
        ConfigKey key;
        double gap = std::numeric_limits<double>::quiet_NaN();
    };
    std::vector<Row> rows;
    for (const auto& rec : records) {
        Row row{&rec, split_flags(rec.flags), rec.gap_permil};
        if (std::isnan(row.gap) && rec.status == "success") {
            auto it = bounds.find(rec.instance);
            if (it != bounds.end()) row.gap = gap_permil(rec.cost, it->second);
        }
        if (rec.status == "success" && std::isnan(row.gap)) missing_bounds.insert(rec.instance);
        if (std::find(configs.begin(), configs.end(), row.key.config) == configs.end())
            configs.push_back(row.key.config);
        rows.push_back(std::move(row));
    }
    std::sort(configs.begin(), configs.end());

    auto accumulate = [](std::map<std::string, std::map<std::string, Cell>>& table,
                         const std::string& group, const Row& row) {
        Cell& c = table[group][row.key.config];
        ++c.count;
        if (row.rec->status == "success") {
            ++c.success;
            c.time_sum += row.rec->time_s;
            if (!std::isnan(row.gap)) {
                ++c.with_bound;
                c.gap_sum += row.gap;
                if (row.gap <= 1e-9) ++c.optimal;
            }
        }
    };

    std::ostringstream os;
    os << "# Benchmark report\n\n";
    if (!missing_bounds.empty()) {
        os << "warning: no bound for";
        for (const auto& name : missing_bounds) os << " " << name;
        os << "; these runs are excluded from gap and optimality columns\n\n";
    }

    std::map<std::string, std::map<std::string, Cell>> all;
    for (const auto& row : rows) accumulate(all, "all", row);
    emit_table(os, "All instances", configs, all);

    if (!groups.empty()) {
        std::map<std::string, std::map<std::string, Cell>> named;
        for (const auto& [group, members] : groups)
            for (const auto& row : rows)
                if (std::find(members.begin(), members.end(), row.rec->instance) !=
                    members.end())
                    accumulate(named, group, row);
        emit_table(os, "Configured groups", configs, named);
    }

    std::map<std::string, std::map<std::string, Cell>> coverage;
    for (const auto& row : rows)
        if (!row.key.cov.empty()) accumulate(coverage, "Coverage " + row.key.cov, row);
    if (!coverage.empty()) emit_table(os, "Coverage deciles", configs, coverage);

    std::map<std::string, std::map<std::string, Cell>> size;
    for (const auto& row : rows) accumulate(size, row.key.large ? "Large" : "Small", row);
    emit_table(os, "Instance size", configs, size);

    if (configs.size() >= 2) {
        // instances every configuration finished successfully
        std::map<std::string, std::set<std::string>> solved;
        for (const auto& row : rows)
            if (row.rec->status == "success") solved[row.rec->instance].insert(row.key.config);
        std::set<std::string> mutual;
        for (const auto& [inst, got] : solved)
            if (got.size() == configs.size()) mutual.insert(inst);
        std::map<std::string, std::map<std::string, Cell>> head;
        for (const auto& row : rows)
            if (mutual.count(row.rec->instance)) accumulate(head, "mutual successes", row);
        emit_table(os, "Head to head (instances solved by every configuration)", configs,
                   head);
    }
    return os.str();
}

}  // namespace steiner
