#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "steiner/stp_io.hpp"
#include "steiner/two_approx.hpp"

namespace steiner {

/// One benchmark configuration: which solver, which variant knobs, and the
/// per-instance budgets. Knob spellings follow the CLI flags one to one.
struct RunSpec {
    std::string algo = "tm";  // tm | kmb | mehlhorn | gcf | lca | lp | exact
    int k = 3;

    std::string gen = "all:smart";  // all:naive | all:smart | all:dw | voronoi | ondemand
    std::string dist = "apsp";      // apsp | sssp
    std::string sp = "prefer";      // prefer | forbid
    std::string win = "abs";        // abs | rel | loss
    std::string save = "static";    // matrix | static | dynamic
    bool reduce = false;
    bool singlepass = false;

    std::string presep = "initial";  // initial | ondemand
    bool consep = false;
    bool stronger = false;
    bool bound = false;
    bool prune = true;
    std::string rounding = "sample";  // sample | max

    std::uint64_t seed = 0;
    double time_s = 60.0;
    std::size_t mem_bytes = std::size_t{2} << 30;
};

/// "key=value;key=value" round trip. parse rejects unknown keys or values;
/// format emits every knob the algorithm consumes, in a fixed order, so the
/// flags column of a RunRecord identifies the configuration completely.
RunSpec parse_run_spec(const std::string& text);
std::string format_run_spec(const RunSpec& spec);

struct SpecCheck {
    std::string error;  // empty when the combination is runnable
    std::vector<std::string> warnings;
};

/// Validates knob combinations: ondemand requires gcf with win=abs, k=3 and
/// no reduce/singlepass; lca forces loss contraction so gen=ondemand is out;
/// voronoi generation with k >= 4 is legal but flagged as possibly suboptimal.
SpecCheck check_spec(const RunSpec& spec);

/// Runs the spec's solver on one instance under the spec's budgets and
/// returns the tree. Throws: std::invalid_argument for bad combinations,
/// TimeoutError past the time budget, std::bad_alloc past the memory budget.
SteinerTree solve_spec(const RunSpec& spec, const Instance& inst);

/// Executes one instance under the spec's budgets. Deadlines are cooperative
/// (checked at iteration boundaries), the memory budget is an up-front
/// allocation estimate plus the solvers' own table guards, never an OS limit.
/// Failures land in the status column; this never throws for per-run causes.
/// The flags column carries the canonical spec string plus cov=<decile> and
/// large=<0|1> instance markers for downstream grouping.
RunRecord run_one(const RunSpec& spec, const Instance& inst, const std::string& name,
                  const BoundsTable* bounds = nullptr);

/// Parses and runs every path; instances fan out over `workers` threads,
/// records come back in input order. A file that fails to parse becomes a
/// status=error record.
std::vector<RunRecord> run_batch(const RunSpec& spec, const std::vector<std::string>& paths,
                                 int workers = 1, const BoundsTable* bounds = nullptr);

/// group name -> instance names, from "group<TAB>instance" lines.
using GroupsTable = std::map<std::string, std::vector<std::string>>;
GroupsTable parse_groups(const std::string& text);
GroupsTable parse_groups_file(const std::string& path);

/// Markdown report over finished records: one summary table per grouping
/// (configured groups, coverage deciles, the Large predicate: more than
/// 16000 edges or 8000 nodes) with instance count, success and optimality
/// rates, average gap in permil and average time per configuration, plus a
/// head-to-head table restricted to instances every configuration solved.
/// Records without a bound are kept but excluded from gap averages.
std::string report_markdown(const std::vector<RunRecord>& records, const BoundsTable& bounds,
                            const GroupsTable& groups);

}  // namespace steiner
