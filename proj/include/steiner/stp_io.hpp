#pragma once

#include <map>
#include <string>
#include <vector>

#include "steiner/graph.hpp"

namespace steiner {

/// SteinLib STP 1.0 reader. Understands the header magic line, SECTION Graph
/// (Nodes/Edges/E lines, 1-based ids), SECTION Terminals (Terminals/T lines)
/// and the EOF marker. Comment lines and unknown sections are skipped. Arc
/// lines ("A u v w") are rejected: only the undirected problem is handled.
/// Throws std::runtime_error on malformed input.
Instance parse_stp(const std::string& text);
Instance parse_stp_file(const std::string& path);

std::string write_stp(const Instance& inst);

/// (cost/best - 1) * 1000. A negative result means the bounds table or the
/// solver is wrong; callers report it, never clamp. Throws if best <= 0.
double gap_permil(double cost, double best);

/// "Coverage X" where X-10 < 100|R|/|V| <= X, X in {10,...,100}.
std::string coverage_group(const Instance& inst);
std::string coverage_group(int num_terminals, int num_nodes);

/// Best known upper bounds, "name value" per line. '#' comments allowed.
using BoundsTable = std::map<std::string, double>;
BoundsTable parse_bounds(const std::string& text);
BoundsTable parse_bounds_file(const std::string& path);

struct RunRecord {
    std::string instance;
    std::string algo;
    std::string flags;
    int k = 0;
    double cost = std::numeric_limits<double>::quiet_NaN();        // iff success
    double gap_permil = std::numeric_limits<double>::quiet_NaN();  // iff bound known
    double time_s = 0.0;
    std::string status = "success";  // success | timeout | memlimit | error
};

std::string run_record_csv_header();
std::string to_csv_row(const RunRecord& rec);
std::vector<RunRecord> parse_run_records_csv(const std::string& text);

}  // namespace steiner
