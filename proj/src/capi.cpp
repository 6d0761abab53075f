#include "steiner.h"

#include <cstring>
#include <fstream>
#include <new>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "steiner/bench.hpp"
#include "steiner/stp_io.hpp"
#include "steiner/two_approx.hpp"

namespace {

thread_local std::string g_last_error;

struct Edge {
    int u, v;
    double cost;
};

}  // namespace

struct steiner_instance {
    steiner::Instance inst;
};

struct steiner_result {
    double cost = 0.0;
    std::vector<Edge> edges;
};

namespace {

steiner_status fail(steiner_status code, const std::string& msg) {
    g_last_error = msg;
    return code;
}

// every entry point funnels exceptions through here
steiner_status translate(const std::exception& e) {
    if (dynamic_cast<const steiner::TimeoutError*>(&e))
        return fail(STEINER_ERR_TIMEOUT, e.what());
    if (dynamic_cast<const std::bad_alloc*>(&e)) return fail(STEINER_ERR_MEMORY, e.what());
    if (dynamic_cast<const std::invalid_argument*>(&e))
        return fail(STEINER_ERR_ARGUMENT, e.what());
    return fail(STEINER_ERR_INTERNAL, e.what());
}

char* dup_string(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

}  // namespace

extern "C" {

const char* steiner_last_error(void) { return g_last_error.c_str(); }

steiner_status steiner_instance_parse(const char* stp_text, steiner_instance** out) {
    if (!stp_text || !out) return fail(STEINER_ERR_ARGUMENT, "null argument");
    *out = nullptr;
    try {
        *out = new steiner_instance{steiner::parse_stp(stp_text)};
        return STEINER_OK;
    } catch (const std::exception& e) {
        auto code = translate(e);
        return code == STEINER_ERR_INTERNAL ? fail(STEINER_ERR_PARSE, e.what()) : code;
    }
}

steiner_status steiner_instance_load(const char* path, steiner_instance** out) {
    if (!path || !out) return fail(STEINER_ERR_ARGUMENT, "null argument");
    *out = nullptr;
    try {
        *out = new steiner_instance{steiner::parse_stp_file(path)};
        return STEINER_OK;
    } catch (const std::exception& e) {
        auto code = translate(e);
        return code == STEINER_ERR_INTERNAL ? fail(STEINER_ERR_PARSE, e.what()) : code;
    }
}

void steiner_instance_free(steiner_instance* inst) { delete inst; }

int steiner_instance_nodes(const steiner_instance* inst) {
    return inst ? inst->inst.num_nodes() : 0;
}

int steiner_instance_edges(const steiner_instance* inst) {
    return inst ? static_cast<int>(inst->inst.edges().size()) : 0;
}

int steiner_instance_terminals(const steiner_instance* inst) {
    return inst ? static_cast<int>(inst->inst.terminals().size()) : 0;
}

steiner_status steiner_solve(const steiner_instance* inst, const char* spec,
                             steiner_result** out) {
    if (!inst || !spec || !out) return fail(STEINER_ERR_ARGUMENT, "null argument");
    *out = nullptr;
    try {
        auto parsed = steiner::parse_run_spec(spec);
        auto tree = steiner::solve_spec(parsed, inst->inst);
        auto* result = new steiner_result;
        result->cost = tree.cost;
        for (int ei : tree.edge_indices) {
            const auto& e = inst->inst.edges()[ei];
            result->edges.push_back({e.u, e.v, e.cost});
        }
        *out = result;
        return STEINER_OK;
    } catch (const std::exception& e) {
        return translate(e);
    }
}

void steiner_result_free(steiner_result* result) { delete result; }

double steiner_result_cost(const steiner_result* result) { return result ? result->cost : 0; }

int steiner_result_edge_count(const steiner_result* result) {
    return result ? static_cast<int>(result->edges.size()) : 0;
}

int steiner_result_edge(const steiner_result* result, int i, int* u, int* v, double* cost) {
    if (!result || i < 0 || i >= static_cast<int>(result->edges.size())) return 0;
    if (u) *u = result->edges[i].u;
    if (v) *v = result->edges[i].v;
    if (cost) *cost = result->edges[i].cost;
    return 1;
}

steiner_status steiner_check_spec(const char* spec, char** warnings_out) {
    if (!spec) return fail(STEINER_ERR_ARGUMENT, "null argument");
    if (warnings_out) *warnings_out = nullptr;
    try {
        auto parsed = steiner::parse_run_spec(spec);
        auto check = steiner::check_spec(parsed);
        if (!check.error.empty()) return fail(STEINER_ERR_ARGUMENT, check.error);
        if (warnings_out && !check.warnings.empty()) {
            std::string joined;
            for (const auto& w : check.warnings) {
                if (!joined.empty()) joined += '\n';
                joined += w;
            }
            *warnings_out = dup_string(joined);
        }
        return STEINER_OK;
    } catch (const std::exception& e) {
        return translate(e);
    }
}

steiner_status steiner_run_batch(const char* spec, const char* const* paths, int npaths,
                                 int workers, const char* bounds_path, char** csv_out) {
    if (!spec || !paths || npaths <= 0 || !csv_out)
        return fail(STEINER_ERR_ARGUMENT, "null argument");
    *csv_out = nullptr;
    try {
        auto parsed = steiner::parse_run_spec(spec);
        std::vector<std::string> files(paths, paths + npaths);
        steiner::BoundsTable bounds;
        if (bounds_path) bounds = steiner::parse_bounds_file(bounds_path);
        auto records = steiner::run_batch(parsed, files, workers,
                                          bounds_path ? &bounds : nullptr);
        std::ostringstream os;
        os << steiner::run_record_csv_header() << '\n';
        for (const auto& rec : records) os << steiner::to_csv_row(rec) << '\n';
        *csv_out = dup_string(os.str());
        return STEINER_OK;
    } catch (const std::exception& e) {
        return translate(e);
    }
}

steiner_status steiner_report(const char* const* csv_texts, int ncsv, const char* bounds_text,
                              const char* groups_text, char** markdown_out) {
    if (!csv_texts || ncsv <= 0 || !markdown_out)
        return fail(STEINER_ERR_ARGUMENT, "null argument");
    *markdown_out = nullptr;
    try {
        std::vector<steiner::RunRecord> records;
        for (int i = 0; i < ncsv; ++i) {
            if (!csv_texts[i]) return fail(STEINER_ERR_ARGUMENT, "null csv text");
            auto part = steiner::parse_run_records_csv(csv_texts[i]);
            records.insert(records.end(), part.begin(), part.end());
        }
        steiner::BoundsTable bounds;
        if (bounds_text) bounds = steiner::parse_bounds(bounds_text);
        steiner::GroupsTable groups;
        if (groups_text) groups = steiner::parse_groups(groups_text);
        *markdown_out = dup_string(steiner::report_markdown(records, bounds, groups));
        return STEINER_OK;
    } catch (const std::exception& e) {
        auto code = translate(e);
        return code == STEINER_ERR_INTERNAL ? fail(STEINER_ERR_PARSE, e.what()) : code;
    }
}

steiner_status steiner_rho_k(int k, double* out) {
    if (!out) return fail(STEINER_ERR_ARGUMENT, "null argument");
    try {
        *out = steiner::rho_k(k);
        return STEINER_OK;
    } catch (const std::exception& e) {
        return translate(e);
    }
}

steiner_status steiner_gap_permil(double cost, double best, double* out) {
    if (!out) return fail(STEINER_ERR_ARGUMENT, "null argument");
    try {
        *out = steiner::gap_permil(cost, best);
        return STEINER_OK;
    } catch (const std::exception& e) {
        return translate(e);
    }
}

void steiner_string_free(char* s) { delete[] s; }

}  // extern "C"
