#pragma once

#include <chrono>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "steiner/components.hpp"
#include "steiner/two_approx.hpp"

namespace steiner {

enum class SaveMode { matrix, static_tree, dynamic_tree };
enum class WinKind { abs, rel, loss };

/// Edge of the evolving terminal graph M. Endpoints are indices into the
/// instance's terminal list. origin >= 0 names the single original graph edge
/// this link stands for; kOriginClosure marks an initial closure link
/// (expandable through the distance oracle); kOriginZero marks a zero-cost
/// contraction link with no physical counterpart.
struct MEdge {
    int u = -1;
    int v = -1;
    double cost = 0.0;
    int origin = -1;
};
constexpr int kOriginClosure = -1;
constexpr int kOriginZero = -2;

class SaveOracle;

/// The terminal graph M of a greedy contraction run, its maintained MST, and
/// the attached bottleneck (save) oracle. Contractions only ever append
/// edges; the MST cost is non-increasing over a run.
class ContractionState {
public:
    ContractionState(const Instance& inst, const DistanceOracle& oracle, SaveMode mode);
    ~ContractionState();
    ContractionState(ContractionState&&) noexcept;
    ContractionState& operator=(ContractionState&&) noexcept;

    const Instance& instance() const { return *inst_; }
    const DistanceOracle& oracle() const { return *oracle_; }
    SaveMode save_mode() const { return mode_; }

    const std::vector<MEdge>& edges() const { return edges_; }
    /// Indices into edges() of the current MST(M).
    const std::vector<int>& mst_edges() const { return mst_edges_; }
    /// MST neighbors of a terminal index as (terminal index, edge) pairs.
    const std::vector<std::pair<int, int>>& mst_adjacency(int ti) const;
    double mst_cost() const { return mst_cost_; }

    /// Max edge cost on the MST path between two terminal indices; 0 for
    /// equal indices.
    double save_between(int ti, int tj) const;
    /// save(M, C): total cost of the MST edges a contraction of C removes.
    double save(const FullComponent& c) const;
    /// Same total over an explicit class-merge order (any order agrees).
    double save_terminals(const std::vector<int>& terminal_ids) const;

    /// Appends one M edge and restores the MST and oracle. Returns the edge's
    /// index in edges().
    int append_link(int ti, int tj, double cost, int origin);
    /// Full contraction: zero-cost links from the component's lowest terminal
    /// to each other terminal.
    void contract(const FullComponent& c);
    /// Loss contraction: the component's non-loss edges, mapped through the
    /// loss parts onto terminal pairs at their own cost. Requires loss and
    /// core edges (loss_complement) to be filled in.
    void loss_contract(const FullComponent& c);

    /// (leaves, inner nodes) of the bottleneck tree; tree modes only.
    std::pair<int, int> save_tree_shape() const;

private:
    const Instance* inst_;
    const DistanceOracle* oracle_;
    SaveMode mode_;
    std::vector<MEdge> edges_;
    std::vector<std::vector<std::pair<int, int>>> adj_;  // MST adjacency: (terminal, edge)
    std::vector<int> mst_edges_;
    double mst_cost_ = 0.0;
    std::unique_ptr<SaveOracle> save_;

    int find_replaced_mst_edge(int ti, int tj, double cost, int id) const;
};

struct WinFunction {
    WinKind kind = WinKind::abs;
};

/// win_abs = save - d(C); win_rel = save / d(C); win_loss = win_abs / d(Loss).
/// A zero loss scores +inf when win_abs is positive and -inf otherwise.
double win_value(const ContractionState& state, const FullComponent& c, WinKind kind);
/// Improvement test: win_abs > 0 for abs and loss kinds, win_rel > 1 for rel.
bool promising(const ContractionState& state, const FullComponent& c, WinKind kind);

struct GcfOptions {
    WinKind win = WinKind::abs;
    SaveMode save = SaveMode::matrix;
    bool reduce = false;
    bool singlepass = false;
    bool loss_contract = false;
    /// Assemble by MST over chosen components plus the expanded final M
    /// instead of rerunning the path-growth heuristic on augmented terminals.
    bool mst_union_assembly = false;
    bool trace = false;
    std::optional<std::chrono::steady_clock::time_point> deadline;
};

struct GcfResult {
    SteinerTree tree;
    std::vector<FullComponent> chosen;
    std::vector<double> wins;  // win value at the moment of each contraction
    std::string trace;
};

/// Greedy contraction over a pregenerated component set (2-terminal
/// components are ignored). loss_contract requires the loss win kind.
GcfResult run_gcf(const Instance& inst, const DistanceOracle& oracle,
                  const ComponentSet& set, const GcfOptions& opts);

/// Greedy contraction with components constructed on demand, one optimal-ish
/// 3-component per iteration. Only valid with win=abs and without reduce.
GcfResult run_gcf_ondemand(const Instance& inst, const DistanceOracle& oracle,
                           const GcfOptions& opts);

/// Three-step greedy per nonterminal center v: nearest terminal s0, then s1
/// maximizing save(s0,s1) - d(v,s1), then s2 maximizing the absolute win of
/// {s0,s1,s2} around v. Returns the best component with positive win, if any.
std::optional<FullComponent> ondemand_best_3comp(const ContractionState& state,
                                                 double* win_out = nullptr);

}  // namespace steiner
