#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace jitune {

struct Edge {
    int u = 0;
    int v = 0;
    double w = 1.0;
};

struct IngestStats {
    std::size_t lines_read = 0;
    std::size_t loops_dropped = 0;
    std::size_t duplicates_merged = 0;
    bool symmetrized = false;
};

// Undirected weighted graph with dense node ids 0..node_count-1.
// Optional per-node label sets and fixed-dimension attribute vectors.
// Immutable after construction; safe for concurrent reads.
class Graph {
public:
    Graph() = default;

    // Canonicalizes edges to u < v, drops self-loops, merges duplicates by
    // summing weights, and builds the adjacency index. Counters, when given,
    // receive the number of dropped loops / merged duplicates.
    static Graph from_edges(int node_count, std::vector<Edge> edges,
                            std::size_t* loops_dropped = nullptr,
                            std::size_t* duplicates_merged = nullptr);

    int node_count() const { return node_count_; }
    std::size_t edge_count() const { return edges_.size(); }
    const std::vector<Edge>& edges() const { return edges_; }
    double total_weight() const { return total_weight_; }

    // Recomputes W from the stored edges (invariant check).
    double recompute_total_weight() const;

    std::span<const int> neighbors(int v) const {
        return {adj_.data() + adj_off_[v], adj_off_[v + 1] - adj_off_[v]};
    }
    std::span<const double> neighbor_weights(int v) const {
        return {adj_w_.data() + adj_off_[v], adj_off_[v + 1] - adj_off_[v]};
    }
    std::size_t degree(int v) const { return adj_off_[v + 1] - adj_off_[v]; }

    bool has_edge(int u, int v) const;
    // Weight of edge (u,v), or 0 when absent.
    double edge_weight(int u, int v) const;

    bool has_labels() const { return labels_.has_value(); }
    const std::vector<std::vector<int>>& labels() const { return *labels_; }
    void set_labels(std::vector<std::vector<int>> labels);

    bool has_attributes() const { return attr_dim_ > 0; }
    int attribute_dim() const { return attr_dim_; }
    std::span<const double> attributes(int v) const {
        return {attrs_.data() + static_cast<std::size_t>(v) * attr_dim_,
                static_cast<std::size_t>(attr_dim_)};
    }
    void set_attributes(std::vector<double> flat, int dim);

    // Original node tokens when the input used non-integer ids.
    bool has_names() const { return !names_.empty(); }
    const std::vector<std::string>& names() const { return names_; }
    void set_names(std::vector<std::string> names) { names_ = std::move(names); }
    const std::string& name_of(int v) const;

    bool operator==(const Graph& other) const;

private:
    int node_count_ = 0;
    std::vector<Edge> edges_;  // sorted, u < v, unique
    std::vector<std::size_t> adj_off_;
    std::vector<int> adj_;
    std::vector<double> adj_w_;
    double total_weight_ = 0.0;
    std::optional<std::vector<std::vector<int>>> labels_;
    std::vector<double> attrs_;
    int attr_dim_ = 0;
    std::vector<std::string> names_;
};

// Link-prediction holdout: train graph plus positive/negative test pairs.
struct EdgeSplit {
    Graph train_graph;
    std::vector<std::pair<int, int>> test_positive;
    std::vector<std::pair<int, int>> test_negative;
    double holdout_fraction = 0.0;
    std::uint64_t seed = 0;
};

// Parses "u v [w]" lines; '#' starts a comment line. Integer ids are used
// directly (node_count = max id + 1); any non-integer token switches the
// whole file to interned ids in order of first appearance.
Graph load_edge_list(std::istream& in, bool directed = false,
                     IngestStats* stats = nullptr);
Graph load_edge_list_file(const std::string& path, bool directed = false,
                          IngestStats* stats = nullptr);

// "node label" lines, multi-label accumulated. Nodes absent from the file
// get empty label sets.
Graph attach_labels(Graph graph, std::istream& in);
Graph attach_labels_file(Graph graph, const std::string& path);

// "node f1 ... fk" lines, constant k, every node required.
Graph attach_attributes(Graph graph, std::istream& in);
Graph attach_attributes_file(Graph graph, const std::string& path);

void write_edge_list(const Graph& graph, std::ostream& out);
void write_labels(const Graph& graph, std::ostream& out);
void write_attributes(const Graph& graph, std::ostream& out);

// Removes round(holdout_fraction * |E|) edges uniformly at random as test
// positives and samples as many non-edges as negatives. Deterministic under
// seed. Throws when the non-edge pool is too small.
EdgeSplit split_edges(const Graph& graph, double holdout_fraction,
                      std::uint64_t seed);

struct Components {
    int count = 0;
    std::vector<int> assignment;  // component id per node, first-seen order
};
Components connected_components(const Graph& graph);

// Shortest decimal form that parses back to exactly the same double.
std::string format_double(double x);

}  // namespace jitune
