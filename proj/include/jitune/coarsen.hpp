#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "jitune/graph.hpp"

namespace jitune {

// One coarsening level: the reduced graph, the projection from the node ids
// it was derived from, and bookkeeping for the similarity and weight
// accounting. Inside a chain the projection is composed down from the
// original graph and alpha is measured against the original node count.
struct Synopsis {
    Graph graph;
    std::vector<int> projection;  // source node id -> synopsis node id
    int level = 1;
    double alpha = 1.0;           // |V'| / |V of the alpha reference graph|
    int parent_node_count = 0;
    double delta_w = 0.0;         // weight of edges collapsed away at this level
};

// Synopsis padded with one mirror node per absorbed original, so the node
// count matches the original graph and the KL comparison is defined.
// Mirror node ids start at the synopsis node count; mirror_of[i] is the
// synopsis node that mirror (synopsis_node_count + i) attaches to.
struct ExtendedSynopsis {
    Graph graph;
    std::vector<int> mirror_of;
    std::vector<int> projection;        // copy of the synopsis projection
    double extended_total_weight = 0.0; // W' + |V| - |V'|
};

struct SynopsisChain {
    std::vector<Synopsis> levels;
    double threshold = 0.5;
    std::size_t selected = 0;  // index into levels of the deepest member with alpha >= threshold

    bool empty() const { return levels.empty(); }
    const Synopsis& selected_synopsis() const { return levels[selected]; }
};

// Pairing produced by a grouping pass: partner[v] is v's match or -1.
using Pairing = std::vector<int>;

// Greedy second-order matching: in ascending node order, pair each unmatched
// node with its lowest-id unmatched partner reachable through a shared
// neighbor that is itself still unmatched.
Pairing star_collapse(const Graph& graph);

// Greedy first-order matching over edges in ascending (u,v) order, pairing
// endpoints that are both still unmatched. already_matched carries the star
// pass result forward.
void edge_collapse(const Graph& graph, Pairing& pairing);

// One structural coarsening level: star pass, then edge pass, then collapse.
// Labels follow the collapse rule (identical sets kept, otherwise one label
// drawn from the members' labels under seed). Returns nullopt when no pair
// exists, which ends the chain.
std::optional<Synopsis> coarsen_level(const Graph& graph, std::uint64_t seed);

// Attributed coarsening level: nodes with identical non-empty neighbor sets
// are grouped first, then remaining adjacent nodes pair greedily when their
// attribute cosine similarity reaches cosine_threshold. Collapsed node
// attributes are the member mean.
std::optional<Synopsis> equivalence_collapse(const Graph& graph,
                                             double cosine_threshold,
                                             std::uint64_t seed);

struct ChainOptions {
    double threshold = 0.5;
    bool attributed = false;
    double cosine_threshold = 0.9;
    std::uint64_t seed = 0;
};

// Coarsens until alpha drops below the threshold or a level fails to
// shrink. Each chain member's alpha is |V_level| / |V_original| and its
// projection maps original node ids. The chain may be empty if even level 1
// cannot shrink the graph.
SynopsisChain build_chain(const Graph& graph, const ChainOptions& options);

double similarity(const Synopsis& synopsis, const Graph& original);

ExtendedSynopsis extend_synopsis(const Synopsis& synopsis, const Graph& original);

// KL divergence between the edge-weight distributions of the original graph
// and the mirror-extended synopsis, summed over original edges. Pairs whose
// endpoints collapsed together are scored through the unit mirror edge;
// missing image edges are smoothed with eps.
double kl_divergence(const Graph& original, const ExtendedSynopsis& extended,
                     double eps = 1.0);

// Transfers synopsis embeddings to original nodes: row v copies the row of
// its synopsis node plus a uniform perturbation in [-eps_scale, eps_scale]
// per coordinate. eps_scale 0 yields exact copies.
std::vector<double> lift_embeddings(const std::vector<double>& synopsis_rows,
                                    int dim, const std::vector<int>& projection,
                                    double eps_scale, std::uint64_t seed);

// Projection sidecar format: "original_id synopsis_id" per line.
void write_projection(const std::vector<int>& projection, std::ostream& out);
std::vector<int> read_projection(std::istream& in);

}  // namespace jitune
