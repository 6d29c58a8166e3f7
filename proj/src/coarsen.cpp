#include "jitune/coarsen.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <stdexcept>

#include "jitune/rng.hpp"

namespace jitune {

namespace {

// Collapses node groups into a Synopsis. groups lists every synopsis node's
// members (singletons included), ordered by smallest member id.
Synopsis collapse_groups(const Graph& graph,
                         const std::vector<std::vector<int>>& groups,
                         std::uint64_t seed) {
    const int n = graph.node_count();
    const int n_syn = static_cast<int>(groups.size());

    Synopsis syn;
    syn.parent_node_count = n;
    syn.projection.assign(n, -1);
    for (int a = 0; a < n_syn; ++a)
        for (int v : groups[a]) syn.projection[v] = a;

    std::vector<Edge> edges;
    edges.reserve(graph.edge_count());
    double delta_w = 0.0;
    for (const auto& e : graph.edges()) {
        int a = syn.projection[e.u];
        int b = syn.projection[e.v];
        if (a == b)
            delta_w += e.w;
        else
            edges.push_back({a, b, e.w});
    }
    syn.delta_w = delta_w;
    syn.graph = Graph::from_edges(n_syn, std::move(edges));
    syn.alpha = static_cast<double>(n_syn) / static_cast<double>(n);

    if (graph.has_labels()) {
        Rng rng(derive_seed(seed, "label-pick"));
        std::vector<std::vector<int>> labels(n_syn);
        for (int a = 0; a < n_syn; ++a) {
            const auto& members = groups[a];
            bool identical = true;
            for (std::size_t i = 1; i < members.size(); ++i)
                if (graph.labels()[members[i]] != graph.labels()[members[0]]) {
                    identical = false;
                    break;
                }
            if (identical) {
                labels[a] = graph.labels()[members[0]];
            } else {
                std::vector<int> pool;
                for (int v : members)
                    pool.insert(pool.end(), graph.labels()[v].begin(),
                                graph.labels()[v].end());
                if (!pool.empty())
                    labels[a] = {pool[rng.below(pool.size())]};
            }
        }
        syn.graph.set_labels(std::move(labels));
    }

    if (graph.has_attributes()) {
        const int d = graph.attribute_dim();
        std::vector<double> attrs(static_cast<std::size_t>(n_syn) * d, 0.0);
        for (int a = 0; a < n_syn; ++a) {
            for (int v : groups[a]) {
                auto row = graph.attributes(v);
                for (int j = 0; j < d; ++j)
                    attrs[static_cast<std::size_t>(a) * d + j] += row[j];
            }
            const double inv = 1.0 / static_cast<double>(groups[a].size());
            for (int j = 0; j < d; ++j)
                attrs[static_cast<std::size_t>(a) * d + j] *= inv;
        }
        syn.graph.set_attributes(std::move(attrs), d);
    }

    return syn;
}

std::vector<std::vector<int>> pairing_to_groups(const Graph& graph,
                                                const Pairing& pairing) {
    std::vector<std::vector<int>> groups;
    groups.reserve(graph.node_count());
    for (int v = 0; v < graph.node_count(); ++v) {
        int p = pairing[v];
        if (p >= 0 && p < v) continue;  // emitted with its lower-id partner
        if (p < 0)
            groups.push_back({v});
        else
            groups.push_back({v, p});
    }
    return groups;
}

double cosine(std::span<const double> a, std::span<const double> b) {
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na == 0.0 || nb == 0.0) return 0.0;
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

}  // namespace

Pairing star_collapse(const Graph& graph) {
    const int n = graph.node_count();
    Pairing partner(n, -1);
    for (int u = 0; u < n; ++u) {
        if (partner[u] >= 0) continue;
        int best = -1;
        for (int w : graph.neighbors(u)) {
            if (partner[w] >= 0) continue;  // shared neighbor must be unmatched
            for (int v : graph.neighbors(w)) {
                if (v == u || partner[v] >= 0) continue;
                if (best < 0 || v < best) best = v;
            }
        }
        if (best >= 0) {
            partner[u] = best;
            partner[best] = u;
        }
    }
    return partner;
}

void edge_collapse(const Graph& graph, Pairing& pairing) {
    if (static_cast<int>(pairing.size()) != graph.node_count())
        pairing.assign(graph.node_count(), -1);
    for (const auto& e : graph.edges()) {
        if (pairing[e.u] < 0 && pairing[e.v] < 0) {
            pairing[e.u] = e.v;
            pairing[e.v] = e.u;
        }
    }
}

std::optional<Synopsis> coarsen_level(const Graph& graph, std::uint64_t seed) {
    if (graph.node_count() < 2)
        throw std::runtime_error("cannot coarsen a graph with fewer than 2 nodes");
    Pairing pairing = star_collapse(graph);
    edge_collapse(graph, pairing);
    if (std::all_of(pairing.begin(), pairing.end(), [](int p) { return p < 0; }))
        return std::nullopt;  // collapse-stable
    return collapse_groups(graph, pairing_to_groups(graph, pairing), seed);
}

std::optional<Synopsis> equivalence_collapse(const Graph& graph,
                                             double cosine_threshold,
                                             std::uint64_t seed) {
    if (graph.node_count() < 2)
        throw std::runtime_error("cannot coarsen a graph with fewer than 2 nodes");
    if (!graph.has_attributes())
        throw std::runtime_error("equivalence_collapse requires node attributes");

    const int n = graph.node_count();
    // Phase 1: identical non-empty neighbor sets. Isolated nodes are left
    // alone so disconnected components are never merged.
    std::map<std::vector<int>, std::vector<int>> by_neighbors;
    for (int v = 0; v < n; ++v) {
        auto ns = graph.neighbors(v);
        if (ns.empty()) continue;
        by_neighbors[std::vector<int>(ns.begin(), ns.end())].push_back(v);
    }
    std::vector<int> group_of(n, -1);
    std::vector<std::vector<int>> eq_groups;
    for (auto& [key, members] : by_neighbors) {
        if (members.size() < 2) continue;
        std::sort(members.begin(), members.end());
        for (int v : members) group_of[v] = static_cast<int>(eq_groups.size());
        eq_groups.push_back(members);
    }

    // Phase 2: greedy attribute-similarity pairing among remaining nodes.
    Pairing pairing(n, -1);
    for (int u = 0; u < n; ++u) {
        if (group_of[u] >= 0 || pairing[u] >= 0) continue;
        for (int v : graph.neighbors(u)) {
            if (v == u || group_of[v] >= 0 || pairing[v] >= 0) continue;
            if (cosine(graph.attributes(u), graph.attributes(v)) >= cosine_threshold) {
                pairing[u] = v;
                pairing[v] = u;
                break;
            }
        }
    }

    bool any = !eq_groups.empty() ||
               std::any_of(pairing.begin(), pairing.end(), [](int p) { return p >= 0; });
    if (!any) return std::nullopt;

    // Merge both phases into one ordered group list (smallest member first).
    std::vector<std::vector<int>> groups;
    std::vector<bool> emitted(n, false);
    for (int v = 0; v < n; ++v) {
        if (emitted[v]) continue;
        if (group_of[v] >= 0) {
            const auto& members = eq_groups[group_of[v]];
            for (int m : members) emitted[m] = true;
            groups.push_back(members);
        } else if (pairing[v] >= 0) {
            emitted[v] = emitted[pairing[v]] = true;
            groups.push_back({v, pairing[v]});
        } else {
            emitted[v] = true;
            groups.push_back({v});
        }
    }
    return collapse_groups(graph, groups, seed);
}

SynopsisChain build_chain(const Graph& graph, const ChainOptions& options) {
    if (graph.node_count() < 2)
        throw std::runtime_error("cannot build a synopsis chain: graph has fewer than 2 nodes");
    if (options.threshold <= 0.0 || options.threshold >= 1.0)
        throw std::runtime_error("chain threshold must be in (0,1)");

    SynopsisChain chain;
    chain.threshold = options.threshold;
    const Graph* current = &graph;
    const double n_orig = graph.node_count();
    for (int level = 1;; ++level) {
        std::uint64_t level_seed = derive_seed(options.seed, "chain-level", level);
        auto syn = options.attributed
                       ? equivalence_collapse(*current, options.cosine_threshold, level_seed)
                       : coarsen_level(*current, level_seed);
        if (!syn) break;
        if (syn->graph.node_count() >= current->node_count()) break;  // no shrink

        syn->level = level;
        if (!chain.levels.empty()) {
            // Compose down to original node ids.
            const auto& prev = chain.levels.back().projection;
            std::vector<int> composed(prev.size());
            for (std::size_t v = 0; v < prev.size(); ++v)
                composed[v] = syn->projection[prev[v]];
            syn->projection = std::move(composed);
        }
        syn->alpha = syn->graph.node_count() / n_orig;
        chain.levels.push_back(std::move(*syn));
        if (chain.levels.back().alpha < options.threshold) break;
        current = &chain.levels.back().graph;
    }

    chain.selected = 0;
    for (std::size_t i = 0; i < chain.levels.size(); ++i)
        if (chain.levels[i].alpha >= options.threshold) chain.selected = i;
    return chain;
}

double similarity(const Synopsis& synopsis, const Graph& original) {
    return static_cast<double>(synopsis.graph.node_count()) /
           static_cast<double>(original.node_count());
}

ExtendedSynopsis extend_synopsis(const Synopsis& synopsis, const Graph& original) {
    const int n = original.node_count();
    const int n_syn = synopsis.graph.node_count();
    if (static_cast<int>(synopsis.projection.size()) != n)
        throw std::runtime_error("synopsis projection does not cover the original graph");

    std::vector<int> group_size(n_syn, 0);
    for (int v = 0; v < n; ++v) ++group_size[synopsis.projection[v]];

    ExtendedSynopsis ext;
    ext.projection = synopsis.projection;
    std::vector<Edge> edges = synopsis.graph.edges();
    int next_id = n_syn;
    for (int a = 0; a < n_syn; ++a)
        for (int k = 1; k < group_size[a]; ++k) {
            ext.mirror_of.push_back(a);
            edges.push_back({a, next_id++, 1.0});
        }
    if (next_id != n)
        throw std::logic_error("mirror extension failed to reach original node count");
    ext.graph = Graph::from_edges(n, std::move(edges));
    ext.extended_total_weight =
        synopsis.graph.total_weight() + static_cast<double>(n - n_syn);
    return ext;
}

double kl_divergence(const Graph& original, const ExtendedSynopsis& extended,
                     double eps) {
    if (eps <= 0.0) throw std::runtime_error("KL smoothing eps must be positive");
    const double w_total = original.total_weight();
    const double wx_total = extended.extended_total_weight;
    const auto& pi = extended.projection;
    double kl = 0.0;
    for (const auto& e : original.edges()) {
        const double p = e.w / w_total;
        double q;
        if (pi[e.u] == pi[e.v]) {
            q = 1.0 / wx_total;  // scored through the unit mirror edge
        } else {
            double w_img = extended.graph.edge_weight(pi[e.u], pi[e.v]);
            q = (w_img > 0.0 ? w_img : eps) / wx_total;
        }
        kl += p * std::log(p / q);
    }
    return kl;
}

std::vector<double> lift_embeddings(const std::vector<double>& synopsis_rows,
                                    int dim, const std::vector<int>& projection,
                                    double eps_scale, std::uint64_t seed) {
    if (dim < 1) throw std::runtime_error("embedding dimension must be positive");
    if (eps_scale < 0.0) throw std::runtime_error("eps_scale must be non-negative");
    const std::size_t n = projection.size();
    for (int a : projection)
        if (static_cast<std::size_t>(a + 1) * dim > synopsis_rows.size())
            throw std::runtime_error("projection refers to a missing synopsis row");

    Rng rng(derive_seed(seed, "lift"));
    std::vector<double> out(n * dim);
    for (std::size_t v = 0; v < n; ++v) {
        const double* src = synopsis_rows.data() +
                            static_cast<std::size_t>(projection[v]) * dim;
        for (int j = 0; j < dim; ++j) {
            double u = eps_scale == 0.0 ? 0.0 : eps_scale * (2.0 * rng.uniform() - 1.0);
            out[v * dim + j] = src[j] + u;
        }
    }
    return out;
}

void write_projection(const std::vector<int>& projection, std::ostream& out) {
    for (std::size_t v = 0; v < projection.size(); ++v)
        out << v << ' ' << projection[v] << '\n';
}

std::vector<int> read_projection(std::istream& in) {
    std::vector<int> proj;
    std::size_t v;
    int a;
    while (in >> v >> a) {
        if (v != proj.size()) throw std::runtime_error("projection rows out of order");
        proj.push_back(a);
    }
    return proj;
}

}  // namespace jitune
