#include "jitune/graph.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "jitune/rng.hpp"

namespace jitune {

namespace {

std::uint64_t pair_key(int u, int v) {
    return (static_cast<std::uint64_t>(u) << 32) | static_cast<std::uint32_t>(v);
}

bool parse_nonneg_int(const std::string& tok, long long& out) {
    if (tok.empty()) return false;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
    return ec == std::errc() && ptr == tok.data() + tok.size() && out >= 0;
}

bool parse_double(const std::string& tok, double& out) {
    char* end = nullptr;
    out = std::strtod(tok.c_str(), &end);
    return end == tok.c_str() + tok.size() && std::isfinite(out);
}

[[noreturn]] void fail_line(std::size_t line_no, const std::string& what) {
    throw std::runtime_error("line " + std::to_string(line_no) + ": " + what);
}

std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        std::size_t j = i;
        while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
        if (j > i) out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

}  // namespace

Graph Graph::from_edges(int node_count, std::vector<Edge> edges,
                        std::size_t* loops_dropped,
                        std::size_t* duplicates_merged) {
    Graph g;
    g.node_count_ = node_count;

    std::size_t loops = 0;
    for (auto& e : edges) {
        if (e.u > e.v) std::swap(e.u, e.v);
        if (e.u < 0 || e.v >= node_count)
            throw std::runtime_error("edge endpoint out of range");
    }
    std::erase_if(edges, [&](const Edge& e) {
        if (e.u == e.v) {
            ++loops;
            return true;
        }
        return false;
    });
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
        return a.u != b.u ? a.u < b.u : a.v < b.v;
    });
    std::size_t dups = 0;
    std::vector<Edge> merged;
    merged.reserve(edges.size());
    for (const auto& e : edges) {
        if (!merged.empty() && merged.back().u == e.u && merged.back().v == e.v) {
            merged.back().w += e.w;
            ++dups;
        } else {
            merged.push_back(e);
        }
    }
    g.edges_ = std::move(merged);

    g.total_weight_ = 0.0;
    for (const auto& e : g.edges_) g.total_weight_ += e.w;

    // CSR adjacency, neighbors sorted by id.
    std::vector<std::size_t> deg(node_count + 1, 0);
    for (const auto& e : g.edges_) {
        ++deg[e.u + 1];
        ++deg[e.v + 1];
    }
    g.adj_off_.assign(node_count + 1, 0);
    for (int i = 0; i < node_count; ++i) g.adj_off_[i + 1] = g.adj_off_[i] + deg[i + 1];
    g.adj_.resize(g.adj_off_[node_count]);
    g.adj_w_.resize(g.adj_off_[node_count]);
    std::vector<std::size_t> cur(g.adj_off_.begin(), g.adj_off_.end() - 1);
    for (const auto& e : g.edges_) {
        g.adj_[cur[e.u]] = e.v;
        g.adj_w_[cur[e.u]++] = e.w;
        g.adj_[cur[e.v]] = e.u;
        g.adj_w_[cur[e.v]++] = e.w;
    }
    for (int v = 0; v < node_count; ++v) {
        std::size_t b = g.adj_off_[v], e = g.adj_off_[v + 1];
        std::vector<std::pair<int, double>> row;
        row.reserve(e - b);
        for (std::size_t i = b; i < e; ++i) row.emplace_back(g.adj_[i], g.adj_w_[i]);
        std::sort(row.begin(), row.end());
        for (std::size_t i = b; i < e; ++i) {
            g.adj_[i] = row[i - b].first;
            g.adj_w_[i] = row[i - b].second;
        }
    }

    if (loops_dropped) *loops_dropped = loops;
    if (duplicates_merged) *duplicates_merged = dups;
    return g;
}

double Graph::recompute_total_weight() const {
    double w = 0.0;
    for (const auto& e : edges_) w += e.w;
    return w;
}

bool Graph::has_edge(int u, int v) const {
    auto ns = neighbors(u);
    return std::binary_search(ns.begin(), ns.end(), v);
}

double Graph::edge_weight(int u, int v) const {
    auto ns = neighbors(u);
    auto it = std::lower_bound(ns.begin(), ns.end(), v);
    if (it == ns.end() || *it != v) return 0.0;
    return neighbor_weights(u)[static_cast<std::size_t>(it - ns.begin())];
}

void Graph::set_labels(std::vector<std::vector<int>> labels) {
    if (static_cast<int>(labels.size()) != node_count_)
        throw std::runtime_error("label vector size mismatch");
    for (auto& ls : labels) {
        std::sort(ls.begin(), ls.end());
        ls.erase(std::unique(ls.begin(), ls.end()), ls.end());
    }
    labels_ = std::move(labels);
}

void Graph::set_attributes(std::vector<double> flat, int dim) {
    if (dim <= 0 || flat.size() != static_cast<std::size_t>(node_count_) * dim)
        throw std::runtime_error("attribute matrix size mismatch");
    attrs_ = std::move(flat);
    attr_dim_ = dim;
}

const std::string& Graph::name_of(int v) const {
    static const std::string empty;
    if (names_.empty()) return empty;
    return names_[v];
}

bool Graph::operator==(const Graph& other) const {
    auto edge_eq = [](const Edge& a, const Edge& b) {
        return a.u == b.u && a.v == b.v && a.w == b.w;
    };
    if (node_count_ != other.node_count_ || edges_.size() != other.edges_.size())
        return false;
    for (std::size_t i = 0; i < edges_.size(); ++i)
        if (!edge_eq(edges_[i], other.edges_[i])) return false;
    if (labels_.has_value() != other.labels_.has_value()) return false;
    if (labels_ && *labels_ != *other.labels_) return false;
    if (attr_dim_ != other.attr_dim_ || attrs_ != other.attrs_) return false;
    return names_ == other.names_;
}

std::string format_double(double x) {
    char buf[40];
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, x);
        if (std::strtod(buf, nullptr) == x) break;
    }
    return buf;
}

Graph load_edge_list(std::istream& in, bool directed, IngestStats* stats) {
    struct RawEdge {
        std::string u, v;
        double w;
        std::size_t line;
    };
    std::vector<RawEdge> raw;
    IngestStats st;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        ++st.lines_read;
        auto toks = split_ws(line);
        if (toks.empty() || toks[0][0] == '#') continue;
        if (toks.size() < 2 || toks.size() > 3)
            fail_line(line_no, "expected 'u v' or 'u v w', got " +
                                   std::to_string(toks.size()) + " fields");
        double w = 1.0;
        if (toks.size() == 3) {
            if (!parse_double(toks[2], w))
                fail_line(line_no, "malformed weight '" + toks[2] + "'");
            if (w <= 0.0) fail_line(line_no, "non-positive weight " + toks[2]);
        }
        raw.push_back({toks[0], toks[1], w, line_no});
    }
    if (raw.empty()) throw std::runtime_error("empty input: no edges found");

    bool all_int = true;
    long long max_id = -1;
    for (const auto& r : raw) {
        long long a, b;
        if (parse_nonneg_int(r.u, a) && parse_nonneg_int(r.v, b)) {
            max_id = std::max({max_id, a, b});
        } else {
            all_int = false;
            break;
        }
    }

    std::vector<Edge> edges;
    edges.reserve(raw.size());
    std::vector<std::string> names;
    int node_count = 0;
    if (all_int && max_id < (1LL << 31)) {
        node_count = static_cast<int>(max_id + 1);
        for (const auto& r : raw) {
            long long a, b;
            parse_nonneg_int(r.u, a);
            parse_nonneg_int(r.v, b);
            edges.push_back({static_cast<int>(a), static_cast<int>(b), r.w});
        }
    } else {
        std::unordered_map<std::string, int> intern;
        auto id_of = [&](const std::string& tok) {
            auto [it, fresh] = intern.emplace(tok, static_cast<int>(names.size()));
            if (fresh) names.push_back(tok);
            return it->second;
        };
        for (const auto& r : raw) edges.push_back({id_of(r.u), id_of(r.v), r.w});
        node_count = static_cast<int>(names.size());
    }

    st.symmetrized = directed;
    Graph g = Graph::from_edges(node_count, std::move(edges), &st.loops_dropped,
                                &st.duplicates_merged);
    if (!names.empty()) g.set_names(std::move(names));
    if (stats) *stats = st;
    return g;
}

Graph load_edge_list_file(const std::string& path, bool directed, IngestStats* stats) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open edge file: " + path);
    return load_edge_list(in, directed, stats);
}

namespace {

// Resolves a node token against the graph's id scheme (numeric or interned).
int resolve_node(const Graph& g, const std::string& tok, std::size_t line_no) {
    if (g.has_names()) {
        for (int v = 0; v < g.node_count(); ++v)
            if (g.names()[v] == tok) return v;
        fail_line(line_no, "unknown node token '" + tok + "'");
    }
    long long id;
    if (!parse_nonneg_int(tok, id)) fail_line(line_no, "malformed node id '" + tok + "'");
    if (id >= g.node_count())
        fail_line(line_no, "node id " + tok + " out of range (node count " +
                               std::to_string(g.node_count()) + ")");
    return static_cast<int>(id);
}

}  // namespace

Graph attach_labels(Graph graph, std::istream& in) {
    std::vector<std::vector<int>> labels(graph.node_count());
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto toks = split_ws(line);
        if (toks.empty() || toks[0][0] == '#') continue;
        if (toks.size() != 2) fail_line(line_no, "expected 'node label'");
        int v = resolve_node(graph, toks[0], line_no);
        long long lab;
        if (!parse_nonneg_int(toks[1], lab))
            fail_line(line_no, "malformed label '" + toks[1] + "'");
        labels[v].push_back(static_cast<int>(lab));
    }
    graph.set_labels(std::move(labels));
    return graph;
}

Graph attach_labels_file(Graph graph, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open label file: " + path);
    return attach_labels(std::move(graph), in);
}

Graph attach_attributes(Graph graph, std::istream& in) {
    int dim = -1;
    std::vector<double> flat;
    std::vector<bool> seen(graph.node_count(), false);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto toks = split_ws(line);
        if (toks.empty() || toks[0][0] == '#') continue;
        if (toks.size() < 2) fail_line(line_no, "expected 'node f1 ... fk'");
        int v = resolve_node(graph, toks[0], line_no);
        int k = static_cast<int>(toks.size()) - 1;
        if (dim < 0) {
            dim = k;
            flat.assign(static_cast<std::size_t>(graph.node_count()) * dim, 0.0);
        } else if (k != dim) {
            fail_line(line_no, "inconsistent attribute dimension: expected " +
                                   std::to_string(dim) + ", got " + std::to_string(k));
        }
        if (seen[v]) fail_line(line_no, "duplicate attribute row for node " + toks[0]);
        seen[v] = true;
        for (int i = 0; i < dim; ++i) {
            double f;
            if (!parse_double(toks[i + 1], f))
                fail_line(line_no, "non-numeric attribute field '" + toks[i + 1] + "'");
            flat[static_cast<std::size_t>(v) * dim + i] = f;
        }
    }
    if (dim < 0) throw std::runtime_error("empty attribute input");
    for (int v = 0; v < graph.node_count(); ++v)
        if (!seen[v])
            throw std::runtime_error("missing attribute row for node " +
                                     std::to_string(v));
    graph.set_attributes(std::move(flat), dim);
    return graph;
}

Graph attach_attributes_file(Graph graph, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open attribute file: " + path);
    return attach_attributes(std::move(graph), in);
}

void write_edge_list(const Graph& graph, std::ostream& out) {
    for (const auto& e : graph.edges()) {
        if (graph.has_names())
            out << graph.names()[e.u] << ' ' << graph.names()[e.v];
        else
            out << e.u << ' ' << e.v;
        out << ' ' << format_double(e.w) << '\n';
    }
}

void write_labels(const Graph& graph, std::ostream& out) {
    if (!graph.has_labels()) return;
    for (int v = 0; v < graph.node_count(); ++v)
        for (int lab : graph.labels()[v]) {
            if (graph.has_names())
                out << graph.names()[v];
            else
                out << v;
            out << ' ' << lab << '\n';
        }
}

void write_attributes(const Graph& graph, std::ostream& out) {
    if (!graph.has_attributes()) return;
    for (int v = 0; v < graph.node_count(); ++v) {
        if (graph.has_names())
            out << graph.names()[v];
        else
            out << v;
        for (double f : graph.attributes(v)) out << ' ' << format_double(f);
        out << '\n';
    }
}

EdgeSplit split_edges(const Graph& graph, double holdout_fraction,
                      std::uint64_t seed) {
    if (holdout_fraction <= 0.0 || holdout_fraction >= 1.0)
        throw std::runtime_error("holdout fraction must be in (0,1)");
    const std::size_t n_edges = graph.edge_count();
    const std::size_t n_hold =
        static_cast<std::size_t>(std::llround(holdout_fraction * static_cast<double>(n_edges)));
    if (n_hold == 0)
        throw std::runtime_error("graph too small for the requested holdout fraction");

    const auto n = static_cast<std::uint64_t>(graph.node_count());
    const std::uint64_t all_pairs = n * (n - 1) / 2;
    if (all_pairs - n_edges < n_hold)
        throw std::runtime_error(
            "graph too small to sample " + std::to_string(n_hold) +
            " negative pairs: non-edge pool has " +
            std::to_string(all_pairs - n_edges) + " pairs");

    Rng rng(derive_seed(seed, "edge-split"));
    std::vector<std::size_t> order(n_edges);
    for (std::size_t i = 0; i < n_edges; ++i) order[i] = i;
    rng.shuffle(order);

    EdgeSplit split;
    split.holdout_fraction = holdout_fraction;
    split.seed = seed;
    std::vector<bool> held(n_edges, false);
    for (std::size_t i = 0; i < n_hold; ++i) held[order[i]] = true;

    std::vector<Edge> train;
    train.reserve(n_edges - n_hold);
    for (std::size_t i = 0; i < n_edges; ++i) {
        const Edge& e = graph.edges()[i];
        if (held[i])
            split.test_positive.emplace_back(e.u, e.v);
        else
            train.push_back(e);
    }
    std::sort(split.test_positive.begin(), split.test_positive.end());

    std::unordered_set<std::uint64_t> edge_set;
    edge_set.reserve(n_edges * 2);
    for (const auto& e : graph.edges()) edge_set.insert(pair_key(e.u, e.v));

    std::unordered_set<std::uint64_t> chosen;
    const std::uint64_t pool = all_pairs - n_edges;
    if (pool < 4 * static_cast<std::uint64_t>(n_hold)) {
        // Dense graph: enumerate the non-edge pool and draw without replacement.
        std::vector<std::pair<int, int>> non_edges;
        non_edges.reserve(pool);
        for (int u = 0; u < graph.node_count(); ++u)
            for (int v = u + 1; v < graph.node_count(); ++v)
                if (!edge_set.count(pair_key(u, v))) non_edges.emplace_back(u, v);
        rng.shuffle(non_edges);
        split.test_negative.assign(non_edges.begin(), non_edges.begin() + n_hold);
    } else {
        while (split.test_negative.size() < n_hold) {
            int u = static_cast<int>(rng.below(n));
            int v = static_cast<int>(rng.below(n));
            if (u == v) continue;
            if (u > v) std::swap(u, v);
            std::uint64_t key = pair_key(u, v);
            if (edge_set.count(key) || !chosen.insert(key).second) continue;
            split.test_negative.emplace_back(u, v);
        }
    }
    std::sort(split.test_negative.begin(), split.test_negative.end());

    split.train_graph = Graph::from_edges(graph.node_count(), std::move(train));
    if (graph.has_labels()) split.train_graph.set_labels(graph.labels());
    if (graph.has_attributes()) {
        std::vector<double> attrs(graph.attributes(0).begin(),
                                  graph.attributes(0).end());
        attrs.resize(static_cast<std::size_t>(graph.node_count()) *
                     graph.attribute_dim());
        for (int v = 0; v < graph.node_count(); ++v) {
            auto row = graph.attributes(v);
            std::copy(row.begin(), row.end(),
                      attrs.begin() + static_cast<std::size_t>(v) * graph.attribute_dim());
        }
        split.train_graph.set_attributes(std::move(attrs), graph.attribute_dim());
    }
    if (graph.has_names()) split.train_graph.set_names(graph.names());
    return split;
}

Components connected_components(const Graph& graph) {
    Components comps;
    comps.assignment.assign(graph.node_count(), -1);
    std::vector<int> stack;
    for (int s = 0; s < graph.node_count(); ++s) {
        if (comps.assignment[s] >= 0) continue;
        int id = comps.count++;
        comps.assignment[s] = id;
        stack.push_back(s);
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (int u : graph.neighbors(v)) {
                if (comps.assignment[u] < 0) {
                    comps.assignment[u] = id;
                    stack.push_back(u);
                }
            }
        }
    }
    return comps;
}

}  // namespace jitune
