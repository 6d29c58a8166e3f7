#include "jitune/kernels.hpp"

#include <cmath>

#include "jitune/graph.hpp"

namespace jitune::kernels {

Csr Csr::from_graph(const Graph& g) {
    Csr a;
    a.n = g.node_count();
    a.offsets.assign(a.n + 1, 0);
    for (int v = 0; v < a.n; ++v) a.offsets[v + 1] = a.offsets[v] + g.degree(v);
    a.cols.resize(a.offsets[a.n]);
    a.vals.resize(a.offsets[a.n]);
    for (int v = 0; v < a.n; ++v) {
        auto ns = g.neighbors(v);
        auto ws = g.neighbor_weights(v);
        std::size_t off = a.offsets[v];
        for (std::size_t i = 0; i < ns.size(); ++i) {
            a.cols[off + i] = ns[i];
            a.vals[off + i] = ws[i];
        }
    }
    return a;
}

namespace {

inline void spmv_row(const Csr& a, const double* x, int k, double* y, int row) {
    double* yr = y + static_cast<std::size_t>(row) * k;
    for (int c = 0; c < k; ++c) yr[c] = 0.0;
    for (std::size_t i = a.offsets[row]; i < a.offsets[row + 1]; ++i) {
        const double w = a.vals[i];
        const double* xr = x + static_cast<std::size_t>(a.cols[i]) * k;
        for (int c = 0; c < k; ++c) yr[c] += w * xr[c];
    }
}

}  // namespace

void spmv_block(const Csr& a, const double* x, int k, double* y) {
#pragma omp parallel for schedule(static)
    for (int row = 0; row < a.n; ++row) spmv_row(a, x, k, y, row);
}

void spmv_block_serial(const Csr& a, const double* x, int k, double* y) {
    for (int row = 0; row < a.n; ++row) spmv_row(a, x, k, y, row);
}

void pair_scores(const double* emb, int dim,
                 const std::vector<std::pair<int, int>>& pairs,
                 std::vector<double>& scores) {
    scores.resize(pairs.size());
    const auto n = static_cast<long long>(pairs.size());
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < n; ++i) {
        const double* a = emb + static_cast<std::size_t>(pairs[i].first) * dim;
        const double* b = emb + static_cast<std::size_t>(pairs[i].second) * dim;
        double s = 0.0;
        for (int c = 0; c < dim; ++c) s += a[c] * b[c];
        scores[i] = s;
    }
}

void pair_scores_serial(const double* emb, int dim,
                        const std::vector<std::pair<int, int>>& pairs,
                        std::vector<double>& scores) {
    scores.resize(pairs.size());
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const double* a = emb + static_cast<std::size_t>(pairs[i].first) * dim;
        const double* b = emb + static_cast<std::size_t>(pairs[i].second) * dim;
        double s = 0.0;
        for (int c = 0; c < dim; ++c) s += a[c] * b[c];
        scores[i] = s;
    }
}

double sigmoid(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    double e = std::exp(z);
    return e / (1.0 + e);
}

void sigmoid_residuals(const double* x, int n, int d, const double* w, double b,
                       const double* y, double* r) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) {
        const double* xi = x + static_cast<std::size_t>(i) * d;
        double z = b;
        for (int j = 0; j < d; ++j) z += w[j] * xi[j];
        r[i] = sigmoid(z) - y[i];
    }
}

void sigmoid_residuals_serial(const double* x, int n, int d, const double* w,
                              double b, const double* y, double* r) {
    for (int i = 0; i < n; ++i) {
        const double* xi = x + static_cast<std::size_t>(i) * d;
        double z = b;
        for (int j = 0; j < d; ++j) z += w[j] * xi[j];
        r[i] = sigmoid(z) - y[i];
    }
}

void feature_gradient(const double* x, int n, int d, const double* r, double* g) {
#pragma omp parallel for schedule(static)
    for (int j = 0; j < d; ++j) {
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += r[i] * x[static_cast<std::size_t>(i) * d + j];
        g[j] = s;
    }
}

void feature_gradient_serial(const double* x, int n, int d, const double* r,
                             double* g) {
    for (int j = 0; j < d; ++j) {
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += r[i] * x[static_cast<std::size_t>(i) * d + j];
        g[j] = s;
    }
}

}  // namespace jitune::kernels
