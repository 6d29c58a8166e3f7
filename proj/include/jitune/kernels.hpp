#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace jitune {
class Graph;
}

// Data-parallel inner loops shared by the embedders and the evaluators.
// Every kernel has an OpenMP variant and a serial reference; both produce
// bit-identical output for the same input because each output element is
// accumulated in a fixed serial order by exactly one thread. Tests compare
// the pair exactly; the benchmark tool compares their timings.
namespace jitune::kernels {

// Compressed sparse rows of a symmetric adjacency matrix.
struct Csr {
    int n = 0;
    std::vector<std::size_t> offsets;
    std::vector<int> cols;
    std::vector<double> vals;

    static Csr from_graph(const Graph& g);
};

// Y = A * X with X, Y row-major n x k blocks.
void spmv_block(const Csr& a, const double* x, int k, double* y);
void spmv_block_serial(const Csr& a, const double* x, int k, double* y);

// scores[i] = dot(emb row pairs[i].first, emb row pairs[i].second).
void pair_scores(const double* emb, int dim,
                 const std::vector<std::pair<int, int>>& pairs,
                 std::vector<double>& scores);
void pair_scores_serial(const double* emb, int dim,
                        const std::vector<std::pair<int, int>>& pairs,
                        std::vector<double>& scores);

// r[i] = sigmoid(w . x_i + b) - y[i] for row-major X (n x d), w of size d,
// bias b. The logistic-regression residual pass.
void sigmoid_residuals(const double* x, int n, int d, const double* w, double b,
                       const double* y, double* r);
void sigmoid_residuals_serial(const double* x, int n, int d, const double* w,
                              double b, const double* y, double* r);

// g[j] = sum_i r[i] * X[i][j]; parallel over features so each output is a
// serial sum in index order.
void feature_gradient(const double* x, int n, int d, const double* r, double* g);
void feature_gradient_serial(const double* x, int n, int d, const double* r,
                             double* g);

double sigmoid(double z);

}  // namespace jitune::kernels
