#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "tickcast/corr.hpp"
#include "tickcast/matrix.hpp"

namespace tickcast {

struct Clustering {
    std::size_t k = 0;
    std::vector<std::size_t> assignment;  // length n, ids in [0, k)
    Matrix centroids;                     // k x D
    double inertia = 0.0;                 // within-cluster sum of squares
    std::size_t n_iter_run = 0;
};

// Quality ratio of a silhouette set: mean / population standard deviation.
// Zero variance is degenerate: a uniformly positive silhouette beats every
// finite q (+inf), a uniformly non-positive one loses to every finite q (-inf).
struct Quality {
    double q = 0.0;
    double mean = 0.0;
    bool degenerate = false;
};

struct SilhouetteReport {
    std::vector<double> s;
    double mean_s = 0.0;
    double var_s = 0.0;  // population variance
    Quality quality;
};

struct ClusterSearchConfig {
    std::size_t max_clusters = 0;  // 0 -> min(F - 1, 10)
    std::size_t n_init = 10;
    std::size_t kmeans_max_iter = 100;
    double tol = 1e-8;
    std::uint64_t seed = 0;
    bool kmeanspp = false;  // plain uniform init by default

    void validate() const;
};

struct SelectKResult {
    std::size_t k_star = 0;
    Clustering best;
    SilhouetteReport report;
    std::size_t best_init = 0;
    std::vector<std::size_t> order;  // features grouped by cluster
    DistanceMatrix reordered;        // symmetric permutation of the input
};

// Lloyd's algorithm: uniform random distinct-point init, nearest-centroid
// assignment with lowest-index tie-break, mean update. Stops at an assignment
// fixed point, when the inertia improvement drops below tol, or at max_iter.
// Empty clusters are reseeded at the point farthest from its assigned
// centroid, keeping K fixed. Throws BadK unless 1 <= k <= n.
Clustering kmeans(const Matrix& points, std::size_t k, std::uint64_t seed,
                  std::size_t max_iter = 100, double tol = 1e-8, bool kmeanspp = false);

// Per-point silhouette coefficients, Euclidean metric. Members of singleton
// clusters and 0/0 cases score 0. Throws TooFewClusters when K < 2 or n < 3.
std::vector<double> silhouette(const Matrix& points, const Clustering& clustering);

Quality quality(std::span<const double> s);

// Is `a` strictly better than `b` under the degenerate conventions?
bool quality_better(const Quality& a, const Quality& b);

SilhouetteReport silhouette_report(const Matrix& points, const Clustering& clustering);

// Cluster-count search: for every restart and every K in [2, max_clusters],
// fit k-means to the F rows of the distance matrix, score by the quality
// ratio, keep the global best (ties -> smaller K, then earlier restart), and
// return the row/column permutation grouping features by cluster.
// Throws TooFewFeatures when F < 3.
SelectKResult select_k(const DistanceMatrix& dist, const ClusterSearchConfig& cfg);

}  // namespace tickcast
