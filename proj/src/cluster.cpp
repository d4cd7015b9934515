#include "tickcast/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tickcast/errors.hpp"
#include "tickcast/kernels.hpp"
#include "tickcast/rng.hpp"

namespace tickcast {

void ClusterSearchConfig::validate() const {
    if (n_init < 1) throw InvalidConfig("n_init must be >= 1");
    if (kmeans_max_iter < 1) throw InvalidConfig("kmeans_max_iter must be >= 1");
    if (!(tol >= 0.0)) throw InvalidConfig("tol must be >= 0");
}

namespace {

void init_centroids(const Matrix& points, std::size_t k, Rng& rng, bool kmeanspp,
                    Matrix& centroids) {
    const std::size_t n = points.rows();
    const std::size_t d = points.cols();
    if (!kmeanspp) {
        const auto picks = rng.sample_distinct(n, k);
        for (std::size_t c = 0; c < k; ++c)
            for (std::size_t j = 0; j < d; ++j) centroids(c, j) = points(picks[c], j);
        return;
    }
    // k-means++: distance-squared weighted picks.
    std::vector<double> dist_sq(n, std::numeric_limits<double>::infinity());
    std::size_t first = static_cast<std::size_t>(rng.below(n));
    for (std::size_t j = 0; j < d; ++j) centroids(0, j) = points(first, j);
    for (std::size_t c = 1; c < k; ++c) {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double dd = kernels::squared_distance(points.row(i), centroids.row(c - 1), d);
            dist_sq[i] = std::min(dist_sq[i], dd);
            total += dist_sq[i];
        }
        std::size_t pick = 0;
        if (total > 0.0) {
            double target = rng.next_double() * total;
            for (std::size_t i = 0; i < n; ++i) {
                target -= dist_sq[i];
                if (target <= 0.0) {
                    pick = i;
                    break;
                }
            }
        } else {
            pick = static_cast<std::size_t>(rng.below(n));
        }
        for (std::size_t j = 0; j < d; ++j) centroids(c, j) = points(pick, j);
    }
}

// Nearest centroid, strictly-less comparison so ties keep the lowest index.
std::size_t nearest(const Matrix& centroids, const double* p, std::size_t d) {
    std::size_t best = 0;
    double best_d = kernels::squared_distance(p, centroids.row(0), d);
    for (std::size_t c = 1; c < centroids.rows(); ++c) {
        const double dd = kernels::squared_distance(p, centroids.row(c), d);
        if (dd < best_d) {
            best_d = dd;
            best = c;
        }
    }
    return best;
}

}  // namespace

Clustering kmeans(const Matrix& points, std::size_t k, std::uint64_t seed,
                  std::size_t max_iter, double tol, bool kmeanspp) {
    const std::size_t n = points.rows();
    const std::size_t d = points.cols();
    if (k < 1 || k > n) throw BadK("kmeans: need 1 <= K <= n");
    if (!points.all_finite()) throw InvalidConfig("kmeans: non-finite points");

    Rng rng(seed);
    Clustering cl;
    cl.k = k;
    cl.assignment.assign(n, 0);
    cl.centroids = Matrix(k, d);
    init_centroids(points, k, rng, kmeanspp, cl.centroids);

    std::vector<std::size_t> counts(k);
    double prev_inertia = std::numeric_limits<double>::infinity();

    for (std::size_t iter = 0; iter < max_iter; ++iter) {
        cl.n_iter_run = iter + 1;

        bool changed = false;
        double inertia = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t c = nearest(cl.centroids, points.row(i), d);
            if (c != cl.assignment[i]) changed = true;
            cl.assignment[i] = c;
            inertia += kernels::squared_distance(points.row(i), cl.centroids.row(c), d);
        }

        // Reseed empty clusters at the point farthest from its assigned
        // centroid; forcing that point's assignment keeps K clusters live.
        std::fill(counts.begin(), counts.end(), 0);
        for (std::size_t i = 0; i < n; ++i) ++counts[cl.assignment[i]];
        for (std::size_t c = 0; c < k; ++c) {
            if (counts[c] > 0) continue;
            std::size_t far_i = 0;
            double far_d = -1.0;
            for (std::size_t i = 0; i < n; ++i) {
                if (counts[cl.assignment[i]] <= 1) continue;  // don't empty another cluster
                const double dd = kernels::squared_distance(
                    points.row(i), cl.centroids.row(cl.assignment[i]), d);
                if (dd > far_d) {
                    far_d = dd;
                    far_i = i;
                }
            }
            --counts[cl.assignment[far_i]];
            cl.assignment[far_i] = c;
            ++counts[c];
            for (std::size_t j = 0; j < d; ++j) cl.centroids(c, j) = points(far_i, j);
            changed = true;
        }

        // Lloyd iterations never increase the within-cluster sum of squares;
        // guard against a regression with a small relative slack.
        if (inertia > prev_inertia * (1.0 + 1e-9) + 1e-12)
            throw Error("kmeans: inertia increased");
        const double improvement = prev_inertia - inertia;
        prev_inertia = inertia;

        // Mean update.
        for (std::size_t c = 0; c < k; ++c)
            for (std::size_t j = 0; j < d; ++j) cl.centroids(c, j) = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            kernels::axpy(1.0, points.row(i), cl.centroids.row(cl.assignment[i]), d);
        for (std::size_t c = 0; c < k; ++c) {
            const double inv = 1.0 / static_cast<double>(counts[c]);
            for (std::size_t j = 0; j < d; ++j) cl.centroids(c, j) *= inv;
        }

        if (!changed || improvement < tol) break;
    }

    cl.inertia = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        cl.inertia += kernels::squared_distance(points.row(i),
                                                cl.centroids.row(cl.assignment[i]), d);
    return cl;
}

std::vector<double> silhouette(const Matrix& points, const Clustering& clustering) {
    const std::size_t n = points.rows();
    const std::size_t k = clustering.k;
    if (k < 2 || n < 3) throw TooFewClusters("silhouette: need K >= 2 and n >= 3");

    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < n; ++i) ++counts[clustering.assignment[i]];

    // Pairwise Euclidean distances once, then per-cluster means per point.
    Matrix dist(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        dist(i, i) = 0.0;
        for (std::size_t j = i + 1; j < n; ++j) {
            const double dd =
                std::sqrt(kernels::squared_distance(points.row(i), points.row(j), points.cols()));
            dist(i, j) = dd;
            dist(j, i) = dd;
        }
    }

    std::vector<double> s(n, 0.0);
    std::vector<double> cluster_sum(k);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t own = clustering.assignment[i];
        if (counts[own] <= 1) {
            s[i] = 0.0;  // singleton convention
            continue;
        }
        std::fill(cluster_sum.begin(), cluster_sum.end(), 0.0);
        for (std::size_t j = 0; j < n; ++j) cluster_sum[clustering.assignment[j]] += dist(i, j);

        const double a = cluster_sum[own] / static_cast<double>(counts[own] - 1);
        double b = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < k; ++c) {
            if (c == own || counts[c] == 0) continue;
            b = std::min(b, cluster_sum[c] / static_cast<double>(counts[c]));
        }
        const double denom = std::max(a, b);
        s[i] = denom > 0.0 ? (b - a) / denom : 0.0;
    }
    return s;
}

Quality quality(std::span<const double> s) {
    if (s.empty()) throw Error("quality: empty silhouette set");
    const std::size_t n = s.size();
    const double mean = kernels::sum(s.data(), n) / static_cast<double>(n);
    const double var = kernels::centered_sumsq(s.data(), mean, n) / static_cast<double>(n);

    Quality out;
    out.mean = mean;
    if (var <= 0.0) {
        out.degenerate = true;
        out.q = mean > 0.0 ? std::numeric_limits<double>::infinity()
                           : -std::numeric_limits<double>::infinity();
    } else {
        out.q = mean / std::sqrt(var);
    }
    return out;
}

bool quality_better(const Quality& a, const Quality& b) { return a.q > b.q; }

SilhouetteReport silhouette_report(const Matrix& points, const Clustering& clustering) {
    SilhouetteReport rep;
    rep.s = silhouette(points, clustering);
    const std::size_t n = rep.s.size();
    rep.mean_s = kernels::sum(rep.s.data(), n) / static_cast<double>(n);
    rep.var_s = kernels::centered_sumsq(rep.s.data(), rep.mean_s, n) / static_cast<double>(n);
    rep.quality = quality(rep.s);
    return rep;
}

SelectKResult select_k(const DistanceMatrix& dist, const ClusterSearchConfig& cfg) {
    cfg.validate();
    const Matrix& points = dist.c;  // each feature is one F-dimensional row
    const std::size_t f = points.rows();
    if (f < 3) throw TooFewFeatures("select_k: need F >= 3");

    std::size_t max_k = cfg.max_clusters == 0 ? std::min<std::size_t>(f - 1, 10)
                                              : std::min(cfg.max_clusters, f - 1);
    if (max_k < 2) max_k = 2;

    SelectKResult best;
    bool have_best = false;
    for (std::size_t init = 0; init < cfg.n_init; ++init) {
        for (std::size_t k = 2; k <= max_k; ++k) {
            const std::uint64_t seed = Rng::derive(cfg.seed, (init << 20) + k);
            Clustering cl = kmeans(points, k, seed, cfg.kmeans_max_iter, cfg.tol, cfg.kmeanspp);
            SilhouetteReport rep = silhouette_report(points, cl);
            // Ties prefer the smaller K, then the earlier restart, regardless
            // of loop order.
            const bool wins =
                !have_best || quality_better(rep.quality, best.report.quality) ||
                (rep.quality.q == best.report.quality.q &&
                 (k < best.k_star || (k == best.k_star && init < best.best_init)));
            if (wins) {
                best.k_star = k;
                best.best = std::move(cl);
                best.report = std::move(rep);
                best.best_init = init;
                have_best = true;
            }
        }
    }

    best.order.resize(f);
    for (std::size_t i = 0; i < f; ++i) best.order[i] = i;
    std::stable_sort(best.order.begin(), best.order.end(),
                     [&](std::size_t a, std::size_t b) {
                         return best.best.assignment[a] < best.best.assignment[b];
                     });
    best.reordered.c = Matrix(f, f);
    for (std::size_t i = 0; i < f; ++i)
        for (std::size_t j = 0; j < f; ++j)
            best.reordered.c(i, j) = points(best.order[i], best.order[j]);
    return best;
}

}  // namespace tickcast
