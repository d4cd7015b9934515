#include "tickcast/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "tickcast/cluster.hpp"
#include "tickcast/corr.hpp"
#include "tickcast/errors.hpp"
#include "tickcast/forest.hpp"
#include "tickcast/rbfnn.hpp"
#include "tickcast/rng.hpp"

namespace tickcast::oracles {

namespace {

double direct_mse(std::span<const double> values) {
    long double mean = 0.0L;
    for (double v : values) mean += v;
    mean /= static_cast<long double>(values.size());
    long double acc = 0.0L;
    for (double v : values) acc += (v - mean) * (v - mean);
    return static_cast<double>(acc / static_cast<long double>(values.size()));
}

}  // namespace

SplitOracle exhaustive_best_split(const Matrix& x, std::span<const double> y) {
    const std::size_t n = x.rows();
    const std::size_t f = x.cols();
    SplitOracle best;

    std::vector<double> parent(y.begin(), y.end());
    const double parent_impurity = direct_mse(parent);

    for (std::size_t feat = 0; feat < f; ++feat) {
        std::vector<double> values;
        for (std::size_t i = 0; i < n; ++i) values.push_back(x(i, feat));
        std::sort(values.begin(), values.end());
        values.erase(std::unique(values.begin(), values.end()), values.end());

        for (std::size_t v = 0; v + 1 < values.size(); ++v) {
            const double threshold = 0.5 * (values[v] + values[v + 1]);
            std::vector<double> left, right;
            for (std::size_t i = 0; i < n; ++i)
                (x(i, feat) <= threshold ? left : right).push_back(y[i]);
            if (left.empty() || right.empty()) continue;
            // Orientation-invariant form, matching exact ties bit for bit.
            const double gain =
                parent_impurity -
                ((static_cast<double>(left.size()) / static_cast<double>(n)) * direct_mse(left) +
                 (static_cast<double>(right.size()) / static_cast<double>(n)) * direct_mse(right));
            if (gain > best.gain) {
                best.feature = static_cast<int>(feat);
                best.threshold = threshold;
                best.gain = gain;
            }
        }
    }
    return best;
}

namespace {

double assignment_inertia(const Matrix& points, std::span<const std::size_t> assignment,
                          std::size_t k) {
    const std::size_t n = points.rows();
    const std::size_t d = points.cols();
    std::vector<std::vector<long double>> centroid(k, std::vector<long double>(d, 0.0L));
    std::vector<std::size_t> count(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
        ++count[assignment[i]];
        for (std::size_t j = 0; j < d; ++j) centroid[assignment[i]][j] += points(i, j);
    }
    for (std::size_t c = 0; c < k; ++c)
        for (std::size_t j = 0; j < d; ++j) centroid[c][j] /= static_cast<long double>(count[c]);
    long double inertia = 0.0L;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            const long double diff = points(i, j) - centroid[assignment[i]][j];
            inertia += diff * diff;
        }
    return static_cast<double>(inertia);
}

// Iterates all k^n assignments via a base-k counter, calling fn on assignments
// that use every cluster.
template <typename Fn>
void for_each_partition(std::size_t n, std::size_t k, Fn&& fn) {
    std::vector<std::size_t> assignment(n, 0);
    while (true) {
        std::vector<bool> used(k, false);
        for (std::size_t a : assignment) used[a] = true;
        if (std::all_of(used.begin(), used.end(), [](bool u) { return u; }))
            fn(std::span<const std::size_t>(assignment));
        std::size_t pos = 0;
        while (pos < n && ++assignment[pos] == k) assignment[pos++] = 0;
        if (pos == n) break;
    }
}

}  // namespace

double min_inertia_partition(const Matrix& points, std::size_t k) {
    double best = std::numeric_limits<double>::infinity();
    for_each_partition(points.rows(), k, [&](std::span<const std::size_t> assignment) {
        best = std::min(best, assignment_inertia(points, assignment, k));
    });
    return best;
}

std::vector<std::size_t> best_partition(const Matrix& points, std::size_t k) {
    double best = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> out;
    for_each_partition(points.rows(), k, [&](std::span<const std::size_t> assignment) {
        const double inertia = assignment_inertia(points, assignment, k);
        if (inertia < best) {
            best = inertia;
            out.assign(assignment.begin(), assignment.end());
        }
    });
    return out;
}

std::vector<double> silhouette_direct(const Matrix& points,
                                      std::span<const std::size_t> assignment,
                                      std::size_t k) {
    const std::size_t n = points.rows();
    const std::size_t d = points.cols();
    const auto dist = [&](std::size_t a, std::size_t b) {
        long double acc = 0.0L;
        for (std::size_t j = 0; j < d; ++j) {
            const long double diff = points(a, j) - points(b, j);
            acc += diff * diff;
        }
        return std::sqrt(static_cast<double>(acc));
    };

    std::vector<double> s(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t own_count = 0;
        for (std::size_t j = 0; j < n; ++j)
            if (assignment[j] == assignment[i]) ++own_count;
        if (own_count <= 1) {
            s[i] = 0.0;
            continue;
        }
        double a_i = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            if (j != i && assignment[j] == assignment[i]) a_i += dist(i, j);
        a_i /= static_cast<double>(own_count - 1);

        double b_i = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < k; ++c) {
            if (c == assignment[i]) continue;
            double total = 0.0;
            std::size_t count = 0;
            for (std::size_t j = 0; j < n; ++j)
                if (assignment[j] == c) {
                    total += dist(i, j);
                    ++count;
                }
            if (count > 0) b_i = std::min(b_i, total / static_cast<double>(count));
        }
        const double denom = std::max(a_i, b_i);
        s[i] = denom > 0.0 ? (b_i - a_i) / denom : 0.0;
    }
    return s;
}

double quality_direct(std::span<const double> s) {
    long double mean = 0.0L;
    for (double v : s) mean += v;
    mean /= static_cast<long double>(s.size());
    long double var = 0.0L;
    for (double v : s) var += (v - mean) * (v - mean);
    var /= static_cast<long double>(s.size());
    if (var <= 0.0L)
        return mean > 0.0L ? std::numeric_limits<double>::infinity()
                           : -std::numeric_limits<double>::infinity();
    return static_cast<double>(mean / std::sqrt(var));
}

Matrix correlation_direct(const Matrix& values) {
    const std::size_t n = values.rows();
    const std::size_t f = values.cols();
    std::vector<long double> mean(f, 0.0L);
    for (std::size_t j = 0; j < f; ++j) {
        for (std::size_t i = 0; i < n; ++i) mean[j] += values(i, j);
        mean[j] /= static_cast<long double>(n);
    }
    Matrix rho(f, f);
    for (std::size_t m = 0; m < f; ++m)
        for (std::size_t q = 0; q < f; ++q) {
            long double num = 0.0L, dm = 0.0L, dq = 0.0L;
            for (std::size_t i = 0; i < n; ++i) {
                const long double a = values(i, m) - mean[m];
                const long double b = values(i, q) - mean[q];
                num += a * b;
                dm += a * a;
                dq += b * b;
            }
            if (dm <= 0.0L || dq <= 0.0L)
                rho(m, q) = (m == q) ? 1.0 : 0.0;
            else
                rho(m, q) = static_cast<double>(num / std::sqrt(dm * dq));
        }
    return rho;
}

std::vector<double> normal_equations_longdouble(const Matrix& a, std::span<const double> y,
                                                double lambda) {
    const std::size_t n = a.rows();
    const std::size_t k = a.cols();
    std::vector<std::vector<long double>> g(k, std::vector<long double>(k + 1, 0.0L));
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            long double acc = 0.0L;
            for (std::size_t r = 0; r < n; ++r)
                acc += static_cast<long double>(a(r, i)) * static_cast<long double>(a(r, j));
            g[i][j] = acc;
        }
        g[i][i] += lambda;
        long double rhs = 0.0L;
        for (std::size_t r = 0; r < n; ++r)
            rhs += static_cast<long double>(a(r, i)) * static_cast<long double>(y[r]);
        g[i][k] = rhs;
    }

    // Gaussian elimination with partial pivoting on the augmented system.
    for (std::size_t col = 0; col < k; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < k; ++r)
            if (std::abs(static_cast<double>(g[r][col])) >
                std::abs(static_cast<double>(g[pivot][col])))
                pivot = r;
        std::swap(g[col], g[pivot]);
        if (g[col][col] == 0.0L) throw SingularSystem("oracle: singular normal equations");
        for (std::size_t r = col + 1; r < k; ++r) {
            const long double factor = g[r][col] / g[col][col];
            for (std::size_t c = col; c <= k; ++c) g[r][c] -= factor * g[col][c];
        }
    }
    std::vector<double> w(k, 0.0);
    std::vector<long double> wl(k, 0.0L);
    for (std::size_t ri = k; ri-- > 0;) {
        long double acc = g[ri][k];
        for (std::size_t c = ri + 1; c < k; ++c) acc -= g[ri][c] * wl[c];
        wl[ri] = acc / g[ri][ri];
        w[ri] = static_cast<double>(wl[ri]);
    }
    return w;
}

std::vector<double> least_squares_longdouble(const Matrix& x, std::span<const double> y) {
    return normal_equations_longdouble(x, y, 0.0);
}

namespace {

struct CheckPrinter {
    bool all_passed = true;
    void operator()(const char* name, bool ok, double worst, const char* unit) {
        std::printf("  [%s] %-38s worst %.3g %s\n", ok ? "ok" : "FAIL", name, worst, unit);
        all_passed = all_passed && ok;
    }
};

}  // namespace

bool run_oracle_suite(std::size_t trials, std::uint64_t seed) {
    CheckPrinter check;
    Rng rng(seed);

    // Silhouette vs direct evaluation.
    {
        double worst = 0.0;
        for (std::size_t t = 0; t < trials; ++t) {
            const std::size_t n = 6 + rng.below(10);
            const std::size_t d = 2 + rng.below(3);
            const std::size_t k = 2 + rng.below(3);
            Matrix pts(n, d);
            for (auto& v : pts.data()) v = rng.normal();
            const Clustering cl = kmeans(pts, k, rng.next_u64());
            const auto prod = silhouette(pts, cl);
            const auto ref = silhouette_direct(pts, cl.assignment, k);
            for (std::size_t i = 0; i < n; ++i)
                worst = std::max(worst, std::abs(prod[i] - ref[i]));
        }
        check("silhouette vs direct", worst <= 1e-12, worst, "abs");
    }

    // Ridge solve vs long-double normal equations.
    {
        double worst = 0.0;
        for (std::size_t t = 0; t < trials; ++t) {
            const std::size_t n = 30, k = 4;
            Matrix a(n, k);
            for (auto& v : a.data()) v = rng.normal();
            std::vector<double> y(n);
            for (auto& v : y) v = rng.normal();
            const auto w = solve_weights(a, y, 1e-6);
            const auto ref = normal_equations_longdouble(a, y, 1e-6);
            double num = 0.0, den = 0.0;
            for (std::size_t i = 0; i < k; ++i) {
                num += (w[i] - ref[i]) * (w[i] - ref[i]);
                den += ref[i] * ref[i];
            }
            worst = std::max(worst, std::sqrt(num / std::max(den, 1e-300)));
        }
        check("solve_weights vs normal equations", worst <= 1e-8, worst, "rel");
    }

    // Forest split vs exhaustive enumeration (single deterministic tree).
    {
        double worst = 0.0;
        bool ok = true;
        for (std::size_t t = 0; t < trials; ++t) {
            const std::size_t n = 8 + rng.below(9);  // <= 16 samples
            const std::size_t f = 2 + rng.below(3);
            Matrix x(n, f);
            for (auto& v : x.data()) v = rng.normal();
            std::vector<double> y(n);
            for (auto& v : y) v = rng.normal();

            ForestConfig fc;
            fc.n_trees = 1;
            fc.max_depth = 1;
            fc.bootstrap = false;
            fc.feature_subsample = f;
            fc.min_samples_split = 2;
            const Forest forest = fit_forest(x, y, fc);
            const TreeNode& root = forest.trees[0].nodes[0];
            const SplitOracle ref = exhaustive_best_split(x, y);
            if (ref.feature < 0) {
                ok = ok && root.is_leaf();
                continue;
            }
            ok = ok && !root.is_leaf() && root.feature == ref.feature &&
                 root.threshold == ref.threshold;
            worst = std::max(worst, std::abs(root.delta - ref.gain));
            ok = ok && std::abs(root.delta - ref.gain) <= 1e-12;
        }
        check("forest split vs enumeration", ok, worst, "abs gain");
    }

    // k-means best-of-restarts vs exhaustive partitions.
    {
        std::size_t hits = 0;
        double worst = 0.0;
        for (std::size_t t = 0; t < trials; ++t) {
            const std::size_t n = 6 + rng.below(3);  // <= 8 points
            const std::size_t k = 2 + rng.below(2);
            Matrix pts(n, 2);
            for (auto& v : pts.data()) v = rng.normal();

            const std::uint64_t trial_seed = rng.next_u64();
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t init = 0; init < 20; ++init)
                best = std::min(best, kmeans(pts, k, Rng::derive(trial_seed, init)).inertia);
            const double ref = min_inertia_partition(pts, k);
            const double gap = best - ref;
            worst = std::max(worst, gap);
            if (gap <= 1e-9 * (1.0 + ref)) ++hits;
        }
        const bool ok = hits * 100 >= trials * 95;
        std::printf("  [%s] %-38s global optimum %zu/%zu\n", ok ? "ok" : "FAIL",
                    "kmeans vs partition enumeration", hits, trials);
        check.all_passed = check.all_passed && ok;
    }

    // Correlation vs long-double direct evaluation.
    {
        double worst = 0.0;
        for (std::size_t t = 0; t < trials; ++t) {
            const std::size_t n = 20 + rng.below(40);
            const std::size_t f = 3 + rng.below(5);
            Matrix x(n, f);
            for (auto& v : x.data()) v = 1e5 + 10.0 * rng.normal();
            const CorrMatrix rho = correlation_matrix(x);
            const Matrix ref = correlation_direct(x);
            for (std::size_t i = 0; i < f; ++i)
                for (std::size_t j = 0; j < f; ++j)
                    worst = std::max(worst, std::abs(rho.rho(i, j) - ref(i, j)));
        }
        check("correlation vs long-double direct", worst <= 1e-12, worst, "abs");
    }

    return check.all_passed;
}

}  // namespace tickcast::oracles
