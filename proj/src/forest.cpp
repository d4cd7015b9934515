#include "tickcast/forest.hpp"

#include <algorithm>
#include <cmath>

#include "tickcast/errors.hpp"
#include "tickcast/kernels.hpp"
#include "tickcast/rng.hpp"

namespace tickcast {

void ForestConfig::validate() const {
    if (n_trees < 1) throw InvalidConfig("n_trees must be >= 1");
    if (max_depth < 1) throw InvalidConfig("max_depth must be >= 1");
    if (min_samples_split < 2) throw InvalidConfig("min_samples_split must be >= 2");
}

double node_impurity(std::span<const double> targets) {
    if (targets.empty()) throw EmptyNode("node_impurity: no targets");
    const std::size_t n = targets.size();
    const double mean = kernels::sum(targets.data(), n) / static_cast<double>(n);
    return kernels::centered_sumsq(targets.data(), mean, n) / static_cast<double>(n);
}

double impurity_reduction(const NodeStats& parent, const NodeStats& left,
                          const NodeStats& right) {
    if (left.n_samples == 0 || right.n_samples == 0)
        throw InvalidSplit("impurity_reduction: empty child");
    if (left.n_samples + right.n_samples != parent.n_samples)
        throw InvalidSplit("impurity_reduction: child counts don't sum to parent");
    const double nj = static_cast<double>(parent.n_samples);
    return parent.impurity -
           (static_cast<double>(left.n_samples) / nj) * left.impurity -
           (static_cast<double>(right.n_samples) / nj) * right.impurity;
}

namespace {

struct SplitChoice {
    int feature = -1;
    double threshold = 0.0;
    double gain = 0.0;
    double left_impurity = 0.0;
    double right_impurity = 0.0;
    std::size_t n_left = 0;
};

struct TreeBuilder {
    const Matrix& x;
    std::span<const double> y;  // centered per tree
    const ForestConfig& cfg;
    std::size_t n_candidates;
    Rng& rng;
    Tree tree;
    std::vector<std::pair<double, double>> sorted;  // (feature value, target) scratch
    std::vector<SplitChoice> finalists;

    // Gain of one candidate split, accumulated in sample-index order. Two
    // features inducing the same partition produce bit-identical gains here,
    // which makes the (feature, threshold) tie-break well defined; the fast
    // prefix scan sums in per-feature sort order and cannot guarantee that.
    SplitChoice canonical_gain(int f, double threshold, std::span<const std::size_t> idx,
                               double parent_impurity) const {
        double ls = 0.0, lq = 0.0, rs = 0.0, rq = 0.0;
        std::size_t nl = 0, nr = 0;
        for (std::size_t i : idx) {
            const double t = y[i];
            if (x(i, static_cast<std::size_t>(f)) <= threshold) {
                ls += t;
                lq += t * t;
                ++nl;
            } else {
                rs += t;
                rq += t * t;
                ++nr;
            }
        }
        SplitChoice out;
        out.feature = f;
        out.threshold = threshold;
        out.n_left = nl;
        const double ml = ls / static_cast<double>(nl);
        const double mr = rs / static_cast<double>(nr);
        out.left_impurity = std::max(0.0, lq / static_cast<double>(nl) - ml * ml);
        out.right_impurity = std::max(0.0, rq / static_cast<double>(nr) - mr * mr);
        // Symmetric form: the gain is invariant to the left/right orientation
        // of the partition, so mirrored splits stay exact ties.
        const double n = static_cast<double>(idx.size());
        out.gain = parent_impurity -
                   ((static_cast<double>(nl) / n) * out.left_impurity +
                    (static_cast<double>(nr) / n) * out.right_impurity);
        return out;
    }

    // Candidate gains on one feature via a prefix scan over the sorted
    // samples; collects every candidate within tie_eps of the running best
    // for the canonical re-evaluation.
    void scan_feature(int f, std::span<const std::size_t> idx, double parent_impurity,
                      double& best_gain, double tie_eps) {
        const std::size_t n = idx.size();
        sorted.clear();
        for (std::size_t i : idx) sorted.emplace_back(x(i, static_cast<std::size_t>(f)), y[i]);
        std::sort(sorted.begin(), sorted.end());

        double total = 0.0, total_sq = 0.0;
        for (const auto& [xsorted, t] : sorted) {
            total += t;
            total_sq += t * t;
        }

        double left_sum = 0.0, left_sq = 0.0;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            left_sum += sorted[i].second;
            left_sq += sorted[i].second * sorted[i].second;
            if (sorted[i].first == sorted[i + 1].first) continue;

            const double nl = static_cast<double>(i + 1);
            const double nr = static_cast<double>(n - i - 1);
            const double ml = left_sum / nl;
            const double mr = (total - left_sum) / nr;
            const double il = std::max(0.0, left_sq / nl - ml * ml);
            const double ir = std::max(0.0, (total_sq - left_sq) / nr - mr * mr);
            const double gain = parent_impurity - (nl / static_cast<double>(n)) * il -
                                (nr / static_cast<double>(n)) * ir;
            if (gain <= 0.0 || gain < best_gain - tie_eps) continue;
            best_gain = std::max(best_gain, gain);
            SplitChoice cand;
            cand.feature = f;
            cand.threshold = 0.5 * (sorted[i].first + sorted[i + 1].first);
            cand.gain = gain;
            finalists.push_back(cand);
        }
    }

    int build(std::vector<std::size_t>& idx, std::size_t depth) {
        const std::size_t n = idx.size();
        const double mean =
            [&] {
                double s = 0.0;
                for (std::size_t i : idx) s += y[i];
                return s / static_cast<double>(n);
            }();
        double impurity = 0.0;
        for (std::size_t i : idx) {
            const double d = y[i] - mean;
            impurity += d * d;
        }
        impurity /= static_cast<double>(n);

        const int node_id = static_cast<int>(tree.nodes.size());
        tree.nodes.push_back({});
        TreeNode& proto = tree.nodes.back();
        proto.n_samples = n;
        proto.impurity = impurity;
        proto.value = mean;

        if (depth >= cfg.max_depth || n < cfg.min_samples_split || impurity <= 0.0)
            return node_id;

        const std::size_t f_total = x.cols();
        std::vector<std::size_t> candidates = rng.sample_distinct(f_total, n_candidates);
        std::sort(candidates.begin(), candidates.end());

        finalists.clear();
        double best_scan = 0.0;
        const double tie_eps = 1e-12 * (1.0 + impurity);
        for (std::size_t f : candidates)
            scan_feature(static_cast<int>(f), idx, impurity, best_scan, tie_eps);

        // Canonically re-evaluate the candidates that tied the scan within
        // tie_eps; ascending (feature, threshold) order plus a strict
        // comparison breaks exact ties toward the lowest feature index, then
        // the lowest threshold.
        SplitChoice best;
        for (const SplitChoice& cand : finalists) {
            if (cand.gain < best_scan - tie_eps) continue;
            const SplitChoice rescored =
                canonical_gain(cand.feature, cand.threshold, idx, impurity);
            if (rescored.gain > best.gain) best = rescored;
        }
        if (best.feature < 0 || best.gain <= 0.0) return node_id;

        std::vector<std::size_t> left_idx, right_idx;
        left_idx.reserve(best.n_left);
        right_idx.reserve(n - best.n_left);
        for (std::size_t i : idx) {
            if (x(i, static_cast<std::size_t>(best.feature)) <= best.threshold)
                left_idx.push_back(i);
            else
                right_idx.push_back(i);
        }

        {
            TreeNode& node = tree.nodes[static_cast<std::size_t>(node_id)];
            node.feature = best.feature;
            node.threshold = best.threshold;
            node.delta = impurity_reduction(
                {n, impurity}, {left_idx.size(), best.left_impurity},
                {right_idx.size(), best.right_impurity});
        }

        idx.clear();
        idx.shrink_to_fit();
        const int left_id = build(left_idx, depth + 1);
        const int right_id = build(right_idx, depth + 1);
        tree.nodes[static_cast<std::size_t>(node_id)].left = left_id;
        tree.nodes[static_cast<std::size_t>(node_id)].right = right_id;
        return node_id;
    }
};

}  // namespace

Forest fit_forest(const Matrix& x, std::span<const double> y, const ForestConfig& cfg) {
    cfg.validate();
    const std::size_t n = x.rows();
    const std::size_t f = x.cols();
    if (n != y.size()) throw DimensionMismatch("fit_forest: rows != targets");
    if (n < cfg.min_samples_split) throw DegenerateData("fit_forest: too few samples");
    if (f == 0) throw DimensionMismatch("fit_forest: no features");

    const std::size_t m = cfg.feature_subsample > 0
                              ? std::min(cfg.feature_subsample, f)
                              : (f + 2) / 3;  // ceil(F / 3)

    Forest forest;
    forest.n_features = f;
    forest.trees.resize(cfg.n_trees);

    std::vector<double> centered(n);
    std::vector<std::size_t> idx(n);
    for (std::size_t b = 0; b < cfg.n_trees; ++b) {
        Rng rng(Rng::derive(cfg.seed, b));

        idx.resize(n);
        if (cfg.bootstrap) {
            for (std::size_t i = 0; i < n; ++i)
                idx[i] = static_cast<std::size_t>(rng.below(n));
        } else {
            for (std::size_t i = 0; i < n; ++i) idx[i] = i;
        }

        // Center targets per tree; impurities are shift-invariant and this
        // avoids cancellation when targets sit at price magnitudes ~1e5.
        double mean = 0.0;
        for (std::size_t i = 0; i < n; ++i) mean += y[i];
        mean /= static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i) centered[i] = y[i] - mean;

        TreeBuilder builder{x, centered, cfg, m, rng, {}, {}, {}};
        builder.build(idx, 0);
        forest.trees[b] = std::move(builder.tree);
    }
    return forest;
}

std::vector<double> mdi_importance(const Forest& forest, bool weighted_normalized) {
    std::vector<double> mdi(forest.n_features, 0.0);
    if (forest.trees.empty()) return mdi;
    for (const Tree& tree : forest.trees) {
        const double n_root =
            tree.nodes.empty() ? 1.0 : static_cast<double>(tree.nodes[0].n_samples);
        for (const TreeNode& node : tree.nodes) {
            if (node.is_leaf()) continue;
            const double w =
                weighted_normalized ? static_cast<double>(node.n_samples) / n_root : 1.0;
            mdi[static_cast<std::size_t>(node.feature)] += w * node.delta;
        }
    }
    const double inv_b = 1.0 / static_cast<double>(forest.trees.size());
    for (double& v : mdi) v *= inv_b;
    if (weighted_normalized) {
        double total = 0.0;
        for (double v : mdi) total += v;
        if (total > 0.0)
            for (double& v : mdi) v /= total;
    }
    return mdi;
}

}  // namespace tickcast
