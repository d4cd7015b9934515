#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "tickcast/matrix.hpp"

namespace tickcast {

struct ForestConfig {
    std::size_t n_trees = 50;
    std::size_t max_depth = 5;
    std::size_t min_samples_split = 4;
    std::size_t feature_subsample = 0;  // candidates per split; 0 -> ceil(F / 3)
    bool bootstrap = true;
    // Verbatim importance sums raw impurity reductions per feature and
    // averages over trees. The conventional variant weights each reduction by
    // the node's sample share and normalizes the result to sum 1.
    bool weighted_normalized_mdi = false;
    std::uint64_t seed = 0;

    void validate() const;
};

// Per-node sample count and impurity, as used by the split-gain formula.
struct NodeStats {
    std::size_t n_samples = 0;
    double impurity = 0.0;
};

struct TreeNode {
    int left = -1;
    int right = -1;
    int feature = -1;    // split feature, -1 for leaves
    double threshold = 0.0;
    std::size_t n_samples = 0;
    double impurity = 0.0;  // MSE of node targets around the node mean
    double delta = 0.0;     // impurity reduction of the accepted split
    double value = 0.0;     // node target mean

    bool is_leaf() const { return left < 0; }
};

struct Tree {
    std::vector<TreeNode> nodes;  // nodes[0] is the root
};

struct Forest {
    std::vector<Tree> trees;
    std::size_t n_features = 0;
};

// Mean squared deviation of targets around their mean. Throws EmptyNode.
double node_impurity(std::span<const double> targets);

// parent.impurity - (n_l/n_j) * left.impurity - (n_r/n_j) * right.impurity.
// Throws InvalidSplit when child counts don't sum to the parent's.
double impurity_reduction(const NodeStats& parent, const NodeStats& left,
                          const NodeStats& right);

// CART-style greedy regression forest. Splits maximize the impurity
// reduction over a per-split feature subsample; candidate thresholds are
// midpoints between consecutive sorted unique values; ties break toward the
// lowest feature index, then the lowest threshold. Deterministic given the
// seed. Throws DegenerateData when X has fewer rows than min_samples_split.
Forest fit_forest(const Matrix& x, std::span<const double> y, const ForestConfig& cfg);

// Per-feature importance: average over trees of the per-tree sums of split
// impurity reductions (raw, unnormalized by default; see ForestConfig).
std::vector<double> mdi_importance(const Forest& forest,
                                   bool weighted_normalized = false);

}  // namespace tickcast
