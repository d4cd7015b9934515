#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "tickcast/errors.hpp"
#include "tickcast/forest.hpp"
#include "tickcast/oracles.hpp"
#include "tickcast/rng.hpp"

using namespace tickcast;

namespace {

bool trees_identical(const Forest& a, const Forest& b) {
    if (a.trees.size() != b.trees.size()) return false;
    for (std::size_t t = 0; t < a.trees.size(); ++t) {
        const auto& na = a.trees[t].nodes;
        const auto& nb = b.trees[t].nodes;
        if (na.size() != nb.size()) return false;
        for (std::size_t i = 0; i < na.size(); ++i) {
            if (na[i].left != nb[i].left || na[i].right != nb[i].right ||
                na[i].feature != nb[i].feature || na[i].threshold != nb[i].threshold ||
                na[i].n_samples != nb[i].n_samples || na[i].impurity != nb[i].impurity ||
                na[i].delta != nb[i].delta || na[i].value != nb[i].value)
                return false;
        }
    }
    return true;
}

Matrix random_matrix(Rng& rng, std::size_t n, std::size_t f, double scale = 1.0) {
    Matrix x(n, f);
    for (auto& v : x.data()) v = scale * rng.normal();
    return x;
}

}  // namespace

TEST_CASE("node_impurity") {
    CHECK(node_impurity(std::vector<double>{1, 1, 1}) == 0.0);
    CHECK(node_impurity(std::vector<double>{0, 2}) == 1.0);
    CHECK(node_impurity(std::vector<double>{1, 2, 3}) ==
          doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK_THROWS_AS(node_impurity({}), EmptyNode);
}

TEST_CASE("impurity_reduction") {
    // Pure split of a parent with impurity 1 into two clean halves.
    CHECK(impurity_reduction({4, 1.0}, {2, 0.0}, {2, 0.0}) == 1.0);
    // Children as impure as the parent gain nothing.
    CHECK(impurity_reduction({4, 0.5}, {2, 0.5}, {2, 0.5}) == 0.0);

    // Hand-derived on targets [0,1,1,2] split into [2] and [0,1,1]: the
    // stated arithmetic is 0.5 - 0.75 * 2/9 = 1/3.
    const double parent = node_impurity(std::vector<double>{0, 1, 1, 2});
    const double left = node_impurity(std::vector<double>{2});
    const double right = node_impurity(std::vector<double>{0, 1, 1});
    CHECK(parent == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(left == 0.0);
    CHECK(right == doctest::Approx(2.0 / 9.0).epsilon(1e-15));
    CHECK(impurity_reduction({4, parent}, {1, left}, {3, right}) ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-14));

    CHECK_THROWS_AS(impurity_reduction({4, 1.0}, {1, 0.0}, {2, 0.0}), InvalidSplit);
    CHECK_THROWS_AS(impurity_reduction({4, 1.0}, {4, 0.0}, {0, 0.0}), InvalidSplit);
}

TEST_CASE("constant targets grow stump trees with zero importance") {
    Matrix x(8, 3);
    Rng rng(3);
    for (auto& v : x.data()) v = rng.normal();
    const std::vector<double> y(8, 4.2);

    ForestConfig cfg;
    cfg.n_trees = 5;
    cfg.seed = 11;
    const Forest forest = fit_forest(x, y, cfg);
    for (const Tree& tree : forest.trees) {
        REQUIRE(tree.nodes.size() == 1);
        CHECK(tree.nodes[0].is_leaf());
        CHECK(tree.nodes[0].delta == 0.0);
    }
    const auto mdi = mdi_importance(forest);
    for (double v : mdi) CHECK(v == 0.0);
}

TEST_CASE("single informative feature is chosen at the root") {
    Matrix x(10, 2);
    std::vector<double> y(10);
    for (std::size_t i = 0; i < 10; ++i) {
        x(i, 0) = static_cast<double>(i);
        x(i, 1) = 7.0;  // constant
        y[i] = static_cast<double>(i);
    }
    ForestConfig cfg;
    cfg.n_trees = 1;
    cfg.max_depth = 1;
    cfg.bootstrap = false;
    cfg.feature_subsample = 2;
    const Forest forest = fit_forest(x, y, cfg);
    REQUIRE(!forest.trees[0].nodes[0].is_leaf());
    CHECK(forest.trees[0].nodes[0].feature == 0);

    const auto mdi = mdi_importance(forest);
    CHECK(mdi[0] > 0.0);
    CHECK(mdi[1] == 0.0);  // constant feature never splits
}

TEST_CASE("root split matches exhaustive enumeration") {
    Rng rng(29);
    for (int trial = 0; trial < 25; ++trial) {
        const std::size_t n = 6 + rng.below(11);  // up to 16 samples
        const std::size_t f = 2 + rng.below(3);
        const Matrix x = random_matrix(rng, n, f);
        std::vector<double> y(n);
        for (auto& v : y) v = rng.normal();

        ForestConfig cfg;
        cfg.n_trees = 1;
        cfg.max_depth = 1;
        cfg.bootstrap = false;
        cfg.feature_subsample = f;
        cfg.min_samples_split = 2;
        const Forest forest = fit_forest(x, y, cfg);
        const TreeNode& root = forest.trees[0].nodes[0];
        const oracles::SplitOracle ref = oracles::exhaustive_best_split(x, y);

        if (ref.feature < 0) {
            CHECK(root.is_leaf());
            continue;
        }
        REQUIRE(!root.is_leaf());
        CHECK(root.feature == ref.feature);
        CHECK(root.threshold == ref.threshold);
        CHECK(std::abs(root.delta - ref.gain) <= 1e-12);
    }
}

TEST_CASE("mdi_importance implements the per-tree sum averaged over trees") {
    Forest forest;
    forest.n_features = 3;

    SUBCASE("all-leaf forest") {
        forest.trees.resize(4);
        for (auto& tree : forest.trees) {
            TreeNode leaf;
            leaf.n_samples = 10;
            tree.nodes.push_back(leaf);
        }
        const auto mdi = mdi_importance(forest);
        CHECK(mdi == std::vector<double>{0.0, 0.0, 0.0});
    }

    SUBCASE("single tree, single split") {
        Tree tree;
        TreeNode root;
        root.left = 1;
        root.right = 2;
        root.feature = 0;
        root.delta = 0.4;
        root.n_samples = 8;
        tree.nodes = {root, TreeNode{}, TreeNode{}};
        forest.trees = {tree};
        const auto mdi = mdi_importance(forest);
        CHECK(mdi[0] == 0.4);
        CHECK(mdi[1] == 0.0);
        CHECK(mdi[2] == 0.0);
    }

    SUBCASE("averaging over trees") {
        const auto make_tree = [](double delta) {
            Tree tree;
            TreeNode root;
            root.left = 1;
            root.right = 2;
            root.feature = 0;
            root.delta = delta;
            root.n_samples = 8;
            tree.nodes = {root, TreeNode{}, TreeNode{}};
            return tree;
        };
        forest.trees = {make_tree(0.4), make_tree(0.6)};
        CHECK(mdi_importance(forest)[0] == doctest::Approx(0.5).epsilon(1e-15));
    }
}

TEST_CASE("mdi values are non-negative on random data") {
    Rng rng(101);
    for (int trial = 0; trial < 10; ++trial) {
        const Matrix x = random_matrix(rng, 40, 5);
        std::vector<double> y(40);
        for (auto& v : y) v = rng.normal();
        ForestConfig cfg;
        cfg.n_trees = 10;
        cfg.seed = rng.next_u64();
        const auto mdi = mdi_importance(fit_forest(x, y, cfg));
        for (double v : mdi) CHECK(v >= 0.0);
    }
}

TEST_CASE("fit_forest is deterministic given the seed") {
    Rng rng(55);
    const Matrix x = random_matrix(rng, 30, 4);
    std::vector<double> y(30);
    for (auto& v : y) v = rng.normal();

    ForestConfig cfg;
    cfg.n_trees = 8;
    cfg.seed = 998877;
    const Forest a = fit_forest(x, y, cfg);
    const Forest b = fit_forest(x, y, cfg);
    CHECK(trees_identical(a, b));

    cfg.seed = 998878;
    const Forest c = fit_forest(x, y, cfg);
    CHECK(!trees_identical(a, c));  // different stream, different bootstraps
}

TEST_CASE("single tree without randomness equals its own delta sums") {
    Rng rng(77);
    const Matrix x = random_matrix(rng, 24, 3);
    std::vector<double> y(24);
    for (std::size_t i = 0; i < 24; ++i) y[i] = x(i, 1) * 2.0 + 0.1 * rng.normal();

    ForestConfig cfg;
    cfg.n_trees = 1;
    cfg.bootstrap = false;
    cfg.feature_subsample = 3;
    const Forest forest = fit_forest(x, y, cfg);

    std::vector<double> sums(3, 0.0);
    for (const TreeNode& node : forest.trees[0].nodes)
        if (!node.is_leaf()) sums[static_cast<std::size_t>(node.feature)] += node.delta;
    const auto mdi = mdi_importance(forest);
    for (std::size_t f = 0; f < 3; ++f) CHECK(mdi[f] == sums[f]);
}

TEST_CASE("noiseless dependence on feature 0 dominates the importance") {
    Rng rng(2024);
    for (int trial = 0; trial < 20; ++trial) {
        Matrix x(60, 4);
        std::vector<double> y(60);
        for (std::size_t i = 0; i < 60; ++i) {
            for (std::size_t j = 0; j < 4; ++j) x(i, j) = rng.normal();
            y[i] = 3.0 * x(i, 0);
        }
        ForestConfig cfg;
        cfg.seed = rng.next_u64();
        const auto mdi = mdi_importance(fit_forest(x, y, cfg));
        const std::size_t argmax =
            static_cast<std::size_t>(std::max_element(mdi.begin(), mdi.end()) - mdi.begin());
        CHECK(argmax == 0);
    }
}

TEST_CASE("weighted-normalized variant sums to one") {
    Rng rng(31);
    const Matrix x = random_matrix(rng, 50, 4);
    std::vector<double> y(50);
    for (std::size_t i = 0; i < 50; ++i) y[i] = x(i, 2) + 0.2 * rng.normal();

    ForestConfig cfg;
    cfg.seed = 5;
    const auto mdi = mdi_importance(fit_forest(x, y, cfg), true);
    double total = 0.0;
    for (double v : mdi) {
        CHECK(v >= 0.0);
        total += v;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("too few samples is an error") {
    Matrix x(3, 2);
    const std::vector<double> y{1, 2, 3};
    ForestConfig cfg;  // min_samples_split 4
    CHECK_THROWS_AS(fit_forest(x, y, cfg), DegenerateData);
}
