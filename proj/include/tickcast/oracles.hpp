#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "tickcast/matrix.hpp"

// Independent brute-force / extended-precision reference routes. Nothing here
// shares code with the production implementations it cross-checks; these are
// deliberately slow, direct evaluations used by the test suites and the
// `oracle` CLI subcommand.
namespace tickcast::oracles {

struct SplitOracle {
    int feature = -1;
    double threshold = 0.0;
    double gain = 0.0;
};

// Enumerates every (feature, midpoint threshold) split and scores it with a
// directly computed impurity reduction.
SplitOracle exhaustive_best_split(const Matrix& x, std::span<const double> y);

// Minimum within-cluster sum of squares over all assignments of n points to
// exactly k non-empty clusters. Exponential; keep n small.
double min_inertia_partition(const Matrix& points, std::size_t k);

// Same enumeration, returning the best assignment.
std::vector<std::size_t> best_partition(const Matrix& points, std::size_t k);

// Silhouette coefficients evaluated point by point straight from the
// definition (mean intra-cluster distance vs. nearest other cluster).
std::vector<double> silhouette_direct(const Matrix& points,
                                      std::span<const std::size_t> assignment,
                                      std::size_t k);

// mean(s) / sqrt(population variance of s) in long double; infinities for
// the zero-variance cases by mean sign.
double quality_direct(std::span<const double> s);

// Pearson correlation of all column pairs, long double two-pass.
Matrix correlation_direct(const Matrix& values);

// (A^T A + lambda I) w = A^T y solved in long double with partial pivoting.
std::vector<double> normal_equations_longdouble(const Matrix& a, std::span<const double> y,
                                                double lambda);

// Unregularized least squares in long double (normal equations).
std::vector<double> least_squares_longdouble(const Matrix& x, std::span<const double> y);

// Cross-checks production code against the oracle routes on seeded random
// instances, printing one line per check. Returns true when all pass.
bool run_oracle_suite(std::size_t trials, std::uint64_t seed);

}  // namespace tickcast::oracles
