#pragma once

#include <cstddef>
#include <vector>

#include "tickcast/matrix.hpp"

namespace tickcast {

enum class ImportanceSource { Mdi, Gd };

const char* importance_source_name(ImportanceSource source);

struct ImportanceVector {
    std::vector<double> weights;
    ImportanceSource source = ImportanceSource::Mdi;
};

// Observation matrix with an importance vector broadcast onto its columns.
struct WeightedMatrix {
    Matrix values;
    ImportanceSource source = ImportanceSource::Mdi;
};

struct CorrMatrix {
    Matrix rho;  // F x F, symmetric, unit diagonal, entries in [-1, 1]
};

struct DistanceMatrix {
    Matrix c;  // F x F, c = sqrt((1 - rho) / 2), zero diagonal
};

// FI[i][f] = X[i][f] * w[f]. Throws DimensionMismatch.
WeightedMatrix apply_importance(const Matrix& x, const ImportanceVector& w);

// Pearson correlation between all column pairs, two-pass moments.
// Zero-variance columns correlate 0 with every other column and 1 with
// themselves. Throws TooFewRows when N < 2.
CorrMatrix correlation_matrix(const Matrix& values);
CorrMatrix correlation_matrix(const WeightedMatrix& fi);

// Element-wise sqrt((1 - rho) / 2).
DistanceMatrix distance_matrix(const CorrMatrix& rho);

}  // namespace tickcast
