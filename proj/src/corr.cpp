#include "tickcast/corr.hpp"

#include <cmath>

#include "tickcast/errors.hpp"
#include "tickcast/kernels.hpp"

namespace tickcast {

const char* importance_source_name(ImportanceSource source) {
    return source == ImportanceSource::Mdi ? "MDI" : "GD";
}

WeightedMatrix apply_importance(const Matrix& x, const ImportanceVector& w) {
    if (w.weights.size() != x.cols())
        throw DimensionMismatch("apply_importance: weight length != F");
    WeightedMatrix fi;
    fi.source = w.source;
    fi.values = Matrix(x.rows(), x.cols());
    for (std::size_t i = 0; i < x.rows(); ++i)
        kernels::hadamard(x.row(i), w.weights.data(), fi.values.row(i), x.cols());
    return fi;
}

CorrMatrix correlation_matrix(const Matrix& values) {
    const std::size_t n = values.rows();
    const std::size_t f = values.cols();
    if (n < 2) throw TooFewRows("correlation_matrix: need N >= 2");

    // Columns are strided in the row-major layout; transpose once so the
    // reduction kernels run on contiguous data.
    const Matrix cols = values.transposed();

    std::vector<double> mean(f), ssq(f);
    std::vector<bool> degenerate(f);
    for (std::size_t m = 0; m < f; ++m) {
        mean[m] = kernels::sum(cols.row(m), n) / static_cast<double>(n);
        ssq[m] = kernels::centered_sumsq(cols.row(m), mean[m], n);
        // Constant columns leave only rounding residue in the centered sum.
        degenerate[m] = ssq[m] <= 1e-20 * static_cast<double>(n) * (1.0 + mean[m] * mean[m]);
    }

    CorrMatrix out;
    out.rho = Matrix(f, f);
    for (std::size_t m = 0; m < f; ++m) {
        out.rho(m, m) = 1.0;
        for (std::size_t k = m + 1; k < f; ++k) {
            double r = 0.0;
            if (!degenerate[m] && !degenerate[k]) {
                const double num =
                    kernels::centered_dot(cols.row(m), mean[m], cols.row(k), mean[k], n);
                r = num / std::sqrt(ssq[m] * ssq[k]);
                r = std::min(1.0, std::max(-1.0, r));
            }
            out.rho(m, k) = r;
            out.rho(k, m) = r;
        }
    }
    return out;
}

CorrMatrix correlation_matrix(const WeightedMatrix& fi) {
    return correlation_matrix(fi.values);
}

DistanceMatrix distance_matrix(const CorrMatrix& rho) {
    const std::size_t f = rho.rho.rows();
    DistanceMatrix out;
    out.c = Matrix(f, f);
    for (std::size_t m = 0; m < f; ++m)
        for (std::size_t k = 0; k < f; ++k)
            out.c(m, k) = std::sqrt(std::max(0.0, (1.0 - rho.rho(m, k)) * 0.5));
    return out;
}

}  // namespace tickcast
