#pragma once

#include <cstddef>

namespace tickcast::kernels {

struct KernelTable {
    double (*dot)(const double*, const double*, std::size_t);
    double (*sum)(const double*, std::size_t);
    double (*squared_distance)(const double*, const double*, std::size_t);
    double (*centered_sumsq)(const double*, double, std::size_t);
    double (*centered_dot)(const double*, double, const double*, double, std::size_t);
    void (*axpy)(double, const double*, double*, std::size_t);
    void (*hadamard)(const double*, const double*, double*, std::size_t);
    void (*shift_scale)(const double*, double, double, double*, std::size_t);
};

const KernelTable& scalar_table();
const KernelTable* avx2_table();  // nullptr when not compiled in or unsupported
const KernelTable* neon_table();

}  // namespace tickcast::kernels
