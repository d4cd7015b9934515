#include "tickcast/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>
#include <mutex>

#include "kernels_internal.hpp"
#include "tickcast/errors.hpp"

namespace tickcast::kernels {

namespace {

std::atomic<const KernelTable*> g_table{nullptr};
std::atomic<Lane> g_lane{Lane::Scalar};
std::once_flag g_init_once;

const KernelTable* table_for(Lane lane) {
    switch (lane) {
        case Lane::Scalar: return &scalar_table();
        case Lane::Avx2: return avx2_table();
        case Lane::Neon: return neon_table();
    }
    return nullptr;
}

void init_default() {
    std::call_once(g_init_once, [] {
        if (g_table.load(std::memory_order_acquire) == nullptr) select_best_lane();
    });
}

const KernelTable& table() {
    const KernelTable* t = g_table.load(std::memory_order_acquire);
    if (t == nullptr) {
        init_default();
        t = g_table.load(std::memory_order_acquire);
    }
    return *t;
}

}  // namespace

Lane active_lane() {
    init_default();
    return g_lane.load(std::memory_order_acquire);
}

bool lane_available(Lane lane) { return table_for(lane) != nullptr; }

void select_lane(Lane lane) {
    const KernelTable* t = table_for(lane);
    if (t == nullptr)
        throw InvalidConfig(std::string("kernel lane unavailable: ") + lane_name(lane));
    g_table.store(t, std::memory_order_release);
    g_lane.store(lane, std::memory_order_release);
}

void select_best_lane() {
    const char* env = std::getenv("TICKCAST_KERNELS");
    if (env != nullptr && std::strcmp(env, "auto") != 0 && env[0] != '\0') {
        if (std::strcmp(env, "scalar") == 0) return select_lane(Lane::Scalar);
        if (std::strcmp(env, "avx2") == 0) return select_lane(Lane::Avx2);
        if (std::strcmp(env, "neon") == 0) return select_lane(Lane::Neon);
        throw InvalidConfig(std::string("TICKCAST_KERNELS: unknown lane '") + env + "'");
    }
    if (lane_available(Lane::Avx2)) return select_lane(Lane::Avx2);
    if (lane_available(Lane::Neon)) return select_lane(Lane::Neon);
    select_lane(Lane::Scalar);
}

const char* lane_name(Lane lane) {
    switch (lane) {
        case Lane::Scalar: return "scalar";
        case Lane::Avx2: return "avx2";
        case Lane::Neon: return "neon";
    }
    return "unknown";
}

double dot(const double* a, const double* b, std::size_t n) { return table().dot(a, b, n); }

double sum(const double* a, std::size_t n) { return table().sum(a, n); }

double squared_distance(const double* a, const double* b, std::size_t n) {
    return table().squared_distance(a, b, n);
}

double centered_sumsq(const double* a, double mean, std::size_t n) {
    return table().centered_sumsq(a, mean, n);
}

double centered_dot(const double* a, double mean_a, const double* b, double mean_b,
                    std::size_t n) {
    return table().centered_dot(a, mean_a, b, mean_b, n);
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
    table().axpy(alpha, x, y, n);
}

void hadamard(const double* a, const double* b, double* out, std::size_t n) {
    table().hadamard(a, b, out, n);
}

void shift_scale(const double* a, double shift, double scale, double* out, std::size_t n) {
    table().shift_scale(a, shift, scale, out, n);
}

}  // namespace tickcast::kernels
