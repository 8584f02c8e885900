#include "isotm/batch.hpp"

#include <omp.h>

#include <atomic>
#include <cstdlib>
#include <exception>

namespace isotm::batch {

namespace {
Mode g_mode = [] {
    const char* env = std::getenv("ISOTM_THREADS");
    if (env && std::atoi(env) > 1) return Mode::Parallel;
    return Mode::Serial;
}();
}  // namespace

Mode default_mode() { return g_mode; }
void set_default_mode(Mode m) { g_mode = m; }

void map_serial(std::size_t n, const std::function<double(std::size_t)>& fn,
                std::vector<double>& out) {
    out.resize(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
}

void map_parallel(std::size_t n, const std::function<double(std::size_t)>& fn,
                  std::vector<double>& out) {
    out.resize(n);
    std::exception_ptr err = nullptr;
    std::atomic<bool> failed{false};
#pragma omp parallel for schedule(dynamic, 16)
    for (long long i = 0; i < static_cast<long long>(n); ++i) {
        if (failed.load(std::memory_order_relaxed)) continue;
        try {
            out[static_cast<std::size_t>(i)] = fn(static_cast<std::size_t>(i));
        } catch (...) {
            bool expected = false;
            if (failed.compare_exchange_strong(expected, true)) {
#pragma omp critical
                err = std::current_exception();
            }
        }
    }
    if (err) std::rethrow_exception(err);
}

void map(std::size_t n, const std::function<double(std::size_t)>& fn, std::vector<double>& out,
         Mode mode) {
    if (mode == Mode::Parallel)
        map_parallel(n, fn, out);
    else
        map_serial(n, fn, out);
}

double sum_ordered(const std::vector<double>& values) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
}

}  // namespace isotm::batch
