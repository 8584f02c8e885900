#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace isotm::batch {

enum class Mode { Serial, Parallel };

// Process-wide default for the batch kernels. Serial unless enabled by the
// caller (CLI flag or ISOTM_THREADS). Results are index-addressed, so the
// parallel path is bitwise identical to the serial reference.
Mode default_mode();
void set_default_mode(Mode m);

// Serial reference kernel: fn(i) -> out[i] in index order.
void map_serial(std::size_t n, const std::function<double(std::size_t)>& fn,
                std::vector<double>& out);

// OpenMP kernel, same contract. Exceptions thrown by fn are captured and
// rethrown after the parallel region joins.
void map_parallel(std::size_t n, const std::function<double(std::size_t)>& fn,
                  std::vector<double>& out);

void map(std::size_t n, const std::function<double(std::size_t)>& fn, std::vector<double>& out,
         Mode mode);

inline void map(std::size_t n, const std::function<double(std::size_t)>& fn,
                std::vector<double>& out) {
    map(n, fn, out, default_mode());
}

// Deterministic reduction: plain left-to-right sum in index order.
double sum_ordered(const std::vector<double>& values);

}  // namespace isotm::batch
