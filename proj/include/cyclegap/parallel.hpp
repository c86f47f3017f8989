#pragma once

#include <cstddef>
#include <exception>
#include <string>
#include <type_traits>
#include <vector>

namespace cyclegap {

/// Serial loops are the reference; OpenMP loops must reproduce them exactly.
enum class Exec { serial, openmp };

std::string to_string(Exec e);

/// results[i] = fn(i) for i in [0, count). Each index is independent, so the
/// output does not depend on the schedule.
template <typename Fn>
auto map_indices(std::size_t count, Fn&& fn, Exec exec) {
    using R = std::invoke_result_t<Fn&, std::size_t>;
    std::vector<R> out(count);
    if (exec == Exec::serial) {
        for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
        return out;
    }
    const auto n = static_cast<long long>(count);
    std::exception_ptr error;
#pragma omp parallel for schedule(dynamic, 16)
    for (long long i = 0; i < n; ++i) {
        try {
            out[static_cast<std::size_t>(i)] = fn(static_cast<std::size_t>(i));
        } catch (...) {
#pragma omp critical(cyclegap_map_error)
            if (!error) error = std::current_exception();
        }
    }
    if (error) std::rethrow_exception(error);
    return out;
}

int max_threads();

} // namespace cyclegap
