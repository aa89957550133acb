#pragma once

#include <cstddef>
#include <cstdlib>
#include <exception>
#include <span>
#include <type_traits>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ckn {

enum class Execution { Serial, Parallel };

namespace parallel {

// Thread cap: CKN_THREADS if set and positive, otherwise the OpenMP default.
inline int thread_limit() {
#ifdef _OPENMP
  int n = omp_get_max_threads();
#else
  int n = 1;
#endif
  if (const char* env = std::getenv("CKN_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) n = v;
  }
  return n;
}

// out[i] = fn(i). The parallel path writes disjoint slots, so results do not
// depend on scheduling; reductions happen afterwards in index order.
template <class F>
auto map(std::size_t count, F&& fn, Execution exec = Execution::Parallel)
    -> std::vector<std::invoke_result_t<F&, std::size_t>> {
  using R = std::invoke_result_t<F&, std::size_t>;
  std::vector<R> out(count);
  if (exec == Execution::Serial || count < 2) {
    for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
    return out;
  }
#ifdef _OPENMP
  std::exception_ptr error;
  const long long n = static_cast<long long>(count);
#pragma omp parallel for schedule(static) num_threads(thread_limit())
  for (long long i = 0; i < n; ++i) {
    try {
      out[static_cast<std::size_t>(i)] = fn(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(ckn_map_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
#else
  for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
#endif
  return out;
}

// Fixed-shape pairwise summation; the tree depends only on the length.
inline double pairwise_sum(std::span<const double> x) {
  if (x.size() <= 8) {
    double s = 0.0;
    for (double v : x) s += v;
    return s;
  }
  const std::size_t half = x.size() / 2;
  return pairwise_sum(x.first(half)) + pairwise_sum(x.subspan(half));
}

}  // namespace parallel
}  // namespace ckn
