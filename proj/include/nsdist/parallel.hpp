#pragma once

#include <cstddef>

namespace nsdist {

/// Selects between the OpenMP kernels and the serial reference path.
/// Both paths perform identical floating-point operations per index, so
/// results are bit-identical.
enum class Execution { serial, parallel };

template <class Body>
void for_each_index(std::size_t count, Execution exec, Body&& body) {
  const auto n = static_cast<long>(count);
  if (exec == Execution::parallel) {
#pragma omp parallel for schedule(static)
    for (long i = 0; i < n; ++i) {
      body(static_cast<std::size_t>(i));
    }
  } else {
    for (long i = 0; i < n; ++i) {
      body(static_cast<std::size_t>(i));
    }
  }
}

}  // namespace nsdist
