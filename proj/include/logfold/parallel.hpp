#pragma once

// Thin OpenMP shim so the library also builds without -fopenmp.
#ifdef _OPENMP
#include <omp.h>
#else
inline int omp_get_max_threads() { return 1; }
inline int omp_get_thread_num() { return 0; }
inline void omp_set_num_threads(int) {}
#endif

namespace logfold {

/// Selects between the OpenMP kernels and their serial reference versions.
/// Both paths produce bit-identical results.
enum class Exec { Serial, Parallel };

} // namespace logfold
