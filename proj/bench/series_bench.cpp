// Compares the serial reference Cauchy product against the OpenMP kernel on
// the workloads that dominate real runs: dense rational series squaring and
// the weight-48 monomial products from the depth-4 weight-lowering step.
#include <chrono>
#include <cstdio>
#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "qm/forms.hpp"

using namespace qm;

namespace {

template <class F>
double time_best_of(int reps, F&& fn) {
  double best = 1e300;
  for (int i = 0; i < reps; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
  }
  return best;
}

}  // namespace

int main(int argc, char** argv) {
  Idx max_order = argc > 1 ? std::atol(argv[1]) : 2048;
#ifdef _OPENMP
  std::printf("openmp enabled, max threads %d\n", omp_get_max_threads());
#else
  std::printf("openmp disabled at build time\n");
#endif
  std::printf("%8s %12s %12s %9s %8s\n", "order", "serial[s]", "parallel[s]",
              "speedup", "equal");
  for (Idx order = 256; order <= max_order; order *= 2) {
    const QSeries d = delta_series(order);
    const QSeries e6 = eisenstein_series(3, order);
    const QSeries a = d * e6;  // dense, mixed-sign, growing numerators
    std::vector<Rational> serial_out, parallel_out;
    const double ts = time_best_of(3, [&] {
      serial_out = series_detail::mul_serial(a.data(), a.data(),
                                             Idx(a.data().size()));
    });
    const double tp = time_best_of(3, [&] {
      parallel_out = series_detail::mul_parallel(a.data(), a.data(),
                                                 Idx(a.data().size()));
    });
    const bool equal = serial_out == parallel_out;
    std::printf("%8lld %12.4f %12.4f %8.2fx %8s\n", (long long)order, ts, tp,
                ts / tp, equal ? "yes" : "NO");
    if (!equal) return 1;
  }
  return 0;
}
