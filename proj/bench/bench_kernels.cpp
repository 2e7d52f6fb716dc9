// Serial-vs-OpenMP throughput comparison for the heavy kernels, plus a
// guard that both paths agree bit-for-bit.

#include <chrono>
#include <functional>
#include <cmath>
#include <cstdio>
#include <vector>

#include "pptour/diagnostics.hpp"
#include "pptour/indexes.hpp"
#include "pptour/kernels.hpp"
#include "pptour/rng.hpp"
#include "pptour/simdata.hpp"
#include "pptour/stats.hpp"

using namespace pptour;

namespace {

double time_ms(const std::function<void()>& fn, int reps) {
    std::vector<double> ms;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        fn();
        const auto t1 = std::chrono::steady_clock::now();
        ms.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
    return median_of(ms);
}

} // namespace

int main() {
    std::printf("%-28s %8s %10s %10s %8s %8s\n", "kernel", "n", "serial_ms", "omp_ms", "speedup",
                "bitmatch");

    for (const int n : {500, 1000, 2000, 4000}) {
        Rng rng(7);
        Vector x(n), y(n);
        for (int i = 0; i < n; ++i) {
            x[i] = rng.normal();
            y[i] = std::sin(x[i]) + 0.1 * rng.normal();
        }
        const auto s = kernels::dcor_serial(x, y);
        const auto p = kernels::dcor_omp(x, y);
        const double ts = time_ms([&] { kernels::dcor_serial(x, y); }, 5);
        const double tp = time_ms([&] { kernels::dcor_omp(x, y); }, 5);
        std::printf("%-28s %8d %10.3f %10.3f %8.2f %8s\n", "dcor", n, ts, tp, ts / tp,
                    s.dcor == p.dcor ? "yes" : "NO");
    }

    for (const int n : {500, 1000, 2000, 4000}) {
        Rng rng(7);
        Vector x(n), y(n);
        for (int i = 0; i < n; ++i) {
            x[i] = rng.normal();
            y[i] = std::sin(x[i]) + 0.1 * rng.normal();
        }
        const auto prep = kernels::mi_prepare(x, y);
        const int B = static_cast<int>(std::pow(n, 0.6));
        const auto cs = kernels::mi_char_serial(prep, B, 64);
        const auto cp = kernels::mi_char_omp(prep, B, 64);
        bool match = cs.size() == cp.size();
        for (std::size_t i = 0; match && i < cs.size(); ++i) match = cs[i].value == cp[i].value;
        const double ts = time_ms([&] { kernels::mi_char_serial(prep, B, 64); }, 5);
        const double tp = time_ms([&] { kernels::mi_char_omp(prep, B, 64); }, 5);
        std::printf("%-28s %8d %10.3f %10.3f %8.2f %8s\n", "mi_char_sweep", n, ts, tp, ts / tp,
                    match ? "yes" : "NO");
    }

    // end-to-end: a full percentile row evaluation serial vs parallel
    {
        SimSpec spec;
        spec.family = "sine";
        spec.seed = 3;
        const DataMatrix xd = generate(spec);
        const std::vector<IndexDescriptor> idx{{"splines2d", {}}, {"dcor2d", {}}, {"mic", {}},
                                               {"skinny", {}},    {"holes", {}}};
        kernels::set_parallel_enabled(false);
        const double ts = time_ms([&] { trace_nuisance(xd, idx, 21); }, 3);
        kernels::set_parallel_enabled(true);
        const double tp = time_ms([&] { trace_nuisance(xd, idx, 21); }, 3);
        std::printf("%-28s %8d %10.3f %10.3f %8.2f %8s\n", "nuisance_trace(5 idx)", 1000, ts, tp,
                    ts / tp, "-");
    }
    return 0;
}
