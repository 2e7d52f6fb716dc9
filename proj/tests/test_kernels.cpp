#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "pptour/kernels.hpp"
#include "pptour/rng.hpp"

using namespace pptour;

namespace {

void fill_sine(Vector& x, Vector& y, int n, std::uint64_t seed) {
    Rng rng(seed);
    x.resize(n);
    y.resize(n);
    for (int i = 0; i < n; ++i) {
        x[i] = rng.normal();
        y[i] = std::sin(x[i]) + 0.05 * rng.normal();
    }
}

} // namespace

TEST_CASE("dcor: serial equals omp bit-for-bit") {
    Vector x, y;
    fill_sine(x, y, 700, 5);
    const auto s = kernels::dcor_serial(x, y);
    const auto p = kernels::dcor_omp(x, y);
    CHECK(s.dcor == p.dcor);
    CHECK(s.dcov2 == p.dcov2);
    CHECK(s.dvarx == p.dvarx);
    CHECK(s.dvary == p.dvary);
}

TEST_CASE("dcor: matches explicit double-centering oracle on n = 50") {
    Rng rng(9);
    for (int t = 0; t < 8; ++t) {
        Vector x(50), y(50);
        for (int i = 0; i < 50; ++i) {
            x[i] = rng.normal();
            y[i] = 0.3 * x[i] * x[i] + rng.normal() * 0.2;
        }
        const double got = kernels::dcor_serial(x, y).dcor;
        const double want = oracles::dcor_bruteforce(x, y);
        CHECK(got == doctest::Approx(want).epsilon(1e-9));
    }
}

TEST_CASE("dcor: perfect linear dependence scores 1") {
    Vector x(100), y(100);
    Rng rng(2);
    for (int i = 0; i < 100; ++i) {
        x[i] = rng.normal();
        y[i] = 3.0 * x[i] + 2.0;
    }
    CHECK(kernels::dcor_serial(x, y).dcor == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("mi sweep: serial equals omp bit-for-bit") {
    Vector x, y;
    fill_sine(x, y, 600, 8);
    const auto prep = kernels::mi_prepare(x, y);
    const auto a = kernels::mi_char_serial(prep, 46, 64);
    const auto b = kernels::mi_char_omp(prep, 46, 64);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].kx == b[i].kx);
        CHECK(a[i].ky == b[i].ky);
        CHECK(a[i].value == b[i].value);
    }
}

TEST_CASE("mi profile: independent uniform grid has zero information") {
    // 16 points on a 4x4 grid with equal mass in every cell
    Vector x(16), y(16);
    int k = 0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            x[k] = i;
            y[k] = j;
            ++k;
        }
    const auto prep = kernels::mi_prepare(x, y);
    const auto prof = kernels::mi_profile(prep, 4, 4, 64);
    for (const double v : prof) CHECK(v == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("mi profile: y = x equipartition reaches log k exactly") {
    const int n = 1024;
    Vector x(n), y(n);
    for (int i = 0; i < n; ++i) x[i] = y[i] = static_cast<double>(i) / (n - 1);
    const auto prep = kernels::mi_prepare(x, y);
    for (const int k : {2, 4}) {
        const auto prof = kernels::mi_profile(prep, k, k, 64);
        CHECK(prof[static_cast<std::size_t>(k - 2)] ==
              doctest::Approx(std::log(static_cast<double>(k))).epsilon(1e-9));
    }
}

TEST_CASE("mi profile: 2x2 equals exhaustive partition maximum on n = 20") {
    Rng rng(33);
    for (int t = 0; t < 20; ++t) {
        Vector x(20), y(20);
        for (int i = 0; i < 20; ++i) {
            x[i] = rng.normal();
            y[i] = rng.normal() + (t % 2 ? 0.8 * x[i] : 0.0);
        }
        const auto prep = kernels::mi_prepare(x, y);
        const auto prof = kernels::mi_profile(prep, 2, 2, 64);
        const double got = prof[0] / std::log(2.0);
        const double want = oracles::mi22_bruteforce(x, y);
        CHECK(got == doctest::Approx(want).epsilon(1e-12));
    }
}

TEST_CASE("mi cells: all values within [0,1]") {
    Vector x, y;
    fill_sine(x, y, 500, 12);
    const auto prep = kernels::mi_prepare(x, y);
    for (const auto& c : kernels::mi_char_serial(prep, 41, 64)) {
        CHECK(c.value >= 0.0);
        CHECK(c.value <= 1.0);
    }
}
