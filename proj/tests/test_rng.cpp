#include <cmath>
#include <vector>

#include "doctest.h"
#include "occt/rng.hpp"
#include "occt/simulate.hpp"

using namespace occt;

TEST_CASE("substreams are reproducible and independent of thread count") {
    std::vector<double> once(64, 0.0), twice(64, 0.0);
    for_each_replication(7, 64, [&](std::int64_t r, Rng& rng) {
        once[static_cast<size_t>(r)] = rng.uniform() + rng.normal();
    });
    for_each_replication(7, 64, [&](std::int64_t r, Rng& rng) {
        twice[static_cast<size_t>(r)] = rng.uniform() + rng.normal();
    });
    for (size_t i = 0; i < once.size(); ++i) CHECK(once[i] == twice[i]);
    // distinct substreams differ
    CHECK(once[0] != once[1]);
}

TEST_CASE("exponential and normal moments") {
    Rng rng(42);
    const int n = 200000;
    double se = 0.0, sn = 0.0, sn2 = 0.0;
    for (int i = 0; i < n; ++i) {
        se += rng.exponential(2.0);
        const double z = rng.normal();
        sn += z;
        sn2 += z * z;
    }
    CHECK(se / n == doctest::Approx(0.5).epsilon(0.01));
    CHECK(sn / n == doctest::Approx(0.0).scale(1.0).epsilon(0.01));
    CHECK(sn2 / n == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("kolmogorov critical values") {
    // classical asymptotic quantiles: 1.3581 (5%), 1.6276 (1%)
    CHECK(ks_critical_value(0.05, 1) == doctest::Approx(1.3581).epsilon(1e-3));
    CHECK(ks_critical_value(0.01, 1) == doctest::Approx(1.6276).epsilon(1e-3));
}

TEST_CASE("ks statistic basics") {
    CHECK(empirical_cdf({1.0, 2.0, 3.0}, 2.0) == doctest::Approx(2.0 / 3.0));
    // KS of a sample against its own CDF is small; against a shifted CDF big
    Rng rng(3);
    std::vector<double> z(100000);
    for (auto& v : z) v = rng.normal();
    auto phi = [](double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); };
    CHECK(ks_statistic(z, phi) < 0.006);
    auto phi_shift = [&](double x) { return phi(x - 1.0); };
    CHECK(ks_statistic(z, phi_shift) > 0.3);
}
