#include <doctest.h>

#include <cmath>
#include <limits>

#include "epmgp/special.hpp"
#include "../support/reference.hpp"

using namespace epmgp;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

double rel_err(double got, long double want) {
    if (want == 0.0L) return std::fabs(got);
    return static_cast<double>(fabsl(got - want) / fabsl(want));
}
}  // namespace

TEST_CASE("erf against series/continued-fraction reference") {
    CHECK(epmgp::erf(0.0) == 0.0);
    CHECK(epmgp::erf(6.0) == doctest::Approx(1.0).epsilon(1e-15));
    // frozen from the long double reference
    CHECK(rel_err(epmgp::erfc(2.0), 0.0046777349810472658379L) < 1e-14);

    double worst = 0.0;
    for (int i = 0; i <= 1200; ++i) {
        const double x = -6.0 + i * 0.01;
        worst = std::max(worst, rel_err(epmgp::erf(x), refmath::erf_ref(x)));
    }
    CHECK(worst < 1e-14);
}

TEST_CASE("erfc relative accuracy through the representable tail") {
    double worst = 0.0;
    for (int i = 0; i <= 2600; ++i) {
        const double x = i * 0.01;
        worst = std::max(worst, rel_err(epmgp::erfc(x), refmath::erfc_ref(x)));
    }
    CHECK(worst < 1e-13);
    // beyond ~26.5 the value itself underflows; the function saturates
    CHECK(epmgp::erfc(30.0) >= 0.0);
    CHECK(epmgp::erfc(30.0) < 1e-300);
    CHECK(epmgp::erfc(-30.0) == 2.0);
    CHECK(epmgp::erfc(kInf) == 0.0);
}

TEST_CASE("erfcx stays accurate where erfc has long underflowed") {
    double worst = 0.0;
    for (int i = 0; i <= 300; ++i) {
        const double x = 0.1 * i;
        const long double want = refmath::erfc_ref(x) == 0.0L
                                     ? 0.0L
                                     : expl(static_cast<long double>(x) * x) *
                                           refmath::erfc_ref(x);
        worst = std::max(worst, rel_err(erfcx(x), want));
    }
    CHECK(worst < 1e-13);
    CHECK(erfcx(kInf) == 0.0);
    CHECK(std::isinf(erfcx(-27.0)));
}

TEST_CASE("odd symmetry is exact") {
    for (double x : {0.1, 0.3, 0.47, 1.0, 2.5, 5.5}) CHECK(epmgp::erf(-x) == -epmgp::erf(x));
}

TEST_CASE("normal cdf and its log in the deep tail") {
    CHECK(normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(log_normal_cdf(0.0) == doctest::Approx(std::log(0.5)).epsilon(1e-14));
    CHECK(log_normal_cdf(kInf) == 0.0);

    // log Phi(x) = log(phi(x)/|x|) + log(1 - 1/x^2 + ...) for x << 0;
    // compare against the quadrature-free asymptotic at x = -37.
    const double x = -37.0;
    const double got = log_normal_cdf(x);
    long double asym = 0.0L;
    {
        const long double z = -static_cast<long double>(x);
        long double series = 1.0L, term = 1.0L;
        for (int k = 1; k < 20; ++k) {
            term *= -(2.0L * k - 1.0L) / (z * z);
            series += term;
            if (fabsl(term) < 1e-30L) break;
        }
        asym = -0.5L * z * z - 0.5L * std::log(2.0L * M_PIl) - std::log(z) +
               std::log(series);
    }
    CHECK(std::fabs(got - static_cast<double>(asym)) < 1e-12);

    // monotone and finite over the required range
    double prev = log_normal_cdf(-37.5);
    for (double t = -37.0; t <= 8.0; t += 0.5) {
        const double v = log_normal_cdf(t);
        CHECK(std::isfinite(v));
        CHECK(v > prev);
        prev = v;
    }
}

TEST_CASE("inverse normal cdf round-trips") {
    CHECK(inverse_normal_cdf(0.5) == 0.0);
    CHECK(std::isinf(inverse_normal_cdf(0.0)));
    CHECK(inverse_normal_cdf(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-14));
    for (int i = 1; i < 200; ++i) {
        const double p = i / 200.0;
        CHECK(normal_cdf(inverse_normal_cdf(p)) == doctest::Approx(p).epsilon(1e-13));
    }
    // extreme tails round-trip through the log form
    for (double x : {-30.0, -20.0, -12.0, -8.0}) {
        const double p = std::exp(log_normal_cdf(x));
        CHECK(inverse_normal_cdf(p) == doctest::Approx(x).epsilon(1e-10));
    }
}

TEST_CASE("interval probability avoids cancellation in far tails") {
    // frozen from the long double reference: P(8 < Z < 9)
    const long double want =
        0.5L * (refmath::erfc_ref(8.0L / std::sqrt(2.0L)) -
                refmath::erfc_ref(9.0L / std::sqrt(2.0L)));
    CHECK(rel_err(normal_interval_prob(8.0, 9.0), want) < 1e-13);
    CHECK(normal_interval_prob(8.0, 9.0) == doctest::Approx(6.2198319858e-16).epsilon(1e-9));
    // mirrored interval is the same mass
    CHECK(normal_interval_prob(-9.0, -8.0) == normal_interval_prob(8.0, 9.0));
    CHECK(normal_interval_prob(-kInf, kInf) == doctest::Approx(1.0));
}
