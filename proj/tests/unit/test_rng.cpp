#include <doctest.h>

#include <cmath>

#include "epmgp/rng.hpp"

using namespace epmgp;

TEST_CASE("streams are deterministic and splittable") {
    RngStream a(42);
    RngStream b(42);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

    RngStream c1 = RngStream(42).child(1, 2, 3);
    RngStream c2 = RngStream(42).child(1, 2, 3);
    RngStream c3 = RngStream(42).child(1, 2, 4);
    CHECK(c1.next_u64() == c2.next_u64());
    CHECK(c1.next_u64() != c3.next_u64());

    // child order matters
    CHECK(RngStream(7).child(1, 2).next_u64() != RngStream(7).child(2, 1).next_u64());
}

TEST_CASE("uniforms stay inside the open interval with sane moments") {
    RngStream s(9);
    double sum = 0.0, sum2 = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double u = s.uniform();
        CHECK(u > 0.0);
        CHECK(u < 1.0);
        sum += u;
        sum2 += u * u;
    }
    CHECK(sum / n == doctest::Approx(0.5).epsilon(5e-3));
    CHECK(sum2 / n == doctest::Approx(1.0 / 3).epsilon(5e-3));
}

TEST_CASE("normal and exponential draws have the right first moments") {
    RngStream s(11);
    const int n = 200000;
    double nsum = 0.0, nsum2 = 0.0, esum = 0.0;
    for (int i = 0; i < n; ++i) {
        const double z = s.normal();
        nsum += z;
        nsum2 += z * z;
        esum += s.exponential();
    }
    CHECK(nsum / n == doctest::Approx(0.0).epsilon(0.01).scale(1.0));
    CHECK(nsum2 / n == doctest::Approx(1.0).epsilon(0.02));
    CHECK(esum / n == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("unit vectors are normalized") {
    RngStream s(13);
    for (int rep = 0; rep < 20; ++rep) {
        const Vector v = s.unit_vector(5);
        CHECK(norm2(v) == doctest::Approx(1.0).epsilon(1e-12));
    }
}
