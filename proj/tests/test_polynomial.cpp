#include <doctest.h>

#include <cmath>

#include "susydec/polynomial.hpp"

using namespace susydec;

TEST_CASE("construction trims trailing zeros") {
    Polynomial p({1.0, 2.0, 0.0, 0.0});
    CHECK(p.degree() == 1);
    CHECK(p.coefficients().size() == 2);
    CHECK(Polynomial({0.0, 0.0}).is_zero());
    CHECK(Polynomial{}.degree() == -1);
}

TEST_CASE("horner evaluation") {
    Polynomial p({1.0, -3.0, 2.0});  // 2x^2 - 3x + 1
    CHECK(p(0.0) == 1.0);
    CHECK(p(1.0) == 0.0);
    CHECK(p(2.0) == 3.0);
    CHECK(evaluate(p, 0.5) == doctest::Approx(0.0));
}

TEST_CASE("derivative") {
    Polynomial p({5.0, 0.0, 1.0, 4.0});  // 4x^3 + x^2 + 5
    Polynomial d = p.derivative();
    CHECK(d.coefficients() == std::vector<double>{0.0, 2.0, 12.0});
    CHECK(Polynomial({3.0}).derivative().is_zero());
    CHECK(Polynomial{}.derivative().is_zero());
    CHECK(derivative(p)(1.0) == 14.0);
}

TEST_CASE("arithmetic") {
    Polynomial a({1.0, 1.0});
    Polynomial b({-1.0, 1.0});
    CHECK((a * b).coefficients() == std::vector<double>{-1.0, 0.0, 1.0});
    CHECK((a + b).coefficients() == std::vector<double>{0.0, 2.0});
    CHECK((a - a).is_zero());
    CHECK((2.0 * a).coefficients() == std::vector<double>{2.0, 2.0});
    CHECK((0.0 * a).is_zero());
    CHECK((-a)(3.0) == -4.0);
    CHECK(Polynomial::monomial(2.5, 3).coefficients() ==
          std::vector<double>{0.0, 0.0, 0.0, 2.5});
}

TEST_CASE("real roots of a factored cubic") {
    // (x-1)(x+2)(x-3) = x^3 - 2x^2 - 5x + 6
    Polynomial p({6.0, -5.0, -2.0, 1.0});
    auto roots = real_roots(p);
    REQUIRE(roots.size() == 3);
    CHECK(roots[0] == doctest::Approx(-2.0).epsilon(1e-12));
    CHECK(roots[1] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(roots[2] == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("complex pair is rejected, linear handled directly") {
    CHECK(real_roots(Polynomial({1.0, 0.0, 1.0})).empty());  // x^2 + 1
    auto r = real_roots(Polynomial({-3.0, 2.0}));            // 2x - 3
    REQUIRE(r.size() == 1);
    CHECK(r[0] == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(real_roots(Polynomial({7.0})).empty());
    CHECK(real_roots(Polynomial{}).empty());
}

TEST_CASE("near-duplicate roots do not produce duplicates") {
    // (x+1)^2 (x-1): the double root may be reported once or rejected
    // outright (its companion eigenvalues acquire O(sqrt(eps)) imaginary
    // parts), but the simple root must survive and nothing may repeat.
    Polynomial p({-1.0, -1.0, 1.0, 1.0});
    auto roots = real_roots(p);
    REQUIRE(!roots.empty());
    CHECK(roots.back() == doctest::Approx(1.0).epsilon(1e-9));
    for (size_t k = 0; k + 1 < roots.size(); ++k) {
        CHECK(roots[k + 1] > roots[k] + 1e-9);
        CHECK(roots[k] == doctest::Approx(-1.0).epsilon(1e-5));
    }
    // well-separated near pair stays distinct
    Polynomial q = Polynomial({-1.0, 1.0}) * Polynomial({-1.0 - 1e-5, 1.0});
    CHECK(real_roots(q).size() == 2);
}

TEST_CASE("quartic equilibrium root, C=0.5 case") {
    // V+' for W = (0.5/sqrt(2)) x^2: 0.5 x^3 + 0.5
    Polynomial vp({0.5, 0.0, 0.0, 0.5});
    auto roots = real_roots(vp);
    REQUIRE(roots.size() == 1);
    CHECK(std::abs(roots[0] + 1.0) < 1e-12);
}
