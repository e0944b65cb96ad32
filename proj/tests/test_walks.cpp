#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "pcexp/walks.hpp"

using namespace pcexp;
using namespace pcexp::walks;
using qalg::make_rational;
using qalg::Var;

namespace {

Rational R(long n, long d = 1) { return make_rational(n, d); }

PolyVar s_poly(std::vector<Rational> c) { return PolyVar(std::move(c), Var::s); }

// Independent walk count: distribute n steps over coordinates, then choose
// the +/- split inside each coordinate.
mpz_class binom(long n, long k) {
    if (k < 0 || k > n) return 0;
    mpz_class r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return r;
}

mpz_class walks_by_formula(int n, const Dense& x) {
    const int d = static_cast<int>(x.size());
    mpz_class total = 0;
    std::vector<int> alloc(static_cast<size_t>(d), 0);
    std::function<void(int, int, mpz_class)> rec = [&](int i, int left, mpz_class ways) {
        if (i == d) {
            if (left == 0) total += ways;
            return;
        }
        for (int ni = 0; ni <= left; ++ni) {
            const int xi = std::abs(x[static_cast<size_t>(i)]);
            if (ni < xi || (ni - xi) % 2 != 0) continue;
            rec(i + 1, left - ni, ways * binom(left, ni) * binom(ni, (ni + xi) / 2));
        }
    };
    rec(0, n, 1);
    return total;
}

Rational by_formula(int n, const LatticePoint& x, int d) {
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), static_cast<unsigned long>(2 * d), static_cast<unsigned long>(n));
    Rational r(walks_by_formula(n, x.to_dense(d)), den);
    r.canonicalize();
    return r;
}

void for_each_point(int d, int radius, const std::function<void(const Dense&)>& fn) {
    Dense x(static_cast<size_t>(d), -radius);
    while (true) {
        int l1 = 0;
        for (int v : x) l1 += std::abs(v);
        if (l1 <= radius) fn(x);
        size_t i = 0;
        while (i < x.size() && x[i] == radius) x[i++] = -radius;
        if (i == x.size()) return;
        ++x[i];
    }
}

}  // namespace

TEST_CASE("canonical_type") {
    LatticePoint a{{{0, 1}, {1, 1}}, 2};
    CHECK(canonical_type(a) == PointType{1, 1});
    LatticePoint b{{{2, -2}, {6, 1}}, 3};
    CHECK(canonical_type(b) == PointType{2, 1});
    CHECK(canonical_type(LatticePoint::origin(4)) == PointType{});
    CHECK(PointType{1, 2}.name() == "[2,1]");
}

TEST_CASE("orbit_count examples") {
    CHECK(orbit_count(PointType{}) == PolyVar::constant(1, Var::d));
    CHECK(orbit_count(PointType{1, 1}) == PolyVar({0, -2, 2}, Var::d));                  // 2d(d-1)
    CHECK(orbit_count(PointType{1, 1, 1}) == PolyVar({0, R(8, 3), -4, R(4, 3)}, Var::d));  // (4/3)d(d-1)(d-2)
    CHECK(orbit_count(PointType{2, 1}) == PolyVar({0, -4, 4}, Var::d));                  // 4d(d-1)
    CHECK(orbit_count(PointType{1, 1, 1, 1})(4) == 16);
}

TEST_CASE("orbit_count agrees with enumeration") {
    for (int d = 1; d <= 4; ++d) {
        std::map<PointType, long> counts;
        for_each_point(d, 3, [&](const Dense& x) { counts[canonical_type(LatticePoint::from_dense(x, 0))]++; });
        for (const auto& [t, c] : counts) CHECK(orbit_count(t)(d) == c);
    }
}

TEST_CASE("dconv_concrete examples") {
    CHECK(dconv_concrete(2, LatticePoint::origin(), 1) == R(1, 2));
    CHECK(dconv_concrete(3, PointType{1}.representative(3), 2) == R(9, 64));
    CHECK(dconv_concrete(0, LatticePoint::origin(), 5) == 1);
    CHECK(dconv_concrete(3, LatticePoint::origin(), 3) == 0);
}

TEST_CASE("dconv_concrete agrees with the multinomial count") {
    for (int d = 1; d <= 4; ++d)
        for (int n = 0; n <= 5; ++n)
            for_each_point(d, n, [&](const Dense& x) {
                auto p = LatticePoint::from_dense(x, n);
                CHECK(dconv_concrete(n, p, d) == by_formula(n, p, d));
            });
}

TEST_CASE("normalization over concrete points and over types") {
    for (int d = 1; d <= 6; ++d)
        for (int n = 0; n <= (d <= 3 ? 6 : 4); ++n) {
            Rational total = 0;
            for_each_point(d, n, [&](const Dense& x) { total += dconv_concrete(n, LatticePoint::from_dense(x, n), d); });
            CHECK(total == 1);
        }
    for (int n = 0; n <= 6; ++n)
        for (int d = 1; d <= 6; ++d) {
            Rational total = 0;
            for (const auto& t : types_at(n)) total += orbit_count(t)(d) * dconv_generic(n, t)(R(1, 2 * d));
            CHECK(total == 1);
        }
}

TEST_CASE("semigroup property") {
    const int d = 3;
    for (auto [m, n] : std::vector<std::pair<int, int>>{{1, 1}, {2, 2}, {2, 1}}) {
        for_each_point(d, m + n, [&](const Dense& x) {
            Rational conv = 0;
            for_each_point(d, m, [&](const Dense& y) {
                Dense diff(x.size());
                for (size_t i = 0; i < x.size(); ++i) diff[i] = x[i] - y[i];
                conv += dconv_concrete(m, LatticePoint::from_dense(y, m), d) *
                        dconv_concrete(n, LatticePoint::from_dense(diff, n), d);
            });
            CHECK(conv == dconv_concrete(m + n, LatticePoint::from_dense(x, m + n), d));
        });
    }
}

TEST_CASE("symmetry under permutation and sign flip") {
    std::mt19937 rng(2);
    const int d = 4;
    for (int trial = 0; trial < 30; ++trial) {
        Dense x(d);
        std::uniform_int_distribution<int> c(-2, 2);
        for (auto& v : x) v = c(rng);
        Dense y = x;
        std::shuffle(y.begin(), y.end(), rng);
        for (auto& v : y)
            if (rng() % 2) v = -v;
        for (int n = 0; n <= 6; ++n)
            CHECK(dconv_concrete(n, LatticePoint::from_dense(x, n), d) ==
                  dconv_concrete(n, LatticePoint::from_dense(y, n), d));
    }
}

TEST_CASE("walk tables") {
    CHECK(dconv_generic(2, PointType{}) == s_poly({0, 1}));
    CHECK(dconv_generic(3, PointType{1}) == s_poly({0, 0, 3, -3}));
    CHECK(dconv_generic(3, PointType{2, 1}) == s_poly({0, 0, 0, 3}));
    CHECK(dconv_generic(3, PointType{1, 1, 1}) == s_poly({0, 0, 0, 6}));
    CHECK(dconv_generic(4, PointType{}) == s_poly({0, 0, 3, -3}));
    CHECK(dconv_generic(4, PointType{1, 1}) == s_poly({0, 0, 0, 12, -24}));
    CHECK(dconv_generic(4, PointType{1, 1, 1, 1}) == s_poly({0, 0, 0, 0, 24}));
}

TEST_CASE("generic polynomials match concrete values on unused dimensions") {
    for (int n = 1; n <= 5; ++n)
        for (const auto& t : types_at(n)) {
            auto poly = dconv_generic(n, t);
            for (int d : {t.entries() + n + 3, t.entries() + n + 5})
                CHECK(poly(R(1, 2 * d)) == dconv_concrete(n, t.representative(n), d));
        }
}

TEST_CASE("power sums at time 2") {
    CHECK(power_sum_generic(1, 1, PointType{}) == s_poly({0, 1}));
    CHECK(power_sum_generic(2, 2, PointType{}) == s_poly({0, 0, 0, 1}));
    CHECK(power_sum_generic(1, 1, PointType{2}) == s_poly({0, 0, 1}));
    CHECK(power_sum_generic(2, 1, PointType{1, 1}) == s_poly({0, 0, 0, 2}));
    CHECK(power_sum_generic(3, 3, PointType{}) == PolyVar::monomial(1, 5));
}

TEST_CASE("interpolation rejects non-polynomial data") {
    auto f = [](int d) { return make_rational(1, 1L << d); };
    CHECK_THROWS_AS(generic_in_s(f, 2, 1), NotPolynomialError);
}
