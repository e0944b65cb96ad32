#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "pcexp/qalg.hpp"

using namespace pcexp;
using namespace pcexp::qalg;

namespace {

Rational R(long n, long d = 1) { return make_rational(n, d); }

SeriesS S(std::vector<Rational> c, int K) { return SeriesS(std::move(c), K); }

SeriesS random_series(std::mt19937& rng, int K, int min_valuation = 0) {
    std::uniform_int_distribution<int> num(-5, 5), den(1, 4);
    SeriesS a(K);
    for (int k = min_valuation; k <= K; ++k) a.set(k, R(num(rng), den(rng)));
    return a;
}

}  // namespace

TEST_CASE("rationals are canonical") {
    CHECK(R(2, 4) == R(1, 2));
    CHECK(R(2, -4).get_den() == 2);
    CHECK(parse_rational("-6/8") == R(-3, 4));
    CHECK(to_string(parse_rational("10/4")) == "5/2");
    CHECK_THROWS_AS(parse_rational("1/0"), PreconditionError);
    CHECK_THROWS_AS(parse_rational("abc"), PreconditionError);
}

TEST_CASE("series_mul examples") {
    CHECK(S({1, 1}, 4) * S({1, -1}, 4) == S({1, 0, -1}, 4));
    auto a = S({R(1, 3), 2, 0, -7}, 4);
    CHECK(SeriesS::constant(1, 4) * a == a);
    CHECK((SeriesS::monomial(1, 2, 4) * SeriesS::monomial(1, 3, 4)).is_zero());
}

TEST_CASE("mixed truncation orders use the smaller one") {
    auto a = S({1, 1, 1, 1}, 3);
    auto b = S({1, 1, 1, 1, 1, 1}, 5);
    CHECK((a + b).order() == 3);
    CHECK((a * b).order() == 3);
    CHECK((b - a).order() == 3);
}

TEST_CASE("ring axioms on random series") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 40; ++trial) {
        auto a = random_series(rng, 5), b = random_series(rng, 5), c = random_series(rng, 5);
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK(a * b == b * a);
        CHECK(a + (-a) == SeriesS(5));
    }
}

TEST_CASE("log1p and exp examples") {
    CHECK(series_log1p(SeriesS(3)).is_zero());
    CHECK(series_log1p(S({0, 1}, 3)) == S({0, 1, R(-1, 2), R(1, 3)}, 3));
    CHECK(series_exp(SeriesS(3)) == SeriesS::constant(1, 3));
    CHECK(series_exp(S({0, 1}, 2)) == S({1, 1, R(1, 2)}, 2));
    CHECK(series_exp(S({0, -1, 0, R(-1, 2)}, 3)) == S({1, -1, R(1, 2), R(-2, 3)}, 3));
    CHECK_THROWS_AS(series_log1p(S({1, 1}, 3)), PreconditionError);
    CHECK_THROWS_AS(series_exp(S({2}, 3)), PreconditionError);
}

TEST_CASE("exp and log1p invert each other") {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 30; ++trial) {
        auto a = random_series(rng, 6, 1);
        CHECK(series_exp(series_log1p(a)) == SeriesS::constant(1, 6) + a);
        CHECK(series_log1p(series_exp(a) - SeriesS::constant(1, 6)) == a);
    }
}

TEST_CASE("series_pow_inv_s") {
    CHECK(series_pow_inv_s(SeriesS(3)) == SeriesS::constant(1, 3));
    CHECK(series_pow_inv_s(S({0, 0, -1}, 3)) == S({1, -1, R(1, 2), R(-2, 3)}, 3));
    CHECK_THROWS_AS(series_pow_inv_s(S({0, 1}, 3)), PreconditionError);
}

TEST_CASE("series_pow_inv_s matches the floating power at moderate d") {
    std::mt19937 rng(3);
    std::uniform_int_distribution<int> num(-4, 4);
    for (int trial = 0; trial < 10; ++trial) {
        const int K = 12;
        SeriesS a(K);
        for (int k = 2; k <= 5; ++k) a.set(k, R(num(rng), 4));
        SeriesS r = series_pow_inv_s(a);
        for (int d : {10, 20, 50}) {
            double s = 1.0 / (2.0 * d);
            double direct = std::pow(1.0 + a.eval_double(s), 2.0 * d);
            double viaseries = r.eval_double(s);
            CHECK(std::abs(viaseries - direct) / direct < 1e-6);
        }
    }
}

TEST_CASE("ppoly_subst") {
    auto g = S({1, 0, 1}, 4);
    CHECK(ppoly_subst(PPoly::term(1, 2, 0, 4), g) == S({1, 0, 2, 0, 1}, 4));
    auto pc = S({1, 0, 1, R(7, 2)}, 4);
    CHECK(ppoly_subst(PPoly::term(1, 5, 2, 4), pc) == S({0, 0, 1, 0, 5}, 4));
    auto c = S({3, R(1, 2), 0, 9}, 4);
    CHECK(ppoly_subst(PPoly(c), pc) == c);
}

TEST_CASE("PPoly degree cap") {
    auto p5 = PPoly::term(1, 5, 0, 4);
    CHECK((p5 * p5).p_degree() == 10);
    CHECK_THROWS_AS(p5 * p5 * PPoly::P(4), PreconditionError);
}

TEST_CASE("lagrange_interpolate") {
    auto line = lagrange_interpolate({{0, 1}, {1, 3}}, 1, Var::q);
    CHECK(line == PolyVar({1, 2}, Var::q));
    auto sq = lagrange_interpolate({{1, 1}, {2, 4}, {3, 9}}, 2, Var::q);
    CHECK(sq == PolyVar::monomial(1, 2, Var::q));
    CHECK_THROWS_AS(lagrange_interpolate({{1, 1}, {1, 2}}, 1), PreconditionError);
    CHECK_THROWS_AS(lagrange_interpolate({{1, 1}, {2, 4}, {3, 9}}, 1), NotPolynomialError);
}

TEST_CASE("interpolation reproduces every input exactly") {
    std::mt19937 rng(5);
    std::uniform_int_distribution<int> num(-9, 9);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<std::pair<Rational, Rational>> pts;
        for (int i = 0; i < 6; ++i) pts.emplace_back(R(1, 2 * (i + 1)), R(num(rng), 7));
        auto p = lagrange_interpolate(pts, 5);
        for (const auto& [x, y] : pts) CHECK(p(x) == y);
    }
}

TEST_CASE("json round trip") {
    auto a = S({1, R(-7, 2), 0, R(129, 8)}, 3);
    CHECK(series_from_json(to_json(a)) == a);
    auto j = to_json(a);
    CHECK(j["var"] == "s");
    CHECK(j["coeffs"][1][0] == "-7");
    auto f = PPoly::term(R(1, 2), 4, 2) - PPoly::term(R(1, 2), 6, 3) + PPoly::term(R(15, 8), 0, 4);
    CHECK(ppoly_from_json(to_json(f)) == f);
}
