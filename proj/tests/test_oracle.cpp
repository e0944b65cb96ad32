#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pcexp/oracle.hpp"

using namespace pcexp;
using namespace pcexp::oracle;
using qalg::make_rational;

namespace {

Rational R(long n, long d = 1) { return make_rational(n, d); }

Rational pow(const Rational& x, int k) {
    Rational r = 1;
    for (int i = 0; i < k; ++i) r *= x;
    return r;
}

LatticePoint pt(const Dense& x, int t) { return LatticePoint::from_dense(x, t); }

// Events at time <= 2 used to compare the two exact methods.
std::vector<EventSpec> t2_events(int d) {
    const LatticePoint o2 = LatticePoint::origin(2);
    Dense e1(static_cast<size_t>(d), 0), e1e2 = e1, two = e1;
    e1[0] = 1;
    two[0] = 2;
    std::vector<EventSpec> ev{
        EventSpec::double_conn(o2),
        EventSpec::connect(LatticePoint::origin(), o2),
        EventSpec::connect(LatticePoint::origin(), pt(two, 2)),
        EventSpec::marked_first_bond(pt(e1, 1), o2, o2),
        EventSpec::pivotal(LatticePoint::origin(), pt(e1, 1), LatticePoint::origin(), pt(two, 2)),
        EventSpec::disjoint_pair(LatticePoint::origin(), o2, LatticePoint::origin(), pt(two, 2)),
        EventSpec::negation(EventSpec::double_conn(o2)),
    };
    if (d >= 2) {
        e1e2[0] = 1;
        e1e2[1] = 1;
        ev.push_back(EventSpec::double_conn(pt(e1e2, 2)));
        ev.push_back(EventSpec::with_extras(EventSpec::double_conn(o2), {pt(e1e2, 2)}));
        ev.push_back(EventSpec::any_of({EventSpec::double_conn(o2), EventSpec::connect(pt(e1, 1), pt(e1e2, 2))}));
    }
    return ev;
}

}  // namespace

TEST_CASE("cone sizes") {
    CHECK(Cone::build(1, 4).bonds().size() == 20);
    CHECK(Cone::build(2, 2).bonds().size() == 20);
    CHECK(Cone::build(1, 1).bonds().size() == 2);
    const Cone c = Cone::build(2, 3);
    for (size_t i = 0; i < c.bonds().size(); ++i) {
        const auto& b = c.bonds()[i];
        CHECK(c.bond_index(c.sites()[static_cast<size_t>(b.from)], c.sites()[static_cast<size_t>(b.to)]) ==
              static_cast<int>(i));
    }
    CHECK(c.bond_index(LatticePoint::origin(), LatticePoint::origin(2)) == -1);
    CHECK_THROWS_AS(Cone::build(20, 4), ResourceError);
    CHECK(support_precedes({-1, 0}, {0, -1}));
}

TEST_CASE("small exact values") {
    const Cone c1 = Cone::build(1, 2);
    const LatticePoint o = LatticePoint::origin();
    CHECK(event_prob_exact(c1, EventSpec::connect(o, LatticePoint::origin(2)), R(1)) == R(7, 16));
    CHECK(event_prob_exact(c1, EventSpec::double_conn(LatticePoint::origin(2)), R(1)) == R(1, 16));
    CHECK(event_prob_exact(c1, EventSpec::double_conn(o), R(1, 3)) == 1);
    const Rational p = R(2, 3);
    CHECK(event_prob_exact(c1, EventSpec::disjoint_pair(o, pt({1}, 1), o, pt({-1}, 1)), p) == p * p / 4);
    CHECK(event_prob_exact(c1, EventSpec::disjoint_pair(o, pt({1}, 1), o, pt({1}, 1)), p) == 0);
}

TEST_CASE("q polynomial reproduces the probability at every p") {
    const Cone c = Cone::build(2, 2);
    for (const auto& e : t2_events(2)) {
        const auto r = event_exact(c, e, R(1));
        for (const Rational& p : {R(0), R(1, 5), R(1, 2), R(3, 2), R(4)}) {
            INFO(e.describe());
            CHECK(r.q_poly(p / 4) == event_prob_exact(c, e, p));
        }
    }
}

TEST_CASE("disjoint occurrence obeys the BK inequality") {
    const Cone c = Cone::build(2, 3);
    const LatticePoint o = LatticePoint::origin();
    const std::vector<LatticePoint> targets{pt({1, 0}, 1), pt({0, 0}, 2), pt({1, 1}, 2), pt({1, 0}, 3), pt({2, 1}, 3)};
    for (const Rational& p : {R(1, 2), R(1), R(3)})
        for (const auto& x : targets)
            for (const auto& y : targets) {
                if (y < x) continue;
                const auto joint = event_exact(c, EventSpec::disjoint_pair(o, x, o, y), p);
                const Rational& lhs = joint.probability;
                const Rational rhs = event_prob_exact(c, EventSpec::connect(o, x), p) *
                                     event_prob_exact(c, EventSpec::connect(o, y), p);
                CHECK(lhs <= rhs);
            }
}

TEST_CASE("factorized time-2 evaluation equals full enumeration") {
    for (int d = 1; d <= 3; ++d) {
        const Cone c = Cone::build(d, 2);
        for (const auto& e : t2_events(d))
            for (const Rational& p : {R(1, 2), R(1), R(7, 5)}) {
                INFO("d=" << d << " " << e.describe());
                CHECK(t2_factorized_prob(d, e, p) == event_prob_exact(c, e, p));
            }
    }
}

TEST_CASE("double connection to the origin at time 2 is binomial") {
    for (int d = 1; d <= 12; ++d)
        for (const Rational& p : {R(1), R(1, 3)}) {
            const Rational q2 = pow(p / (2 * d), 2);
            const int N = 2 * d;
            const Rational want = 1 - pow(1 - q2, N) - N * q2 * pow(1 - q2, N - 1);
            CHECK(t2_factorized_prob(d, EventSpec::double_conn(LatticePoint::origin(2)), p) == want);
        }
}

TEST_CASE("marked first bonds sum to the first moment above one") {
    const LatticePoint o2 = LatticePoint::origin(2);
    for (int d = 1; d <= 6; ++d) {
        const Rational p = 1;
        const Rational q2 = pow(p / (2 * d), 2);
        const int N = 2 * d;
        Rational sum = 0;
        for (const auto& s : walks::unit_steps(d))
            sum += t2_factorized_prob(d, EventSpec::marked_first_bond(pt(s, 1), o2, o2), p);
        CHECK(sum == N * q2 * (1 - pow(1 - q2, N - 1)));
    }
}

TEST_CASE("pivotal bonds") {
    const Cone c = Cone::build(1, 2);
    const LatticePoint o = LatticePoint::origin();
    const int b1 = c.bond_index(o, pt({1}, 1)), b2 = c.bond_index(pt({1}, 1), pt({0}, 2));
    const int b3 = c.bond_index(o, pt({-1}, 1)), b4 = c.bond_index(pt({-1}, 1), pt({0}, 2));
    CHECK(pivotal_bonds(c, {b1, b2}, o, LatticePoint::origin(2)) == std::vector<int>{std::min(b1, b2), std::max(b1, b2)});
    CHECK(pivotal_bonds(c, {b1, b2, b3, b4}, o, LatticePoint::origin(2)).empty());
    CHECK(pivotal_bonds(c, {b1, b2, b3}, o, LatticePoint::origin(2)).size() == 2);
    CHECK_THROWS_AS(pivotal_bonds(c, {b1}, o, LatticePoint::origin(2)), PreconditionError);

    // Single route: both bonds open with probability q^2, and each is pivotal
    // exactly when the other route is not fully open.
    const Rational p = 1, q = p / 2;
    const auto ev = EventSpec::pivotal(o, pt({1}, 1), o, LatticePoint::origin(2));
    CHECK(event_prob_exact(c, ev, p) == q * q * (1 - q * q));
}

TEST_CASE("a pivotal bond splits the connection into disjoint pieces") {
    // P(b pivotal for o -> x) <= P(o -> b_from) P(b open) P(b_to -> x) on the cone.
    const Cone c = Cone::build(1, 4);
    const LatticePoint o = LatticePoint::origin(), x = LatticePoint::origin(4);
    const Rational p = 1, q = p / 2;
    for (const auto& b : c.bonds()) {
        const auto& from = c.sites()[static_cast<size_t>(b.from)];
        const auto& to = c.sites()[static_cast<size_t>(b.to)];
        const auto piv = EventSpec::pivotal(from, to, o, x);
        const Rational lhs = event_prob_exact(c, piv, p);
        const Rational rhs = event_prob_exact(c, EventSpec::connect(o, from), p) * q *
                             event_prob_exact(c, EventSpec::connect(to, x), p);
        CHECK(lhs <= rhs);
    }
}

TEST_CASE("event parsing") {
    const auto e = parse_event("double:o@2");
    CHECK(e.kind() == EventSpec::Kind::double_conn);
    CHECK(e.points()[0] == LatticePoint::origin(2));
    const auto m = parse_event("marked:1,0@1;o@2;0,0@2");
    CHECK(m.kind() == EventSpec::Kind::marked_first_bond);
    CHECK(parse_point("1,-1@2") == pt({1, -1}, 2));
    CHECK_THROWS_AS(parse_event("double:1@2"), PreconditionError);
    CHECK_THROWS_AS(parse_event("nope:o@2"), PreconditionError);
    CHECK_THROWS_AS(parse_event("double"), PreconditionError);
    CHECK_THROWS_AS(parse_point("x@2"), PreconditionError);
    CHECK_THROWS_AS(parse_event("connect:o@0"), PreconditionError);
}

TEST_CASE("guards") {
    const Cone c = Cone::build(2, 4);
    CHECK_THROWS_AS(event_exact(c, EventSpec::connect(LatticePoint::origin(), LatticePoint::origin(4)), R(1)),
                    ResourceError);
    CHECK_THROWS_AS(event_exact(c, EventSpec::double_conn(pt({5, 0}, 5)), R(1)), PreconditionError);
    CHECK_THROWS_AS(event_exact(c, EventSpec::double_conn(pt({0, 0, 1}, 1)), R(1)), PreconditionError);
    CHECK_THROWS_AS(event_exact(Cone::build(1, 2), EventSpec::double_conn(LatticePoint::origin(2)), R(3)),
                    PreconditionError);
    CHECK_THROWS_AS(t2_factorized_prob(13, EventSpec::double_conn(LatticePoint::origin(2)), R(1)), ResourceError);
    CHECK_THROWS_AS(t2_factorized_prob(2, EventSpec::double_conn(LatticePoint::origin(4)), R(1)), PreconditionError);
    CHECK_THROWS_AS(EventSpec::marked_first_bond(LatticePoint::origin(2), LatticePoint::origin(2), LatticePoint::origin(2)),
                    PreconditionError);
}
