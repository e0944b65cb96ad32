#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <functional>

#include "pcexp/diagrams.hpp"

using namespace pcexp;
using namespace pcexp::diagrams;
using qalg::make_rational;
using qalg::Var;
using walks::Dense;

namespace {

Rational R(long n, long d = 1) { return make_rational(n, d); }

std::vector<Dense> points_within(int d, int radius) {
    std::vector<Dense> out;
    Dense x(static_cast<size_t>(d), -radius);
    while (true) {
        int l1 = 0;
        for (int v : x) l1 += std::abs(v);
        if (l1 <= radius) out.push_back(x);
        size_t i = 0;
        while (i < x.size() && x[i] == radius) x[i++] = -radius;
        if (i == x.size()) return out;
        ++x[i];
    }
}

// Every internal vertex ranges over the full ball of radius equal to its
// time; no pruning, no ordering.
Rational brute_force(const DiagramSpec& spec, const Dense& x, int d) {
    std::vector<int> internal;
    std::map<int, Dense> pos;
    for (const auto& v : spec.vertices) {
        if (v.kind == VertexKind::origin) pos[v.id] = Dense(static_cast<size_t>(d), 0);
        else if (v.kind == VertexKind::target) pos[v.id] = x;
        else internal.push_back(v.id);
    }
    Rational total = 0;
    std::function<void(size_t)> rec = [&](size_t i) {
        if (i == internal.size()) {
            for (const auto& set : spec.distinct)
                for (size_t a = 0; a < set.size(); ++a)
                    for (size_t b = a + 1; b < set.size(); ++b)
                        if (spec.vertex(set[a]).time == spec.vertex(set[b]).time && pos[set[a]] == pos[set[b]]) return;
            Rational w = 1;
            for (const auto& e : spec.edges) {
                Dense z(static_cast<size_t>(d));
                for (int c = 0; c < d; ++c) z[c] = pos[e.to][c] - pos[e.from][c];
                Rational f = walks::dconv_concrete(e.k, LatticePoint::from_dense(z, e.k), d);
                for (int m = 0; m < e.m; ++m) w *= f;
            }
            total += w;
            return;
        }
        const int id = internal[i];
        for (const auto& y : points_within(d, spec.vertex(id).time)) {
            pos[id] = y;
            rec(i + 1);
        }
    };
    rec(0);
    return total;
}

struct Case {
    std::string name;
    std::vector<int> params;
    std::vector<PointType> types;
};

std::vector<Case> all_cases() {
    std::vector<PointType> t3{{1}, {2, 1}, {1, 1, 1}}, t2{{}, {1, 1}}, t4{{}, {1, 1}, {1, 1, 1, 1}};
    return {
        {"eta1", {1, 2, 1, 1}, t3}, {"eta1", {1, 2, 1, 2}, t3}, {"eta1", {1, 1, 1, 1}, t3}, {"eta1", {2, 2, 1, 1}, t3},
        {"eta1", {2, 1, 3, 1}, t3}, {"eta2", {1}, t3},          {"eta2", {2}, t3},          {"eta3", {2}, t3},
        {"eta3", {3}, t3},          {"m1", {}, t3},             {"m2", {}, t3},             {"m23", {}, t3},
        {"pair_t2", {}, t2},        {"f2_t2", {}, t2},          {"f4_t2", {}, t2},          {"f9_t2", {}, t2},
        {"xi", {1}, t4},            {"xi", {2}, t4},            {"xi", {3}, t4},            {"xi", {4}, t4},
        {"two_square", {}, t4},
    };
}

}  // namespace

TEST_CASE("catalogue values agree with their printed closed forms") {
    for (const auto& c : all_cases())
        for (const auto& t : c.types) {
            auto r = named_diagram(c.name, c.params, t);
            INFO(c.name << " " << t.name() << " = " << r.value.poly().str());
            CHECK(r.match);
        }
}

TEST_CASE("specific values") {
    auto f2 = named_diagram("f2_t2", {}, PointType{});
    CHECK(f2.value.poly() == PolyVar({0, 0, 0, 2, -6, 4}, Var::s));
    CHECK(f2.value.p_exponent == 6);
    CHECK(named_diagram("f2_t2", {}, PointType{1, 1}).value.poly().is_zero());
    auto m23 = named_diagram("m23", {}, PointType{1});
    CHECK(m23.value.poly().coeff(5) == 2);
    CHECK(m23.value.p_exponent == 8);
    CHECK(named_diagram("eta3", {2}, PointType{1}).value.poly() == PolyVar({0, 0, 0, 0, 0, 3, -3}, Var::s));
    CHECK(named_diagram("xi", {3}, PointType{}).entry.reconstructed);
    CHECK_FALSE(named_diagram("eta2", {1}, PointType{1}).entry.reconstructed);
}

TEST_CASE("time-4 combination reproduces the stated per-type values") {
    // P^8 [ 1/2 D*4^2 - xi1 + 3/2 xi2 - 1/2 xi3 - 1/2 xi4 ]
    const std::vector<std::pair<PointType, PolyVar>> expect{
        {PointType{}, PolyVar::monomial(4, 4, Var::s)},
        {PointType{1, 1}, PolyVar::monomial(53, 6, Var::s)},
        {PointType{1, 1, 1, 1}, PolyVar::monomial(156, 8, Var::s)},
    };
    for (const auto& [t, want] : expect) {
        Builder b("dstar4_sq", 4);
        b.edge(b.origin(), b.target(), 2);
        PolyVar v = R(1, 2) * diagram_eval_generic(b.build(), t).poly();
        v -= named_diagram("xi", {1}, t).value.poly();
        v += R(3, 2) * named_diagram("xi", {2}, t).value.poly();
        v -= R(1, 2) * named_diagram("xi", {3}, t).value.poly();
        v -= R(1, 2) * named_diagram("xi", {4}, t).value.poly();
        CHECK(agree_through(v, want, want.degree()));
    }
}

TEST_CASE("pruned evaluation agrees with brute force") {
    struct Item {
        std::string name;
        std::vector<int> params;
        PointType type;
    };
    const std::vector<Item> items{{"eta1", {1, 2, 1, 1}, {1}}, {"eta2", {1}, {1}},    {"eta3", {2}, {1}},
                                  {"m23", {}, {1}},            {"f2_t2", {}, {}},     {"xi", {2}, {}},
                                  {"xi", {4}, {}},             {"two_square", {}, {}}};
    for (int d = 1; d <= 2; ++d)
        for (const auto& item : items) {
            const auto entry = catalogue_entry(item.name, item.params, item.type);
            for (const auto& x : points_within(d, entry.time)) {
                LatticePoint p = LatticePoint::from_dense(x, entry.time);
                if (!p.reachable()) continue;
                for (const auto& term : entry.terms) {
                    INFO(item.name << " d=" << d << " x=" << walks::canonical_type(p).name());
                    CHECK(diagram_eval_concrete(term.spec, p, d).concrete() == brute_force(term.spec, x, d));
                }
            }
        }
}

TEST_CASE("distinct pair equals the inclusion-exclusion form") {
    for (int d = 1; d <= 3; ++d)
        for (const auto& x : points_within(d, 2)) {
            LatticePoint p = LatticePoint::from_dense(x, 2);
            if (!p.reachable()) continue;
            Builder pair("pair", 2);
            const int u = pair.internal(1), v = pair.internal(1);
            pair.edge(pair.origin(), u).edge(u, pair.target()).edge(pair.origin(), v).edge(v, pair.target()).distinct({u, v});
            Builder sq("sq", 2);
            sq.edge(sq.origin(), sq.target(), 2);
            Builder diag("diag", 2);
            const int w = diag.internal(1);
            diag.edge(diag.origin(), w, 2).edge(w, diag.target(), 2);
            const Rational lhs = diagram_eval_concrete(pair.build(), p, d).concrete();
            const Rational rhs = diagram_eval_concrete(sq.build(), p, d).concrete() -
                                 diagram_eval_concrete(diag.build(), p, d).concrete();
            CHECK(lhs == rhs);
        }
}

TEST_CASE("generic polynomials hold on held-out dimensions") {
    for (const auto& c : all_cases())
        for (const auto& t : c.types) {
            auto r = named_diagram(c.name, c.params, t);
            for (int d : {t.entries() + 9, t.entries() + 12})
                CHECK(r.value.poly()(R(1, 2 * d)) == named_concrete(r.entry, d));
        }
}

TEST_CASE("p exponent counts bonds") {
    for (const auto& c : all_cases())
        for (const auto& t : c.types) {
            auto e = catalogue_entry(c.name, c.params, t);
            for (const auto& term : e.terms) CHECK(term.spec.p_exponent == term.spec.degree_bound());
        }
}

TEST_CASE("errors") {
    CHECK_THROWS_AS(catalogue_entry("nope", {}, PointType{}), PreconditionError);
    CHECK_THROWS_AS(catalogue_entry("eta1", {1, 1}, PointType{1}), PreconditionError);
    CHECK_THROWS_AS(catalogue_entry("eta1", {1, 1, 1, 1}, PointType{}), PreconditionError);

    DiagramSpec bad;
    bad.name = "bad";
    bad.vertices = {{0, 0, VertexKind::origin}, {1, 2, VertexKind::target}};
    bad.edges = {{0, 1, 3, 1}};
    CHECK_THROWS_AS(bad.validate(), PreconditionError);

    auto spec = catalogue_entry("xi", {4}, PointType{}).terms.front().spec;
    CHECK_THROWS_AS(diagram_eval_concrete(spec, LatticePoint::origin(4), 6, 10), ResourceError);
    CHECK_THROWS_AS(diagram_eval_concrete(spec, LatticePoint::origin(3), 6), PreconditionError);
}
