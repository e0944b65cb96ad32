// Named diagrams with their printed closed forms.
#include <algorithm>
#include <map>

#include "pcexp/diagrams.hpp"

namespace pcexp::diagrams {

using qalg::make_rational;
using qalg::Var;

namespace {

PolyVar mono(const Rational& c, int k) { return PolyVar::monomial(c, k, Var::s); }
PolyVar poly(std::vector<Rational> c) { return PolyVar(std::move(c), Var::s); }
Rational R(long n, long d = 1) { return make_rational(n, d); }
Rational pow2(int k) { return Rational(1) << k; }

const PointType kO{};
const PointType kE1{1};
const PointType kE1E2{1, 1};
const PointType k2E1E2{2, 1};
const PointType k3{1, 1, 1};
const PointType k4{1, 1, 1, 1};

// ---- building blocks

DiagramSpec dstar_power(int T, int m, std::string name) {
    Builder b(std::move(name), T);
    b.edge(b.origin(), b.target(), m);
    return b.build();
}

DiagramSpec eta1(int l, int m, int n, int r) {
    Builder b("eta1", 3);
    const int s = b.internal(1), u = b.internal(2);
    b.edge(b.origin(), u, l).edge(u, b.target(), m).edge(b.origin(), s, n).edge(s, u, r);
    return b.build();
}

DiagramSpec eta2(int l) {
    Builder b("eta2", 3);
    const int s = b.internal(1), u = b.internal(2);
    b.edge(b.origin(), u).edge(u, b.target()).edge(b.origin(), s, l).edge(s, u).edge(s, b.target());
    return b.build();
}

DiagramSpec eta3(int l) {
    Builder b("eta3", 3);
    const int s = b.internal(1), u = b.internal(2);
    b.edge(b.origin(), s, 2).edge(s, u, l).edge(u, b.target(), 2);
    return b.build();
}

DiagramSpec dstar3_eta1111() {
    Builder b("dstar3_eta1", 3);
    const int s = b.internal(1), u = b.internal(2);
    b.edge(b.origin(), b.target());
    b.edge(b.origin(), u).edge(u, b.target()).edge(b.origin(), s).edge(s, u);
    return b.build();
}

// Sum over pairwise distinct time-1 vertices of prod D(v) D(x - v).
DiagramSpec distinct_middles(int count, std::string name) {
    Builder b(std::move(name), 2);
    std::vector<int> ids;
    for (int i = 0; i < count; ++i) {
        const int v = b.internal(1);
        ids.push_back(v);
        b.edge(b.origin(), v).edge(v, b.target());
    }
    b.distinct(ids);
    return b.build();
}

DiagramSpec xi(int i) {
    Builder b("xi" + std::to_string(i), 4);
    switch (i) {
        case 1: {
            const int a = b.internal(1);
            b.edge(b.origin(), a, 2).edge(a, b.target(), 2);
            break;
        }
        case 2: {
            const int a = b.internal(1), c = b.internal(2);
            b.edge(b.origin(), a, 2).edge(a, c, 2).edge(c, b.target(), 2);
            break;
        }
        case 3: {
            const int w = b.internal(2);
            b.edge(b.origin(), w, 2).edge(w, b.target(), 2);
            break;
        }
        case 4: {
            const int a = b.internal(1), c = b.internal(2), e = b.internal(3);
            b.edge(b.origin(), a, 2).edge(a, c, 2).edge(c, e, 2).edge(e, b.target(), 2);
            break;
        }
        default:
            throw PreconditionError("xi index must be 1..4");
    }
    return b.build();
}

// sum_u TD(u) TD(x - u), TD(y) = sum over distinct middles v != w of
// D(v) D(y - v) D(w) D(y - w), with u at time 2 and x at time 4.
DiagramSpec two_square() {
    Builder b("two_square", 4);
    const int a = b.internal(1), c = b.internal(1), u = b.internal(2), e = b.internal(3), f = b.internal(3);
    b.edge(b.origin(), a).edge(a, u).edge(b.origin(), c).edge(c, u);
    b.edge(u, e).edge(e, b.target()).edge(u, f).edge(f, b.target());
    b.distinct({a, c}).distinct({e, f});
    return b.build();
}

struct Printed {
    PolyVar poly;
    int through;
};

void require_type(const std::string& name, const PointType& t, const std::vector<PointType>& allowed) {
    for (const auto& a : allowed)
        if (a == t) return;
    throw PreconditionError("diagram " + name + " is not catalogued for type " + t.name());
}

void require_params(const std::string& name, const std::vector<int>& params, size_t n) {
    if (params.size() != n)
        throw PreconditionError("diagram " + name + " takes " + std::to_string(n) + " parameter(s)");
    for (int v : params)
        if (v < 1) throw PreconditionError("diagram " + name + ": parameters must be >= 1");
}

// Printed forms of the time-3 building blocks.
PolyVar printed_dstar3(const PointType& t) {
    if (t == kE1) return poly({0, 0, 3, -3});
    if (t == k2E1E2) return mono(3, 3);
    return mono(6, 3);
}

Printed printed_eta1(int l, int m, int n, int r, const PointType& t) {
    const int a = l + m + n + r - 1, b = 2 * l + m + n + r;
    if (t == kE1) return {mono(1, a) + mono(pow2(l + 1), a + l) - mono(pow2(l + 2) - 1, a + l + 1), a + l + 1};
    if (t == k2E1E2) return {mono(1 + pow2(l + 1), b), b};
    return {mono(3 * pow2(l + 1), b), b};
}

Printed printed_eta2(int l, const PointType& t) {
    if (t == kE1) return {mono(5, l + 4) - mono(2, l + 5) - mono(8, l + 6), l + 6};
    if (t == k2E1E2) return {mono(8, l + 6), l + 6};
    return {mono(24, l + 6), l + 6};
}

Printed printed_eta3(int l, const PointType& t) {
    if (t == kE1) return {mono(3, l + 3) - mono(3, l + 4), l + 4};
    if (t == k2E1E2) return {mono(3, l + 4), l + 4};
    return {mono(6, l + 4), l + 4};
}

const std::vector<PointType> kTime3Types{kE1, k2E1E2, k3};
const std::vector<PointType> kTime4Types{kO, kE1E2, k4};
const std::vector<PointType> kTime2Types{kO, kE1E2};

}  // namespace

std::vector<std::string> catalogue_names() {
    return {"eta1", "eta2", "eta3", "m1", "m2", "m23", "pair_t2", "f2_t2", "f4_t2", "f9_t2", "xi", "two_square"};
}

NamedDiagram catalogue_entry(const std::string& name, const std::vector<int>& params, const PointType& type) {
    NamedDiagram e;
    e.name = name;
    e.params = params;
    e.type = type;

    auto single = [&](DiagramSpec spec, const Rational& c = 1) {
        e.p_exponent = spec.p_exponent;
        e.terms.push_back({c, std::move(spec)});
    };
    auto set_printed = [&](const Printed& p) {
        e.printed = p.poly;
        e.printed_through = p.through;
    };

    if (name == "eta1") {
        require_params(name, params, 4);
        require_type(name, type, kTime3Types);
        e.time = 3;
        single(eta1(params[0], params[1], params[2], params[3]));
        set_printed(printed_eta1(params[0], params[1], params[2], params[3], type));
    } else if (name == "eta2") {
        require_params(name, params, 1);
        require_type(name, type, kTime3Types);
        e.time = 3;
        single(eta2(params[0]));
        set_printed(printed_eta2(params[0], type));
    } else if (name == "eta3") {
        require_params(name, params, 1);
        require_type(name, type, kTime3Types);
        e.time = 3;
        single(eta3(params[0]));
        set_printed(printed_eta3(params[0], type));
    } else if (name == "m1" || name == "m2" || name == "m23") {
        require_params(name, params, 0);
        require_type(name, type, kTime3Types);
        e.time = 3;
        PolyVar printed(Var::s);
        const PolyVar d3 = printed_dstar3(type);
        if (name == "m1") {
            e.p_exponent = 6;
            e.terms = {{1, dstar_power(3, 2, "dstar3_sq")}, {-2, eta1(1, 2, 1, 1)}, {1, eta3(2)}};
            printed = d3 * d3 - R(2) * printed_eta1(1, 2, 1, 1, type).poly + printed_eta3(2, type).poly;
        } else if (name == "m2") {
            e.p_exponent = 7;
            e.terms = {{1, eta2(1)}, {-2, eta1(1, 2, 1, 2)}, {1, eta3(3)}};
            printed = printed_eta2(1, type).poly - R(2) * printed_eta1(1, 2, 1, 2, type).poly + printed_eta3(3, type).poly;
        } else {
            e.p_exponent = 8;
            e.terms = {{1, dstar3_eta1111()}, {-1, eta1(2, 2, 1, 1)}};
            printed = d3 * printed_eta1(1, 1, 1, 1, type).poly - printed_eta1(2, 2, 1, 1, type).poly;
        }
        e.printed = printed;
        // Orders through which the time-3 main term is stated.
        e.printed_through = type == kE1 ? 5 : (type == k2E1E2 ? 6 : 7);
        if (name == "m23" && type == k2E1E2) e.printed_through = 7;
    } else if (name == "pair_t2") {
        require_params(name, params, 0);
        require_type(name, type, {kO, kE1E2, PointType{2}});
        e.time = 2;
        single(distinct_middles(2, "pair_t2"), R(1, 2));
        if (type == kO) set_printed({poly({0, 0, R(1, 2), R(-1, 2)}), -1});
        else if (type == kE1E2) set_printed({mono(1, 4), -1});
        else set_printed({PolyVar(Var::s), -1});
    } else if (name == "f2_t2") {
        require_params(name, params, 0);
        require_type(name, type, kTime2Types);
        e.time = 2;
        single(distinct_middles(3, "f2_t2"), 2);
        set_printed({type == kO ? poly({0, 0, 0, 2, -6, 4}) : PolyVar(Var::s), -1});
    } else if (name == "f4_t2" || name == "f9_t2") {
        require_params(name, params, 0);
        require_type(name, type, kTime2Types);
        e.time = 2;
        single(dstar_power(2, 4, name), name == "f4_t2" ? 2 : 1);
        e.reconstructed = true;
        e.note = "leading-order form only";
        set_printed({type == kO ? mono(name == "f4_t2" ? 2 : 1, 4) : PolyVar(Var::s), 4});
    } else if (name == "xi") {
        require_params(name, params, 1);
        require_type(name, type, kTime4Types);
        e.time = 4;
        single(xi(params[0]));
        e.reconstructed = true;
        e.note = "vertex structure rebuilt from the stated values";
        static const std::map<int, std::vector<Printed>> table{
            {1, {{PolyVar(Var::s), 4}, {mono(18, 6), 6}, {mono(144, 8), -1}}},
            {2, {{PolyVar(Var::s), 4}, {mono(2, 6), 6}, {mono(48, 8), -1}}},
            {3, {{mono(1, 4), 5}, {mono(8, 6), 6}, {mono(96, 8), -1}}},
            {4, {{PolyVar(Var::s), 5}, {PolyVar(Var::s), 6}, {mono(24, 8), -1}}},
        };
        const auto& row = table.at(params[0]);
        set_printed(row[type == kO ? 0 : (type == kE1E2 ? 1 : 2)]);
    } else if (name == "two_square") {
        require_params(name, params, 0);
        require_type(name, type, kTime4Types);
        e.time = 4;
        single(two_square(), R(1, 2));
        e.reconstructed = true;
        e.note = "vertex structure rebuilt from the stated values";
        if (type == kO) set_printed({mono(R(1, 2), 4), 4});
        else if (type == kE1E2) set_printed({mono(2, 6), 6});
        else set_printed({mono(12, 8), 9});
    } else {
        throw PreconditionError("unknown diagram name: " + name);
    }
    return e;
}

Rational named_concrete(const NamedDiagram& entry, int d) {
    Rational total = 0;
    const LatticePoint x = entry.type.representative(entry.time);
    for (const auto& t : entry.terms) total += t.coeff * diagram_eval_concrete(t.spec, x, d).concrete();
    return total;
}

bool agree_through(const PolyVar& a, const PolyVar& b, int order) {
    const PolyVar diff = a - b;
    if (order < 0) return diff.is_zero();
    for (int k = 0; k <= std::min(order, diff.degree()); ++k)
        if (diff.coeff(k) != 0) return false;
    return true;
}

NamedResult named_diagram(const std::string& name, const std::vector<int>& params, const PointType& type) {
    NamedResult r;
    r.entry = catalogue_entry(name, params, type);
    PolyVar total(Var::s);
    for (const auto& t : r.entry.terms) total += t.coeff * diagram_eval_generic(t.spec, type).poly();
    r.value = {r.entry.p_exponent, total};
    r.match = !r.entry.printed || agree_through(total, *r.entry.printed, r.entry.printed_through);
    return r;
}

}  // namespace pcexp::diagrams
