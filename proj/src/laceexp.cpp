#include "pcexp/laceexp.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <tuple>

#include "pcexp/diagrams.hpp"

namespace pcexp::laceexp {

using qalg::make_rational;
using qalg::Var;

std::string to_string(Mode m) { return m == Mode::stated ? "stated" : "recomputed"; }

Mode parse_mode(const std::string& text) {
    if (text == "stated") return Mode::stated;
    if (text == "recomputed") return Mode::recomputed;
    throw PreconditionError("unknown mode: " + text);
}

namespace {

Rational R(long n, long d = 1) { return make_rational(n, d); }

// c P^j s^k
struct Mono {
    Rational c;
    int j;
    int k;
};

PPoly ppoly(std::initializer_list<Mono> terms, int K) {
    PPoly r(K);
    for (const auto& t : terms) r += PPoly::term(t.c, t.j, t.k, K);
    return r;
}

// Trusted order of the stated per-type values.
int type_order(int time, const PointType& type) {
    if (time == 2) return type.entries() == 0 ? 4 : 6;
    if (time == 3) return type.shape == std::vector<int>{1} ? 5 : type.entries() == 2 ? 6 : 7;
    return 4 + type.entries();
}

bool is_type(const PointType& t, std::initializer_list<int> shape) { return t.shape == std::vector<int>(shape); }

PPoly printed_value(int n, int time, const PointType& t) {
    const int K = type_order(time, t);
    if (n == 0) {
        if (time == 2 && is_type(t, {})) return ppoly({{R(1, 2), 4, 2}, {R(-1, 2), 4, 3}, {R(-1, 2), 6, 3}, {R(15, 8), 0, 4}}, K);
        if (time == 2 && is_type(t, {1, 1})) return ppoly({{R(1), 4, 4}}, K);
        if (time == 3 && is_type(t, {1})) return ppoly({{R(7, 2), 6, 4}, {R(-16), 0, 5}}, K);
        if (time == 3 && is_type(t, {2, 1})) return ppoly({{R(1), 0, 6}}, K);
        if (time == 3 && is_type(t, {1, 1, 1})) return ppoly({{R(9), 6, 6}, {R(-3), 0, 7}}, K);
        if (time == 4 && is_type(t, {})) return ppoly({{R(4), 0, 4}}, K);
        if (time == 4 && is_type(t, {1, 1})) return ppoly({{R(53), 0, 6}}, K);
        if (time == 4 && is_type(t, {1, 1, 1, 1})) return ppoly({{R(156), 0, 8}}, K);
    }
    if (n == 1) {
        if (time == 2 && is_type(t, {})) return ppoly({{R(1), 4, 2}, {R(-1), 4, 3}, {R(-1, 2), 6, 3}, {R(2), 0, 4}}, K);
        if (time == 2 && is_type(t, {1, 1})) return ppoly({{R(2), 4, 4}}, K);
        if (time == 3 && is_type(t, {1})) return ppoly({{R(7), 6, 4}, {R(-31), 0, 5}}, K);
        if (time == 3 && is_type(t, {2, 1})) return ppoly({{R(2), 0, 6}}, K);
        if (time == 3 && is_type(t, {1, 1, 1})) return ppoly({{R(18), 6, 6}, {R(-6), 0, 7}}, K);
        if (time == 4 && is_type(t, {})) return ppoly({{R(17, 2), 0, 4}}, K);
        if (time == 4 && is_type(t, {1, 1})) return ppoly({{R(108), 0, 6}}, K);
        if (time == 4 && is_type(t, {1, 1, 1, 1})) return ppoly({{R(324), 0, 8}}, K);
    }
    if (n == 2) {
        if (time == 3 && is_type(t, {1})) return ppoly({{R(3), 0, 5}}, K);
        if (time == 3 && is_type(t, {2, 1})) return PPoly(K);
        if (time == 3 && is_type(t, {1, 1, 1})) return ppoly({{R(6), 0, 7}}, K);
        if (time == 4) return PPoly(K);
    }
    throw PreconditionError("no stated value for this coefficient");
}

// Generic catalogue values are interpolated once and shared.
const diagrams::NamedResult& catalogue(const std::string& name, const std::vector<int>& params, const PointType& t) {
    static std::mutex mu;
    static std::map<std::tuple<std::string, std::vector<int>, PointType>, diagrams::NamedResult> cache;
    std::lock_guard lock(mu);
    const auto key = std::make_tuple(name, params, t);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, diagrams::named_diagram(name, params, t)).first;
    return it->second;
}

const PolyVar& dstar4_squared(const PointType& t) {
    static std::mutex mu;
    static std::map<PointType, PolyVar> cache;
    std::lock_guard lock(mu);
    auto it = cache.find(t);
    if (it == cache.end()) {
        diagrams::Builder b("dstar4_sq", 4);
        b.edge(b.origin(), b.target(), 2);
        it = cache.emplace(t, diagrams::diagram_eval_generic(b.build(), t).poly()).first;
    }
    return it->second;
}

// Accumulates coefficient * P^e * (s-polynomial) with provenance.
class Assembly {
public:
    explicit Assembly(int K) : value_(K) {}

    void add(const std::string& label, const Rational& c, int p_exponent, const PolyVar& poly) {
        PPoly term(value_.order());
        term.set_coeff(p_exponent, SeriesS::from_poly(poly, value_.order()) * c);
        value_ += term;
        provenance_.push_back({label, c, p_exponent});
    }
    void add_named(const std::string& name, const std::vector<int>& params, const PointType& t, const Rational& c) {
        const auto& r = catalogue(name, params, t);
        std::string label = name;
        if (!params.empty()) {
            label += "[";
            for (size_t i = 0; i < params.size(); ++i) label += (i ? "," : "") + std::to_string(params[i]);
            label += "]";
        }
        add(label, c, r.value.p_exponent, r.value.poly());
    }
    void add_entry(const std::string& label, const Rational& c, const PiEntry& e) {
        value_ += e.value * c;
        provenance_.push_back({label, c, 0});
    }

    const PPoly& value() const { return value_; }
    std::vector<Contribution> provenance() const { return provenance_; }

private:
    PPoly value_;
    std::vector<Contribution> provenance_;
};

// H at time 2: 1/4 F2 - 1/8 F4 - 1/8 F9.
void add_h2(Assembly& a, const PointType& t, const Rational& sign) {
    a.add_named("f2_t2", {}, t, sign * R(1, 4));
    a.add_named("f4_t2", {}, t, sign * R(-1, 8));
    a.add_named("f9_t2", {}, t, sign * R(-1, 8));
}

PiEntry recomputed_value(int n, int time, const PointType& t) {
    const int K = type_order(time, t);
    Assembly a(K);
    if (n == 0 && time == 2) {
        a.add_named("pair_t2", {}, t, 1);
        add_h2(a, t, -1);
    } else if (n == 0 && time == 3) {
        a.add_named("m1", {}, t, R(1, 2));
        a.add_named("m2", {}, t, R(-1, 2));
        a.add_named("m23", {}, t, R(-3, 2));
    } else if (n == 0 && time == 4) {
        a.add("dstar4^2", R(1, 2), 8, dstar4_squared(t));
        a.add_named("xi", {1}, t, -1);
        a.add_named("xi", {2}, t, R(3, 2));
        a.add_named("xi", {3}, t, R(-1, 2));
        a.add_named("xi", {4}, t, R(-1, 2));
    } else if (n == 1) {
        a.add_entry("2 Pi0", 2, recomputed_value(0, time, t));
        if (time == 2) {
            add_h2(a, t, 1);
            a.add_named("f9_t2", {}, t, R(1, 8));
        } else if (time == 3) {
            a.add_named("m23", {}, t, R(1, 2));
        } else {
            a.add_named("two_square", {}, t, 1);
        }
    } else if (n == 2 && time == 3) {
        a.add_named("m2", {}, t, 1);
    } else {
        a.add("vanishes", 0, 0, PolyVar(Var::s));
    }
    return {n, time, t, a.value().truncated(K), Mode::recomputed, K, a.provenance()};
}

PPoly shift_down(const PPoly& f, int e) {
    const int K = f.order() - e;
    if (K < 0) throw PreconditionError("multiplicity exceeds the known order");
    PPoly r(K);
    for (int j = 0; j <= f.p_degree(); ++j) {
        const SeriesS c = f.coeff(j);
        if (c.valuation() < e) throw PreconditionError("value vanishes to too low an order for its multiplicity");
        SeriesS shifted(K);
        for (int k = 0; k <= K; ++k) shifted.set(k, c.coeff(k + e));
        r.set_coeff(j, shifted);
    }
    return r;
}

Rational binom(int n, int k) {
    Rational r = 1;
    for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
    return r;
}

Rational pow(const Rational& x, int k) {
    Rational r = 1;
    for (int i = 0; i < k; ++i) r *= x;
    return r;
}

// sum_{k=2}^{order} w(k) C(1/s, k) (P^2 s^2)^k as a PPoly
PPoly binomial_moment(int order, Rational (*w)(int)) {
    if (order < 0 || order > 5) throw PreconditionError("binomial series supports order <= 5");
    PPoly r(order);
    for (int k = 2; k <= order; ++k) {
        // C(N,k) q^k = P^{2k}/k! s^k prod_{i<k} (1 - i s)
        PolyVar f = PolyVar::monomial(1, k, Var::s);
        for (int i = 1; i < k; ++i) f *= PolyVar({1, -i}, Var::s);
        Rational fact = 1;
        for (int i = 2; i <= k; ++i) fact *= i;
        PPoly term(order);
        term.set_coeff(2 * k, SeriesS::from_poly(f, order) * (w(k) / fact));
        r += term;
    }
    return r;
}

}  // namespace

std::vector<PointType> covered_types(int n, int time) {
    const bool ok = ((n == 0 || n == 1) && time >= 2 && time <= 4) || (n == 2 && (time == 3 || time == 4));
    if (!ok) throw PreconditionError("no coefficient table for n=" + std::to_string(n) + ", time=" + std::to_string(time));
    if (time == 3) return {PointType{1}, PointType{2, 1}, PointType{1, 1, 1}};
    if (time == 2) return {PointType{}, PointType{1, 1}};
    return {PointType{}, PointType{1, 1}, PointType{1, 1, 1, 1}};
}

PiEntry pi_type_table(int n, int time, const PointType& type, Mode mode) {
    const auto types = covered_types(n, time);
    if (std::find(types.begin(), types.end(), type) == types.end())
        throw PreconditionError("type " + type.name() + " is not covered at time " + std::to_string(time));
    if (mode == Mode::recomputed) return recomputed_value(n, time, type);
    const int K = type_order(time, type);
    return {n, time, type, printed_value(n, time, type), mode, K, {{"printed", 1, 0}}};
}

PolyVar multiplicity(int time, const PointType& type, Mode mode) {
    if (mode == Mode::stated && time == 3 && is_type(type, {2, 1}))
        return PolyVar({0, -2, 2}, Var::d);  // stated as 2d(d-1)
    return walks::orbit_count(type);
}

PPoly weight_by_multiplicity(const PPoly& value, const PolyVar& m) {
    if (m.var() != Var::d) throw PreconditionError("multiplicity must be a polynomial in d");
    const int e = std::max(m.degree(), 0);
    // s^e m(1/(2s)) = sum_j m_j 2^{-j} s^{e-j}
    PolyVar scaled(Var::s);
    for (int j = 0; j <= m.degree(); ++j)
        scaled += PolyVar::monomial(m.coeff(j) / (Rational(1) << j), e - j, Var::s);
    return shift_down(value * PPoly(SeriesS::from_poly(scaled, value.order())), e);
}

PPoly pi_time_sum(int n, int time, Mode mode) {
    PPoly total(kSumOrder);
    for (const auto& t : covered_types(n, time))
        total += weight_by_multiplicity(pi_type_table(n, time, t, mode).value, multiplicity(time, t, mode));
    return total.truncated(kSumOrder);
}

PPoly printed_time_sum(int n, int time) {
    covered_types(n, time);
    const int K = kSumOrder;
    if (n == 0 && time == 2) return ppoly({{R(1), 4, 2}, {R(-3, 2), 4, 3}, {R(-1, 2), 6, 3}, {R(15, 8), 0, 4}}, K);
    if (n == 0 && time == 3) return ppoly({{R(5), 6, 3}, {R(-25), 0, 4}}, K);
    if (n == 0 && time == 4) return ppoly({{R(37), 0, 4}}, K);
    if (n == 1 && time == 2) return ppoly({{R(2), 4, 2}, {R(-3), 4, 3}, {R(-1, 2), 6, 3}, {R(2), 0, 4}}, K);
    if (n == 1 && time == 3) return ppoly({{R(10), 6, 3}, {R(-49), 0, 4}}, K);
    if (n == 1 && time == 4) return ppoly({{R(76), 0, 4}}, K);
    if (n == 2 && time == 3) return ppoly({{R(4), 0, 4}}, K);
    return PPoly(K);
}

PiTotals pi_totals(Mode mode) {
    PiTotals r{PPoly(kSumOrder), PPoly(kSumOrder), PPoly(kSumOrder)};
    for (int t = 2; t <= 4; ++t) {
        r.pi0 += pi_time_sum(0, t, mode);
        r.pi1 += pi_time_sum(1, t, mode);
    }
    for (int t = 3; t <= 4; ++t) r.pi2 += pi_time_sum(2, t, mode);
    return r;
}

PiTotals printed_pi_totals() {
    const int K = kSumOrder;
    return {ppoly({{R(1), 4, 2}, {R(9, 2), 6, 3}, {R(-3, 2), 4, 3}, {R(-111, 8), 0, 4}}, K),
            ppoly({{R(2), 4, 2}, {R(19, 2), 6, 3}, {R(-3), 4, 3}, {R(29), 0, 4}}, K), ppoly({{R(4), 0, 4}}, K)};
}

PPoly one_round_form(const PPoly& pi_total) { return PPoly(SeriesS::constant(1, pi_total.order())) - PPoly::P(pi_total.order()) * pi_total; }

PPoly printed_one_round_form() {
    return ppoly({{R(1), 0, 0}, {R(1), 5, 2}, {R(5), 7, 3}, {R(-3, 2), 5, 3}, {R(89, 8), 0, 4}}, kSumOrder);
}

SeriesS printed_pc_series() { return SeriesS({R(1), R(0), R(1), R(7, 2), R(129, 8)}, kSumOrder); }

PcSeries pc_fixed_point(const PPoly& pi_total, int order) {
    if (order < 0) throw PreconditionError("order must be >= 0");
    if (order > pi_total.order()) throw PreconditionError("order exceeds the known order of pi_total");
    for (int j = 0; j <= pi_total.p_degree(); ++j)
        if (pi_total.at(j, 0) != 0) throw PreconditionError("pi_total must vanish at s = 0");
    const PPoly f = one_round_form(pi_total).truncated(order);
    SeriesS p = SeriesS::constant(1, order);
    for (int round = 0; round <= order + 1; ++round) {
        SeriesS next = ppoly_subst(f, p);
        if (next == p) return {p, Stage::final};
        p = std::move(next);
    }
    throw PreconditionError("fixed-point iteration did not settle");
}

Rational binomial_pi0_origin(const Rational& p, int d) {
    if (d < 1) throw PreconditionError("dimension must be >= 1");
    const Rational q = pow(p / (2 * d), 2);
    if (q > 1) throw PreconditionError("bond probability exceeds 1");
    const int N = 2 * d;
    return 1 - pow(1 - q, N) - N * q * pow(1 - q, N - 1);
}

SeriesS binomial_pi0_origin_series(const Rational& p, int order) {
    if (order < 0) throw PreconditionError("order must be >= 0");
    const int K = std::max(order, 2);
    const SeriesS q = SeriesS::monomial(p * p, 2, K);
    const SeriesS a = qalg::series_pow_inv_s(-q);  // (1-q)^(1/s)
    SeriesS inv(K);                               // 1/(1-q)
    for (int k = 0; 2 * k <= K; ++k) inv.set(2 * k, pow(p * p, k));
    const SeriesS q_over_s = SeriesS::monomial(p * p, 1, K);
    SeriesS r = SeriesS::constant(1, K) - a - q_over_s * a * inv;
    return r.truncated(order);
}

PPoly binomial_pi0_origin_generic(int order) {
    return binomial_moment(order, [](int k) { return Rational(k % 2 == 0 ? k - 1 : 1 - k); });
}

Rational marked_sum_origin(const Rational& p, int d) {
    if (d < 1) throw PreconditionError("dimension must be >= 1");
    const Rational q = pow(p / (2 * d), 2);
    const int N = 2 * d;
    return N * q * (1 - pow(1 - q, N - 1));
}

PPoly marked_sum_origin_generic(int order) {
    return binomial_moment(order, [](int k) { return Rational(k % 2 == 0 ? k : -k); });
}

int first_pc_difference(const PPoly& a, const PPoly& b, int n) {
    const PPoly diff = a - b;
    int first = n + 1;
    for (int i = 0; 2 * i <= n && i <= diff.p_degree(); ++i)
        for (int k = 0; k + 2 * i <= n; ++k) {
            Rational c = 0;
            for (int j = i; j <= diff.p_degree(); ++j) c += binom(j, i) * diff.at(j, k);
            if (c != 0) first = std::min(first, k + 2 * i);
        }
    return first;
}

bool equivalent_at_pc(const PPoly& a, const PPoly& b, int n) { return first_pc_difference(a, b, n) > n; }

SeriesS at_p_one(const PPoly& f) {
    SeriesS r(f.order());
    for (int j = 0; j <= f.p_degree(); ++j) r += f.coeff(j);
    return r;
}

}  // namespace pcexp::laceexp
