#include "pcexp/walks.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <unordered_map>

namespace pcexp::walks {

using qalg::make_rational;
using qalg::Var;

LatticePoint LatticePoint::from_dense(const Dense& x, int time) {
    LatticePoint p;
    p.time = time;
    for (size_t i = 0; i < x.size(); ++i)
        if (x[i] != 0) p.coords[static_cast<int>(i)] = x[i];
    return p;
}

Dense LatticePoint::to_dense(int d) const {
    Dense x(static_cast<size_t>(d), 0);
    for (const auto& [i, v] : coords) {
        if (i < 0 || i >= d) throw PreconditionError("point does not fit in dimension " + std::to_string(d));
        x[static_cast<size_t>(i)] = v;
    }
    return x;
}

int LatticePoint::l1() const {
    int n = 0;
    for (const auto& [i, v] : coords) n += std::abs(v);
    return n;
}

bool LatticePoint::reachable() const { return l1() <= time && (time - l1()) % 2 == 0; }

PointType::PointType(std::initializer_list<int> s) : PointType(std::vector<int>(s)) {}

PointType::PointType(std::vector<int> s) : shape(std::move(s)) {
    for (int& v : shape) {
        v = std::abs(v);
        if (v == 0) throw PreconditionError("point type entries must be nonzero");
    }
    std::sort(shape.begin(), shape.end(), std::greater<>());
}

int PointType::l1() const { return std::accumulate(shape.begin(), shape.end(), 0); }

std::string PointType::name() const {
    if (shape.empty()) return "o";
    std::string r = "[";
    for (size_t i = 0; i < shape.size(); ++i) r += (i ? "," : "") + std::to_string(shape[i]);
    return r + "]";
}

LatticePoint PointType::representative(int time) const {
    LatticePoint p;
    p.time = time;
    for (size_t i = 0; i < shape.size(); ++i) p.coords[static_cast<int>(i)] = shape[i];
    return p;
}

PointType canonical_type(const LatticePoint& x) {
    std::vector<int> s;
    for (const auto& [i, v] : x.coords)
        if (v != 0) s.push_back(v);
    return PointType(std::move(s));
}

PolyVar orbit_count(const PointType& t) {
    const int k = t.entries();
    PolyVar count = PolyVar::constant(1, Var::d);
    for (int i = 0; i < k; ++i) count *= PolyVar({-i, 1}, Var::d);  // falling factorial d^(k)
    Rational factor = Rational(1) << k;                                // 2^k
    for (size_t i = 0; i < t.shape.size();) {
        size_t j = i;
        while (j < t.shape.size() && t.shape[j] == t.shape[i]) ++j;
        for (size_t m = 2; m <= j - i; ++m) factor /= static_cast<long>(m);
        i = j;
    }
    return count * factor;
}

namespace {

struct DenseHash {
    size_t operator()(const Dense& x) const {
        size_t h = 1469598103934665603ull;
        for (int v : x) h = (h ^ static_cast<size_t>(v + 1024)) * 1099511628211ull;
        return h;
    }
};

int l1_distance(const Dense& a, const Dense& b) {
    int n = 0;
    for (size_t i = 0; i < a.size(); ++i) n += std::abs(a[i] - b[i]);
    return n;
}

}  // namespace

Rational dconv_concrete(int n, const LatticePoint& x, int d) {
    if (n < 0) throw PreconditionError("negative step count");
    if (d < 1) throw PreconditionError("dimension must be >= 1");
    if (static_cast<int>(x.coords.empty() ? 0 : x.coords.rbegin()->first) >= d) return 0;
    const Dense target = x.to_dense(d);
    const int dist = l1_distance(target, Dense(static_cast<size_t>(d), 0));
    if (dist > n || (n - dist) % 2 != 0) return 0;

    // Walk counts, keeping only states that can still reach the target.
    std::unordered_map<Dense, mpz_class, DenseHash> layer{{Dense(static_cast<size_t>(d), 0), 1}};
    for (int step = 0; step < n; ++step) {
        const int remaining = n - step - 1;
        std::unordered_map<Dense, mpz_class, DenseHash> next;
        for (const auto& [y, count] : layer) {
            Dense z = y;
            for (int i = 0; i < d; ++i)
                for (int sgn : {-1, 1}) {
                    z[static_cast<size_t>(i)] += sgn;
                    if (l1_distance(z, target) <= remaining) next[z] += count;
                    z[static_cast<size_t>(i)] -= sgn;
                }
        }
        layer = std::move(next);
    }
    auto it = layer.find(target);
    if (it == layer.end()) return 0;
    mpz_class denom;
    mpz_ui_pow_ui(denom.get_mpz_t(), static_cast<unsigned long>(2 * d), static_cast<unsigned long>(n));
    Rational r(it->second, denom);
    r.canonicalize();
    return r;
}

PolyVar generic_in_s(const std::function<Rational(int)>& f, int degree, int d_min) {
    std::vector<std::pair<Rational, Rational>> pts;
    d_min = std::max(d_min, 1);
    for (int d = d_min; d <= d_min + degree + 1; ++d) pts.emplace_back(make_rational(1, 2L * d), f(d));
    return qalg::lagrange_interpolate(pts, degree, Var::s);
}

PolyVar dconv_generic(int n, const PointType& t) {
    if (n < 0 || n > 8) throw PreconditionError("dconv_generic supports 0 <= n <= 8");
    const LatticePoint x = t.representative(n);
    return generic_in_s([&](int d) { return dconv_concrete(n, x, d); }, n, t.entries());
}

std::vector<Dense> unit_steps(int d) {
    std::vector<Dense> out;
    for (int i = 0; i < d; ++i)
        for (int sgn : {1, -1}) {
            Dense e(static_cast<size_t>(d), 0);
            e[static_cast<size_t>(i)] = sgn;
            out.push_back(std::move(e));
        }
    return out;
}

PolyVar power_sum_generic(int m, int n, const PointType& t) {
    if (m < 1 || n < 1) throw PreconditionError("power_sum_generic needs m, n >= 1");
    if (t.l1() > 2 || t.l1() % 2 != 0) throw PreconditionError("type not reachable at time 2");
    auto f = [&](int d) {
        const Dense x = t.representative(2).to_dense(d);
        const Rational Dv = make_rational(1, 2L * d);
        Rational sum = 0;
        for (const auto& u : unit_steps(d)) {
            Dense diff(x.size());
            for (size_t i = 0; i < x.size(); ++i) diff[i] = x[i] - u[i];
            if (l1_distance(diff, Dense(x.size(), 0)) != 1) continue;
            Rational term = 1;
            for (int k = 0; k < m + n; ++k) term *= Dv;
            sum += term;
        }
        return sum;
    };
    return generic_in_s(f, m + n, t.entries());
}

std::vector<PointType> types_at(int n) {
    std::vector<PointType> out;
    // Partitions of every l1 <= n with l1 = n mod 2.
    std::function<void(int, int, std::vector<int>&)> rec = [&](int left, int maxpart, std::vector<int>& cur) {
        if (left == 0) {
            out.emplace_back(cur);
            return;
        }
        for (int p = std::min(left, maxpart); p >= 1; --p) {
            cur.push_back(p);
            rec(left - p, p, cur);
            cur.pop_back();
        }
    };
    for (int l1 = n % 2; l1 <= n; l1 += 2) {
        std::vector<int> cur;
        rec(l1, l1, cur);
    }
    return out;
}

}  // namespace pcexp::walks
