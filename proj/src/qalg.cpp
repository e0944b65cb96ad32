#include "pcexp/qalg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace pcexp::qalg {

Rational make_rational(long num, long den) {
    if (den == 0) throw PreconditionError("zero denominator");
    Rational r(num, den);
    r.canonicalize();
    return r;
}

Rational parse_rational(std::string_view text) {
    std::string t(text);
    Rational r;
    if (t.empty() || r.set_str(t, 10) != 0)
        throw PreconditionError("not a rational: '" + t + "'");
    if (r.get_den() == 0) throw PreconditionError("zero denominator: '" + t + "'");
    r.canonicalize();
    return r;
}

std::string to_string(const Rational& r) { return r.get_str(); }

char var_name(Var v) {
    switch (v) {
        case Var::s: return 's';
        case Var::d: return 'd';
        case Var::q: return 'q';
    }
    return '?';
}

namespace {

// "c*x^k" terms joined with +/-; empty input prints "0".
std::string format_terms(const std::vector<std::pair<Rational, std::string>>& terms) {
    std::ostringstream os;
    bool first = true;
    for (const auto& [c, mono] : terms) {
        if (c == 0) continue;
        Rational a = abs(c);
        if (first) {
            if (c < 0) os << "-";
        } else {
            os << (c < 0 ? " - " : " + ");
        }
        if (mono.empty()) {
            os << a.get_str();
        } else {
            if (a != 1) os << a.get_str() << "*";
            os << mono;
        }
        first = false;
    }
    return first ? "0" : os.str();
}

std::string power(char x, int k) {
    if (k == 0) return {};
    if (k == 1) return std::string(1, x);
    return std::string(1, x) + "^" + std::to_string(k);
}

}  // namespace

// ---------------------------------------------------------------- PolyVar

PolyVar::PolyVar(std::vector<Rational> coeffs, Var v) : c_(std::move(coeffs)), var_(v) { trim(); }

PolyVar PolyVar::constant(const Rational& c, Var v) { return PolyVar({c}, v); }

PolyVar PolyVar::monomial(const Rational& c, int k, Var v) {
    if (k < 0) throw PreconditionError("negative exponent");
    std::vector<Rational> cs(static_cast<size_t>(k) + 1);
    cs[static_cast<size_t>(k)] = c;
    return PolyVar(std::move(cs), v);
}

void PolyVar::trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

void PolyVar::check_var(const PolyVar& o) const {
    if (var_ != o.var_) throw PreconditionError("polynomials in different variables");
}

Rational PolyVar::coeff(int k) const {
    if (k < 0 || k >= static_cast<int>(c_.size())) return 0;
    return c_[static_cast<size_t>(k)];
}

Rational PolyVar::operator()(const Rational& x) const {
    Rational acc = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
}

PolyVar& PolyVar::operator+=(const PolyVar& o) {
    check_var(o);
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
    for (size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
    trim();
    return *this;
}

PolyVar& PolyVar::operator-=(const PolyVar& o) {
    check_var(o);
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
    for (size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
    trim();
    return *this;
}

PolyVar& PolyVar::operator*=(const PolyVar& o) {
    check_var(o);
    if (c_.empty() || o.c_.empty()) {
        c_.clear();
        return *this;
    }
    std::vector<Rational> r(c_.size() + o.c_.size() - 1);
    for (size_t i = 0; i < c_.size(); ++i)
        for (size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
    c_ = std::move(r);
    trim();
    return *this;
}

PolyVar& PolyVar::operator*=(const Rational& c) {
    for (auto& x : c_) x *= c;
    trim();
    return *this;
}

PolyVar PolyVar::operator-() const {
    PolyVar r = *this;
    for (auto& x : r.c_) x = -x;
    return r;
}

std::string PolyVar::str() const {
    std::vector<std::pair<Rational, std::string>> terms;
    for (int k = 0; k <= degree(); ++k) terms.emplace_back(c_[static_cast<size_t>(k)], power(var_name(var_), k));
    return format_terms(terms);
}

// ---------------------------------------------------------------- SeriesS

SeriesS::SeriesS(int K) : c_(static_cast<size_t>(std::max(K, 0)) + 1), K_(K) {
    if (K < 0) throw PreconditionError("negative truncation order");
}

SeriesS::SeriesS(std::vector<Rational> coeffs, int K) : SeriesS(K) {
    for (size_t i = 0; i < coeffs.size() && i < c_.size(); ++i) c_[i] = coeffs[i];
}

SeriesS SeriesS::constant(const Rational& c, int K) { return monomial(c, 0, K); }

SeriesS SeriesS::monomial(const Rational& c, int k, int K) {
    SeriesS r(K);
    if (k < 0) throw PreconditionError("negative exponent");
    if (k <= K) r.c_[static_cast<size_t>(k)] = c;
    return r;
}

SeriesS SeriesS::from_poly(const PolyVar& p, int K) {
    if (p.var() != Var::s) throw PreconditionError("series must be in s");
    return SeriesS(p.coeffs(), K);
}

Rational SeriesS::coeff(int k) const {
    if (k < 0 || k > K_) return 0;
    return c_[static_cast<size_t>(k)];
}

void SeriesS::set(int k, const Rational& v) {
    if (k < 0 || k > K_) throw PreconditionError("coefficient index beyond truncation order");
    c_[static_cast<size_t>(k)] = v;
}

void SeriesS::add(int k, const Rational& v) {
    if (k < 0) throw PreconditionError("negative exponent");
    if (k <= K_) c_[static_cast<size_t>(k)] += v;
}

int SeriesS::valuation() const {
    for (int k = 0; k <= K_; ++k)
        if (c_[static_cast<size_t>(k)] != 0) return k;
    return K_ + 1;
}

SeriesS SeriesS::truncated(int K) const {
    if (K > K_) throw PreconditionError("cannot raise truncation order");
    return SeriesS(c_, K);
}

PolyVar SeriesS::to_poly() const { return PolyVar(c_, Var::s); }

Rational SeriesS::eval(const Rational& s) const { return to_poly()(s); }

double SeriesS::eval_double(double s) const {
    double acc = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * s + it->get_d();
    return acc;
}

SeriesS& SeriesS::operator+=(const SeriesS& o) {
    if (o.K_ < K_) *this = truncated(o.K_);
    for (int k = 0; k <= K_; ++k) c_[static_cast<size_t>(k)] += o.c_[static_cast<size_t>(k)];
    return *this;
}

SeriesS& SeriesS::operator-=(const SeriesS& o) {
    if (o.K_ < K_) *this = truncated(o.K_);
    for (int k = 0; k <= K_; ++k) c_[static_cast<size_t>(k)] -= o.c_[static_cast<size_t>(k)];
    return *this;
}

SeriesS& SeriesS::operator*=(const SeriesS& o) { return *this = series_mul(*this, o); }

SeriesS& SeriesS::operator*=(const Rational& c) {
    for (auto& x : c_) x *= c;
    return *this;
}

SeriesS SeriesS::operator-() const {
    SeriesS r = *this;
    for (auto& x : r.c_) x = -x;
    return r;
}

std::string SeriesS::str() const {
    std::vector<std::pair<Rational, std::string>> terms;
    for (int k = 0; k <= K_; ++k) terms.emplace_back(c_[static_cast<size_t>(k)], power('s', k));
    return format_terms(terms) + " + O(s^" + std::to_string(K_ + 1) + ")";
}

bool equal_through(const SeriesS& a, const SeriesS& b, int n) {
    if (n > a.order() || n > b.order()) throw PreconditionError("comparison beyond truncation order");
    for (int k = 0; k <= n; ++k)
        if (a.coeff(k) != b.coeff(k)) return false;
    return true;
}

SeriesS series_mul(const SeriesS& a, const SeriesS& b) {
    const int K = std::min(a.order(), b.order());
    SeriesS r(K);
    std::vector<Rational> out(static_cast<size_t>(K) + 1);
    for (int i = 0; i <= K; ++i) {
        const Rational& ai = a.coeffs()[static_cast<size_t>(i)];
        if (ai == 0) continue;
        for (int j = 0; i + j <= K; ++j) out[static_cast<size_t>(i + j)] += ai * b.coeffs()[static_cast<size_t>(j)];
    }
    return SeriesS(std::move(out), K);
}

SeriesS series_log1p(const SeriesS& a) {
    if (a.coeff(0) != 0) throw PreconditionError("series_log1p: nonzero constant term");
    const int K = a.order();
    SeriesS r(K);
    SeriesS pw = a;
    for (int k = 1; k <= K && !pw.is_zero(); ++k) {
        r += pw * make_rational(k % 2 == 1 ? 1 : -1, k);
        pw = series_mul(pw, a);
    }
    return r;
}

SeriesS series_exp(const SeriesS& a) {
    if (a.coeff(0) != 0) throw PreconditionError("series_exp: nonzero constant term");
    const int K = a.order();
    SeriesS r = SeriesS::constant(1, K);
    SeriesS term = SeriesS::constant(1, K);
    for (int k = 1; k <= K; ++k) {
        term = series_mul(term, a) * make_rational(1, k);
        if (term.is_zero()) break;
        r += term;
    }
    return r;
}

SeriesS series_pow_inv_s(const SeriesS& a) {
    if (a.valuation() < 2) throw PreconditionError("series_pow_inv_s: valuation below 2");
    // a is read as a polynomial (zero beyond its order), so the log is taken
    // one order higher before dividing by s.
    const int K = a.order();
    SeriesS lifted(a.coeffs(), K + 1);
    SeriesS log = series_log1p(lifted);
    SeriesS shifted(K);
    for (int k = 0; k <= K; ++k) shifted.set(k, log.coeff(k + 1));
    return series_exp(shifted);
}

// ---------------------------------------------------------------- PPoly

PPoly::PPoly(int K) : K_(K) {}

PPoly::PPoly(const SeriesS& constant_term) : c_{constant_term}, K_(constant_term.order()) { normalize(); }

PPoly PPoly::term(const Rational& c, int pdeg, int sdeg, int K) {
    if (pdeg < 0 || pdeg > kMaxDegree) throw PreconditionError("P-degree outside [0, 10]");
    PPoly r(K);
    r.c_.assign(static_cast<size_t>(pdeg) + 1, SeriesS(K));
    r.c_[static_cast<size_t>(pdeg)] = SeriesS::monomial(c, sdeg, K);
    r.normalize();
    return r;
}

void PPoly::normalize() {
    for (auto& s : c_)
        if (s.order() != K_) s = s.truncated(K_);
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
    if (static_cast<int>(c_.size()) - 1 > kMaxDegree) throw PreconditionError("P-degree exceeds 10");
}

int PPoly::p_degree() const { return static_cast<int>(c_.size()) - 1; }

SeriesS PPoly::coeff(int j) const {
    if (j < 0 || j > p_degree()) return SeriesS(K_);
    return c_[static_cast<size_t>(j)];
}

void PPoly::set_coeff(int j, const SeriesS& c) {
    if (j < 0 || j > kMaxDegree) throw PreconditionError("P-degree outside [0, 10]");
    if (j > p_degree()) c_.resize(static_cast<size_t>(j) + 1, SeriesS(K_));
    if (c.order() < K_) {
        *this = truncated(c.order());
    }
    c_[static_cast<size_t>(j)] = c.truncated(K_);
    normalize();
}

Rational PPoly::at(int j, int k) const { return coeff(j).coeff(k); }

PPoly PPoly::truncated(int K) const {
    if (K > K_) throw PreconditionError("cannot raise truncation order");
    PPoly r(K);
    for (const auto& s : c_) r.c_.push_back(s.truncated(K));
    r.normalize();
    return r;
}

PPoly& PPoly::operator+=(const PPoly& o) {
    if (o.K_ < K_) *this = truncated(o.K_);
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), SeriesS(K_));
    for (size_t j = 0; j < o.c_.size(); ++j) c_[j] += o.c_[j];
    normalize();
    return *this;
}

PPoly& PPoly::operator-=(const PPoly& o) { return *this += -o; }

PPoly& PPoly::operator*=(const PPoly& o) {
    const int K = std::min(K_, o.K_);
    PPoly r(K);
    if (!c_.empty() && !o.c_.empty()) {
        const size_t deg = c_.size() + o.c_.size() - 2;
        std::vector<SeriesS> out(deg + 1, SeriesS(K));
        for (size_t i = 0; i < c_.size(); ++i)
            for (size_t j = 0; j < o.c_.size(); ++j) out[i + j] += series_mul(c_[i], o.c_[j]);
        while (!out.empty() && out.back().is_zero()) out.pop_back();
        r.c_ = std::move(out);
    }
    r.normalize();
    return *this = std::move(r);
}

PPoly& PPoly::operator*=(const Rational& c) {
    for (auto& s : c_) s *= c;
    normalize();
    return *this;
}

PPoly PPoly::operator-() const {
    PPoly r = *this;
    for (auto& s : r.c_) s = -s;
    return r;
}

bool PPoly::operator==(const PPoly& o) const { return K_ == o.K_ && c_ == o.c_; }

std::string PPoly::str() const {
    std::vector<std::pair<Rational, std::string>> terms;
    for (int k = 0; k <= K_; ++k)
        for (int j = 0; j <= p_degree(); ++j) {
            std::string mono = power('P', j);
            std::string sp = power('s', k);
            if (!mono.empty() && !sp.empty()) mono += "*";
            terms.emplace_back(at(j, k), mono + sp);
        }
    return format_terms(terms) + " + O(s^" + std::to_string(K_ + 1) + ")";
}

SeriesS ppoly_subst(const PPoly& f, const SeriesS& g) {
    const int K = std::min(f.order(), g.order());
    SeriesS acc(K);
    for (int j = f.p_degree(); j >= 0; --j) acc = series_mul(acc, g) + f.coeff(j).truncated(K);
    return acc;
}

// ---------------------------------------------------------------- interpolation

PolyVar lagrange_interpolate(const std::vector<std::pair<Rational, Rational>>& points, int degree_bound, Var v) {
    if (degree_bound < 0) throw PreconditionError("negative degree bound");
    const size_t n = static_cast<size_t>(degree_bound) + 1;
    if (points.size() < n) throw PreconditionError("too few interpolation points");
    for (size_t i = 0; i < points.size(); ++i)
        for (size_t j = i + 1; j < points.size(); ++j)
            if (points[i].first == points[j].first) throw PreconditionError("duplicate interpolation node");

    // Newton divided differences on the first n points.
    std::vector<Rational> dd(n);
    for (size_t i = 0; i < n; ++i) dd[i] = points[i].second;
    for (size_t lvl = 1; lvl < n; ++lvl)
        for (size_t i = n - 1; i >= lvl; --i)
            dd[i] = (dd[i] - dd[i - 1]) / (points[i].first - points[i - lvl].first);

    PolyVar result(v);
    PolyVar basis = PolyVar::constant(1, v);
    for (size_t i = 0; i < n; ++i) {
        result += basis * dd[i];
        basis *= PolyVar({-points[i].first, Rational(1)}, v);
    }
    for (size_t i = n; i < points.size(); ++i) {
        if (result(points[i].first) != points[i].second) {
            throw NotPolynomialError("held-out point x=" + points[i].first.get_str() + " gives " +
                                     result(points[i].first).get_str() + ", expected " +
                                     points[i].second.get_str() + " (degree bound " +
                                     std::to_string(degree_bound) + ")");
        }
    }
    return result;
}

}  // namespace pcexp::qalg
