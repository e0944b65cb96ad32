// Exact arithmetic: rationals, dense polynomials, truncated series in s,
// polynomials in P with series coefficients, Lagrange interpolation.
#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "pcexp/errors.hpp"

namespace pcexp::qalg {

// GMP keeps results of arithmetic in canonical form; values built from a
// raw numerator/denominator pair go through make_rational.
using Rational = mpq_class;

Rational make_rational(long num, long den = 1);
Rational parse_rational(std::string_view text);  // "a", "a/b", "-a/b"
std::string to_string(const Rational& r);

inline constexpr int kDefaultOrder = 6;

enum class Var { s, d, q };
char var_name(Var v);

class PolyVar {
public:
    explicit PolyVar(Var v = Var::s) : var_(v) {}
    PolyVar(std::vector<Rational> coeffs, Var v);

    static PolyVar constant(const Rational& c, Var v = Var::s);
    static PolyVar monomial(const Rational& c, int k, Var v = Var::s);

    Var var() const { return var_; }
    int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for zero
    bool is_zero() const { return c_.empty(); }
    const std::vector<Rational>& coeffs() const { return c_; }
    Rational coeff(int k) const;

    Rational operator()(const Rational& x) const;

    PolyVar& operator+=(const PolyVar& o);
    PolyVar& operator-=(const PolyVar& o);
    PolyVar& operator*=(const PolyVar& o);
    PolyVar& operator*=(const Rational& c);
    friend PolyVar operator+(PolyVar a, const PolyVar& b) { return a += b; }
    friend PolyVar operator-(PolyVar a, const PolyVar& b) { return a -= b; }
    friend PolyVar operator*(PolyVar a, const PolyVar& b) { return a *= b; }
    friend PolyVar operator*(PolyVar a, const Rational& c) { return a *= c; }
    friend PolyVar operator*(const Rational& c, PolyVar a) { return a *= c; }
    PolyVar operator-() const;
    bool operator==(const PolyVar& o) const { return var_ == o.var_ && c_ == o.c_; }

    std::string str() const;

private:
    void check_var(const PolyVar& o) const;
    void trim();

    std::vector<Rational> c_;
    Var var_;
};

class SeriesS {
public:
    explicit SeriesS(int K = kDefaultOrder);
    SeriesS(std::vector<Rational> coeffs, int K);

    static SeriesS constant(const Rational& c, int K = kDefaultOrder);
    static SeriesS monomial(const Rational& c, int k, int K = kDefaultOrder);
    static SeriesS from_poly(const PolyVar& p, int K = kDefaultOrder);

    int order() const { return K_; }
    const std::vector<Rational>& coeffs() const { return c_; }
    Rational coeff(int k) const;
    void set(int k, const Rational& v);
    void add(int k, const Rational& v);

    int valuation() const;  // order()+1 for the zero series
    bool is_zero() const { return valuation() > K_; }
    SeriesS truncated(int K) const;
    PolyVar to_poly() const;

    Rational eval(const Rational& s) const;
    double eval_double(double s) const;

    SeriesS& operator+=(const SeriesS& o);
    SeriesS& operator-=(const SeriesS& o);
    SeriesS& operator*=(const SeriesS& o);
    SeriesS& operator*=(const Rational& c);
    friend SeriesS operator+(SeriesS a, const SeriesS& b) { return a += b; }
    friend SeriesS operator-(SeriesS a, const SeriesS& b) { return a -= b; }
    friend SeriesS operator*(SeriesS a, const SeriesS& b) { return a *= b; }
    friend SeriesS operator*(SeriesS a, const Rational& c) { return a *= c; }
    friend SeriesS operator*(const Rational& c, SeriesS a) { return a *= c; }
    SeriesS operator-() const;
    bool operator==(const SeriesS& o) const { return K_ == o.K_ && c_ == o.c_; }

    std::string str() const;

private:
    std::vector<Rational> c_;
    int K_;
};

// True if a and b agree in every coefficient of order <= n.
bool equal_through(const SeriesS& a, const SeriesS& b, int n);

SeriesS series_mul(const SeriesS& a, const SeriesS& b);
SeriesS series_log1p(const SeriesS& a);
SeriesS series_exp(const SeriesS& a);
// (1+a)^(1/s), i.e. exp(log(1+a)/s).
SeriesS series_pow_inv_s(const SeriesS& a);

// Polynomial in the formal symbol P with SeriesS coefficients.
class PPoly {
public:
    static constexpr int kMaxDegree = 10;

    explicit PPoly(int K = kDefaultOrder);
    PPoly(const SeriesS& constant_term);  // NOLINT: series embed as P-degree 0

    // c * P^pdeg * s^sdeg
    static PPoly term(const Rational& c, int pdeg, int sdeg, int K = kDefaultOrder);
    static PPoly P(int K = kDefaultOrder) { return term(1, 1, 0, K); }

    int order() const { return K_; }
    int p_degree() const;
    SeriesS coeff(int j) const;
    void set_coeff(int j, const SeriesS& c);

    PPoly truncated(int K) const;
    bool is_zero() const { return p_degree() < 0; }
    // Coefficient of P^j s^k.
    Rational at(int j, int k) const;

    PPoly& operator+=(const PPoly& o);
    PPoly& operator-=(const PPoly& o);
    PPoly& operator*=(const PPoly& o);
    PPoly& operator*=(const Rational& c);
    friend PPoly operator+(PPoly a, const PPoly& b) { return a += b; }
    friend PPoly operator-(PPoly a, const PPoly& b) { return a -= b; }
    friend PPoly operator*(PPoly a, const PPoly& b) { return a *= b; }
    friend PPoly operator*(PPoly a, const Rational& c) { return a *= c; }
    friend PPoly operator*(const Rational& c, PPoly a) { return a *= c; }
    PPoly operator-() const;
    bool operator==(const PPoly& o) const;

    std::string str() const;

private:
    void normalize();

    std::vector<SeriesS> c_;
    int K_;
};

SeriesS ppoly_subst(const PPoly& f, const SeriesS& g);

// Polynomial of degree <= degree_bound through the first degree_bound+1
// points; every further point must lie on it or NotPolynomialError is thrown.
PolyVar lagrange_interpolate(const std::vector<std::pair<Rational, Rational>>& points,
                             int degree_bound, Var v = Var::s);

nlohmann::json to_json(const Rational& r);
nlohmann::json to_json(const SeriesS& a);
nlohmann::json to_json(const PPoly& f);
Rational rational_from_json(const nlohmann::json& j);
SeriesS series_from_json(const nlohmann::json& j);
PPoly ppoly_from_json(const nlohmann::json& j);

}  // namespace pcexp::qalg
