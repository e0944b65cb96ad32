// Nearest-neighbour step distribution D, its convolutions, point types.
#pragma once

#include <compare>
#include <functional>
#include <initializer_list>
#include <map>
#include <string>
#include <vector>

#include "pcexp/qalg.hpp"

namespace pcexp::walks {

using qalg::PolyVar;
using qalg::Rational;

using Dense = std::vector<int>;

struct LatticePoint {
    std::map<int, int> coords;  // coordinate index -> nonzero displacement
    int time = 0;

    static LatticePoint origin(int time = 0) { return {{}, time}; }
    static LatticePoint from_dense(const Dense& x, int time);
    Dense to_dense(int d) const;  // throws if an index is >= d
    int l1() const;
    bool reachable() const;  // |x|_1 <= t and same parity

    auto operator<=>(const LatticePoint&) const = default;
};

struct PointType {
    std::vector<int> shape;  // sorted descending, entries >= 1

    PointType() = default;
    PointType(std::initializer_list<int> s);
    explicit PointType(std::vector<int> s);

    int entries() const { return static_cast<int>(shape.size()); }
    int l1() const;
    std::string name() const;  // "o", "[1,1]", "[2,1]"
    // Shape entry i placed on coordinate i.
    LatticePoint representative(int time) const;

    auto operator<=>(const PointType&) const = default;
};

PointType canonical_type(const LatticePoint& x);

// Number of points of the type in Z^d as a polynomial in d.
PolyVar orbit_count(const PointType& t);

// D^{*n}(x) in dimension d: (n-step walks from 0 to x) / (2d)^n.
Rational dconv_concrete(int n, const LatticePoint& x, int d);

// f(d) sampled at d = d_min, d_min+1, ... and interpolated in s = 1/(2d)
// with degree <= degree; one extra dimension is held out as a check.
PolyVar generic_in_s(const std::function<Rational(int)>& f, int degree, int d_min);

// D^{*n} at any point of type t, as a polynomial in s.
PolyVar dconv_generic(int n, const PointType& t);

// sum over time-1 u of D(x-u)^m D(u)^n for x of type t at time 2.
PolyVar power_sum_generic(int m, int n, const PointType& t);

// Types with |x|_1 <= n and |x|_1 = n mod 2.
std::vector<PointType> types_at(int n);

// All points y with |y|_1 == 1 in dimension d.
std::vector<Dense> unit_steps(int d);

}  // namespace pcexp::walks
