// Lace-expansion coefficient tables, their sums, and the p_c series.
#pragma once

#include <string>
#include <vector>

#include "pcexp/qalg.hpp"
#include "pcexp/walks.hpp"

namespace pcexp::laceexp {

using qalg::PolyVar;
using qalg::PPoly;
using qalg::Rational;
using qalg::SeriesS;
using walks::PointType;

// stated: the stated per-type values and multiplicities.
// recomputed: per-type values assembled from catalogue diagrams, orbit
// counts as multiplicities.
enum class Mode { stated, recomputed };
std::string to_string(Mode m);
Mode parse_mode(const std::string& text);  // "stated" | "recomputed"

// Per-time sums are kept through this order in s.
inline constexpr int kSumOrder = 4;

struct Contribution {
    std::string label;  // catalogue name, correction name or "printed"
    Rational prefactor;
    int p_exponent = 0;
};

struct PiEntry {
    int n = 0;
    int time = 0;
    PointType type;
    PPoly value;
    Mode mode = Mode::stated;
    int through = 0;  // value is trusted through this order in s
    std::vector<Contribution> provenance;
};

// Types covered at (n, time); throws PreconditionError outside
// n in {0,1} x time in {2,3,4} and n = 2 x time in {3,4}.
std::vector<PointType> covered_types(int n, int time);
PiEntry pi_type_table(int n, int time, const PointType& type, Mode mode);

// Number of points of the type, as a polynomial in d.
PolyVar multiplicity(int time, const PointType& type, Mode mode);
// value * m(d) with d = 1/(2s); the result order drops by deg m.
PPoly weight_by_multiplicity(const PPoly& value, const PolyVar& m);
// Sum over covered types, truncated at kSumOrder.
PPoly pi_time_sum(int n, int time, Mode mode);
PPoly printed_time_sum(int n, int time);

struct PiTotals {
    PPoly pi0;  // sum over t = 2,3,4 of Pi^(0)
    PPoly pi1;  // sum over t = 2,3,4 of Pi^(1)
    PPoly pi2;  // sum over t = 3,4 of Pi^(2)
    PPoly total() const { return pi0 - pi1 + pi2; }
};
PiTotals pi_totals(Mode mode);
// The three sums exactly as stated, including the -111/8 s^4 term of pi0.
PiTotals printed_pi_totals();

enum class Stage { one_round_form, final };
struct PcSeries {
    SeriesS series;
    Stage stage = Stage::final;
};

// 1 - P * pi_total(P), before substituting P.
PPoly one_round_form(const PPoly& pi_total);
PPoly printed_one_round_form();
SeriesS printed_pc_series();
// Iterates p <- 1 - p * pi_total(p) from p = 1 until stationary through
// `order`; throws PreconditionError if pi_total does not vanish at s = 0 or
// if the iteration has not settled after order + 1 rounds.
PcSeries pc_fixed_point(const PPoly& pi_total, int order);

// P(Bin(2d, q) >= 2) with q = (p/2d)^2: double connection (o,0) => (o,2).
Rational binomial_pi0_origin(const Rational& p, int d);
// Same event for generic d at fixed p, through `order`, via (1-q)^(1/s).
SeriesS binomial_pi0_origin_series(const Rational& p, int order);
// Generic d with formal P, through `order` <= 5.
PPoly binomial_pi0_origin_generic(int order);
// E[X 1{X >= 2}] for X ~ Bin(2d, q): the sum over first bonds of the
// marked-bond double connection to (o,2).
Rational marked_sum_origin(const Rational& p, int d);
PPoly marked_sum_origin_generic(int order);

// a and b agree through s^n once P is a series 1 + O(s^2).
bool equivalent_at_pc(const PPoly& a, const PPoly& b, int n);
// Lowest order at which equivalent_at_pc fails, or n + 1.
int first_pc_difference(const PPoly& a, const PPoly& b, int n);
// Value at P = 1.
SeriesS at_p_one(const PPoly& f);

}  // namespace pcexp::laceexp
