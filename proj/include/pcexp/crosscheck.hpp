// Seeded Monte Carlo cross-checks against exact values and the p_c series.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "pcexp/mc.hpp"

namespace pcexp::crosscheck {

using qalg::Rational;

struct Outcome {
    std::string name;
    bool pass = false;
    nlohmann::json detail;
};

// Truncated series 1 + s^2 + 7/2 s^3 + 129/8 s^4 at s = 1/(2d).
Rational truncated_pc(int d);

// d = 1, p in {1/2, 1}: tau to (o,2), Pi0 slice sums t = 1..4 and the
// marked sum at t = 2, each within k standard errors of the exact value.
Outcome mc_calibration(long replicas, std::uint64_t seed, double k = 4, int threads = 0);

// Exact sum of double-connection probabilities over the t = 2 slice in
// dimension d, by point type.
Rational exact_t2_double_sum(int d, const Rational& p);

// MC sum over the t = 2 slice at the truncated p_c versus the exact value.
Outcome large_d_t2_sum(int d, long replicas, std::uint64_t seed, double k = 3, int threads = 0);

// Finite-horizon bisection at the critical survival threshold; passes when
// the bracket midpoint lies within band_factor * (129/8) s^4 of the series.
Outcome large_d_bisection(int d, int T, double tol, long replicas, std::uint64_t seed, double band_factor = 5,
                          int threads = 0);

// MC sum over slices t_min..t_max at the truncated p_c versus ratio times
// the s^4 coefficient of the t = 2 sum.
Outcome tail_bound(int d, int t_min, int t_max, long replicas, std::uint64_t seed, double ratio = 0.2,
                   int threads = 0);

nlohmann::json to_json(const mc::Estimate& e);

}  // namespace pcexp::crosscheck
