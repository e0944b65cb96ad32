#include "pcexp/crosscheck.hpp"

#include <cmath>

#include "pcexp/laceexp.hpp"
#include "pcexp/oracle.hpp"

namespace pcexp::crosscheck {

using qalg::make_rational;
using walks::LatticePoint;

namespace {

bool within(const mc::Estimate& e, const Rational& exact, double k) {
    return std::abs(e.mean - exact.get_d()) <= k * e.std_err;
}

nlohmann::json row(const std::string& what, const mc::Estimate& e, const Rational& exact, double k) {
    return {{"statistic", what},
            {"estimate", to_json(e)},
            {"exact", qalg::to_string(exact)},
            {"exact_value", exact.get_d()},
            {"z", e.std_err > 0 ? (e.mean - exact.get_d()) / e.std_err : 0.0},
            {"pass", within(e, exact, k)}};
}

}  // namespace

nlohmann::json to_json(const mc::Estimate& e) {
    return {{"mean", e.mean}, {"stderr", e.std_err}, {"n", e.n}, {"raw_count", e.raw_count}};
}

Rational truncated_pc(int d) {
    if (d < 1) throw PreconditionError("dimension must be >= 1");
    return laceexp::printed_pc_series().eval(make_rational(1, 2L * d));
}

Outcome mc_calibration(long replicas, std::uint64_t seed, double k, int threads) {
    Outcome out{"mc_calibration_d1", true, {{"replicas", replicas}, {"seed", seed}, {"k", k}}};
    const auto cone = oracle::Cone::build(1, 4);
    auto slice_sum = [&](int t, const Rational& p, bool marked) {
        Rational sum = 0;
        for (int idx : cone.slices()[static_cast<size_t>(t)]) {
            const LatticePoint& x = cone.sites()[static_cast<size_t>(idx)];
            if (!marked) {
                sum += oracle::event_prob_exact(cone, oracle::EventSpec::double_conn(x), p);
                continue;
            }
            for (const auto& s : walks::unit_steps(1))
                sum += oracle::event_prob_exact(
                    cone, oracle::EventSpec::marked_first_bond(LatticePoint::from_dense(s, 1), x, x), p);
        }
        return sum;
    };
    nlohmann::json rows = nlohmann::json::array();
    for (const Rational& p : {make_rational(1, 2), make_rational(1)}) {
        const mc::SimConfig cfg{1, p, 4, replicas, seed, threads};
        const std::string at = " p=" + qalg::to_string(p);
        const LatticePoint x = LatticePoint::origin(2);
        rows.push_back(row("tau(o,2)" + at, mc::estimate_tau(cfg, x),
                           oracle::event_prob_exact(cone, oracle::EventSpec::connect(LatticePoint::origin(), x), p), k));
        for (int t = 1; t <= 4; ++t)
            rows.push_back(row("pi0_sum t=" + std::to_string(t) + at, mc::estimate_pi0_sum(cfg, t),
                               slice_sum(t, p, false), k));
        rows.push_back(row("marked_sum t=2" + at, mc::estimate_marked_sum(cfg, 2), slice_sum(2, p, true), k));
    }
    for (const auto& r : rows) out.pass = out.pass && r["pass"].get<bool>();
    out.detail["rows"] = rows;
    return out;
}

Rational exact_t2_double_sum(int d, const Rational& p) {
    Rational sum = 0;
    for (const auto& type : walks::types_at(2)) {
        const Rational count = walks::orbit_count(type)(Rational(d));
        if (count == 0) continue;
        sum += count * oracle::t2_factorized_prob(d, oracle::EventSpec::double_conn(type.representative(2)), p);
    }
    return sum;
}

Outcome large_d_t2_sum(int d, long replicas, std::uint64_t seed, double k, int threads) {
    const Rational p = truncated_pc(d);
    const mc::Estimate e = mc::estimate_pi0_sum({d, p, 2, replicas, seed, threads}, 2);
    const Rational exact = exact_t2_double_sum(d, p);
    Outcome out{"large_d_t2_sum", within(e, exact, k), row("pi0_sum t=2", e, exact, k)};
    out.detail["d"] = d;
    out.detail["p"] = qalg::to_string(p);
    out.detail["seed"] = seed;
    out.detail["k"] = k;
    return out;
}

Outcome large_d_bisection(int d, int T, double tol, long replicas, std::uint64_t seed, double band_factor,
                          int threads) {
    const double threshold = mc::critical_survival_threshold(d, T);
    const auto r = mc::bisect_pc(d, T, threshold, tol, replicas, seed, threads);
    const Rational s = make_rational(1, 2L * d);
    const double series = truncated_pc(d).get_d();
    const double band = band_factor * Rational(make_rational(129, 8) * s * s * s * s).get_d();
    const double mid = Rational((r.p_low + r.p_high) / 2).get_d();
    nlohmann::json history = nlohmann::json::array();
    for (const auto& h : r.history) history.push_back({{"p", qalg::to_string(h.p)}, {"survival", to_json(h.survival)}});
    return {"large_d_bisection", std::abs(mid - series) <= band,
            {{"d", d},
             {"T", T},
             {"threshold", threshold},
             {"tol", tol},
             {"max_replicas", replicas},
             {"seed", seed},
             {"p_low", qalg::to_string(r.p_low)},
             {"p_high", qalg::to_string(r.p_high)},
             {"p_mid", mid},
             {"series", series},
             {"band", band},
             {"survival_at_mid", to_json(r.at_mid)},
             {"history", history}}};
}

Outcome tail_bound(int d, int t_min, int t_max, long replicas, std::uint64_t seed, double ratio, int threads) {
    const Rational p = truncated_pc(d);
    const mc::Estimate e = mc::estimate_tail({d, p, t_max, replicas, seed, threads}, t_min, t_max);
    const Rational s = make_rational(1, 2L * d);
    const Rational s4 = laceexp::at_p_one(laceexp::pi_time_sum(0, 2, laceexp::Mode::stated)).coeff(4);
    const double bound = ratio * Rational(s4 * s * s * s * s).get_d();
    return {"tail_bound", e.mean < bound,
            {{"d", d},
             {"p", qalg::to_string(p)},
             {"slices", std::to_string(t_min) + ".." + std::to_string(t_max)},
             {"estimate", to_json(e)},
             {"s4_coefficient", qalg::to_string(s4)},
             {"bound", bound},
             {"ratio_to_s4_term", e.mean / (bound / ratio)},
             {"seed", seed}}};
}

}  // namespace pcexp::crosscheck
