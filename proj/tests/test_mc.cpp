#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pcexp/mc.hpp"
#include "pcexp/oracle.hpp"

using namespace pcexp;
using namespace pcexp::mc;
using qalg::make_rational;
using walks::LatticePoint;

namespace {

Rational R(long n, long d = 1) { return make_rational(n, d); }

// Full open graph of a realized cluster, vertices numbered slice by slice.
struct Flat {
    oracle::OpenGraph g;
    std::vector<int> offset;
};

Flat flatten(const ClusterSample& c) {
    Flat f;
    for (const auto& s : c.slices) {
        f.offset.push_back(f.g.vertices);
        f.g.vertices += static_cast<int>(s.sites.size());
    }
    for (size_t t = 1; t < c.slices.size(); ++t)
        for (size_t i = 0; i < c.slices[t].in_bonds.size(); ++i)
            for (const auto& b : c.slices[t].in_bonds[i])
                f.g.edges.emplace_back(f.offset[t - 1] + b.parent, f.offset[t] + static_cast<int>(i));
    return f;
}

// |estimate - exact| within k standard errors (plus a floor for tiny errors).
bool agrees(const Estimate& e, const Rational& exact, double k = 5) {
    return std::abs(e.mean - exact.get_d()) <= k * e.std_err + 1e-9;
}

Rational exact_slice_sum(int d, int t, const Rational& p, bool marked) {
    const auto cone = oracle::Cone::build(d, t);
    Rational sum = 0;
    for (int idx : cone.slices()[static_cast<size_t>(t)]) {
        const LatticePoint& x = cone.sites()[static_cast<size_t>(idx)];
        if (!marked) {
            sum += oracle::event_prob_exact(cone, oracle::EventSpec::double_conn(x), p);
            continue;
        }
        for (const auto& s : walks::unit_steps(d))
            sum += oracle::event_prob_exact(
                cone, oracle::EventSpec::marked_first_bond(LatticePoint::from_dense(s, 1), x, x), p);
    }
    return sum;
}

}  // namespace

TEST_CASE("site packing round trip") {
    for (const walks::Dense& x : {walks::Dense{0, 0, 0}, walks::Dense{3, 0, -2}, walks::Dense{0, -200, 0},
                                  walks::Dense{1, 1, 1}}) {
        CHECK(unpack_site(pack_site(x), 3) == x);
    }
    CHECK(pack_site({0, 0, 0}).empty());
    CHECK(pack_site({0, 1}) != pack_site({1, 0}));
}

TEST_CASE("bond thresholds") {
    CHECK_FALSE(BondThreshold(R(0)).open(0));
    CHECK(BondThreshold(R(1)).open(~static_cast<unsigned __int128>(0)));
    const BondThreshold half(R(1, 2));
    CHECK(half.open((static_cast<unsigned __int128>(1) << 127) - 1));
    CHECK_FALSE(half.open(static_cast<unsigned __int128>(1) << 127));
    CHECK_THROWS_AS(BondThreshold(R(3, 2)), PreconditionError);

    // Uniforms are stable and depend on every argument.
    const auto u = bond_uniform(1, 2, 3, pack_site({1, 0}), 0);
    CHECK(u == bond_uniform(1, 2, 3, pack_site({1, 0}), 0));
    CHECK(u != bond_uniform(2, 2, 3, pack_site({1, 0}), 0));
    CHECK(u != bond_uniform(1, 3, 3, pack_site({1, 0}), 0));
    CHECK(u != bond_uniform(1, 2, 4, pack_site({1, 0}), 0));
    CHECK(u != bond_uniform(1, 2, 3, pack_site({0, 1}), 0));
    CHECK(u != bond_uniform(1, 2, 3, pack_site({1, 0}), 1));
}

TEST_CASE("results do not depend on the thread count") {
    SimConfig cfg{3, R(3, 2), 4, 600, 11, 1};
    const Estimate one = estimate_pi0_sum(cfg, 4);
    cfg.threads = 3;
    const Estimate three = estimate_pi0_sum(cfg, 4);
    CHECK(one.raw_count == three.raw_count);
    CHECK(one.mean == three.mean);
    CHECK(one.std_err == three.std_err);
    CHECK(one.n == 600);
}

TEST_CASE("clusters are monotone in p under common random numbers") {
    for (long r = 0; r < 40; ++r) {
        const auto small = grow_cluster({2, R(1), 6, 1, 5, 1}, r);
        const auto large = grow_cluster({2, R(3, 2), 6, 1, 5, 1}, r);
        for (size_t t = 0; t < small.slices.size(); ++t) {
            REQUIRE(t < large.slices.size());
            for (const auto& key : small.slices[t].sites) CHECK(large.slices[t].index.count(key) == 1);
        }
    }
}

TEST_CASE("flow double connection agrees with path enumeration") {
    int positives = 0;
    for (long r = 0; r < 200; ++r) {
        const auto c = grow_cluster({2, R(2), 5, 1, 3, 1}, r);
        const Flat f = flatten(c);
        for (size_t t = 1; t < c.slices.size(); ++t)
            for (size_t i = 0; i < c.slices[t].sites.size(); ++i) {
                const int x = f.offset[t] + static_cast<int>(i);
                const bool flow = doubly_connected(c, static_cast<int>(t), static_cast<int>(i));
                CHECK(flow == oracle::disjoint_paths_exhaustive(f.g, 0, x, 0, x));
                positives += flow;
            }
    }
    CHECK(positives > 0);
}

TEST_CASE("calibration against exact enumeration") {
    // d = 1, p = 1: each bond open with probability 1/2.
    SimConfig cfg{1, R(1), 4, 40000, 17, 0};
    const auto cone1 = oracle::Cone::build(1, 4);
    for (const LatticePoint& x : {LatticePoint::origin(2), LatticePoint::from_dense({2}, 4)}) {
        const Rational exact = oracle::event_prob_exact(cone1, oracle::EventSpec::connect(LatticePoint::origin(), x), R(1));
        CHECK(agrees(estimate_tau(cfg, x), exact));
    }
    CHECK(agrees(estimate_pi0_sum(cfg, 2), exact_slice_sum(1, 2, R(1), false)));
    CHECK(agrees(estimate_pi0_sum(cfg, 4), exact_slice_sum(1, 4, R(1), false)));

    // d = 2 at p = 3/2: slice sums and the marked sums.
    SimConfig cfg2{2, R(3, 2), 3, 40000, 23, 0};
    CHECK(agrees(estimate_pi0_sum(cfg2, 2), exact_slice_sum(2, 2, R(3, 2), false)));
    CHECK(agrees(estimate_marked_sum(cfg2, 2), exact_slice_sum(2, 2, R(3, 2), true)));
    CHECK(agrees(estimate_pi0_sum(cfg2, 3), exact_slice_sum(2, 3, R(3, 2), false)));
    CHECK(agrees(estimate_marked_sum(cfg2, 3), exact_slice_sum(2, 3, R(3, 2), true)));
}

TEST_CASE("tail is the sum of slice counts") {
    SimConfig cfg{2, R(3, 2), 5, 300, 9, 1};
    long long total = 0;
    for (int t = 2; t <= 5; ++t) {
        SimConfig c = cfg;
        total += estimate_pi0_sum(c, t).raw_count;
    }
    CHECK(estimate_tail(cfg, 2, 5).raw_count == total);
    CHECK_THROWS_AS(estimate_tail(cfg, 4, 6), PreconditionError);
    CHECK_THROWS_AS(estimate_marked_sum(cfg, 4), PreconditionError);
}

TEST_CASE("survival") {
    CHECK(estimate_survival({2, R(4), 30, 10, 1, 1}).mean == 1);
    CHECK(estimate_survival({2, R(0), 3, 10, 1, 1}).mean == 0);
    const double early = estimate_survival({2, R(1), 5, 2000, 4, 0}).mean;
    const double late = estimate_survival({2, R(1), 20, 2000, 4, 0}).mean;
    CHECK(late <= early);
    // A capped slice counts as surviving.
    const auto big = grow_cluster({4, R(8), 10, 1, 1, 1}, 0, 100);
    CHECK(big.capped);
    CHECK(critical_survival_threshold(8, 200) == doctest::Approx(2.0 / (200 * 15.0 / 16)));
}

TEST_CASE("bisection") {
    // d = 1: the critical p is near 1.29.
    const double thr = critical_survival_threshold(1, 40);
    const auto r = bisect_pc(1, 40, thr, 1.0 / 16, 3000, 2, 0);
    CHECK(r.p_high - r.p_low <= R(1, 16));
    CHECK(r.history.size() == 2 + 4);
    CHECK(r.p_low >= 1);
    CHECK(r.p_high <= 2);
    CHECK(r.p_low < R(3, 2));
    CHECK(r.p_high > R(9, 8));
    for (const auto& step : r.history)
        if (step.p > r.p_high) CHECK(step.survival.mean >= thr);
    CHECK_THROWS_AS(bisect_pc(1, 40, 1e-12, 0.1, 100), PreconditionError);
    CHECK_THROWS_AS(bisect_pc(1, 40, 1.5, 0.1, 100), PreconditionError);
}

TEST_CASE("sequential survival stops early only far from the threshold") {
    SimConfig cfg{2, R(2), 20, 20000, 3, 1};
    const Estimate far = survival_sequential(cfg, 0.01);
    CHECK(far.n == 2 * kSurvivalBatch);
    cfg.threads = 2;
    CHECK(survival_sequential(cfg, 0.01).raw_count == far.raw_count);
    const Estimate near = survival_sequential(cfg, far.mean);
    CHECK(near.n == 20000);
}

TEST_CASE("standard error scales with the replica count") {
    const Estimate a = estimate_pi0_sum({2, R(3, 2), 2, 20000, 8, 0}, 2);
    const Estimate b = estimate_pi0_sum({2, R(3, 2), 2, 40000, 8, 0}, 2);
    CHECK(a.std_err / b.std_err == doctest::Approx(std::sqrt(2.0)).epsilon(0.1));
}
