// Monte Carlo for oriented percolation: lazy cluster growth and estimators.
#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "pcexp/qalg.hpp"
#include "pcexp/walks.hpp"

namespace pcexp::mc {

using qalg::Rational;
using walks::LatticePoint;

struct SimConfig {
    int d = 1;
    Rational p = 1;
    int T = 4;
    long replicas = 1000;
    std::uint64_t seed = 1;
    int threads = 0;  // 0: hardware concurrency
};

// Per-bond probability q = p/(2d) as floor(q * 2^128); a bond is open when
// its 128-bit uniform falls below it.
class BondThreshold {
public:
    explicit BondThreshold(const Rational& q);
    bool open(unsigned __int128 u) const { return always_ || u < t_; }

private:
    unsigned __int128 t_ = 0;
    bool always_ = false;
};

// Uniform for bond (site, direction) of one replica: a pure function of its
// arguments, so every bond is sampled consistently however the cluster is
// explored.
unsigned __int128 bond_uniform(std::uint64_t seed, long replica, int time, const std::string& site_key, int direction);

// Sparse packing of a coordinate vector: (index, value) pairs of the nonzero
// entries, 16 bits each.
std::string pack_site(const walks::Dense& x);
walks::Dense unpack_site(const std::string& key, int d);

struct InBond {
    int parent = 0;     // index in the previous slice
    int direction = 0;  // index into walks::unit_steps(d)
};

struct Slice {
    std::vector<std::string> sites;
    std::vector<std::vector<InBond>> in_bonds;  // open bonds from occupied parents
    std::unordered_map<std::string, int> index;
};

struct ClusterSample {
    int d = 1;
    std::vector<Slice> slices;  // slices[t] for t = 0..horizon reached
    bool capped = false;        // growth stopped at the slice cap

    int find(const LatticePoint& x) const;  // -1 if not occupied
};

// Breadth-first realization up to time T. With slice_cap > 0, growth stops
// once a slice exceeds that many sites and the sample is marked capped.
ClusterSample grow_cluster(const SimConfig& cfg, long replica, long slice_cap = 0);

// Slice cap used for survival: a slice this large is counted as surviving.
// Near criticality such a slice dies out within 200 steps with probability
// about exp(-2 * 1000 / 200).
inline constexpr long kSurvivalSliceCap = 1000;

struct Estimate {
    double mean = 0;
    double std_err = 0;  // sample standard deviation / sqrt(n)
    long n = 0;
    long long raw_count = 0;  // total of the per-replica counts
};

// Per-replica statistics on a realized cluster.
bool doubly_connected(const ClusterSample& c, int t, int site);
long pi0_count(const ClusterSample& c, int t);
long marked_count(const ClusterSample& c, int t);

Estimate estimate_tau(const SimConfig& cfg, const LatticePoint& x);
Estimate estimate_pi0_sum(const SimConfig& cfg, int t);
Estimate estimate_marked_sum(const SimConfig& cfg, int t);  // t in {2, 3}
Estimate estimate_tail(const SimConfig& cfg, int t_min, int t_max);
Estimate estimate_survival(const SimConfig& cfg);  // slice T reached

// 2 / (sigma^2 T) with sigma^2 = 1 - 1/(2d): survival to time T of a
// critical branching process with the one-step offspring variance.
double critical_survival_threshold(int d, int T);

// Survival in batches of kSurvivalBatch replicas, stopping early once the
// threshold is more than kSurvivalStopSigmas standard errors away. Batches
// are fixed replica ranges, so the result depends only on the seed.
inline constexpr long kSurvivalBatch = 2000;
inline constexpr double kSurvivalStopSigmas = 6;
Estimate survival_sequential(const SimConfig& cfg, double threshold);

struct BisectStep {
    Rational p;
    Estimate survival;
};

struct BisectResult {
    Rational p_low;
    Rational p_high;
    Estimate at_mid;
    std::vector<BisectStep> history;
};

// Bisection on p in [1, 2] of the finite-horizon survival probability,
// with common random numbers; replicas is the per-step maximum. A
// finite-size heuristic, not a controlled estimate of p_c.
BisectResult bisect_pc(int d, int T, double survival_threshold, double tol, long replicas, std::uint64_t seed = 1,
                       int threads = 0);

}  // namespace pcexp::mc
