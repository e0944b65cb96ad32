#include "pcexp/mc.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "pcexp/oracle.hpp"

namespace pcexp::mc {

namespace {

std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

struct Sums {
    long long total = 0;
    long long squares = 0;
    long n = 0;
    void add(long long v) {
        total += v;
        squares += v * v;
        ++n;
    }
    void merge(const Sums& o) {
        total += o.total;
        squares += o.squares;
        n += o.n;
    }
};

Estimate finish(const Sums& s) {
    Estimate e;
    e.n = s.n;
    e.raw_count = s.total;
    if (s.n == 0) return e;
    const long double mean = static_cast<long double>(s.total) / s.n;
    e.mean = static_cast<double>(mean);
    if (s.n > 1) {
        const long double var = (static_cast<long double>(s.squares) - s.n * mean * mean) / (s.n - 1);
        e.std_err = static_cast<double>(std::sqrt(std::max<long double>(var, 0) / s.n));
    }
    return e;
}

// Replicas [begin, end) split into contiguous blocks; integer sums are
// merged in block order, so the result does not depend on the thread count.
template <class F>
Sums sum_replicas(int threads, long begin, long end, F per_replica) {
    const long count = end - begin;
    const long workers = std::max<long>(
        1, std::min<long>(count, threads > 0 ? threads : std::max(1u, std::thread::hardware_concurrency())));
    std::vector<Sums> partial(static_cast<size_t>(workers));
    auto work = [&](long w) {
        const long lo = begin + count * w / workers, hi = begin + count * (w + 1) / workers;
        for (long r = lo; r < hi; ++r) partial[static_cast<size_t>(w)].add(per_replica(r));
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (long w = 0; w < workers; ++w) pool.emplace_back(work, w);
        for (auto& t : pool) t.join();
    }
    Sums all;
    for (const auto& p : partial) all.merge(p);
    return all;
}

template <class F>
Estimate run_replicas(const SimConfig& cfg, F per_replica) {
    if (cfg.replicas < 1) throw PreconditionError("replicas must be >= 1");
    return finish(sum_replicas(cfg.threads, 0, cfg.replicas, per_replica));
}

long long survives(const SimConfig& cfg, long replica) {
    const auto sample = grow_cluster(cfg, replica, kSurvivalSliceCap);
    return sample.capped || (static_cast<int>(sample.slices.size()) == cfg.T + 1 && !sample.slices.back().sites.empty());
}

void check_config(const SimConfig& cfg) {
    if (cfg.d < 1) throw PreconditionError("dimension must be >= 1");
    if (cfg.T < 0) throw PreconditionError("horizon must be >= 0");
    if (cfg.p < 0 || cfg.p > 2 * cfg.d) throw PreconditionError("p must lie in [0, 2d]");
}

SimConfig with_horizon(SimConfig cfg, int T) {
    cfg.T = T;
    return cfg;
}

// Open subgraph of the ancestors of (t, site); vertex 0 is the origin and
// the last vertex is the target.
struct Ancestry {
    oracle::OpenGraph graph;
    int origin = -1;
    int target = -1;
    // (slice, site) -> vertex
    std::vector<std::unordered_map<int, int>> vertex;
    // edge index of each first bond [o, s>, keyed by slice-1 site index
    std::unordered_map<int, int> first_edge;
};

Ancestry ancestry(const ClusterSample& c, int t, int site) {
    Ancestry a;
    a.vertex.resize(static_cast<size_t>(t) + 1);
    std::vector<std::vector<int>> level(static_cast<size_t>(t) + 1);
    level[static_cast<size_t>(t)] = {site};
    a.vertex[static_cast<size_t>(t)][site] = 0;
    int next_id = 1;
    for (int u = t; u > 0; --u)
        for (int i : level[static_cast<size_t>(u)])
            for (const auto& b : c.slices[static_cast<size_t>(u)].in_bonds[static_cast<size_t>(i)]) {
                auto& map = a.vertex[static_cast<size_t>(u) - 1];
                if (map.emplace(b.parent, next_id).second) {
                    ++next_id;
                    level[static_cast<size_t>(u) - 1].push_back(b.parent);
                }
            }
    a.graph.vertices = next_id;
    a.target = 0;
    auto it = a.vertex[0].find(0);
    a.origin = it == a.vertex[0].end() ? -1 : it->second;
    for (int u = 1; u <= t; ++u)
        for (int i : level[static_cast<size_t>(u)])
            for (const auto& b : c.slices[static_cast<size_t>(u)].in_bonds[static_cast<size_t>(i)]) {
                const int from = a.vertex[static_cast<size_t>(u) - 1].at(b.parent);
                const int to = a.vertex[static_cast<size_t>(u)].at(i);
                if (u == 1) a.first_edge[i] = static_cast<int>(a.graph.edges.size());
                a.graph.edges.emplace_back(from, to);
            }
    return a;
}

}  // namespace

BondThreshold::BondThreshold(const Rational& q) {
    if (q < 0 || q > 1) throw PreconditionError("bond probability outside [0, 1]");
    if (q == 1) {
        always_ = true;
        return;
    }
    mpz_class scaled = q.get_num();
    scaled <<= 128;
    scaled /= q.get_den();
    const mpz_class low = scaled & mpz_class("0xFFFFFFFFFFFFFFFF");
    const mpz_class high = scaled >> 64;
    t_ = (static_cast<unsigned __int128>(high.get_ui()) << 64) | low.get_ui();
}

unsigned __int128 bond_uniform(std::uint64_t seed, long replica, int time, const std::string& site_key, int direction) {
    std::uint64_t h = mix(seed ^ 0x5851f42d4c957f2dULL);
    h = mix(h ^ static_cast<std::uint64_t>(replica));
    h = mix(h ^ static_cast<std::uint64_t>(time));
    std::uint64_t word = 0;
    int filled = 0;
    for (unsigned char ch : site_key) {
        word = (word << 8) | ch;
        if (++filled == 8) {
            h = mix(h ^ word);
            word = 0;
            filled = 0;
        }
    }
    h = mix(h ^ word ^ (static_cast<std::uint64_t>(site_key.size()) << 56));
    h = mix(h ^ static_cast<std::uint64_t>(direction));
    const std::uint64_t hi = mix(h), lo = mix(h ^ 0xd1b54a32d192ed03ULL);
    return (static_cast<unsigned __int128>(hi) << 64) | lo;
}

std::string pack_site(const walks::Dense& x) {
    std::string key;
    for (size_t i = 0; i < x.size(); ++i)
        if (x[i] != 0) {
            const auto idx = static_cast<std::uint16_t>(i);
            const auto v = static_cast<std::uint16_t>(static_cast<std::int16_t>(x[i]));
            key.push_back(static_cast<char>(idx >> 8));
            key.push_back(static_cast<char>(idx & 0xff));
            key.push_back(static_cast<char>(v >> 8));
            key.push_back(static_cast<char>(v & 0xff));
        }
    return key;
}

walks::Dense unpack_site(const std::string& key, int d) {
    walks::Dense x(static_cast<size_t>(d), 0);
    for (size_t i = 0; i + 3 < key.size(); i += 4) {
        const auto idx = static_cast<std::uint16_t>((static_cast<unsigned char>(key[i]) << 8) | static_cast<unsigned char>(key[i + 1]));
        const auto v = static_cast<std::uint16_t>((static_cast<unsigned char>(key[i + 2]) << 8) | static_cast<unsigned char>(key[i + 3]));
        x[idx] = static_cast<std::int16_t>(v);
    }
    return x;
}

int ClusterSample::find(const LatticePoint& x) const {
    if (x.time < 0 || x.time >= static_cast<int>(slices.size())) return -1;
    if (!x.coords.empty() && x.coords.rbegin()->first >= d) return -1;
    const auto& idx = slices[static_cast<size_t>(x.time)].index;
    auto it = idx.find(pack_site(x.to_dense(d)));
    return it == idx.end() ? -1 : it->second;
}

ClusterSample grow_cluster(const SimConfig& cfg, long replica, long slice_cap) {
    check_config(cfg);
    if (cfg.T > 32000) throw PreconditionError("horizon too large for 16-bit coordinates");
    const BondThreshold open(cfg.p / (2 * cfg.d));
    ClusterSample c;
    c.d = cfg.d;
    Slice origin;
    origin.sites.push_back(std::string());
    origin.in_bonds.emplace_back();
    origin.index.emplace(std::string(), 0);
    c.slices.push_back(std::move(origin));
    walks::Dense x(static_cast<size_t>(cfg.d));
    for (int t = 0; t < cfg.T; ++t) {
        const Slice& cur = c.slices.back();
        if (cur.sites.empty()) break;
        Slice next;
        for (size_t i = 0; i < cur.sites.size(); ++i) {
            x = unpack_site(cur.sites[i], cfg.d);
            for (int dir = 0; dir < 2 * cfg.d; ++dir) {
                if (!open.open(bond_uniform(cfg.seed, replica, t, cur.sites[i], dir))) continue;
                const size_t axis = static_cast<size_t>(dir / 2);
                const int step = dir % 2 == 0 ? 1 : -1;
                x[axis] += step;
                std::string key = pack_site(x);
                x[axis] -= step;
                auto [it, inserted] = next.index.emplace(std::move(key), static_cast<int>(next.sites.size()));
                if (inserted) {
                    next.sites.push_back(it->first);
                    next.in_bonds.emplace_back();
                }
                next.in_bonds[static_cast<size_t>(it->second)].push_back({static_cast<int>(i), dir});
            }
        }
        const bool over = slice_cap > 0 && static_cast<long>(next.sites.size()) > slice_cap;
        c.slices.push_back(std::move(next));
        if (over) {
            c.capped = true;
            break;
        }
    }
    return c;
}

bool doubly_connected(const ClusterSample& c, int t, int site) {
    if (t == 0) return true;
    const Ancestry a = ancestry(c, t, site);
    if (a.origin < 0) return false;
    return oracle::two_edge_disjoint(a.graph, {a.origin, a.origin}, {a.target, a.target});
}

long pi0_count(const ClusterSample& c, int t) {
    if (t < 0 || t >= static_cast<int>(c.slices.size())) return 0;
    long n = 0;
    for (size_t i = 0; i < c.slices[static_cast<size_t>(t)].sites.size(); ++i)
        n += doubly_connected(c, t, static_cast<int>(i));
    return n;
}

long marked_count(const ClusterSample& c, int t) {
    if (t < 1 || t >= static_cast<int>(c.slices.size())) return 0;
    long n = 0;
    for (size_t i = 0; i < c.slices[static_cast<size_t>(t)].sites.size(); ++i) {
        const Ancestry a = ancestry(c, t, static_cast<int>(i));
        if (a.origin < 0) continue;
        for (const auto& [s, edge] : a.first_edge) {
            const int sv = a.vertex[1].at(s);
            // {[o,s> -> x} o {o -> x}: paths from s and from o, bond [o,s> removed.
            if (oracle::two_edge_disjoint(a.graph, {sv, a.origin}, {a.target, a.target}, edge)) ++n;
        }
    }
    return n;
}

Estimate estimate_tau(const SimConfig& cfg, const LatticePoint& x) {
    check_config(cfg);
    if (x.time > cfg.T) throw PreconditionError("target beyond the horizon");
    const SimConfig c = with_horizon(cfg, x.time);
    return run_replicas(c, [&](long r) -> long long { return grow_cluster(c, r).find(x) >= 0; });
}

Estimate estimate_pi0_sum(const SimConfig& cfg, int t) {
    check_config(cfg);
    if (t < 0 || t > cfg.T) throw PreconditionError("slice outside [0, T]");
    const SimConfig c = with_horizon(cfg, t);
    return run_replicas(c, [&](long r) -> long long { return pi0_count(grow_cluster(c, r), t); });
}

Estimate estimate_marked_sum(const SimConfig& cfg, int t) {
    check_config(cfg);
    if (t != 2 && t != 3) throw PreconditionError("marked sums are available for t = 2 and t = 3");
    if (t > cfg.T) throw PreconditionError("slice outside [0, T]");
    const SimConfig c = with_horizon(cfg, t);
    return run_replicas(c, [&](long r) -> long long { return marked_count(grow_cluster(c, r), t); });
}

Estimate estimate_tail(const SimConfig& cfg, int t_min, int t_max) {
    check_config(cfg);
    if (t_min < 0 || t_min > t_max || t_max > cfg.T) throw PreconditionError("slice range outside [0, T]");
    const SimConfig c = with_horizon(cfg, t_max);
    return run_replicas(c, [&](long r) -> long long {
        const auto sample = grow_cluster(c, r);
        long long n = 0;
        for (int t = t_min; t <= t_max; ++t) n += pi0_count(sample, t);
        return n;
    });
}

Estimate estimate_survival(const SimConfig& cfg) {
    check_config(cfg);
    return run_replicas(cfg, [&](long r) { return survives(cfg, r); });
}

double critical_survival_threshold(int d, int T) {
    if (d < 1 || T < 1) throw PreconditionError("need d >= 1 and T >= 1");
    const double sigma2 = 1.0 - 1.0 / (2.0 * d);
    return 2.0 / (sigma2 * T);
}

Estimate survival_sequential(const SimConfig& cfg, double threshold) {
    check_config(cfg);
    if (cfg.replicas < 1) throw PreconditionError("replicas must be >= 1");
    Sums sums;
    for (long begin = 0; begin < cfg.replicas; begin += kSurvivalBatch) {
        const long end = std::min(cfg.replicas, begin + kSurvivalBatch);
        sums.merge(sum_replicas(cfg.threads, begin, end, [&](long r) { return survives(cfg, r); }));
        const Estimate e = finish(sums);
        if (e.n >= 2 * kSurvivalBatch && std::abs(e.mean - threshold) > kSurvivalStopSigmas * e.std_err && e.std_err > 0)
            break;
    }
    return finish(sums);
}

BisectResult bisect_pc(int d, int T, double survival_threshold, double tol, long replicas, std::uint64_t seed,
                       int threads) {
    if (!(survival_threshold > 0 && survival_threshold < 1)) throw PreconditionError("threshold must lie in (0, 1)");
    if (!(tol > 0)) throw PreconditionError("tolerance must be positive");
    SimConfig cfg{d, 1, T, replicas, seed, threads};
    auto survival = [&](const Rational& p) {
        cfg.p = p;
        return survival_sequential(cfg, survival_threshold);
    };
    BisectResult r;
    r.p_low = 1;
    r.p_high = 2;
    const Estimate lo = survival(r.p_low), hi = survival(r.p_high);
    r.history.push_back({r.p_low, lo});
    r.history.push_back({r.p_high, hi});
    if (lo.mean >= survival_threshold || hi.mean < survival_threshold)
        throw PreconditionError("survival threshold is not bracketed by p in [1, 2]");
    while (Rational(r.p_high - r.p_low).get_d() > tol) {
        const Rational mid = (r.p_low + r.p_high) / 2;
        const Estimate e = survival(mid);
        r.history.push_back({mid, e});
        if (e.mean >= survival_threshold)
            r.p_high = mid;
        else
            r.p_low = mid;
    }
    r.at_mid = survival((r.p_low + r.p_high) / 2);
    return r;
}

}  // namespace pcexp::mc
