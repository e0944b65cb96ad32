#include "pcexp/oracle.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <functional>
#include <set>
#include <thread>

namespace pcexp::oracle {

using qalg::Var;

namespace {

Dense add(const Dense& a, const Dense& b) {
    Dense r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

// All x in Z^d with |x|_1 <= t and |x|_1 = t mod 2, lexicographically sorted.
std::vector<Dense> slice_points(int d, int t) {
    std::vector<Dense> out;
    Dense z(static_cast<size_t>(d), 0);
    std::function<void(int, int)> rec = [&](int i, int left) {
        if (i == d) {
            if (left % 2 == 0) out.push_back(z);
            return;
        }
        for (int v = -left; v <= left; ++v) {
            z[static_cast<size_t>(i)] = v;
            rec(i + 1, left - std::abs(v));
        }
        z[static_cast<size_t>(i)] = 0;
    };
    rec(0, t);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Dense> sorted_steps(int d) {
    auto steps = walks::unit_steps(d);
    std::sort(steps.begin(), steps.end());
    return steps;
}

void check_fits(const LatticePoint& x, int d) {
    if (!x.coords.empty() && (x.coords.begin()->first < 0 || x.coords.rbegin()->first >= d))
        throw PreconditionError("point does not fit in dimension " + std::to_string(d));
}

// Vertices and candidate bonds of a small graph, plus the event predicate.
struct EventGraph {
    std::map<LatticePoint, int> vertex;
    std::vector<std::pair<int, int>> bonds;  // relevant bonds only

    int v(const LatticePoint& x) const {
        auto it = vertex.find(x);
        return it == vertex.end() ? -1 : it->second;
    }
    int bond(const LatticePoint& a, const LatticePoint& b) const {
        const int va = v(a), vb = v(b);
        if (va < 0 || vb < 0) return -1;
        for (size_t i = 0; i < bonds.size(); ++i)
            if (bonds[i] == std::make_pair(va, vb)) return static_cast<int>(i);
        return -1;
    }
};

// Keeps only bonds lying on some path between a source/target pair of the
// event; other bonds cannot influence any predicate.
std::vector<std::pair<int, int>> relevant_bonds(int n_vertices, const std::vector<std::pair<int, int>>& all,
                                                const std::vector<std::pair<int, int>>& pairs,
                                                const std::vector<int>& forced) {
    std::vector<std::vector<int>> out(static_cast<size_t>(n_vertices)), in(static_cast<size_t>(n_vertices));
    for (size_t i = 0; i < all.size(); ++i) {
        out[static_cast<size_t>(all[i].first)].push_back(static_cast<int>(i));
        in[static_cast<size_t>(all[i].second)].push_back(static_cast<int>(i));
    }
    auto sweep = [&](int start, bool forward) {
        std::vector<char> seen(static_cast<size_t>(n_vertices), 0);
        std::deque<int> queue{start};
        seen[static_cast<size_t>(start)] = 1;
        while (!queue.empty()) {
            const int u = queue.front();
            queue.pop_front();
            for (int b : forward ? out[static_cast<size_t>(u)] : in[static_cast<size_t>(u)]) {
                const int w = forward ? all[static_cast<size_t>(b)].second : all[static_cast<size_t>(b)].first;
                if (!seen[static_cast<size_t>(w)]) {
                    seen[static_cast<size_t>(w)] = 1;
                    queue.push_back(w);
                }
            }
        }
        return seen;
    };
    std::vector<char> keep(all.size(), 0);
    for (const auto& [a, b] : pairs) {
        if (a < 0 || b < 0) continue;
        const auto f = sweep(a, true), g = sweep(b, false);
        for (size_t i = 0; i < all.size(); ++i)
            if (f[static_cast<size_t>(all[i].first)] && g[static_cast<size_t>(all[i].second)]) keep[i] = 1;
    }
    for (int b : forced)
        if (b >= 0) keep[static_cast<size_t>(b)] = 1;
    std::vector<std::pair<int, int>> r;
    for (size_t i = 0; i < all.size(); ++i)
        if (keep[i]) r.push_back(all[i]);
    return r;
}

std::vector<std::pair<int, int>> vertex_pairs(const EventGraph& g, const EventSpec& e) {
    std::vector<std::pair<int, int>> r;
    for (const auto& [a, b] : e.path_pairs()) r.emplace_back(g.v(a), g.v(b));
    return r;
}

// Bonds an event names explicitly, looked up among `all`.
std::vector<int> named_bonds(const std::map<LatticePoint, int>& vertex, const std::vector<std::pair<int, int>>& all,
                             const EventSpec& e) {
    std::vector<int> r;
    auto find = [&](const LatticePoint& a, const LatticePoint& b) {
        auto ia = vertex.find(a), ib = vertex.find(b);
        if (ia == vertex.end() || ib == vertex.end()) return;
        for (size_t i = 0; i < all.size(); ++i)
            if (all[i] == std::make_pair(ia->second, ib->second)) r.push_back(static_cast<int>(i));
    };
    if (e.kind() == EventSpec::Kind::marked_first_bond) find(LatticePoint::origin(), e.points()[0]);
    if (e.kind() == EventSpec::Kind::pivotal) find(e.points()[0], e.points()[1]);
    for (const auto& c : e.children()) {
        auto sub = named_bonds(vertex, all, c);
        r.insert(r.end(), sub.begin(), sub.end());
    }
    return r;
}

class Predicate {
public:
    Predicate(const EventGraph& g, const EventSpec& e) : g_(g), e_(e) {}

    bool operator()(const std::vector<char>& open) const {
        OpenGraph og;
        og.vertices = static_cast<int>(g_.vertex.size());
        edge_of_bond_.assign(g_.bonds.size(), -1);
        for (size_t i = 0; i < g_.bonds.size(); ++i)
            if (open[i]) {
                edge_of_bond_[i] = static_cast<int>(og.edges.size());
                og.edges.push_back(g_.bonds[i]);
            }
        return eval(e_, og);
    }

private:
    int edge(const LatticePoint& a, const LatticePoint& b) const {
        const int bi = g_.bond(a, b);
        return bi < 0 ? -1 : edge_of_bond_[static_cast<size_t>(bi)];
    }

    bool disjoint(const OpenGraph& og, int a, int x, int b, int y, int skip) const {
        if (a < 0 || x < 0 || b < 0 || y < 0) return false;
        if (a == x) return reaches(og, b, y, skip);
        if (b == y) return reaches(og, a, x, skip);
        if (a == b || x == y) return two_edge_disjoint(og, {a, b}, {x, y}, skip);
        return disjoint_paths_exhaustive(og, a, x, b, y, skip);
    }

    bool eval(const EventSpec& e, const OpenGraph& og) const {
        const auto& p = e.points();
        const int o = g_.v(LatticePoint::origin());
        switch (e.kind()) {
            case EventSpec::Kind::connect: {
                const int a = g_.v(p[0]), b = g_.v(p[1]);
                if (a < 0 || b < 0) return false;
                return a == b || reaches(og, a, b);
            }
            case EventSpec::Kind::double_conn: {
                const int x = g_.v(p[0]);
                if (x < 0) return false;
                return x == o || two_edge_disjoint(og, {o, o}, {x, x});
            }
            case EventSpec::Kind::disjoint_pair:
                return disjoint(og, g_.v(p[0]), g_.v(p[1]), g_.v(p[2]), g_.v(p[3]), -1);
            case EventSpec::Kind::marked_first_bond: {
                const int first = edge(LatticePoint::origin(), p[0]);
                if (first < 0) return false;
                return disjoint(og, g_.v(p[0]), g_.v(p[1]), o, g_.v(p[2]), first);
            }
            case EventSpec::Kind::with_extras: {
                if (!eval(e.children()[0], og)) return false;
                for (const auto& w : p) {
                    const int vw = g_.v(w);
                    if (vw < 0 || (vw != o && !reaches(og, o, vw))) return false;
                }
                return true;
            }
            case EventSpec::Kind::pivotal: {
                const int b = edge(p[0], p[1]);
                const int a = g_.v(p[2]), x = g_.v(p[3]);
                if (b < 0 || a < 0 || x < 0) return false;
                return reaches(og, a, x) && !reaches(og, a, x, b);
            }
            case EventSpec::Kind::all_of:
                for (const auto& c : e.children())
                    if (!eval(c, og)) return false;
                return true;
            case EventSpec::Kind::any_of:
                for (const auto& c : e.children())
                    if (eval(c, og)) return true;
                return false;
            case EventSpec::Kind::negation:
                return !eval(e.children()[0], og);
        }
        return false;
    }

    const EventGraph& g_;
    const EventSpec& e_;
    mutable std::vector<int> edge_of_bond_;
};

std::vector<std::vector<int>> adjacency(const OpenGraph& g, int skip_edge) {
    std::vector<std::vector<int>> out(static_cast<size_t>(g.vertices));
    for (size_t i = 0; i < g.edges.size(); ++i)
        if (static_cast<int>(i) != skip_edge) out[static_cast<size_t>(g.edges[i].first)].push_back(static_cast<int>(i));
    return out;
}

}  // namespace

// ------------------------------------------------------------------ Cone

Cone Cone::build(int d, int T) {
    if (d < 1) throw PreconditionError("dimension must be >= 1");
    if (T < 0) throw PreconditionError("horizon must be >= 0");
    Cone c;
    c.d_ = d;
    c.T_ = T;
    long bond_count = 0;
    std::vector<std::vector<Dense>> pts;
    for (int t = 0; t <= T; ++t) {
        pts.push_back(slice_points(d, t));
        if (t < T) bond_count += static_cast<long>(pts.back().size()) * 2 * d;
        if (bond_count > kMaxBonds)
            throw ResourceError("cone with d=" + std::to_string(d) + ", T=" + std::to_string(T) + " exceeds " +
                                std::to_string(kMaxBonds) + " bonds");
    }
    for (int t = 0; t <= T; ++t) {
        c.slices_.emplace_back();
        for (const auto& x : pts[static_cast<size_t>(t)]) {
            const int id = static_cast<int>(c.sites_.size());
            c.sites_.push_back(LatticePoint::from_dense(x, t));
            c.index_[c.sites_.back()] = id;
            c.slices_.back().push_back(id);
        }
    }
    const auto steps = sorted_steps(d);
    for (int t = 0; t < T; ++t)
        for (int from : c.slices_[static_cast<size_t>(t)]) {
            const Dense x = c.sites_[static_cast<size_t>(from)].to_dense(d);
            std::vector<Dense> targets;
            for (const auto& e : steps) targets.push_back(add(x, e));
            std::sort(targets.begin(), targets.end());
            for (const auto& y : targets) c.bonds_.push_back({from, c.index_.at(LatticePoint::from_dense(y, t + 1))});
        }
    return c;
}

int Cone::site_index(const LatticePoint& x) const {
    auto it = index_.find(x);
    return it == index_.end() ? -1 : it->second;
}

int Cone::bond_index(const LatticePoint& a, const LatticePoint& b) const {
    const int ia = site_index(a), ib = site_index(b);
    if (ia < 0 || ib < 0) return -1;
    auto it = std::lower_bound(bonds_.begin(), bonds_.end(), Bond{ia, ib});
    if (it == bonds_.end() || *it != Bond{ia, ib}) return -1;
    return static_cast<int>(it - bonds_.begin());
}

bool support_precedes(const Dense& a, const Dense& b) { return a < b; }

// ------------------------------------------------------------ predicates

bool reaches(const OpenGraph& g, int a, int b, int skip_edge) {
    if (a == b) return true;
    const auto out = adjacency(g, skip_edge);
    std::vector<char> seen(static_cast<size_t>(g.vertices), 0);
    std::deque<int> queue{a};
    seen[static_cast<size_t>(a)] = 1;
    while (!queue.empty()) {
        const int u = queue.front();
        queue.pop_front();
        for (int e : out[static_cast<size_t>(u)]) {
            const int w = g.edges[static_cast<size_t>(e)].second;
            if (w == b) return true;
            if (!seen[static_cast<size_t>(w)]) {
                seen[static_cast<size_t>(w)] = 1;
                queue.push_back(w);
            }
        }
    }
    return false;
}

bool two_edge_disjoint(const OpenGraph& g, const std::vector<int>& sources, const std::vector<int>& sinks,
                       int skip_edge) {
    // Residual network with a super source S and super sink Z.
    const int S = g.vertices, Z = g.vertices + 1, n = g.vertices + 2;
    struct Arc {
        int to, cap, rev;
    };
    std::vector<std::vector<Arc>> net(static_cast<size_t>(n));
    auto add_arc = [&](int a, int b) {
        net[static_cast<size_t>(a)].push_back({b, 1, static_cast<int>(net[static_cast<size_t>(b)].size())});
        net[static_cast<size_t>(b)].push_back({a, 0, static_cast<int>(net[static_cast<size_t>(a)].size()) - 1});
    };
    for (size_t i = 0; i < g.edges.size(); ++i)
        if (static_cast<int>(i) != skip_edge) add_arc(g.edges[i].first, g.edges[i].second);
    for (int s : sources) add_arc(S, s);
    for (int t : sinks) add_arc(t, Z);

    for (int round = 0; round < 2; ++round) {
        std::vector<std::pair<int, int>> parent(static_cast<size_t>(n), {-1, -1});
        std::deque<int> queue{S};
        parent[static_cast<size_t>(S)] = {S, -1};
        while (!queue.empty() && parent[static_cast<size_t>(Z)].first < 0) {
            const int u = queue.front();
            queue.pop_front();
            for (size_t k = 0; k < net[static_cast<size_t>(u)].size(); ++k) {
                const Arc& a = net[static_cast<size_t>(u)][k];
                if (a.cap > 0 && parent[static_cast<size_t>(a.to)].first < 0) {
                    parent[static_cast<size_t>(a.to)] = {u, static_cast<int>(k)};
                    queue.push_back(a.to);
                }
            }
        }
        if (parent[static_cast<size_t>(Z)].first < 0) return false;
        for (int v = Z; v != S;) {
            const auto [u, k] = parent[static_cast<size_t>(v)];
            Arc& a = net[static_cast<size_t>(u)][static_cast<size_t>(k)];
            a.cap -= 1;
            net[static_cast<size_t>(v)][static_cast<size_t>(a.rev)].cap += 1;
            v = u;
        }
    }
    return true;
}

bool disjoint_paths_exhaustive(const OpenGraph& g, int a, int x, int b, int y, int skip_edge) {
    if (a == x) return reaches(g, b, y, skip_edge);
    const auto out = adjacency(g, skip_edge);
    std::vector<int> path;
    std::function<bool(int)> dfs = [&](int u) {
        if (u == x) {
            OpenGraph rest;
            rest.vertices = g.vertices;
            std::vector<char> used(g.edges.size(), 0);
            for (int e : path) used[static_cast<size_t>(e)] = 1;
            if (skip_edge >= 0) used[static_cast<size_t>(skip_edge)] = 1;
            for (size_t i = 0; i < g.edges.size(); ++i)
                if (!used[i]) rest.edges.push_back(g.edges[i]);
            return reaches(rest, b, y);
        }
        for (int e : out[static_cast<size_t>(u)]) {
            path.push_back(e);
            if (dfs(g.edges[static_cast<size_t>(e)].second)) return true;
            path.pop_back();
        }
        return false;
    };
    return dfs(a);
}

// ------------------------------------------------------- full enumeration

ExactResult event_exact(const Cone& cone, const EventSpec& e, const Rational& p) {
    if (p < 0) throw PreconditionError("p must be non-negative");
    const Rational q = p / (2 * cone.d());
    if (q > 1) throw PreconditionError("p/(2d) exceeds 1");
    for (const auto& x : e.referenced()) {
        check_fits(x, cone.d());
        if (cone.site_index(x) < 0) throw PreconditionError("event point outside the cone");
    }

    EventGraph g;
    for (size_t i = 0; i < cone.sites().size(); ++i) g.vertex[cone.sites()[i]] = static_cast<int>(i);
    std::vector<std::pair<int, int>> all;
    for (const auto& b : cone.bonds()) all.emplace_back(b.from, b.to);
    g.bonds = relevant_bonds(static_cast<int>(cone.sites().size()), all, vertex_pairs(g, e), named_bonds(g.vertex, all, e));
    const int n = static_cast<int>(g.bonds.size());
    if (n > kMaxEnumeratedBonds)
        throw ResourceError("event needs " + std::to_string(n) + " bonds; enumeration is limited to " +
                            std::to_string(kMaxEnumeratedBonds));

    // Partition the subsets by their top bits across threads.
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const int split_bits = std::min(n, hw > 1 ? 4 : 0);
    const long parts = 1L << split_bits;
    std::vector<std::vector<long>> counts(static_cast<size_t>(parts), std::vector<long>(static_cast<size_t>(n + 1), 0));
    auto work = [&](long part) {
        Predicate holds(g, e);
        std::vector<char> open(static_cast<size_t>(n));
        const long low = 1L << (n - split_bits);
        for (long m = 0; m < low; ++m) {
            const long mask = (part << (n - split_bits)) | m;
            int k = 0;
            for (int i = 0; i < n; ++i) {
                open[static_cast<size_t>(i)] = static_cast<char>((mask >> i) & 1);
                k += open[static_cast<size_t>(i)];
            }
            if (holds(open)) ++counts[static_cast<size_t>(part)][static_cast<size_t>(k)];
        }
    };
    if (parts == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (long part = 0; part < parts; ++part) pool.emplace_back(work, part);
        for (auto& t : pool) t.join();
    }

    ExactResult r;
    r.bonds = n;
    const PolyVar qv({0, 1}, Var::q), one_minus({1, -1}, Var::q);
    for (int k = 0; k <= n; ++k) {
        long c = 0;
        for (const auto& part : counts) c += part[static_cast<size_t>(k)];
        if (c == 0) continue;
        PolyVar term = PolyVar::constant(Rational(c), Var::q);
        for (int i = 0; i < k; ++i) term *= qv;
        for (int i = k; i < n; ++i) term *= one_minus;
        r.q_poly += term;
    }
    r.probability = r.q_poly(q);
    return r;
}

Rational event_prob_exact(const Cone& cone, const EventSpec& e, const Rational& p) {
    return event_exact(cone, e, p).probability;
}

// ------------------------------------------------- time-2 factorization

Rational t2_factorized_prob(int d, const EventSpec& e, const Rational& p) {
    if (d < 1) throw PreconditionError("dimension must be >= 1");
    if (d > kMaxFactorizedDimension)
        throw ResourceError("factorized time-2 evaluation supports d <= " + std::to_string(kMaxFactorizedDimension));
    if (p < 0) throw PreconditionError("p must be non-negative");
    const Rational q = p / (2 * d);
    if (q > 1) throw PreconditionError("p/(2d) exceeds 1");
    const auto refs = e.referenced();
    for (const auto& x : refs) {
        check_fits(x, d);
        if (x.time > 2) throw PreconditionError("factorized evaluation needs every event point at time <= 2");
        if (!x.reachable()) throw PreconditionError("event point outside the cone");
    }

    // Graph: origin, every time-1 site, referenced time-2 sites.
    EventGraph g;
    const LatticePoint o = LatticePoint::origin();
    g.vertex[o] = 0;
    std::vector<LatticePoint> middle;
    for (const auto& step : sorted_steps(d)) {
        middle.push_back(LatticePoint::from_dense(step, 1));
        g.vertex[middle.back()] = static_cast<int>(g.vertex.size());
    }
    std::vector<LatticePoint> tops;
    for (const auto& x : refs)
        if (x.time == 2) {
            tops.push_back(x);
            g.vertex[x] = static_cast<int>(g.vertex.size());
        }
    std::vector<std::pair<int, int>> all;
    for (const auto& u : middle) all.emplace_back(0, g.v(u));
    for (const auto& u : middle)
        for (const auto& w : tops) {
            int dist = 0;
            for (int i = 0; i < d; ++i) {
                auto a = w.coords.find(i), b = u.coords.find(i);
                dist += std::abs((a == w.coords.end() ? 0 : a->second) - (b == u.coords.end() ? 0 : b->second));
            }
            if (dist == 1) all.emplace_back(g.v(u), g.v(w));
        }
    g.bonds = relevant_bonds(static_cast<int>(g.vertex.size()), all, vertex_pairs(g, e), named_bonds(g.vertex, all, e));
    const int n = static_cast<int>(g.bonds.size());

    // Relevant bonds touching each time-1 site.
    std::vector<std::vector<int>> local(middle.size());
    for (size_t u = 0; u < middle.size(); ++u)
        for (int b = 0; b < n; ++b)
            if (g.bonds[static_cast<size_t>(b)].first == g.v(middle[u]) ||
                g.bonds[static_cast<size_t>(b)].second == g.v(middle[u]))
                local[u].push_back(b);

    std::set<LatticePoint> referenced(refs.begin(), refs.end());
    std::vector<int> singles;
    std::map<std::vector<int>, std::vector<int>> classes;  // second-bond targets -> members
    for (size_t u = 0; u < middle.size(); ++u) {
        if (local[u].empty()) continue;
        if (referenced.count(middle[u])) {
            singles.push_back(static_cast<int>(u));
            continue;
        }
        std::vector<int> sig;
        for (int b : local[u])
            if (g.bonds[static_cast<size_t>(b)].first == g.v(middle[u])) sig.push_back(g.bonds[static_cast<size_t>(b)].second);
        classes[sig].push_back(static_cast<int>(u));
    }
    // Bonds not attached to any time-1 site (none at present) would be
    // enumerated with the singles.
    std::vector<char> covered(static_cast<size_t>(n), 0);
    for (const auto& l : local)
        for (int b : l) covered[static_cast<size_t>(b)] = 1;
    std::vector<int> loose;
    for (int b = 0; b < n; ++b)
        if (!covered[static_cast<size_t>(b)]) loose.push_back(b);

    Predicate holds(g, e);
    std::vector<char> open(static_cast<size_t>(n), 0);
    Rational total = 0;
    auto power = [](const Rational& x, int k) {
        Rational r = 1;
        for (int i = 0; i < k; ++i) r *= x;
        return r;
    };
    const Rational one_minus_q = 1 - q;

    // Free bonds (singles and loose ones), each enumerated open/closed.
    std::vector<int> free_bonds = loose;
    for (int u : singles) free_bonds.insert(free_bonds.end(), local[static_cast<size_t>(u)].begin(), local[static_cast<size_t>(u)].end());
    std::sort(free_bonds.begin(), free_bonds.end());
    free_bonds.erase(std::unique(free_bonds.begin(), free_bonds.end()), free_bonds.end());

    std::vector<std::pair<std::vector<int>, std::vector<int>>> cls(classes.begin(), classes.end());

    // Assigns class members to local states: state 0 = first bond closed,
    // state 1 + j = first bond open and second bonds given by the bits of j.
    std::function<void(size_t, const Rational&)> over_classes;
    std::function<void(size_t, size_t, int, size_t, const Rational&)> compose;
    over_classes = [&](size_t ci, const Rational& w) {
        if (ci == cls.size()) {
            if (holds(open)) total += w;
            return;
        }
        compose(ci, 0, static_cast<int>(cls[ci].second.size()), 0, w);
    };
    compose = [&](size_t ci, size_t state, int left, size_t next_member, const Rational& w) {
        const auto& members = cls[ci].second;
        const int k = static_cast<int>(cls[ci].first.size());
        const size_t states = 1 + (size_t{1} << k);
        if (state + 1 == states) {
            // Remaining members all take the last state.
            Rational w2 = w;
            std::vector<int> touched;
            for (size_t m = next_member; m < members.size(); ++m) {
                for (int b : local[static_cast<size_t>(members[m])]) {
                    open[static_cast<size_t>(b)] = 1;
                    touched.push_back(b);
                }
            }
            w2 *= power(q * power(q, k), left);
            over_classes(ci + 1, w2);
            for (int b : touched) open[static_cast<size_t>(b)] = 0;
            return;
        }
        // Probability of this state for one member.
        Rational ps;
        if (state == 0) {
            ps = one_minus_q;
        } else {
            const size_t j = state - 1;
            const int bits = __builtin_popcountl(j);
            ps = q * power(q, bits) * power(one_minus_q, k - bits);
        }
        mpz_class binom = 1;
        for (int c = 0; c <= left; ++c) {
            if (c > 0) {
                binom = binom * (left - c + 1) / c;
            }
            // Members next_member .. next_member + c - 1 take this state.
            std::vector<int> touched;
            for (int m = 0; m < c; ++m) {
                const int u = members[next_member + static_cast<size_t>(m)];
                if (state == 0) continue;
                const size_t j = state - 1;
                const auto& lb = local[static_cast<size_t>(u)];
                // local bonds: first bond, then second bonds in signature order.
                for (int b : lb) {
                    const auto& bond = g.bonds[static_cast<size_t>(b)];
                    if (bond.first == 0) {
                        open[static_cast<size_t>(b)] = 1;
                        touched.push_back(b);
                    } else {
                        const auto pos = std::find(cls[ci].first.begin(), cls[ci].first.end(), bond.second) - cls[ci].first.begin();
                        if ((j >> pos) & 1) {
                            open[static_cast<size_t>(b)] = 1;
                            touched.push_back(b);
                        }
                    }
                }
            }
            compose(ci, state + 1, left - c, next_member + static_cast<size_t>(c), w * Rational(binom) * power(ps, c));
            for (int b : touched) open[static_cast<size_t>(b)] = 0;
        }
    };

    std::function<void(size_t, const Rational&)> over_free = [&](size_t i, const Rational& w) {
        if (i == free_bonds.size()) {
            over_classes(0, w);
            return;
        }
        const int b = free_bonds[i];
        open[static_cast<size_t>(b)] = 0;
        over_free(i + 1, w * one_minus_q);
        open[static_cast<size_t>(b)] = 1;
        over_free(i + 1, w * q);
        open[static_cast<size_t>(b)] = 0;
    };
    over_free(0, Rational(1));
    return total;
}

// ------------------------------------------------------------- pivotal

std::vector<int> pivotal_bonds(const Cone& cone, const std::vector<int>& open_bonds, const LatticePoint& a,
                               const LatticePoint& x) {
    const int ia = cone.site_index(a), ix = cone.site_index(x);
    if (ia < 0 || ix < 0) throw PreconditionError("pivotal_bonds: point outside the cone");
    OpenGraph g;
    g.vertices = static_cast<int>(cone.sites().size());
    for (int b : open_bonds) {
        if (b < 0 || b >= static_cast<int>(cone.bonds().size())) throw PreconditionError("pivotal_bonds: bad bond index");
        g.edges.emplace_back(cone.bonds()[static_cast<size_t>(b)].from, cone.bonds()[static_cast<size_t>(b)].to);
    }
    if (!reaches(g, ia, ix)) throw PreconditionError("pivotal_bonds: a is not connected to x");
    std::vector<int> r;
    for (size_t i = 0; i < open_bonds.size(); ++i)
        if (!reaches(g, ia, ix, static_cast<int>(i))) r.push_back(open_bonds[i]);
    std::sort(r.begin(), r.end());
    return r;
}

}  // namespace pcexp::oracle
