#include "pcexp/diagrams.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <map>
#include <set>

namespace pcexp::diagrams {

using walks::Dense;

const Vertex& DiagramSpec::vertex(int id) const {
    for (const auto& v : vertices)
        if (v.id == id) return v;
    throw PreconditionError("diagram " + name + ": unknown vertex " + std::to_string(id));
}

const Vertex& DiagramSpec::target() const {
    for (const auto& v : vertices)
        if (v.kind == VertexKind::target) return v;
    throw PreconditionError("diagram " + name + " has no target vertex");
}

int DiagramSpec::degree_bound() const {
    int n = 0;
    for (const auto& e : edges) n += e.k * e.m;
    return n;
}

void DiagramSpec::validate() const {
    int origins = 0, targets = 0;
    std::set<int> ids;
    for (const auto& v : vertices) {
        if (!ids.insert(v.id).second) throw PreconditionError("diagram " + name + ": duplicate vertex id");
        if (v.kind == VertexKind::origin) {
            ++origins;
            if (v.time != 0) throw PreconditionError("diagram " + name + ": origin must sit at time 0");
        }
        if (v.kind == VertexKind::target) ++targets;
    }
    if (origins != 1 || targets != 1)
        throw PreconditionError("diagram " + name + " needs exactly one origin and one target");
    const int T = target().time;
    for (const auto& v : vertices)
        if (v.time < 0 || v.time > T) throw PreconditionError("diagram " + name + ": vertex time outside [0, T]");
    for (const auto& e : edges) {
        const int gap = vertex(e.to).time - vertex(e.from).time;
        if (e.k < 1 || e.m < 1) throw PreconditionError("diagram " + name + ": edge needs k, m >= 1");
        if (gap != e.k) throw PreconditionError("diagram " + name + ": edge step count differs from time gap");
    }
    for (const auto& set : distinct)
        for (int id : set) vertex(id);
}

namespace {

int l1(const Dense& a) {
    int n = 0;
    for (int v : a) n += std::abs(v);
    return n;
}

int l1_diff(const Dense& a, const Dense& b) {
    int n = 0;
    for (size_t i = 0; i < a.size(); ++i) n += std::abs(a[i] - b[i]);
    return n;
}

bool step_possible(int dist, int steps) { return dist <= steps && (steps - dist) % 2 == 0; }

// All z with |z|_1 <= k and |z|_1 = k mod 2.
std::vector<Dense> ball(int d, int k) {
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
    rec(0, k);
    return out;
}

class Evaluator {
public:
    Evaluator(const DiagramSpec& spec, const LatticePoint& target, int d, long cap)
        : spec_(spec), d_(d), cap_(cap) {
        spec_.validate();
        T_ = spec_.target().time;
        x_ = target.to_dense(d);
        for (size_t i = 0; i < spec_.vertices.size(); ++i) index_[spec_.vertices[i].id] = static_cast<int>(i);
        pos_.assign(spec_.vertices.size(), Dense());
        placed_.assign(spec_.vertices.size(), false);
        for (size_t i = 0; i < spec_.vertices.size(); ++i) {
            const auto& v = spec_.vertices[i];
            if (v.kind == VertexKind::origin) {
                pos_[i] = Dense(static_cast<size_t>(d), 0);
                placed_[i] = true;
            } else if (v.kind == VertexKind::target) {
                pos_[i] = x_;
                placed_[i] = true;
            }
        }
        plan();
    }

    Rational run() {
        if (!step_possible(l1(x_), T_)) return 0;
        // Factors between the two fixed vertices.
        Rational base = 1;
        for (const auto& e : spec_.edges)
            if (placed_[idx(e.from)] && placed_[idx(e.to)]) base *= factor(e);
        if (base == 0) return 0;
        return recurse(0, base);
    }

private:
    int idx(int id) const { return index_.at(id); }

    void plan() {
        std::vector<bool> done = placed_;
        for (size_t step = 0; step < spec_.vertices.size(); ++step) {
            int best = -1, best_links = -1, best_k = 1 << 20;
            for (size_t i = 0; i < spec_.vertices.size(); ++i) {
                if (done[i]) continue;
                int links = 0, mink = 1 << 20;
                for (const auto& e : spec_.edges) {
                    int other = -1;
                    if (idx(e.from) == static_cast<int>(i)) other = idx(e.to);
                    else if (idx(e.to) == static_cast<int>(i)) other = idx(e.from);
                    if (other < 0 || !done[static_cast<size_t>(other)]) continue;
                    ++links;
                    mink = std::min(mink, e.k);
                }
                if (links > best_links || (links == best_links && mink < best_k)) {
                    best = static_cast<int>(i);
                    best_links = links;
                    best_k = mink;
                }
            }
            if (best < 0) break;
            done[static_cast<size_t>(best)] = true;
            order_.push_back(best);
        }
    }

    const std::vector<Dense>& ball_cached(int k) {
        auto it = balls_.find(k);
        if (it == balls_.end()) it = balls_.emplace(k, ball(d_, k)).first;
        return it->second;
    }

    Rational dconv(int k, const Dense& z) {
        std::vector<int> key;
        key.push_back(k);
        for (int v : z)
            if (v != 0) key.push_back(std::abs(v));
        std::sort(key.begin() + 1, key.end());
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
        std::vector<int> shape(key.begin() + 1, key.end());
        Rational r = walks::dconv_concrete(k, PointType(shape).representative(k), d_);
        cache_.emplace(std::move(key), r);
        return r;
    }

    Rational factor(const Edge& e) {
        const Dense& a = pos_[static_cast<size_t>(idx(e.from))];
        const Dense& b = pos_[static_cast<size_t>(idx(e.to))];
        Dense z(a.size());
        for (size_t i = 0; i < a.size(); ++i) z[i] = b[i] - a[i];
        Rational f = dconv(e.k, z);
        Rational r = 1;
        for (int j = 0; j < e.m; ++j) r *= f;
        return r;
    }

    bool distinct_ok(int vi) const {
        const auto& v = spec_.vertices[static_cast<size_t>(vi)];
        for (const auto& set : spec_.distinct) {
            if (std::find(set.begin(), set.end(), v.id) == set.end()) continue;
            for (int other : set) {
                const int oi = idx(other);
                if (oi == vi || !placed_[static_cast<size_t>(oi)]) continue;
                if (spec_.vertices[static_cast<size_t>(oi)].time == v.time &&
                    pos_[static_cast<size_t>(oi)] == pos_[static_cast<size_t>(vi)])
                    return false;
            }
        }
        return true;
    }

    Rational recurse(size_t level, const Rational& acc) {
        if (level == order_.size()) return acc;
        const int vi = order_[level];
        const auto& v = spec_.vertices[static_cast<size_t>(vi)];

        // Anchor: the placed neighbour joined by the shortest edge.
        int anchor = -1;
        int radius = -1;
        for (const auto& e : spec_.edges) {
            int other = -1;
            if (idx(e.from) == vi) other = idx(e.to);
            else if (idx(e.to) == vi) other = idx(e.from);
            if (other < 0 || !placed_[static_cast<size_t>(other)]) continue;
            if (radius < 0 || e.k < radius) {
                radius = e.k;
                anchor = other;
            }
        }
        if (radius < 0) {
            for (size_t i = 0; i < spec_.vertices.size(); ++i)
                if (spec_.vertices[i].kind == VertexKind::origin) anchor = static_cast<int>(i);
            radius = v.time;
        }

        std::vector<const Edge*> ready;
        for (const auto& e : spec_.edges) {
            const bool touches = idx(e.from) == vi || idx(e.to) == vi;
            const int other = idx(e.from) == vi ? idx(e.to) : idx(e.from);
            if (touches && placed_[static_cast<size_t>(other)]) ready.push_back(&e);
        }

        const auto& candidates = ball_cached(radius);
        if (static_cast<long>(candidates.size()) > cap_)
            throw ResourceError("diagram " + spec_.name + ": a vertex slice needs more than " + std::to_string(cap_) +
                                " points");

        Rational total = 0;
        const Dense& a = pos_[static_cast<size_t>(anchor)];
        placed_[static_cast<size_t>(vi)] = true;
        Dense& y = pos_[static_cast<size_t>(vi)];
        y.assign(a.size(), 0);
        for (const auto& z : candidates) {
            for (size_t i = 0; i < a.size(); ++i) y[i] = a[i] + z[i];
            if (!step_possible(l1(y), v.time) || !step_possible(l1_diff(x_, y), T_ - v.time)) continue;
            if (!distinct_ok(vi)) continue;
            Rational w = acc;
            for (const Edge* e : ready) {
                w *= factor(*e);
                if (w == 0) break;
            }
            if (w == 0) continue;
            total += recurse(level + 1, w);
        }
        placed_[static_cast<size_t>(vi)] = false;
        return total;
    }

    const DiagramSpec& spec_;
    int d_;
    long cap_;
    int T_ = 0;
    Dense x_;
    std::map<int, int> index_;
    std::vector<Dense> pos_;
    std::vector<bool> placed_;
    std::vector<int> order_;
    std::map<int, std::vector<Dense>> balls_;
    std::map<std::vector<int>, Rational> cache_;
};

}  // namespace

DiagramValue diagram_eval_concrete(const DiagramSpec& spec, const LatticePoint& target, int d, long slice_point_cap) {
    if (d < 1) throw PreconditionError("dimension must be >= 1");
    if (target.time != spec.target().time)
        throw PreconditionError("diagram " + spec.name + ": target time does not match");
    if (!target.coords.empty() && target.coords.rbegin()->first >= d) return {spec.p_exponent, Rational(0)};
    Evaluator ev(spec, target, d, slice_point_cap);
    return {spec.p_exponent, ev.run()};
}

DiagramValue diagram_eval_generic(const DiagramSpec& spec, const PointType& target_type) {
    spec.validate();
    const LatticePoint x = target_type.representative(spec.target().time);
    auto f = [&](int d) { return diagram_eval_concrete(spec, x, d).concrete(); };
    return {spec.p_exponent, walks::generic_in_s(f, spec.degree_bound(), target_type.entries())};
}

Builder::Builder(std::string name, int target_time) {
    spec_.name = std::move(name);
    spec_.vertices.push_back({0, 0, VertexKind::origin});
    spec_.vertices.push_back({1, target_time, VertexKind::target});
}

int Builder::internal(int time) {
    const int id = static_cast<int>(spec_.vertices.size());
    spec_.vertices.push_back({id, time, VertexKind::internal});
    return id;
}

Builder& Builder::edge(int from, int to, int m) {
    const int k = spec_.vertex(to).time - spec_.vertex(from).time;
    spec_.edges.push_back({from, to, k, m});
    spec_.p_exponent += k * m;
    return *this;
}

Builder& Builder::distinct(std::vector<int> ids) {
    spec_.distinct.push_back(std::move(ids));
    return *this;
}

DiagramSpec Builder::build() const {
    spec_.validate();
    return spec_;
}

}  // namespace pcexp::diagrams
