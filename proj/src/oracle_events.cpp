#include <algorithm>
#include <sstream>

#include "pcexp/oracle.hpp"

namespace pcexp::oracle {

EventSpec EventSpec::connect(LatticePoint a, LatticePoint b) {
    EventSpec e;
    e.kind_ = Kind::connect;
    e.points_ = {std::move(a), std::move(b)};
    return e;
}

EventSpec EventSpec::disjoint_pair(LatticePoint a, LatticePoint x, LatticePoint b, LatticePoint y) {
    EventSpec e;
    e.kind_ = Kind::disjoint_pair;
    e.points_ = {std::move(a), std::move(x), std::move(b), std::move(y)};
    return e;
}

EventSpec EventSpec::double_conn(LatticePoint x) {
    EventSpec e;
    e.kind_ = Kind::double_conn;
    e.points_ = {std::move(x)};
    return e;
}

EventSpec EventSpec::marked_first_bond(LatticePoint s, LatticePoint x, LatticePoint y) {
    if (s.time != 1 || s.l1() != 1) throw PreconditionError("marked bond endpoint must be a time-1 neighbour of o");
    EventSpec e;
    e.kind_ = Kind::marked_first_bond;
    e.points_ = {std::move(s), std::move(x), std::move(y)};
    return e;
}

EventSpec EventSpec::with_extras(EventSpec base, std::vector<LatticePoint> extras) {
    EventSpec e;
    e.kind_ = Kind::with_extras;
    e.children_ = {std::move(base)};
    e.points_ = std::move(extras);
    return e;
}

EventSpec EventSpec::pivotal(LatticePoint b_from, LatticePoint b_to, LatticePoint a, LatticePoint x) {
    if (b_to.time != b_from.time + 1) throw PreconditionError("pivotal bond must join adjacent slices");
    EventSpec e;
    e.kind_ = Kind::pivotal;
    e.points_ = {std::move(b_from), std::move(b_to), std::move(a), std::move(x)};
    return e;
}

EventSpec EventSpec::all_of(std::vector<EventSpec> parts) {
    if (parts.empty()) throw PreconditionError("all_of needs at least one event");
    EventSpec e;
    e.kind_ = Kind::all_of;
    e.children_ = std::move(parts);
    return e;
}

EventSpec EventSpec::any_of(std::vector<EventSpec> parts) {
    if (parts.empty()) throw PreconditionError("any_of needs at least one event");
    EventSpec e;
    e.kind_ = Kind::any_of;
    e.children_ = std::move(parts);
    return e;
}

EventSpec EventSpec::negation(EventSpec inner) {
    EventSpec e;
    e.kind_ = Kind::negation;
    e.children_ = {std::move(inner)};
    return e;
}

std::vector<LatticePoint> EventSpec::referenced() const {
    std::vector<LatticePoint> out{LatticePoint::origin()};
    out.insert(out.end(), points_.begin(), points_.end());
    for (const auto& c : children_) {
        auto r = c.referenced();
        out.insert(out.end(), r.begin(), r.end());
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<std::pair<LatticePoint, LatticePoint>> EventSpec::path_pairs() const {
    const LatticePoint o = LatticePoint::origin();
    std::vector<std::pair<LatticePoint, LatticePoint>> out;
    switch (kind_) {
        case Kind::connect:
            out = {{points_[0], points_[1]}};
            break;
        case Kind::disjoint_pair:
            out = {{points_[0], points_[1]}, {points_[2], points_[3]}};
            break;
        case Kind::double_conn:
            out = {{o, points_[0]}};
            break;
        case Kind::marked_first_bond:
            out = {{o, points_[1]}, {o, points_[2]}};
            break;
        case Kind::with_extras:
            for (const auto& w : points_) out.emplace_back(o, w);
            break;
        case Kind::pivotal:
            out = {{points_[2], points_[3]}};
            break;
        default:
            break;
    }
    for (const auto& c : children_) {
        auto r = c.path_pairs();
        out.insert(out.end(), r.begin(), r.end());
    }
    return out;
}

int EventSpec::max_time() const {
    int t = 0;
    for (const auto& x : referenced()) t = std::max(t, x.time);
    return t;
}

namespace {

std::string point_str(const LatticePoint& x) {
    std::string r = x.coords.empty() ? "o" : "";
    if (!x.coords.empty()) {
        const int top = x.coords.rbegin()->first;
        for (int i = 0; i <= top; ++i) {
            auto it = x.coords.find(i);
            r += (i ? "," : "") + std::to_string(it == x.coords.end() ? 0 : it->second);
        }
    }
    return r + "@" + std::to_string(x.time);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) out.push_back(cur);
    return out;
}

}  // namespace

std::string EventSpec::describe() const {
    auto pts = [&](const char* name) {
        std::string r = name;
        r += "(";
        for (size_t i = 0; i < points_.size(); ++i) r += (i ? ", " : "") + point_str(points_[i]);
        return r + ")";
    };
    auto kids = [&](const char* name) {
        std::string r = name;
        r += "(";
        for (size_t i = 0; i < children_.size(); ++i) r += (i ? ", " : "") + children_[i].describe();
        return r + ")";
    };
    switch (kind_) {
        case Kind::connect: return pts("connect");
        case Kind::disjoint_pair: return pts("pair");
        case Kind::double_conn: return pts("double");
        case Kind::marked_first_bond: return pts("marked");
        case Kind::with_extras: return children_[0].describe() + " & " + pts("extras");
        case Kind::pivotal: return pts("pivotal");
        case Kind::all_of: return kids("all");
        case Kind::any_of: return kids("any");
        case Kind::negation: return kids("not");
    }
    return "?";
}

LatticePoint parse_point(const std::string& text) {
    const auto at = text.find('@');
    if (at == std::string::npos) throw PreconditionError("point needs the form coords@time: " + text);
    LatticePoint x;
    try {
        x.time = std::stoi(text.substr(at + 1));
        const std::string c = text.substr(0, at);
        if (c != "o" && !c.empty()) {
            const auto parts = split(c, ',');
            for (size_t i = 0; i < parts.size(); ++i) {
                const int v = std::stoi(parts[i]);
                if (v != 0) x.coords[static_cast<int>(i)] = v;
            }
        }
    } catch (const std::logic_error&) {
        throw PreconditionError("cannot parse point: " + text);
    }
    if (x.time < 0 || !x.reachable()) throw PreconditionError("point is not reachable from the origin: " + text);
    return x;
}

EventSpec parse_event(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw PreconditionError("event needs the form kind:points: " + text);
    const std::string kind = text.substr(0, colon);
    std::vector<LatticePoint> p;
    for (const auto& part : split(text.substr(colon + 1), ';')) p.push_back(parse_point(part));
    auto need = [&](size_t n) {
        if (p.size() != n)
            throw PreconditionError("event " + kind + " takes " + std::to_string(n) + " point(s)");
    };
    if (kind == "connect") {
        need(2);
        return EventSpec::connect(p[0], p[1]);
    }
    if (kind == "double") {
        need(1);
        return EventSpec::double_conn(p[0]);
    }
    if (kind == "pair") {
        need(4);
        return EventSpec::disjoint_pair(p[0], p[1], p[2], p[3]);
    }
    if (kind == "marked") {
        need(3);
        return EventSpec::marked_first_bond(p[0], p[1], p[2]);
    }
    if (kind == "pivotal") {
        need(4);
        return EventSpec::pivotal(p[0], p[1], p[2], p[3]);
    }
    throw PreconditionError("unknown event kind: " + kind);
}

}  // namespace pcexp::oracle
