// Exact event probabilities by enumerating bond configurations.
#pragma once

#include <map>
#include <string>
#include <vector>

#include "pcexp/qalg.hpp"
#include "pcexp/walks.hpp"

namespace pcexp::oracle {

using qalg::PolyVar;
using qalg::Rational;
using walks::Dense;
using walks::LatticePoint;

struct Bond {
    int from = 0;  // site index
    int to = 0;
    auto operator<=>(const Bond&) const = default;
};

// Sites and bonds reachable from (o,0) up to time T. Sites in a slice and
// bonds are ordered lexicographically by (time, from coords, to coords).
class Cone {
public:
    static constexpr int kMaxBonds = 20000;

    static Cone build(int d, int T);

    int d() const { return d_; }
    int horizon() const { return T_; }
    const std::vector<LatticePoint>& sites() const { return sites_; }
    const std::vector<std::vector<int>>& slices() const { return slices_; }
    const std::vector<Bond>& bonds() const { return bonds_; }
    int site_index(const LatticePoint& x) const;  // -1 if outside
    int bond_index(const LatticePoint& a, const LatticePoint& b) const;  // -1 if absent

private:
    int d_ = 1;
    int T_ = 0;
    std::vector<LatticePoint> sites_;
    std::vector<std::vector<int>> slices_;
    std::vector<Bond> bonds_;
    std::map<LatticePoint, int> index_;
};

// Lexicographic order on signed coordinate vectors; used wherever an
// explicit order on the support of D is required.
bool support_precedes(const Dense& a, const Dense& b);

class EventSpec {
public:
    enum class Kind { connect, disjoint_pair, double_conn, marked_first_bond, with_extras, pivotal, all_of, any_of, negation };

    static EventSpec connect(LatticePoint a, LatticePoint b);
    // {a -> x} o {b -> y}: bond-disjoint witnesses.
    static EventSpec disjoint_pair(LatticePoint a, LatticePoint x, LatticePoint b, LatticePoint y);
    // o => x: two bond-disjoint open paths (true for x = o).
    static EventSpec double_conn(LatticePoint x);
    // {[o,s> -> x} o {o -> y}.
    static EventSpec marked_first_bond(LatticePoint s, LatticePoint x, LatticePoint y);
    // base and o -> w for every listed w.
    static EventSpec with_extras(EventSpec base, std::vector<LatticePoint> extras);
    // [b_from, b_to> is open and pivotal for a -> x.
    static EventSpec pivotal(LatticePoint b_from, LatticePoint b_to, LatticePoint a, LatticePoint x);
    static EventSpec all_of(std::vector<EventSpec> parts);
    static EventSpec any_of(std::vector<EventSpec> parts);
    static EventSpec negation(EventSpec inner);

    Kind kind() const { return kind_; }
    const std::vector<LatticePoint>& points() const { return points_; }
    const std::vector<EventSpec>& children() const { return children_; }

    // Every lattice point mentioned, including the origin where implied.
    std::vector<LatticePoint> referenced() const;
    // (source, target) pairs whose connecting paths decide the event.
    std::vector<std::pair<LatticePoint, LatticePoint>> path_pairs() const;
    int max_time() const;
    std::string describe() const;

private:
    Kind kind_ = Kind::connect;
    std::vector<LatticePoint> points_;
    std::vector<EventSpec> children_;
};

// Parse "double:x0,x1@t", "connect:a@t;b@t", ... (see README).
EventSpec parse_event(const std::string& text);
LatticePoint parse_point(const std::string& text);

inline constexpr int kMaxEnumeratedBonds = 24;

struct ExactResult {
    Rational probability;
    PolyVar q_poly{qalg::Var::q};  // probability as a polynomial in q = p/(2d)
    int bonds = 0;                   // bonds actually enumerated
};

// Enumerates the bonds on paths relevant to the event; throws
// ResourceError above kMaxEnumeratedBonds.
ExactResult event_exact(const Cone& cone, const EventSpec& e, const Rational& p);
Rational event_prob_exact(const Cone& cone, const EventSpec& e, const Rational& p);

inline constexpr int kMaxFactorizedDimension = 12;

// Time-2 events at any d <= 12, conditioning on the first slice and
// grouping exchangeable first-slice sites.
Rational t2_factorized_prob(int d, const EventSpec& e, const Rational& p);

// Bonds (cone indices) whose removal from the open set disconnects a from x.
std::vector<int> pivotal_bonds(const Cone& cone, const std::vector<int>& open_bonds, const LatticePoint& a,
                               const LatticePoint& x);

// ---- predicates on a realized open subgraph (shared with the simulator)

// Directed graph on integer vertices with unit-capacity edges.
struct OpenGraph {
    int vertices = 0;
    std::vector<std::pair<int, int>> edges;  // (from, to), all open
};

bool reaches(const OpenGraph& g, int a, int b, int skip_edge = -1);
// Max-flow from sources to sinks is at least 2 (stops after two augmentations).
// With a single source or sink of multiplicity two, pass it twice.
bool two_edge_disjoint(const OpenGraph& g, const std::vector<int>& sources, const std::vector<int>& sinks,
                       int skip_edge = -1);
// Exhaustive check for edge-disjoint paths a -> x and b -> y.
bool disjoint_paths_exhaustive(const OpenGraph& g, int a, int x, int b, int y, int skip_edge = -1);

}  // namespace pcexp::oracle
