// Lattice diagrams: products of D^{*k} factors summed over internal vertices.
#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "pcexp/qalg.hpp"
#include "pcexp/walks.hpp"

namespace pcexp::diagrams {

using qalg::PolyVar;
using qalg::PPoly;
using qalg::Rational;
using walks::LatticePoint;
using walks::PointType;

enum class VertexKind { origin, target, internal };

struct Vertex {
    int id = 0;
    int time = 0;
    VertexKind kind = VertexKind::internal;
};

// Factor (D^{*k}(to - from))^m.
struct Edge {
    int from = 0;
    int to = 0;
    int k = 1;
    int m = 1;
};

struct DiagramSpec {
    std::string name;
    std::vector<Vertex> vertices;
    std::vector<Edge> edges;
    std::vector<std::vector<int>> distinct;  // each set pairwise distinct
    int p_exponent = 0;

    const Vertex& vertex(int id) const;
    const Vertex& target() const;
    int degree_bound() const;  // total number of D factors
    void validate() const;     // throws PreconditionError
};

struct DiagramValue {
    int p_exponent = 0;
    std::variant<PolyVar, Rational> value;

    const PolyVar& poly() const { return std::get<PolyVar>(value); }
    const Rational& concrete() const { return std::get<Rational>(value); }
};

inline constexpr long kDefaultSlicePointCap = 1'000'000;

DiagramValue diagram_eval_concrete(const DiagramSpec& spec, const LatticePoint& target, int d,
                                   long slice_point_cap = kDefaultSlicePointCap);

DiagramValue diagram_eval_generic(const DiagramSpec& spec, const PointType& target_type);

// Small builder used by the catalogue and tests.
class Builder {
public:
    Builder(std::string name, int target_time);
    int internal(int time);
    int origin() const { return 0; }
    int target() const { return 1; }
    Builder& edge(int from, int to, int m = 1);  // k taken from the time gap
    Builder& distinct(std::vector<int> ids);
    DiagramSpec build() const;

private:
    DiagramSpec spec_;
};

// ---------------------------------------------------------------- catalogue

struct Term {
    Rational coeff;
    DiagramSpec spec;
};

struct NamedDiagram {
    std::string name;
    std::vector<int> params;
    PointType type;
    int time = 0;
    int p_exponent = 0;
    std::vector<Term> terms;
    // Closed form printed for this entry, compared through order
    // printed_through (a negative value means the whole polynomial).
    std::optional<PolyVar> printed;
    int printed_through = -1;
    bool reconstructed = false;
    std::string note;
};

struct NamedResult {
    NamedDiagram entry;
    DiagramValue value;  // generic
    bool match = false;
};

std::vector<std::string> catalogue_names();
NamedDiagram catalogue_entry(const std::string& name, const std::vector<int>& params, const PointType& type);
NamedResult named_diagram(const std::string& name, const std::vector<int>& params, const PointType& type);

// coeff-weighted sum of the entry's terms at concrete d.
Rational named_concrete(const NamedDiagram& entry, int d);

// Agreement of two s-polynomials through the given order (negative: all).
bool agree_through(const PolyVar& a, const PolyVar& b, int order);

}  // namespace pcexp::diagrams
