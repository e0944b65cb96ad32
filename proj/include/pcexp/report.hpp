// Registered identity checks and the machine-readable consistency report.
#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "pcexp/laceexp.hpp"

namespace pcexp::report {

using qalg::PPoly;
using qalg::Rational;

enum class Comparison {
    exact,  // coefficientwise, P kept formal
    at_pc,  // P read as 1 + O(s^2)
};

struct Check {
    std::string name;  // unique
    std::string group;
    std::string lhs_label;
    std::string rhs_label;
    PPoly lhs;
    PPoly rhs;
    int through = 0;
    Comparison comparison = Comparison::exact;
    bool match = false;
    int mismatch_order = -1;  // lowest failing order in s
    Rational delta;           // (lhs - rhs) at P = 1 at that order
    std::string flag;         // id of a known discrepancy, or empty
    std::string note;
};

struct Discrepancy {
    std::string id;
    std::string title;
    std::string summary;
    std::vector<std::string> checks;  // names of the checks that document it
};

struct ConsistencyReport {
    std::vector<Check> checks;
    std::vector<Discrepancy> flagged;  // known discrepancies with a mismatching check

    int matched() const;
    int flagged_mismatches() const;
    int unflagged_mismatches() const;
    bool ok() const { return unflagged_mismatches() == 0; }
    const Check& check(const std::string& name) const;
    nlohmann::json to_json() const;
};

struct ReportOptions {
    bool diagrams = true;  // catalogue closed forms (interpolation, a few seconds)
    bool oracle = true;    // exact enumeration at d <= 3
    std::string corrupt;   // perturb the named check's lhs (fault injection)
};

ConsistencyReport consistency_report(const ReportOptions& options = {});

// Evaluates a comparison; fills match, mismatch_order and delta.
void evaluate(Check& c);

nlohmann::json to_json(const laceexp::PiEntry& e);
nlohmann::json to_json(const laceexp::PcSeries& p);

}  // namespace pcexp::report
