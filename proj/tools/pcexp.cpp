// Command-line entry point: series pipeline, tables, oracle, simulation.
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "pcexp/crosscheck.hpp"
#include "pcexp/diagrams.hpp"
#include "pcexp/laceexp.hpp"
#include "pcexp/mc.hpp"
#include "pcexp/oracle.hpp"
#include "pcexp/report.hpp"

using namespace pcexp;
using nlohmann::json;
using qalg::Rational;

namespace {

constexpr const char* kVersion = "1.0.0";

enum Exit { kOk = 0, kMismatch = 2, kResource = 3, kBadArgs = 4 };

struct Options {
    int order = 4;
    std::string mode = "stated";
    int d = 1;
    std::string p = "1";
    int T = 4;
    long replicas = 10000;
    std::uint64_t seed = 1;
    int threads = 0;
    std::string out;
    // subcommand specific
    std::string level = "fast";
    std::string corrupt;
    std::string name;
    std::string params;
    std::string type = "o";
    std::string event;
    bool poly = false;
    std::string stat = "pi0";
    int t_min = 5;
    int t_max = 8;
    std::string x = "o@2";
    double threshold = 0;
    double tol = 1e-3;
};

// Reproducible-builds convention: SOURCE_DATE_EPOCH pins the timestamp so
// outputs are byte-stable.
std::string timestamp() {
    std::time_t t = std::time(nullptr);
    if (const char* e = std::getenv("SOURCE_DATE_EPOCH")) t = static_cast<std::time_t>(std::strtoll(e, nullptr, 10));
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

json manifest(const std::string& command, const std::vector<std::string>& argv, const Options& o) {
    return {{"command", command}, {"argv", argv},   {"seed", o.seed}, {"K", o.order},
            {"mode", o.mode},     {"version", kVersion}, {"timestamp", timestamp()}};
}

class Output {
public:
    explicit Output(const std::string& path) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw PreconditionError("cannot open " + path);
        }
    }
    std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

private:
    std::ofstream file_;
};

void emit_json(const Options& o, const json& man, json body) {
    Output out(o.out);
    json doc{{"manifest", man}};
    doc.update(body);
    out.stream() << doc.dump(2) << "\n";
}

std::vector<int> parse_ints(const std::string& text) {
    std::vector<int> v;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        try {
            size_t used = 0;
            v.push_back(std::stoi(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw PreconditionError("not an integer list: '" + text + "'");
        }
    }
    return v;
}

walks::PointType parse_type(const std::string& text) {
    if (text == "o" || text == "[]") return {};
    std::string inner = text;
    if (inner.size() >= 2 && inner.front() == '[' && inner.back() == ']') inner = inner.substr(1, inner.size() - 2);
    const auto v = parse_ints(inner);
    for (int e : v)
        if (e < 1) throw PreconditionError("type entries must be >= 1: '" + text + "'");
    return walks::PointType(v);
}

json series_json(const laceexp::PcSeries& p) { return report::to_json(p); }

json pipeline(laceexp::Mode mode, int order) {
    const auto totals = laceexp::pi_totals(mode);
    const auto pc = laceexp::pc_fixed_point(totals.total(), order);
    const qalg::PPoly one_round = laceexp::one_round_form(totals.total());
    return {{"mode", laceexp::to_string(mode)},
            {"pi_totals", {{"pi0", totals.pi0.str()}, {"pi1", totals.pi1.str()}, {"pi2", totals.pi2.str()}}},
            {"one_round_form", {{"text", one_round.str()}, {"value", qalg::to_json(one_round)}}},
            {"pc", series_json(pc)}};
}

int cmd_reproduce(const Options& o, const json& man) {
    const laceexp::Mode mode = laceexp::parse_mode(o.mode);
    json body;
    body["pipeline"] = pipeline(laceexp::Mode::stated, o.order);
    if (mode == laceexp::Mode::recomputed) {
        body["recomputed"] = pipeline(mode, o.order);
        json deltas = json::array();
        for (int t : {3, 4})
            for (const auto& type : walks::types_at(t)) {
                const auto stated = laceexp::multiplicity(t, type, laceexp::Mode::stated);
                const auto counted = laceexp::multiplicity(t, type, laceexp::Mode::recomputed);
                if (stated != counted)
                    deltas.push_back({{"time", t}, {"type", type.name()}, {"stated", stated.str()},
                                      {"orbit_count", counted.str()}});
            }
        body["multiplicity_deltas"] = deltas;
    }
    const auto r = report::consistency_report();
    const json rj = r.to_json();
    body["report"] = {{"summary", rj["summary"]}, {"flagged", rj["flagged"]}};
    const auto pc = laceexp::pc_fixed_point(laceexp::pi_totals(laceexp::Mode::stated).total(), o.order);
    const bool headline = qalg::equal_through(pc.series, laceexp::printed_pc_series(), std::min(o.order, 4));
    body["reproduced"] = headline && r.ok();
    emit_json(o, man, body);
    std::cerr << "p_c = " << pc.series.str() << (headline ? "  (reproduced)" : "  (MISMATCH)") << "\n"
              << "identities: " << r.matched() << "/" << r.checks.size() << " match, " << r.flagged.size()
              << " flagged discrepancies, " << r.unflagged_mismatches() << " unflagged mismatches\n";
    return headline && r.ok() ? kOk : kMismatch;
}

int cmd_verify(const Options& o, const json& man) {
    if (o.level != "fast" && o.level != "full") throw PreconditionError("level must be fast or full");
    const auto r = report::consistency_report({.diagrams = true, .oracle = true, .corrupt = o.corrupt});
    json checks = json::array();
    std::string first_failed;
    for (const auto& c : r.checks) {
        const bool failed = !c.match && c.flag.empty();
        if (failed && first_failed.empty()) first_failed = c.name;
        checks.push_back({{"name", c.name}, {"status", c.match ? "match" : (c.flag.empty() ? "FAIL" : "flagged")}});
    }
    json mc_checks = json::array();
    bool mc_ok = true;
    if (o.level == "full") {
        for (const auto& x : {crosscheck::mc_calibration(100000, o.seed, 4, o.threads),
                              crosscheck::large_d_t2_sum(8, 1000000, o.seed, 3, o.threads),
                              crosscheck::large_d_bisection(8, 200, 1e-3, 60000, o.seed, 5, o.threads)}) {
            mc_checks.push_back({{"name", x.name}, {"pass", x.pass}, {"detail", x.detail}});
            if (!x.pass) {
                mc_ok = false;
                if (first_failed.empty()) first_failed = x.name;
            }
        }
    }
    if (o.level == "full") {
        // Reported but not gating: the slice 5..8 sum at d = 8 is known to
        // exceed the bound (see README).
        const auto tail = crosscheck::tail_bound(8, 5, 8, 200000, o.seed, 0.2, o.threads);
        mc_checks.push_back({{"name", tail.name}, {"pass", tail.pass}, {"gating", false}, {"detail", tail.detail}});
    }
    const bool ok = r.ok() && mc_ok;
    json body{{"level", o.level}, {"ok", ok}, {"checks", checks}};
    if (o.level == "full") body["mc"] = mc_checks;
    if (!ok) body["first_failed"] = first_failed;
    emit_json(o, man, body);
    if (!ok) std::cerr << "first failed identity: " << first_failed << "\n";
    return ok ? kOk : kMismatch;
}

int cmd_pc(const Options& o, const json& man) {
    emit_json(o, man, pipeline(laceexp::parse_mode(o.mode), o.order));
    return kOk;
}

int cmd_diagram(const Options& o, const json& man) {
    const auto r = diagrams::named_diagram(o.name, parse_ints(o.params), parse_type(o.type));
    json body{{"name", o.name},
              {"params", parse_ints(o.params)},
              {"type", r.entry.type.name()},
              {"time", r.entry.time},
              {"p_exponent", r.value.p_exponent},
              {"poly_s", r.value.poly().str()},
              {"printed_form", r.entry.printed ? json(r.entry.printed->str()) : json(nullptr)},
              {"match", r.match}};
    if (!r.entry.note.empty()) body["note"] = r.entry.note;
    emit_json(o, man, body);
    return r.entry.printed && !r.match ? kMismatch : kOk;
}

int cmd_table(const Options& o, const json& man) {
    if (o.order < 0 || o.order > 6) throw PreconditionError("table order must be in 0..6");
    Output out(o.out);
    out.stream() << "# manifest: " << man.dump() << "\n" << "type,n,polynomial\n";
    for (int n = 0; n <= o.order; ++n)
        for (const auto& t : walks::types_at(n))
            out.stream() << '"' << t.name() << "\"," << n << ',' << walks::dconv_generic(n, t).str() << "\n";
    return kOk;
}

int cmd_oracle(const Options& o, const json& man) {
    const auto cone = oracle::Cone::build(o.d, o.T);
    const auto event = oracle::parse_event(o.event);
    const Rational p = qalg::parse_rational(o.p);
    const auto r = oracle::event_exact(cone, event, p);
    json body{{"d", o.d},
              {"T", o.T},
              {"event", event.describe()},
              {"p", qalg::to_string(p)},
              {"probability", qalg::to_string(r.probability)},
              {"value", r.probability.get_d()},
              {"bonds", r.bonds}};
    if (o.poly) body["q_poly"] = r.q_poly.str();
    emit_json(o, man, body);
    return kOk;
}

int cmd_simulate(const Options& o, const json& man) {
    const mc::SimConfig cfg{o.d, qalg::parse_rational(o.p), o.T, o.replicas, o.seed, o.threads};
    Output out(o.out);
    auto& s = out.stream();
    s << "# manifest: " << man.dump() << "\n" << "stat,slice,mean,stderr,n,raw_count\n";
    s.precision(10);
    auto row = [&](const std::string& slice, const mc::Estimate& e) {
        s << o.stat << ',' << slice << ',' << e.mean << ',' << e.std_err << ',' << e.n << ',' << e.raw_count << "\n";
    };
    if (o.stat == "pi0") {
        for (int t = 0; t <= o.T; ++t) row(std::to_string(t), mc::estimate_pi0_sum(cfg, t));
    } else if (o.stat == "marked") {
        for (int t = 2; t <= std::min(o.T, 3); ++t) row(std::to_string(t), mc::estimate_marked_sum(cfg, t));
    } else if (o.stat == "tail") {
        row(std::to_string(o.t_min) + "-" + std::to_string(o.t_max), mc::estimate_tail(cfg, o.t_min, o.t_max));
    } else if (o.stat == "survival") {
        row(std::to_string(o.T), mc::estimate_survival(cfg));
    } else if (o.stat == "tau") {
        const auto x = oracle::parse_point(o.x);
        row(std::to_string(x.time), mc::estimate_tau(cfg, x));
    } else {
        throw PreconditionError("unknown statistic " + o.stat);
    }
    return kOk;
}

int cmd_bisect(const Options& o, const json& man) {
    const double threshold = o.threshold > 0 ? o.threshold : mc::critical_survival_threshold(o.d, o.T);
    const auto r = mc::bisect_pc(o.d, o.T, threshold, o.tol, o.replicas, o.seed, o.threads);
    json history = json::array();
    for (const auto& h : r.history)
        history.push_back({{"p", qalg::to_string(h.p)}, {"p_value", h.p.get_d()}, {"survival", crosscheck::to_json(h.survival)}});
    emit_json(o, man,
              {{"d", o.d},
               {"T", o.T},
               {"threshold", threshold},
               {"tol", o.tol},
               {"estimator", "finite-horizon survival bisection (heuristic, not a controlled p_c estimate)"},
               {"p_low", qalg::to_string(r.p_low)},
               {"p_high", qalg::to_string(r.p_high)},
               {"p_mid", Rational((r.p_low + r.p_high) / 2).get_d()},
               {"survival_at_mid", crosscheck::to_json(r.at_mid)},
               {"history", history}});
    return kOk;
}

int cmd_report(const Options& o, const json& man) {
    const auto r = report::consistency_report({.diagrams = true, .oracle = true, .corrupt = o.corrupt});
    emit_json(o, man, {{"report", r.to_json()}});
    return r.ok() ? kOk : kMismatch;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact series, enumeration and simulation for the oriented percolation critical point"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);
    Options o;
    std::vector<std::string> args(argv, argv + argc);

    auto common = [&](CLI::App* sub) {
        sub->add_option("--out", o.out, "write output to this file");
        sub->add_option("--threads", o.threads, "worker threads (0: all cores)")->check(CLI::NonNegativeNumber);
    };
    auto series_opts = [&](CLI::App* sub) {
        sub->add_option("--order", o.order, "truncation order in s")->check(CLI::Range(0, 4));
        sub->add_option("--mode", o.mode, "stated | recomputed")
            ->check(CLI::IsMember({"stated", "recomputed"}));
    };
    auto sim_opts = [&](CLI::App* sub) {
        sub->add_option("--d", o.d, "dimension")->check(CLI::PositiveNumber);
        sub->add_option("--p", o.p, "p as num/den");
        sub->add_option("--T", o.T, "time horizon")->check(CLI::NonNegativeNumber);
        sub->add_option("--replicas", o.replicas, "replicas (per step for bisect)")->check(CLI::PositiveNumber);
        sub->add_option("--seed", o.seed, "seed");
    };

    auto* reproduce = app.add_subcommand("reproduce", "p_c series from the per-time sums, with the consistency report");
    series_opts(reproduce);
    common(reproduce);

    auto* verify = app.add_subcommand("verify", "run the identity suites (full adds seeded Monte Carlo checks)");
    verify->add_option("--level", o.level, "fast | full")->check(CLI::IsMember({"fast", "full"}));
    verify->add_option("--seed", o.seed, "seed for the Monte Carlo checks");
    verify->add_option("--inject-fault", o.corrupt, "perturb the named identity (negative test)");
    common(verify);

    auto* pc = app.add_subcommand("pc", "p_c series as JSON");
    series_opts(pc);
    common(pc);

    auto* diagram = app.add_subcommand("diagram", "generic closed form of a catalogue diagram");
    diagram->add_option("--name", o.name, "catalogue name")->required();
    diagram->add_option("--params", o.params, "comma-separated parameters");
    diagram->add_option("--type", o.type, "target type, e.g. o, [1], [2,1]");
    common(diagram);

    auto* table = app.add_subcommand("table", "D^{*n} by point type as CSV");
    table->add_option("--order", o.order, "largest n (<= 6)")->check(CLI::Range(0, 6));
    common(table);

    auto* orc = app.add_subcommand("oracle", "exact event probability by enumeration");
    orc->add_option("--d", o.d, "dimension")->check(CLI::PositiveNumber);
    orc->add_option("--T", o.T, "cone horizon")->check(CLI::NonNegativeNumber);
    orc->add_option("--p", o.p, "p as num/den");
    orc->add_option("--event", o.event, "event, e.g. double:0@2")->required();
    orc->add_flag("--poly", o.poly, "also print the polynomial in q");
    common(orc);

    auto* simulate = app.add_subcommand("simulate", "Monte Carlo estimates as CSV");
    sim_opts(simulate);
    simulate->add_option("--stat", o.stat, "pi0 | marked | tail | survival | tau")
        ->check(CLI::IsMember({"pi0", "marked", "tail", "survival", "tau"}));
    simulate->add_option("--t-min", o.t_min, "first slice of the tail");
    simulate->add_option("--t-max", o.t_max, "last slice of the tail");
    simulate->add_option("--x", o.x, "target point for tau, e.g. 1,1@2");
    common(simulate);

    auto* bisect = app.add_subcommand("bisect", "finite-horizon bisection of the survival probability in p");
    sim_opts(bisect);
    bisect->add_option("--threshold", o.threshold, "survival threshold (default 2/(sigma^2 T))");
    bisect->add_option("--tol", o.tol, "bracket width")->check(CLI::PositiveNumber);
    common(bisect);

    auto* rep = app.add_subcommand("report", "consistency report as JSON");
    rep->add_option("--inject-fault", o.corrupt, "perturb the named identity (negative test)");
    common(rep);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kBadArgs;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    if (command == "reproduce" || command == "pc") o.mode = laceexp::to_string(laceexp::parse_mode(o.mode));
    const json man = manifest(command, args, o);
    try {
        if (command == "reproduce") return cmd_reproduce(o, man);
        if (command == "verify") return cmd_verify(o, man);
        if (command == "pc") return cmd_pc(o, man);
        if (command == "diagram") return cmd_diagram(o, man);
        if (command == "table") return cmd_table(o, man);
        if (command == "oracle") return cmd_oracle(o, man);
        if (command == "simulate") return cmd_simulate(o, man);
        if (command == "bisect") return cmd_bisect(o, man);
        if (command == "report") return cmd_report(o, man);
    } catch (const ResourceError& e) {
        std::cerr << "resource guard: " << e.what() << "\n";
        return kResource;
    } catch (const PreconditionError& e) {
        std::cerr << "bad arguments: " << e.what() << "\n";
        return kBadArgs;
    } catch (const NotPolynomialError& e) {
        std::cerr << "identity mismatch: " << e.what() << "\n";
        return kMismatch;
    }
    return kBadArgs;
}
