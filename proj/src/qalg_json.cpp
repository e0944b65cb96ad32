#include "pcexp/qalg.hpp"

namespace pcexp::qalg {

using nlohmann::json;

json to_json(const Rational& r) { return json::array({r.get_num().get_str(), r.get_den().get_str()}); }

Rational rational_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2) throw PreconditionError("rational must be [num, den]");
    return parse_rational(j[0].get<std::string>() + "/" + j[1].get<std::string>());
}

json to_json(const SeriesS& a) {
    json cs = json::array();
    for (const auto& c : a.coeffs()) cs.push_back(to_json(c));
    return {{"var", "s"}, {"K", a.order()}, {"coeffs", cs}};
}

SeriesS series_from_json(const json& j) {
    if (j.at("var") != "s") throw PreconditionError("series variable must be s");
    const int K = j.at("K").get<int>();
    std::vector<Rational> cs;
    for (const auto& c : j.at("coeffs")) cs.push_back(rational_from_json(c));
    if (static_cast<int>(cs.size()) != K + 1) throw PreconditionError("coefficient count does not match K");
    return SeriesS(std::move(cs), K);
}

// Coefficients of P^0, P^1, ... each in the series form above.
json to_json(const PPoly& f) {
    json cs = json::array();
    for (int j = 0; j <= f.p_degree(); ++j) cs.push_back(to_json(f.coeff(j)));
    return {{"var", "P"}, {"K", f.order()}, {"coeffs", cs}};
}

PPoly ppoly_from_json(const json& j) {
    if (j.at("var") != "P") throw PreconditionError("polynomial variable must be P");
    PPoly f(j.at("K").get<int>());
    int deg = 0;
    for (const auto& c : j.at("coeffs")) f.set_coeff(deg++, series_from_json(c));
    return f;
}

}  // namespace pcexp::qalg
