#include "singlet/report_io.hpp"

#include <json.hpp>

#include "singlet/errors.hpp"

namespace singlet {

using nlohmann::json;

std::string report_to_json(const BellReport& report) {
    json sectors = json::array();
    for (const SectorTerm& term : report.per_sector) {
        sectors.push_back({{"k", term.k},
                           {"V_k", term.visibility},
                           {"A_k", term.antivisibility},
                           {"B_k", term.bell},
                           {"weight", term.weight}});
    }
    json doc = {{"g", report.gain.g()},
                {"filter", report.filter.label()},
                {"delta_th", report.filter.delta_th()},
                {"beta_opt", report.angle_used},
                {"V", report.v_total},
                {"A", report.a_total},
                {"B", report.b_total},
                {"per_sector", sectors},
                {"tail_mass", report.tail_mass}};
    return doc.dump(2);
}

BellReport report_from_json(const std::string& text) {
    json doc = json::parse(text);
    BellReport report;
    report.gain = Gain(doc.at("g").get<double>());
    const std::string filter = doc.at("filter").get<std::string>();
    const int delta_th = doc.at("delta_th").get<int>();
    if (filter == "none")
        report.filter = FilterSpec::none();
    else if (filter == "corner")
        report.filter = FilterSpec::corner(delta_th);
    else if (filter == "mdf")
        report.filter = FilterSpec::mdf(delta_th);
    else
        throw ConfigError("unknown filter label '" + filter + "'");
    report.angle_used = doc.at("beta_opt").get<double>();
    report.v_total = doc.at("V").get<double>();
    report.a_total = doc.at("A").get<double>();
    report.b_total = doc.at("B").get<double>();
    report.abs_b = std::abs(report.b_total);
    report.tail_mass = doc.at("tail_mass").get<double>();
    for (const auto& item : doc.at("per_sector")) {
        report.per_sector.push_back(SectorTerm{item.at("k").get<int>(),
                                               item.at("V_k").get<double>(),
                                               item.at("A_k").get<double>(),
                                               item.at("B_k").get<double>(),
                                               item.at("weight").get<double>()});
    }
    return report;
}

}  // namespace singlet
