#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "k3census/census.hpp"
#include "k3census/deform.hpp"

namespace k3census {

inline constexpr const char* kSchema = "k3census/1";

inline nlohmann::json tuple_json(const GenusInvariant& g)
{
    const auto& t = make_type(g.surface);
    nlohmann::json j;
    j["surface"] = t.name();
    j["r"] = g.r;
    j["a"] = g.a;
    j["H"] = t.subgroup_catalog.at(g.h).name;
    j["delta_phiS"] = g.delta_phiS;
    j["v"] = g.v ? nlohmann::json(t.element_name(*g.v)) : nlohmann::json(nullptr);
    return j;
}

inline nlohmann::json record_json(const GenusInvariant& g)
{
    nlohmann::json j = tuple_json(g);
    j["delta_phi"] = g.delta_phi();
    j["type"] = type_name(genus_type(g));
    j["topology"] = topology(g.r, g.a, g.delta_phi()).to_string();
    j["unique"] = uniqueness_flag(g);
    j["related"] = tuple_json(related(g));
    return j;
}

inline nlohmann::json census_json(Surface surface, const std::vector<GenusInvariant>& census)
{
    nlohmann::json j;
    j["schema"] = kSchema;
    j["surface"] = surface_name(surface);
    j["records"] = nlohmann::json::array();
    for (const auto& g : census) j["records"].push_back(record_json(g));
    return j;
}

inline nlohmann::json related_json(Surface surface, const std::vector<RelatedClass>& classes)
{
    nlohmann::json j;
    j["schema"] = kSchema;
    j["surface"] = surface_name(surface);
    j["classes"] = nlohmann::json::array();
    for (const auto& c : classes)
        j["classes"].push_back({{"first", tuple_json(c.first)}, {"second", tuple_json(c.second)}, {"fixed", c.fixed()}});
    return j;
}

inline std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

inline std::string census_csv(const std::vector<GenusInvariant>& census)
{
    std::ostringstream out;
    out << "surface,r,a,H,delta_phiS,v,delta_phi,type,topology,unique,related\n";
    for (const auto& g : census) {
        const auto& t = make_type(g.surface);
        out << t.name() << ',' << g.r << ',' << g.a << ',' << csv_field(t.subgroup_catalog.at(g.h).name) << ','
            << g.delta_phiS << ',' << (g.v ? csv_field(t.element_name(*g.v)) : "") << ',' << g.delta_phi() << ','
            << type_name(genus_type(g)) << ',' << csv_field(topology(g.r, g.a, g.delta_phi()).to_string()) << ','
            << (uniqueness_flag(g) ? 1 : 0) << ',' << csv_field(describe(related(g))) << '\n';
    }
    return out.str();
}

inline nlohmann::json polarized_json(const PolarizedInvariant& p)
{
    return {{"n", p.n},           {"r", p.r},           {"a", p.a},
            {"delta_P", p.delta_P}, {"delta_phi", p.delta_phi}, {"delta_phiP", p.delta_phiP}};
}

inline nlohmann::json deform_json(int n, const Provenance& image)
{
    nlohmann::json j;
    j["schema"] = kSchema;
    j["n"] = n;
    j["targets"] = nlohmann::json::array();
    for (const auto& [p, sources] : image) {
        nlohmann::json rec = polarized_json(p);
        rec["exception"] = is_exception(p);
        rec["sources"] = nlohmann::json::array();
        for (const auto& [t, g] : sources) {
            nlohmann::json src = tuple_json(g);
            src["scroll"] = scroll_name(t);
            rec["sources"].push_back(src);
        }
        j["targets"].push_back(rec);
    }
    return j;
}

inline std::string deform_csv(const Provenance& image)
{
    std::ostringstream out;
    out << "n,r,a,delta_P,delta_phi,delta_phiP,scroll,source\n";
    for (const auto& [p, sources] : image)
        for (const auto& [t, g] : sources)
            out << p.n << ',' << p.r << ',' << p.a << ',' << p.delta_P << ',' << p.delta_phi << ',' << p.delta_phiP
                << ',' << scroll_name(t) << ',' << csv_field(describe(g)) << '\n';
    return out.str();
}

}  // namespace k3census
