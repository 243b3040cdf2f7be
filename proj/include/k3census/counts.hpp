#pragma once

#include <map>
#include <string>
#include <vector>

#include "k3census/census.hpp"

namespace k3census {

struct CountLine {
    std::string label;
    std::string expected;
    std::string actual;
    bool pass() const { return expected == actual; }
    std::string to_string() const
    {
        return label + ": " + actual + (pass() ? " PASS" : " FAIL (expected " + expected + ")");
    }
};

namespace detail {

inline std::string join(const std::vector<int>& xs, const std::string& sep)
{
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? sep : "") + std::to_string(xs[i]);
    return s;
}

inline int count_if_h(const std::vector<GenusInvariant>& census, const std::string& h, GenusType type)
{
    int n = 0;
    for (const auto& g : census)
        if (make_type(g.surface).subgroup_catalog.at(g.h).name == h && genus_type(g) == type) ++n;
    return n;
}

inline std::vector<int> by_type(const std::vector<GenusInvariant>& census)
{
    std::vector<int> n(3, 0);
    for (const auto& g : census) ++n[static_cast<int>(genus_type(g))];
    return n;
}

inline std::vector<int> classes_by_type(const std::vector<RelatedClass>& classes)
{
    std::vector<int> n(3, 0);
    for (const auto& c : classes) ++n[static_cast<int>(genus_type(c.first))];
    return n;
}

inline std::vector<int> classes_by_delta_phiS(const std::vector<RelatedClass>& classes)
{
    std::vector<int> n(2, 0);
    for (const auto& c : classes) ++n[c.first.delta_phiS];
    return n;
}

}  // namespace detail

inline std::vector<CountLine> count_report(int threads)
{
    using detail::join;
    using T = GenusType;
    std::map<Surface, std::vector<GenusInvariant>> census;
    std::map<Surface, std::vector<RelatedClass>> classes;
    std::vector<CountLine> out;
    for (Surface s : kAllSurfaces) {
        census[s] = enumerate(s, Engine::generic, threads);
        classes[s] = identify_related(census[s]);
        bool same = census[s] == enumerate(s, Engine::percase, threads);
        out.push_back({surface_name(s) + " engines", "identical", same ? "identical" : "different"});
    }

    const auto& p2 = census[Surface::P2];
    out.push_back({"p2 delta_h=1 positive", "15/49",
                   join({detail::count_if_h(p2, "0", T::Type0), detail::count_if_h(p2, "0", T::TypeIb)}, "/")});
    out.push_back({"p2 delta_h=0 positive", "15/49",
                   join({detail::count_if_h(p2, "[h]", T::TypeIa), detail::count_if_h(p2, "[h]", T::TypeIb)}, "/")});
    out.push_back({"p2 total positive", "128", std::to_string(p2.size())});
    out.push_back({"p2 identified", "64", std::to_string(classes[Surface::P2].size())});

    out.push_back({"hyperboloid positive", "42/23/144", join(detail::by_type(census[Surface::Hyperboloid]), "/")});
    out.push_back({"hyperboloid identified", "26/14/76",
                   join(detail::classes_by_type(classes[Surface::Hyperboloid]), "/")});

    out.push_back({"ellipsoid positive", "13/13/45", join(detail::by_type(census[Surface::Ellipsoid]), "/")});
    out.push_back({"ellipsoid identified", "38", std::to_string(classes[Surface::Ellipsoid].size())});

    const auto& f1 = census[Surface::F1];
    out.push_back({"f1 families", "12/10/13/39/39/30",
                   join({detail::count_if_h(f1, "0", T::Type0), detail::count_if_h(f1, "[h+e]", T::Type0),
                         detail::count_if_h(f1, "[h]", T::TypeIa), detail::count_if_h(f1, "0", T::TypeIb),
                         detail::count_if_h(f1, "[h]", T::TypeIb), detail::count_if_h(f1, "[h+e]", T::TypeIb)},
                        "/")});
    out.push_back({"f1 identified", "35+95", join(detail::classes_by_delta_phiS(classes[Surface::F1]), "+")});

    auto f4 = detail::by_type(census[Surface::F4]);
    out.push_back({"f4 positive", "14/49", join({f4[0], f4[1] + f4[2]}, "/")});
    out.push_back({"f4 identified", "10+27", join(detail::classes_by_delta_phiS(classes[Surface::F4]), "+")});
    return out;
}

}  // namespace k3census
