#pragma once

#include <array>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "k3census/census.hpp"
#include "k3census/lattice.hpp"

namespace k3census {

enum class ScrollType { P2, E, H1, H2, F1, F4_1, F4_2 };

inline constexpr std::array<ScrollType, 7> kAllScrollTypes = {ScrollType::P2, ScrollType::E,    ScrollType::H1,
                                                             ScrollType::H2, ScrollType::F1,   ScrollType::F4_1,
                                                             ScrollType::F4_2};

inline std::string scroll_name(ScrollType t)
{
    switch (t) {
    case ScrollType::P2: return "P2";
    case ScrollType::E: return "E";
    case ScrollType::H1: return "H1";
    case ScrollType::H2: return "H2";
    case ScrollType::F1: return "F1";
    case ScrollType::F4_1: return "F4_1";
    case ScrollType::F4_2: return "F4_2";
    }
    return "?";
}

inline ScrollType parse_scroll(const std::string& name)
{
    for (ScrollType t : kAllScrollTypes)
        if (scroll_name(t) == name) return t;
    throw std::invalid_argument("unknown scroll type: " + name);
}

inline Surface underlying_surface(ScrollType t)
{
    switch (t) {
    case ScrollType::P2: return Surface::P2;
    case ScrollType::E: return Surface::Ellipsoid;
    case ScrollType::H1:
    case ScrollType::H2: return Surface::Hyperboloid;
    case ScrollType::F1: return Surface::F1;
    case ScrollType::F4_1:
    case ScrollType::F4_2: return Surface::F4;
    }
    throw std::invalid_argument("unknown scroll type");
}

inline void require_even_positive(int n)
{
    if (n <= 0 || n % 2 != 0) throw std::invalid_argument("n must be a positive even integer, got " + std::to_string(n));
}

inline bool is_member(ScrollType t, int n)
{
    require_even_positive(n);
    switch (t) {
    case ScrollType::P2: return n == 2;
    case ScrollType::E: return n == 4;
    case ScrollType::H1:
    case ScrollType::H2: return n % 4 == 0 && n >= 4;
    case ScrollType::F1: return n % 4 == 2 && n >= 6;
    case ScrollType::F4_1: return n >= 4;
    case ScrollType::F4_2: return n % 8 == 4 && n >= 12;
    }
    return false;
}

inline std::vector<ScrollType> members(int n)
{
    require_even_positive(n);
    std::vector<ScrollType> out;
    for (ScrollType t : kAllScrollTypes)
        if (is_member(t, n)) out.push_back(t);
    return out;
}

// Coefficients of the polarization P in the named basis of S; primitive with P^2 = n.
inline IntVec polarization(ScrollType t, int n)
{
    if (!is_member(t, n)) throw std::invalid_argument("n = " + std::to_string(n) + " is not in " + scroll_name(t));
    IntVec p;
    switch (t) {
    case ScrollType::P2: p = {1}; break;
    case ScrollType::E: p = {1, 1}; break;
    case ScrollType::H1: p = {n / 4, 1}; break;
    case ScrollType::H2: p = {1, n / 4}; break;
    case ScrollType::F1: p = {(n + 2) / 4, (2 - n) / 4}; break;
    case ScrollType::F4_1: p = {n / 2 + 1, 1}; break;
    case ScrollType::F4_2: p = {n / 4 + 2, 2}; break;
    }
    const auto& s = make_type(underlying_surface(t));
    if (bilinear(s.gram(), p, p) != n) throw std::logic_error("P^2 != n for " + scroll_name(t));
    long long g = 0;
    for (long long c : p) g = std::gcd(g, c);
    if (g != 1) throw std::logic_error("P is not primitive for " + scroll_name(t));
    return p;
}

struct PolarizedInvariant {
    int n = 0;
    int r = 0;
    int a = 0;
    int delta_P = 1;
    int delta_phi = 1;
    int delta_phiP = 1;

    auto key() const { return std::tuple(n, r, a, delta_P, delta_phi, delta_phiP); }
    bool operator<(const PolarizedInvariant& o) const { return key() < o.key(); }
    bool operator==(const PolarizedInvariant& o) const { return key() == o.key(); }
};

inline std::string describe(const PolarizedInvariant& p)
{
    return "(" + std::to_string(p.n) + "; " + std::to_string(p.r) + ", " + std::to_string(p.a) + ", " +
           std::to_string(p.delta_P) + ", " + std::to_string(p.delta_phi) + ", " + std::to_string(p.delta_phiP) + ")";
}

namespace detail {

inline void require_source(ScrollType t, int n, const GenusInvariant& g)
{
    if (g.surface != underlying_surface(t))
        throw std::invalid_argument("tuple of " + surface_name(g.surface) + " cannot be deformed along " +
                                    scroll_name(t));
    if (!is_member(t, n)) throw std::invalid_argument("n = " + std::to_string(n) + " is not in " + scroll_name(t));
}

}  // namespace detail

// delta_P = 0 iff P mod 2S_- lies in H_-; delta_phiP = 0 iff delta_phiS = 0 and P = v mod 2S_-.
inline PolarizedInvariant apply_D_rules(ScrollType t, int n, const GenusInvariant& g)
{
    detail::require_source(t, n, g);
    const auto& s = make_type(g.surface);
    const auto& hs = s.subgroups.at(g.h);
    IntVec p = polarization(t, n);
    PolarizedInvariant out{n, g.r, g.a, 1, g.delta_phi(), 1};
    for (const auto& [im, lift] : hs.minus_lift)
        if (s.same_mod_2(-1, p, lift)) out.delta_P = 0;
    if (g.delta_phiS == 0) {
        auto it = hs.minus_lift.find(*g.v);
        if (it != hs.minus_lift.end() && s.same_mod_2(-1, p, it->second)) out.delta_phiP = 0;
    }
    return out;
}

// The case table of the deformation types, written out per scroll type.
inline PolarizedInvariant apply_D_table(ScrollType t, int n, const GenusInvariant& g)
{
    detail::require_source(t, n, g);
    const auto& s = make_type(g.surface);
    const std::string H = s.subgroup_catalog.at(g.h).name;
    const int ds = g.delta_phiS, dphi = g.delta_phi();
    auto v_is = [&](const char* name) { return ds == 0 && *g.v == s.parse_element(name); };
    PolarizedInvariant out{n, g.r, g.a, 1, dphi, 1};
    switch (t) {
    case ScrollType::P2:
        if (H == "0") {
            out = {n, g.r, g.a, 1, ds, 1};
        } else {
            out = {n, g.r, g.a, 0, 1, ds};
        }
        break;
    case ScrollType::E:
        out = {n, g.r, g.a, 0, dphi, v_is("e1+e2") ? 0 : 1};
        break;
    case ScrollType::H1:
    case ScrollType::H2: {
        // H2 is H1 with e1 and e2 exchanged
        std::string e_far = t == ScrollType::H1 ? "[e2]" : "[e1]";
        std::string e_near = t == ScrollType::H1 ? "[e1]" : "[e2]";
        const char* v_far = t == ScrollType::H1 ? "e2" : "e1";
        if (H == "0") {
            out = {n, g.r, g.a, 1, ds, 1};
        } else if (H == "S/2S") {
            out = {n, g.r, g.a, 0, ds, 1};
        } else if (H == e_near) {
            out = {n, g.r, g.a, 1, dphi, 1};
        } else if (H == e_far) {
            bool zero8 = n % 8 == 0;
            out = {n, g.r, g.a, zero8 ? 0 : 1, dphi, (zero8 && v_is(v_far)) ? 0 : 1};
        } else {
            bool four8 = n % 8 == 4;
            out = {n, g.r, g.a, four8 ? 0 : 1, dphi, (four8 && v_is("e1+e2")) ? 0 : 1};
        }
        break;
    }
    case ScrollType::F1:
        if (H == "0") {
            out = {n, g.r, g.a, 1, ds, 1};
        } else if (H == "S/2S") {
            out = {n, g.r, g.a, 0, 1, 1};
        } else if (H == "[h]") {
            bool hit = n % 8 == 2;
            out = {n, g.r, g.a, hit ? 0 : 1, 1, (hit && ds == 0) ? 0 : 1};
        } else if (H == "[e]") {
            bool hit = n % 8 == 6;
            out = {n, g.r, g.a, hit ? 0 : 1, 1, (hit && ds == 0) ? 0 : 1};
        } else {
            out = {n, g.r, g.a, 1, dphi, 1};
        }
        break;
    case ScrollType::F4_1:
    case ScrollType::F4_2:
        out = {n, g.r, g.a, 1, ds, 1};
        break;
    }
    return out;
}

inline PolarizedInvariant apply_D(ScrollType t, int n, const GenusInvariant& g)
{
    PolarizedInvariant a = apply_D_rules(t, n, g);
    PolarizedInvariant b = apply_D_table(t, n, g);
    if (!(a == b))
        throw std::logic_error("deformation rules disagree for " + scroll_name(t) + " on " + describe(g) + ": " +
                               describe(a) + " vs " + describe(b));
    return a;
}

using Provenance = std::map<PolarizedInvariant, std::vector<std::pair<ScrollType, GenusInvariant>>>;

inline Provenance image_with_provenance(int n, int threads = 1)
{
    Provenance out;
    std::map<Surface, std::vector<GenusInvariant>> censuses;
    for (ScrollType t : members(n)) {
        Surface s = underlying_surface(t);
        // the swap in G does not fix P for H1 and H2, so D is taken on marked tuples
        if (!censuses.count(s)) censuses[s] = enumerate(s, Engine::generic, threads, false);
        for (const auto& g : censuses[s]) out[apply_D(t, n, g)].emplace_back(t, g);
    }
    return out;
}

inline std::set<PolarizedInvariant> image(int n, int threads = 1)
{
    std::set<PolarizedInvariant> out;
    for (const auto& [p, src] : image_with_provenance(n, threads)) out.insert(p);
    return out;
}

inline bool is_exception(const PolarizedInvariant& p)
{
    return p.n >= 6 && ((p.r == 20 && p.a == 2) || (p.r + p.a == 22 && p.delta_phiP == 0));
}

inline constexpr int kDefaultMaxN = 64;

}  // namespace k3census
