#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <initializer_list>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>
#include <tuple>
#include <utility>
#include <vector>

#include "k3census/lattice.hpp"
#include "k3census/qform.hpp"

namespace k3census {

inline int mod(int x, int m) { return mod_pos(x, m); }

struct GenusInvariant {
    Surface surface = Surface::P2;
    int r = 0;
    int a = 0;
    std::size_t h = 0;  // index into the subgroup catalog
    int delta_phiS = 1;
    std::optional<std::uint32_t> v;

    auto key() const { return std::tuple(h, r, a, delta_phiS, v); }
    bool operator<(const GenusInvariant& o) const
    {
        return std::tuple(surface, key()) < std::tuple(o.surface, o.key());
    }
    bool operator==(const GenusInvariant& o) const { return surface == o.surface && key() == o.key(); }
    bool operator!=(const GenusInvariant& o) const { return !(*this == o); }

    int delta_phi() const { return (delta_phiS == 0 && v && *v == 0) ? 0 : 1; }
};

enum class GenusType { Type0, TypeIa, TypeIb };

inline GenusType genus_type(const GenusInvariant& g)
{
    if (g.delta_phiS == 1) return GenusType::TypeIb;
    return g.delta_phi() == 0 ? GenusType::Type0 : GenusType::TypeIa;
}

inline std::string type_name(GenusType t)
{
    switch (t) {
    case GenusType::Type0: return "0";
    case GenusType::TypeIa: return "Ia";
    case GenusType::TypeIb: return "Ib";
    }
    return "?";
}

inline std::string describe(const GenusInvariant& g)
{
    const auto& t = make_type(g.surface);
    std::string s = t.name() + "(r=" + std::to_string(g.r) + ", a=" + std::to_string(g.a) +
                    ", H=" + t.subgroup_catalog.at(g.h).name + ", delta_phiS=" + std::to_string(g.delta_phiS);
    if (g.v) s += ", v=" + t.element_name(*g.v);
    return s + ")";
}

struct DerivedInvariants {
    int a_H = 0;
    int a_Hplus = 0;
    int a_Hminus = 0;
    int a_Gamma = 0;
    int k_rho = 0;
    int mu_rho = 0;
    int sigma_rho = 0;
    int delta_H = 0;
    int delta_Hplus = 0;
    int delta_Hminus = 0;
    int delta_phi = 1;
    bool v_in_H = true;
    bool v_characteristic = true;
    std::optional<int> c_v;  // in {-1, 0, 1, 2}
    int delta_phiS_plus = 1;
    int delta_phiS_minus = 1;
    std::optional<int> epsilon_plus;
    std::optional<int> epsilon_minus;
};

namespace detail {

inline bool is_characteristic(const FiniteQuadraticForm& f, const FiniteQuadraticForm::Element& v)
{
    for (const auto& x : f.elements())
        if (f.pairing(x, v) != f.value(x) % kBMod) return false;
    return true;
}

inline int delta_phiS_sign(const SThetaType& t, const SubgroupStructure& hs, int sign, std::uint32_t v)
{
    const auto& lifts = sign > 0 ? hs.plus_lift : hs.minus_lift;
    auto it = lifts.find(v);
    if (it == lifts.end()) return 1;
    for (const auto& c : t.two_torsion_characteristic(sign))
        if (t.same_mod_2(sign, it->second, c)) return 0;
    return 1;
}

}  // namespace detail

// Characteristic elements of q_rho on H as S/2S bitmasks, ascending (0 first when present).
inline std::vector<std::uint32_t> characteristic_vs(Surface surface, std::size_t h)
{
    const auto& hs = make_type(surface).subgroups.at(h);
    std::vector<std::uint32_t> out;
    for (std::uint32_t x : hs.elements)
        if (detail::is_characteristic(hs.q_rho, hs.coordinates.at(x))) out.push_back(x);
    return out;
}

inline DerivedInvariants derived_invariants(const GenusInvariant& g)
{
    const auto& t = make_type(g.surface);
    if (g.h >= t.subgroups.size()) throw std::invalid_argument("H is not in the catalog");
    const auto& hs = t.subgroups[g.h];
    DerivedInvariants d;
    d.a_Hplus = hs.a_plus;
    d.a_Hminus = hs.a_minus;
    d.a_Gamma = hs.a_gamma;
    d.a_H = hs.a_H();
    auto c = classify(hs.q_rho);
    d.k_rho = c.k;
    d.mu_rho = c.mu;
    d.sigma_rho = c.sigma_mod8;
    d.delta_H = c.delta;
    d.delta_Hplus = hs.delta_plus;
    d.delta_Hminus = hs.delta_minus;
    d.delta_phi = g.delta_phi();
    if (g.delta_phiS == 0) {
        if (!g.v) throw std::invalid_argument("v must be present when delta_phiS = 0");
        d.v_in_H = hs.contains(*g.v);
        if (!d.v_in_H) {
            d.v_characteristic = false;
            return d;
        }
        d.v_characteristic = detail::is_characteristic(hs.q_rho, hs.coordinates.at(*g.v));
        // c_v = 2 q_rho(v) with q_rho(v) taken in (-1, 1]; the 1.8.2 boundary reads it mod 8
        int twice = mod(hs.value(*g.v) / 4, 4);
        d.c_v = twice == 3 ? -1 : twice;
        d.delta_phiS_plus = detail::delta_phiS_sign(t, hs, +1, *g.v);
        d.delta_phiS_minus = detail::delta_phiS_sign(t, hs, -1, *g.v);
        if (d.delta_phiS_plus == 0) d.epsilon_plus = t.epsilon[0][d.delta_phi];
        if (d.delta_phiS_minus == 0) d.epsilon_minus = t.epsilon[1][d.delta_phi];
    } else if (g.v) {
        throw std::invalid_argument("v must be absent when delta_phiS = 1");
    }
    return d;
}

struct CheckResult {
    bool ok = true;
    std::string clause;
    explicit operator bool() const { return ok; }
};

namespace detail {

class Checker {
public:
    bool require(bool cond, const char* clause)
    {
        if (!cond && result.ok) {
            result.ok = false;
            result.clause = clause;
        }
        return cond;
    }
    CheckResult result;
};

inline bool implies(bool a, bool b) { return !a || b; }

}  // namespace detail

// Conditions 1.8.1 and 1.8.2 with invariants computed from the lattice fixtures.
inline CheckResult check_generic(const GenusInvariant& g)
{
    const auto& t = make_type(g.surface);
    auto d = derived_invariants(g);
    detail::Checker c;
    using detail::implies;
    const int r = g.r, a = g.a;
    const int aH = d.a_H, k = d.k_rho, mu = d.mu_rho, sigma = d.sigma_rho;

    if (g.delta_phiS == 0) {
        c.require(d.v_in_H, "v-in-H");
        c.require(d.v_characteristic, "v-characteristic");
        if (!c.result.ok) return c.result;
    }
    const int cv = d.c_v.value_or(0);

    switch (genus_type(g)) {
    case GenusType::Type0:
        c.require(d.delta_Hplus == 0 && d.delta_Hminus == 0, "1.8.1-0-delta-H");
        c.require(a >= aH + k, "1.8.1-0-inequality");
        c.require(mod(a + r, 2) == 0, "1.8.1-0-congruence-1");
        c.require(mod(2 - r, 4) == 0, "1.8.1-0-congruence-2");
        c.require(implies(a == aH + k && mu == 0, mod(2 - r - sigma, 8) == 0), "1.8.1-0-boundary");
        break;
    case GenusType::TypeIa:
        c.require(mod(cv - (aH - k), 2) == 0, "1.8.1-Ia-1");
        c.require(implies(mu == 0, mod(cv - sigma, 4) == 0), "1.8.1-Ia-2");
        c.require(aH > 0, "1.8.1-Ia-3");
        c.require(implies(d.delta_Hplus == 0 && d.delta_Hminus == 0, k >= 1), "1.8.1-Ia-4");
        c.require(implies(d.delta_Hplus == 0 && d.delta_Hminus == 0 && k == 1 && mu == 1, mod(cv, 4) == 2),
                  "1.8.1-Ia-5");
        c.require(a >= aH + k, "1.8.1-Ia-inequality");
        c.require(mod(a + r, 2) == 0, "1.8.1-Ia-congruence-1");
        c.require(mod(2 - r - cv, 4) == 0, "1.8.1-Ia-congruence-2");
        c.require(implies(a == aH + k && mu == 0, mod(2 - r - sigma, 8) == 0), "1.8.1-Ia-boundary");
        break;
    case GenusType::TypeIb:
        c.require(a >= aH + k + 1, "1.8.1-Ib-inequality");
        c.require(mod(a + r, 2) == 0, "1.8.1-Ib-congruence");
        c.require(implies(a == aH + k + 1 && mu == 0,
                          mod(2 - r - sigma - 1, 8) == 0 || mod(2 - r - sigma + 1, 8) == 0),
                  "1.8.1-Ib-boundary-1");
        c.require(implies(a == aH + k + 2 && mu == 0, mod(2 - r - sigma - 4, 8) != 0), "1.8.1-Ib-boundary-2");
        break;
    }

    const int s = t.s(), p = t.p();
    const int l_plus = discriminant_length(t.sublattice(+1)).first;
    const int l_minus = discriminant_length(t.sublattice(-1)).first;
    c.require(implies(g.delta_phiS == 1, d.delta_phiS_plus == 1 && d.delta_phiS_minus == 1), "1.8.2-delta");
    c.require(p + 1 <= r && r <= 21 - s + p, "1.8.2-1");
    const int plus_bound = -2 * d.a_Hplus + p + l_plus;
    const int minus_bound = 2 * d.a_Hminus + p - s - l_minus + 22;
    c.require(r - a >= plus_bound, "1.8.2-2");
    c.require(r + a <= minus_bound, "1.8.2-3");
    if (d.delta_phiS_plus == 0 && r - a == plus_bound)
        c.require(mod(2 - r - 4 * d.epsilon_plus.value() - cv, 8) == 0, "1.8.2-boundary-plus");
    if (d.delta_phiS_minus == 0 && r + a == minus_bound)
        c.require(mod(2 - r - 4 * d.epsilon_minus.value() - cv, 8) == 0, "1.8.2-boundary-minus");
    return c.result;
}

namespace detail {

// Per-surface constants, independent of the lattice computations.
struct PercaseH {
    const char* name;
    int a_H, k, mu, sigma;
    std::vector<std::pair<const char*, int>> v_with_cv;  // admissible v and c_v mod 4
};

inline const std::vector<PercaseH>& percase_table(Surface s)
{
    static const std::vector<PercaseH> p2 = {{"0", 0, 0, 0, 0, {{"0", 0}}}, {"[h]", 1, 0, 0, 7, {{"h", 3}}}};
    static const std::vector<PercaseH> hyp = {{"0", 0, 0, 0, 0, {{"0", 0}}},
                                              {"[e1]", 1, 1, 0, 0, {{"0", 0}, {"e1", 0}}},
                                              {"[e2]", 1, 1, 0, 0, {{"0", 0}, {"e2", 0}}},
                                              {"[h]", 1, 1, 1, 0, {{"0", 0}, {"e1+e2", 2}}},
                                              {"S/2S", 2, 0, 0, 0, {{"0", 0}}}};
    static const std::vector<PercaseH> ell = {{"[e1+e2]", 1, 1, 1, 0, {{"0", 0}, {"e1+e2", 2}}}};
    static const std::vector<PercaseH> f1 = {{"0", 0, 0, 0, 0, {{"0", 0}}},
                                             {"[h]", 1, 0, 0, 7, {{"h", 3}}},
                                             {"[e]", 1, 0, 0, 1, {{"e", 1}}},
                                             {"[h+e]", 1, 1, 0, 0, {{"0", 0}, {"h+e", 0}}},
                                             {"S/2S", 2, 0, 0, 0, {{"h+e", 0}}}};
    static const std::vector<PercaseH> f4 = {{"0", 0, 0, 0, 0, {{"0", 0}}}};
    switch (s) {
    case Surface::P2: return p2;
    case Surface::Hyperboloid: return hyp;
    case Surface::Ellipsoid: return ell;
    case Surface::F1: return f1;
    case Surface::F4: return f4;
    }
    throw std::invalid_argument("unknown surface");
}

inline bool in(int x, std::initializer_list<int> xs) { return std::find(xs.begin(), xs.end(), x) != xs.end(); }

inline CheckResult percase_p2(const GenusInvariant& g, const PercaseH& ph, bool v_zero)
{
    Checker c;
    const int r = g.r, a = g.a, dh = std::string(ph.name) == "0" ? 1 : 0, ds = g.delta_phiS;
    const bool v_h = ds == 0 && !v_zero;
    const bool v0 = ds == 0 && v_zero;
    c.require(1 <= r && r <= 20, "p2-r-range");
    c.require(1 - dh + ds <= a, "p2-a-lower");
    c.require(a <= r, "p2-a-le-r");
    c.require(r + a <= 22 - 2 * dh, "p2-r+a-upper");
    c.require(mod(r + a, 2) == 0, "p2-parity");
    c.require(implies(dh == 1 && ds == 0, v0 && mod(2 - r, 4) == 0), "p2-type0");
    c.require(implies(dh == 0 && ds == 0, v_h && mod(2 - r + 1, 4) == 0), "p2-v=h");
    c.require(implies(a == 1 - dh && v0, mod(2 - r, 8) == 0), "p2-boundary-a-v0");
    c.require(implies(a == 1 - dh && v_h, mod(2 - r + 1, 8) == 0), "p2-boundary-a-vh");
    c.require(implies(a == 2 - dh && ds == 1, mod(2 - r + 1 - dh - 1, 8) == 0 || mod(2 - r + 1 - dh + 1, 8) == 0),
              "p2-boundary-Ib-1");
    c.require(implies(a == 3 - dh && ds == 1, mod(2 - r + 1 - dh - 4, 8) != 0), "p2-boundary-Ib-2");
    c.require(implies(a == r && v0, mod(2 - r, 8) == 0), "p2-boundary-a=r");
    c.require(implies(r + a == 22 - 2 * dh && v_h, mod(2 - r + 1, 8) == 0), "p2-boundary-r+a");
    return c.result;
}

inline CheckResult percase_hyperboloid(const GenusInvariant& g, const PercaseH& ph, int cv)
{
    Checker c;
    const int r = g.r, a = g.a, aH = ph.a_H, k = ph.k, mu = ph.mu;
    switch (genus_type(g)) {
    case GenusType::Type0:
        c.require(aH + k <= a && a <= r && mod(a, 2) == 0, "hyp-0-a");
        c.require(2 <= r && r <= 18 && mod(2 - r, 4) == 0, "hyp-0-r");
        c.require(r + a <= 2 * aH + 18, "hyp-0-r+a");
        c.require(implies(a == aH + k && mu == 0, mod(2 - r, 8) == 0), "hyp-0-boundary-a");
        c.require(implies(a == r, mod(2 - r, 8) == 0), "hyp-0-boundary-a=r");
        c.require(implies(r + a == 2 * aH + 18, mod(2 - r, 8) == 0), "hyp-0-boundary-r+a");
        break;
    case GenusType::TypeIa:
        c.require(aH == 1 && k == 1, "hyp-Ia-H");
        c.require(mod(cv, 4) == (mu == 0 ? 0 : 2), "hyp-Ia-cv");
        c.require(2 <= a && a <= r && mod(a, 2) == 0, "hyp-Ia-a");
        c.require(2 <= r && r <= 18 && mod(2 - r - cv, 4) == 0, "hyp-Ia-r");
        c.require(r + a <= 20, "hyp-Ia-r+a");
        c.require(implies(a == 2 && mu == 0, mod(2 - r, 8) == 0), "hyp-Ia-boundary");
        break;
    case GenusType::TypeIb:
        c.require(aH + k + 1 <= a && a <= r, "hyp-Ib-a");
        c.require(1 <= r && r <= 19, "hyp-Ib-r");
        c.require(mod(r + a, 2) == 0, "hyp-Ib-parity");
        c.require(r + a <= 2 * aH + 18, "hyp-Ib-r+a");
        c.require(implies(a == aH + k + 1 && mu == 0, mod(2 - r - 1, 8) == 0 || mod(2 - r + 1, 8) == 0),
                  "hyp-Ib-boundary-1");
        c.require(implies(a == aH + k + 2 && mu == 0, mod(2 - r, 8) != 4), "hyp-Ib-boundary-2");
        break;
    }
    return c.result;
}

inline CheckResult percase_ellipsoid(const GenusInvariant& g)
{
    Checker c;
    const int r = g.r, a = g.a;
    switch (genus_type(g)) {
    case GenusType::Type0:
        c.require(2 <= a && a <= r && mod(a, 2) == 0, "ell-0-a");
        c.require(in(r, {2, 6, 10, 14, 18}), "ell-0-r");
        c.require(r + a <= 22, "ell-0-r+a");
        c.require(implies(a == r, (r == 2 && a == 2) || (r == 10 && a == 10)), "ell-0-a=r");
        c.require(implies(r + a == 22, r == 18 && a == 4), "ell-0-r+a=22");
        break;
    case GenusType::TypeIa:
        c.require(2 <= a && a <= r && mod(a, 2) == 0, "ell-Ia-a");
        c.require(in(r, {4, 8, 12, 16, 20}), "ell-Ia-r");
        c.require(r + a <= 22, "ell-Ia-r+a");
        c.require(implies(a == r, r == 4 && a == 4), "ell-Ia-a=r");
        c.require(implies(r + a == 22, (r == 20 && a == 2) || (r == 12 && a == 10)), "ell-Ia-r+a=22");
        break;
    case GenusType::TypeIb:
        c.require(3 <= a && a <= r, "ell-Ib-a");
        c.require(mod(r + a, 2) == 0, "ell-Ib-parity");
        c.require(2 <= r && r <= 20, "ell-Ib-r");
        c.require(r + a <= 22, "ell-Ib-r+a");
        break;
    }
    return c.result;
}

inline CheckResult percase_f1(const GenusInvariant& g, const PercaseH& ph, int cv)
{
    Checker c;
    const int r = g.r, a = g.a, aH = ph.a_H, k = ph.k, sigma = ph.sigma;
    const std::string H = ph.name;
    const bool h_or_e = H == "[h]" || H == "[e]";
    const bool he_or_full = H == "[h+e]" || H == "S/2S";
    switch (genus_type(g)) {
    case GenusType::Type0:
        c.require(H == "0" || H == "[h+e]", "f1-0-H");
        c.require(in(r, {2, 6, 10, 14, 18}), "f1-0-r");
        c.require(mod(a, 2) == 0 && a <= r, "f1-0-a");
        c.require(r + a <= 2 * aH + 18, "f1-0-r+a");
        c.require(implies(H == "[h+e]", a >= 2), "f1-0-a-lower");
        c.require(implies(H == "0" && a == 0, mod(2 - r, 8) == 0), "f1-0-boundary-0");
        c.require(implies(H == "[h+e]" && a == 2, mod(2 - r, 8) == 0), "f1-0-boundary-he");
        c.require(implies(a == r, mod(2 - r, 8) == 0), "f1-0-boundary-a=r");
        break;
    case GenusType::TypeIa:
        c.require(aH >= 1, "f1-Ia-aH");
        c.require(mod(cv - sigma, 4) == 0, "f1-Ia-cv");
        if (H == "[h]") c.require(a >= 1 && in(r, {3, 7, 11, 15, 19}) && mod(a, 2) == 1, "f1-Ia-h");
        if (H == "[e]") c.require(a >= 1 && in(r, {1, 5, 9, 13, 17}) && mod(a, 2) == 1, "f1-Ia-e");
        if (he_or_full) c.require(a >= 2 && in(r, {2, 6, 10, 14, 18}) && mod(a, 2) == 0, "f1-Ia-he");
        c.require(implies(h_or_e && a == 1, mod(2 - r - sigma, 8) == 0), "f1-Ia-boundary-1");
        c.require(implies(he_or_full && a == 2, mod(2 - r, 8) == 0), "f1-Ia-boundary-2");
        c.require(a <= r, "f1-Ia-a<=r");
        c.require(r + a <= 2 * aH + 18, "f1-Ia-r+a");
        c.require(implies(he_or_full && g.v && *g.v == make_type(Surface::F1).parse_element("h+e") && r + a == 2 * aH + 18, mod(2 - r, 8) == 0),
                  "f1-Ia-boundary-r+a");
        break;
    case GenusType::TypeIb:
        c.require(a >= aH + k + 1, "f1-Ib-a");
        c.require(mod(r + a, 2) == 0, "f1-Ib-parity");
        c.require(implies(a == aH + k + 1, mod(2 - r - sigma - 1, 8) == 0 || mod(2 - r - sigma + 1, 8) == 0),
                  "f1-Ib-boundary-1");
        c.require(implies(a == aH + k + 2, mod(2 - r - sigma - 4, 8) != 0), "f1-Ib-boundary-2");
        c.require(1 <= r && r <= 19, "f1-Ib-r");
        c.require(a <= r, "f1-Ib-a<=r");
        c.require(r + a <= 2 * aH + 18, "f1-Ib-r+a");
        break;
    }
    return c.result;
}

inline CheckResult percase_f4(const GenusInvariant& g)
{
    Checker c;
    const int r = g.r, a = g.a;
    if (g.delta_phi() == 0) {
        c.require(in(r, {2, 6, 10, 14, 18}), "f4-0-r");
        c.require(mod(a, 2) == 0 && a <= r, "f4-0-a");
        c.require(r + a <= 20, "f4-0-r+a");
        c.require(implies(a == 0 || a == r || r + a == 20, mod(2 - r, 8) == 0), "f4-0-boundary");
    } else {
        c.require(a >= 1, "f4-1-a");
        c.require(mod(r + a, 2) == 0, "f4-1-parity");
        c.require(1 <= r && r <= 19, "f4-1-r");
        c.require(a <= r && r + a <= 20, "f4-1-bounds");
        c.require(implies(a == 1, mod(2 - r - 1, 8) == 0 || mod(2 - r + 1, 8) == 0), "f4-1-boundary-1");
        c.require(implies(a == 2, mod(2 - r, 8) != 4), "f4-1-boundary-2");
    }
    return c.result;
}

}  // namespace detail

// The explicit condition lists of the individual surfaces.
inline CheckResult check_percase(const GenusInvariant& g)
{
    const auto& t = make_type(g.surface);
    const auto& table = detail::percase_table(g.surface);
    if (g.h >= table.size() || t.subgroup_catalog.at(g.h).name != table[g.h].name)
        throw std::invalid_argument("H is not in the catalog");
    const auto& ph = table[g.h];
    int cv = 0;
    bool v_zero = false;
    if (g.delta_phiS == 0) {
        if (!g.v) throw std::invalid_argument("v must be present when delta_phiS = 0");
        bool found = false;
        for (const auto& [name, c] : ph.v_with_cv)
            if (t.parse_element(name) == *g.v) {
                found = true;
                cv = c;
            }
        if (!found) return {false, "percase-v"};
        v_zero = *g.v == 0;
    } else if (g.v) {
        throw std::invalid_argument("v must be absent when delta_phiS = 1");
    }
    switch (g.surface) {
    case Surface::P2: return detail::percase_p2(g, ph, v_zero);
    case Surface::Hyperboloid: return detail::percase_hyperboloid(g, ph, cv);
    case Surface::Ellipsoid: return detail::percase_ellipsoid(g);
    case Surface::F1: return detail::percase_f1(g, ph, cv);
    case Surface::F4: return detail::percase_f4(g);
    }
    return {false, "unknown-surface"};
}

enum class Engine { generic, percase };

inline Engine parse_engine(const std::string& s)
{
    if (s == "generic") return Engine::generic;
    if (s == "percase") return Engine::percase;
    throw std::invalid_argument("unknown engine: " + s);
}

inline CheckResult check(const GenusInvariant& g, Engine engine)
{
    return engine == Engine::generic ? check_generic(g) : check_percase(g);
}

// Apply a group element to (H, v).
inline GenusInvariant act(const GenusInvariant& g, const IntMat& m)
{
    const auto& t = make_type(g.surface);
    std::vector<std::uint32_t> image;
    for (std::uint32_t x : t.subgroups.at(g.h).elements) image.push_back(t.act(m, x));
    std::sort(image.begin(), image.end());
    GenusInvariant out = g;
    out.h = t.subgroup_index_of_elements(image);
    if (g.v) out.v = t.act(m, *g.v);
    return out;
}

inline GenusInvariant canonical(const GenusInvariant& g)
{
    const auto& t = make_type(g.surface);
    GenusInvariant best = g;
    for (const auto& m : t.group.elements) {
        GenusInvariant x = act(g, m);
        if (x < best) best = x;
    }
    return best;
}

inline int default_threads()
{
    if (const char* env = std::getenv("K3CENSUS_THREADS")) {
        int n = std::atoi(env);
        if (n >= 1) return n;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(std::min(hw, 8U));
}

inline constexpr int kMinR = 1, kMaxR = 20, kMinA = 0, kMaxA = 22;

inline std::vector<GenusInvariant> enumerate(Surface surface, Engine engine, int threads = 1, bool dedupe = true)
{
    const auto& t = make_type(surface);
    auto cell = [&](int r) {
        std::vector<GenusInvariant> found;
        for (std::size_t h = 0; h < t.subgroups.size(); ++h)
            for (int a = kMinA; a <= kMaxA; ++a)
                for (int ds : {0, 1}) {
                    GenusInvariant g{surface, r, a, h, ds, std::nullopt};
                    if (ds == 1) {
                        if (check(g, engine)) found.push_back(g);
                        continue;
                    }
                    for (std::uint32_t v : t.subgroups[h].elements) {
                        g.v = v;
                        if (check(g, engine)) found.push_back(g);
                    }
                }
        return found;
    };

    std::vector<std::vector<GenusInvariant>> per_r(kMaxR - kMinR + 1);
    threads = std::max(1, std::min(threads, kMaxR - kMinR + 1));
    if (threads == 1) {
        for (int r = kMinR; r <= kMaxR; ++r) per_r[r - kMinR] = cell(r);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < threads; ++w)
            pool.emplace_back([&, w] {
                for (int r = kMinR + w; r <= kMaxR; r += threads) per_r[r - kMinR] = cell(r);
            });
        for (auto& th : pool) th.join();
    }

    std::set<GenusInvariant> merged;
    for (const auto& part : per_r)
        for (const auto& g : part) merged.insert(dedupe ? canonical(g) : g);
    return {merged.begin(), merged.end()};
}

// Orthogonal complement of H_sign inside A^{(2)}_{S_sign}, as lifts.
inline std::vector<IntVec> complement_lifts(const SThetaType& t, const SubgroupStructure& hs, int sign)
{
    const auto& lifts = sign > 0 ? hs.plus_lift : hs.minus_lift;
    std::vector<IntVec> out;
    for (const auto& x : t.two_torsion_range(sign)) {
        bool orth = true;
        for (const auto& [im, y] : lifts)
            if (mod(static_cast<int>(2 * bilinear(t.gram(), x, y)), kBMod) != 0) orth = false;
        if (orth) out.push_back(x);
    }
    return out;
}

inline std::size_t related_subgroup(const SThetaType& t, std::size_t h)
{
    const auto& hs = t.subgroups.at(h);
    auto plus = complement_lifts(t, hs, +1);
    auto minus = complement_lifts(t, hs, -1);
    if (plus.empty()) plus.push_back(IntVec(t.dim(), 0));
    if (minus.empty()) minus.push_back(IntVec(t.dim(), 0));
    std::set<std::uint32_t> elems;
    for (const auto& x : plus)
        for (const auto& y : minus) {
            IntVec s(t.dim());
            for (std::size_t i = 0; i < t.dim(); ++i) s[i] = x[i] + y[i];
            elems.insert(mod2_bits(s));
        }
    return t.subgroup_index_of_elements({elems.begin(), elems.end()});
}

inline GenusInvariant related(const GenusInvariant& g)
{
    auto ok = check_generic(g);
    if (!ok) throw std::invalid_argument("related: tuple is invalid (" + ok.clause + "): " + describe(g));
    const auto& t = make_type(g.surface);
    const auto& hs = t.subgroups.at(g.h);
    const int aS = lattice_invariants(t.s_lattice).a;
    GenusInvariant out = g;
    out.r = 22 - t.s() + 2 * t.p() - g.r;
    out.a = g.a + aS - 2 * hs.a_H() + 2 * t.rk_rho;
    out.h = related_subgroup(t, g.h);
    if (g.v) out.v = *g.v ^ t.s_theta;
    return canonical(out);
}

struct RelatedClass {
    GenusInvariant first;
    GenusInvariant second;
    bool fixed() const { return first == second; }
};

inline std::vector<RelatedClass> identify_related(const std::vector<GenusInvariant>& census)
{
    std::set<GenusInvariant> all(census.begin(), census.end());
    std::set<GenusInvariant> done;
    std::vector<RelatedClass> out;
    for (const auto& g : census) {
        if (done.count(g)) continue;
        GenusInvariant h = related(g);
        if (!all.count(h)) throw std::logic_error("related tuple missing from census: " + describe(h));
        done.insert(g);
        done.insert(h);
        out.push_back({std::min(g, h), std::max(g, h)});
    }
    return out;
}

struct TopologyLabel {
    enum class Kind { empty, two_tori, generic } kind = Kind::generic;
    int g = 0;
    int k = 0;

    std::string to_string() const
    {
        switch (kind) {
        case Kind::empty: return "empty";
        case Kind::two_tori: return "T1+T1";
        case Kind::generic: break;
        }
        std::string s = "T" + std::to_string(g);
        if (k > 0) s += "+" + std::to_string(k) + "T0";
        return s;
    }
};

inline TopologyLabel topology(int r, int a, int delta_phi)
{
    TopologyLabel t;
    if (r == 10 && a == 10 && delta_phi == 0) {
        t.kind = TopologyLabel::Kind::empty;
        return t;
    }
    if (r == 10 && a == 8 && delta_phi == 0) {
        t.kind = TopologyLabel::Kind::two_tori;
        return t;
    }
    if ((22 - r - a) % 2 != 0 || (r - a) % 2 != 0 || 22 - r - a < 0 || r - a < 0)
        throw std::invalid_argument("inadmissible (r, a) for the real part");
    t.g = (22 - r - a) / 2;
    t.k = (r - a) / 2;
    return t;
}

// The raw (b+) and (b-) conditions without the 2-elementary shortcut or the ellipsoid override.
inline std::pair<bool, bool> uniqueness_conditions(const GenusInvariant& g)
{
    const auto& t = make_type(g.surface);
    auto d = derived_invariants(g);
    const int p = t.p(), s = t.s();
    auto [lp, kp] = discriminant_length(t.sublattice(+1));
    auto [lm, km] = discriminant_length(t.sublattice(-1));
    int bp = -2 * d.a_Hplus + p + lp, bm = 2 * d.a_Hminus + p - s - lm + 22;
    bool plus = (g.r - g.a > bp) || (g.r - g.a == bp && g.a >= 2 * d.a_Hplus - kp + 3) ||
                (g.r - g.a == bp && g.a == 2 * d.a_Hplus - kp + 2 && d.delta_phiS_plus == 0);
    bool minus = (g.r + g.a < bm) || (g.r + g.a == bm && g.a >= 2 * d.a_Hminus - km + 3) ||
                 (g.r + g.a == bm && g.a == 2 * d.a_Hminus - km + 2 && d.delta_phiS_minus == 0);
    return {plus, minus};
}

// (b+) and (b-), where a 2-elementary S_+- satisfies its side outright; the
// ellipsoid genus always determines the class.
inline bool uniqueness_flag(const GenusInvariant& g)
{
    if (g.surface == Surface::Ellipsoid) return true;
    const auto& t = make_type(g.surface);
    auto [plus, minus] = uniqueness_conditions(g);
    auto two_elementary = [&](int sign) {
        auto [l, kappa] = discriminant_length(t.sublattice(sign));
        return l == kappa;
    };
    return (plus || two_elementary(+1)) && (minus || two_elementary(-1));
}

}  // namespace k3census
