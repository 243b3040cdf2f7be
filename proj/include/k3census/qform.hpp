#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace k3census {

// Values of q live in Q/2Z and are stored as integers over 8, so mod 16.
// Values of b live in Q/Z and are stored the same way, so mod 8.
inline constexpr int kQMod = 16;
inline constexpr int kBMod = 8;

inline int mod_pos(long long x, int m)
{
    long long r = x % m;
    return static_cast<int>(r < 0 ? r + m : r);
}

class FiniteQuadraticForm {
public:
    using Element = std::vector<int>;

    FiniteQuadraticForm() = default;

    FiniteQuadraticForm(std::vector<int> orders, std::vector<int> q, std::vector<std::vector<int>> b)
        : orders_(std::move(orders)), q_(std::move(q)), b_(std::move(b))
    {
        const std::size_t n = orders_.size();
        if (q_.size() != n || b_.size() != n)
            throw std::invalid_argument("form data has inconsistent sizes");
        for (std::size_t i = 0; i < n; ++i) {
            if (orders_[i] != 2 && orders_[i] != 4 && orders_[i] != 8)
                throw std::invalid_argument("generator order must be 2, 4 or 8");
            if (b_[i].size() != n)
                throw std::invalid_argument("pairing matrix is not square");
            q_[i] = mod_pos(q_[i], kQMod);
        }
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                b_[i][j] = mod_pos(b_[i][j], kBMod);
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (b_[i][i] != q_[i] % kBMod)
                throw std::invalid_argument("b(x,x) must equal q(x) mod 1");
            if (mod_pos(static_cast<long long>(orders_[i]) * orders_[i] * q_[i], kQMod) != 0)
                throw std::invalid_argument("q is not well defined on a cyclic factor");
            for (std::size_t j = 0; j < n; ++j) {
                if (b_[i][j] != b_[j][i])
                    throw std::invalid_argument("pairing matrix is not symmetric");
                if (mod_pos(static_cast<long long>(orders_[i]) * b_[i][j], kBMod) != 0)
                    throw std::invalid_argument("pairing is not compatible with generator orders");
            }
        }
    }

    std::size_t rank() const { return orders_.size(); }
    const std::vector<int>& orders() const { return orders_; }
    const std::vector<int>& generator_values() const { return q_; }
    const std::vector<std::vector<int>>& generator_pairings() const { return b_; }

    long long order() const
    {
        long long n = 1;
        for (int o : orders_) n *= o;
        return n;
    }

    bool is_two_elementary() const
    {
        for (int o : orders_)
            if (o != 2) return false;
        return true;
    }

    Element zero() const { return Element(orders_.size(), 0); }

    Element basis(std::size_t i) const
    {
        Element e = zero();
        e.at(i) = 1;
        return e;
    }

    Element normalize(Element x) const
    {
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = mod_pos(x[i], orders_[i]);
        return x;
    }

    Element add(const Element& x, const Element& y) const
    {
        Element z(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) z[i] = mod_pos(x[i] + y[i], orders_[i]);
        return z;
    }

    Element scale(const Element& x, long long n) const
    {
        Element z(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) z[i] = mod_pos(n * x[i], orders_[i]);
        return z;
    }

    // q(x) in units of 1/8, in [0,16)
    int value(const Element& x) const
    {
        long long s = 0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            s += static_cast<long long>(x[i]) * x[i] * q_[i];
            for (std::size_t j = i + 1; j < x.size(); ++j)
                s += 2LL * x[i] * x[j] * b_[i][j];
        }
        return mod_pos(s, kQMod);
    }

    // b(x,y) in units of 1/8, in [0,8)
    int pairing(const Element& x, const Element& y) const
    {
        long long s = 0;
        for (std::size_t i = 0; i < x.size(); ++i)
            for (std::size_t j = 0; j < y.size(); ++j)
                s += static_cast<long long>(x[i]) * y[j] * b_[i][j];
        return mod_pos(s, kBMod);
    }

    std::vector<Element> elements() const
    {
        std::vector<Element> out;
        Element x = zero();
        for (;;) {
            out.push_back(x);
            std::size_t i = 0;
            while (i < x.size()) {
                if (++x[i] < orders_[i]) break;
                x[i] = 0;
                ++i;
            }
            if (i == x.size()) break;
        }
        return out;
    }

    int element_order(const Element& x) const
    {
        int ord = 1;
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (x[i] == 0) continue;
            int o = orders_[i] / std::gcd(orders_[i], x[i]);
            ord = std::lcm(ord, o);
        }
        return ord;
    }

    bool is_nondegenerate() const
    {
        for (const auto& x : elements()) {
            if (x == zero()) continue;
            bool in_radical = true;
            for (std::size_t i = 0; i < rank() && in_radical; ++i)
                if (pairing(x, basis(i)) != 0) in_radical = false;
            if (in_radical) return false;
        }
        return true;
    }

    std::string describe() const;

private:
    std::vector<int> orders_;
    std::vector<int> q_;
    std::vector<std::vector<int>> b_;
};

inline std::string format_value(int units, int mod)
{
    int v = mod_pos(units, mod);
    int den = 8;
    int g = std::gcd(v, den);
    if (v == 0) return "0";
    v /= g;
    den /= g;
    if (den == 1) return std::to_string(v);
    return std::to_string(v) + "/" + std::to_string(den);
}

inline std::string FiniteQuadraticForm::describe() const
{
    if (rank() == 0) return "0";
    std::ostringstream os;
    for (std::size_t i = 0; i < rank(); ++i) {
        if (i) os << " + ";
        os << "Z/" << orders_[i] << "[q=" << format_value(q_[i], kQMod) << "]";
    }
    for (std::size_t i = 0; i < rank(); ++i)
        for (std::size_t j = i + 1; j < rank(); ++j)
            if (b_[i][j] != 0) os << " b(" << i << "," << j << ")=" << format_value(b_[i][j], kBMod);
    return os.str();
}

enum class Elementary { z, w, u_plus2, v_plus2, q_alpha };

inline FiniteQuadraticForm elementary_form(Elementary kind, int alpha = 1, int k = 1)
{
    switch (kind) {
    case Elementary::z:
        return FiniteQuadraticForm({2}, {0}, {{0}});
    case Elementary::w:
        return FiniteQuadraticForm({2}, {8}, {{0}});
    case Elementary::u_plus2:
        return FiniteQuadraticForm({2, 2}, {0, 0}, {{0, 4}, {4, 0}});
    case Elementary::v_plus2:
        return FiniteQuadraticForm({2, 2}, {8, 8}, {{0, 4}, {4, 0}});
    case Elementary::q_alpha: {
        if (alpha != 1 && alpha != -1 && alpha != 5 && alpha != -5)
            throw std::invalid_argument("alpha must be one of 1, -1, 5, -5");
        if (k < 1 || k > 3) throw std::invalid_argument("k must be 1, 2 or 3");
        int order = 1 << k;
        int units = alpha * (8 / order);
        return FiniteQuadraticForm({order}, {units}, {{mod_pos(units, kBMod)}});
    }
    }
    throw std::invalid_argument("unknown elementary form");
}

// Accepts "z", "w", "u+(2)", "v+(2)" and "q(alpha,2^k)" such as "q(-1,4)".
inline FiniteQuadraticForm elementary_form(const std::string& name)
{
    if (name == "z") return elementary_form(Elementary::z);
    if (name == "w") return elementary_form(Elementary::w);
    if (name == "u+(2)" || name == "u_plus2") return elementary_form(Elementary::u_plus2);
    if (name == "v+(2)" || name == "v_plus2") return elementary_form(Elementary::v_plus2);
    if (name.size() > 4 && name.rfind("q(", 0) == 0 && name.back() == ')') {
        auto comma = name.find(',');
        if (comma != std::string::npos) {
            int alpha = std::stoi(name.substr(2, comma - 2));
            int order = std::stoi(name.substr(comma + 1, name.size() - comma - 2));
            int k = order == 2 ? 1 : order == 4 ? 2 : order == 8 ? 3 : 0;
            if (k == 0) throw std::invalid_argument("unknown elementary form: " + name);
            return elementary_form(Elementary::q_alpha, alpha, k);
        }
    }
    throw std::invalid_argument("unknown elementary form: " + name);
}

inline FiniteQuadraticForm direct_sum(const FiniteQuadraticForm& f, const FiniteQuadraticForm& g)
{
    std::size_t n = f.rank(), m = g.rank();
    std::vector<int> orders = f.orders();
    orders.insert(orders.end(), g.orders().begin(), g.orders().end());
    std::vector<int> q = f.generator_values();
    q.insert(q.end(), g.generator_values().begin(), g.generator_values().end());
    std::vector<std::vector<int>> b(n + m, std::vector<int>(n + m, 0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) b[i][j] = f.generator_pairings()[i][j];
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) b[n + i][n + j] = g.generator_pairings()[i][j];
    return FiniteQuadraticForm(std::move(orders), std::move(q), std::move(b));
}

inline FiniteQuadraticForm negate(const FiniteQuadraticForm& f)
{
    std::vector<int> q = f.generator_values();
    for (int& x : q) x = -x;
    auto b = f.generator_pairings();
    for (auto& row : b)
        for (int& x : row) x = -x;
    return FiniteQuadraticForm(f.orders(), std::move(q), std::move(b));
}

// Form on the subgroup generated by the given elements, which must be
// independent of order 2 each.
inline FiniteQuadraticForm restrict_two_elementary(const FiniteQuadraticForm& f,
                                                   const std::vector<FiniteQuadraticForm::Element>& gens)
{
    std::size_t n = gens.size();
    std::vector<int> orders(n, 2), q(n);
    std::vector<std::vector<int>> b(n, std::vector<int>(n));
    for (std::size_t i = 0; i < n; ++i) {
        if (f.element_order(gens[i]) != 2) throw std::invalid_argument("generator is not of order 2");
        q[i] = f.value(gens[i]);
        for (std::size_t j = 0; j < n; ++j) b[i][j] = f.pairing(gens[i], gens[j]);
    }
    return FiniteQuadraticForm(std::move(orders), std::move(q), std::move(b));
}

// Z[zeta_16] as Z[x]/(x^8+1); zeta_8 = x^2.
class Cyclotomic16 {
public:
    Cyclotomic16() { c_.fill(0); }

    static Cyclotomic16 root(int m)
    {
        Cyclotomic16 z;
        m = mod_pos(m, 16);
        if (m < 8)
            z.c_[m] = 1;
        else
            z.c_[m - 8] = -1;
        return z;
    }

    static Cyclotomic16 integer(long long n)
    {
        Cyclotomic16 z;
        z.c_[0] = n;
        return z;
    }

    // sqrt(2^e), exact: sqrt(2) = zeta_8 + zeta_8^{-1}
    static Cyclotomic16 sqrt_power_of_two(int e)
    {
        Cyclotomic16 s = integer(1LL << (e / 2));
        if (e % 2) s = s * (root(2) + root(14));
        return s;
    }

    Cyclotomic16 operator+(const Cyclotomic16& o) const
    {
        Cyclotomic16 z;
        for (int i = 0; i < 8; ++i) z.c_[i] = c_[i] + o.c_[i];
        return z;
    }

    Cyclotomic16 operator*(const Cyclotomic16& o) const
    {
        Cyclotomic16 z;
        for (int i = 0; i < 8; ++i)
            for (int j = 0; j < 8; ++j) {
                long long p = c_[i] * o.c_[j];
                if (i + j < 8)
                    z.c_[i + j] += p;
                else
                    z.c_[i + j - 8] -= p;
            }
        return z;
    }

    bool operator==(const Cyclotomic16& o) const { return c_ == o.c_; }

    const std::array<long long, 8>& coefficients() const { return c_; }

private:
    std::array<long long, 8> c_;
};

// Sum over the group of exp(pi i q(x)); q(x) = Q/8 gives exp(2 pi i Q/16).
inline Cyclotomic16 gauss_sum(const FiniteQuadraticForm& f)
{
    Cyclotomic16 s;
    for (const auto& x : f.elements()) s = s + Cyclotomic16::root(f.value(x));
    return s;
}

inline int log2_exact(long long n)
{
    int e = 0;
    while ((1LL << e) < n) ++e;
    if ((1LL << e) != n) throw std::invalid_argument("group order is not a power of two");
    return e;
}

inline int signature_mod8(const FiniteQuadraticForm& f)
{
    if (!f.is_nondegenerate())
        throw std::domain_error("bilinear form is degenerate; apply radical_decompose first");
    Cyclotomic16 g = gauss_sum(f);
    Cyclotomic16 root_order = Cyclotomic16::sqrt_power_of_two(log2_exact(f.order()));
    for (int sigma = 0; sigma < 8; ++sigma)
        if (root_order * Cyclotomic16::root(2 * sigma) == g) return sigma;
    throw std::logic_error("Gauss sum does not match any value sqrt|A| zeta_8^sigma");
}

// Two-elementary forms as bit vectors over the generators.
namespace detail {

inline FiniteQuadraticForm::Element bits_to_element(std::uint32_t bits, std::size_t n)
{
    FiniteQuadraticForm::Element e(n);
    for (std::size_t i = 0; i < n; ++i) e[i] = (bits >> i) & 1U;
    return e;
}

// Gaussian elimination over F2; returns the indices of a maximal independent subfamily.
inline std::vector<std::size_t> independent_subset(const std::vector<std::uint32_t>& vecs)
{
    std::vector<std::uint32_t> basis;
    std::vector<std::size_t> chosen;
    for (std::size_t idx = 0; idx < vecs.size(); ++idx) {
        std::uint32_t v = vecs[idx];
        for (std::uint32_t b : basis)
            if ((v ^ b) < v) v ^= b;
        if (v) {
            basis.push_back(v);
            std::sort(basis.begin(), basis.end(), std::greater<>());
            chosen.push_back(idx);
        }
    }
    return chosen;
}

inline void require_two_elementary(const FiniteQuadraticForm& f)
{
    if (!f.is_two_elementary()) throw std::invalid_argument("form is not 2-elementary");
    if (f.rank() > 24) throw std::invalid_argument("form rank too large");
}

}  // namespace detail

struct RadicalDecomposition {
    int k = 0;
    int mu = 0;
    FiniteQuadraticForm nondegenerate_part;
    std::vector<std::uint32_t> radical_basis;
    std::vector<std::uint32_t> complement_basis;
};

inline RadicalDecomposition radical_decompose(const FiniteQuadraticForm& f)
{
    detail::require_two_elementary(f);
    const std::size_t n = f.rank();
    auto in_radical = [&](std::uint32_t x) {
        auto ex = detail::bits_to_element(x, n);
        for (std::size_t i = 0; i < n; ++i)
            if (f.pairing(ex, f.basis(i)) != 0) return false;
        return true;
    };
    std::vector<std::uint32_t> radical;
    for (std::uint32_t x = 1; x < (1U << n); ++x)
        if (in_radical(x)) radical.push_back(x);
    RadicalDecomposition out;
    for (std::size_t idx : detail::independent_subset(radical)) out.radical_basis.push_back(radical[idx]);
    out.k = static_cast<int>(out.radical_basis.size());
    for (std::uint32_t r : out.radical_basis)
        if (f.value(detail::bits_to_element(r, n)) != 0) out.mu = 1;

    std::vector<std::uint32_t> family = out.radical_basis;
    for (std::size_t i = 0; i < n; ++i) family.push_back(1U << i);
    for (std::size_t idx : detail::independent_subset(family))
        if (idx >= out.radical_basis.size()) out.complement_basis.push_back(family[idx]);

    std::vector<FiniteQuadraticForm::Element> gens;
    for (std::uint32_t c : out.complement_basis) gens.push_back(detail::bits_to_element(c, n));
    out.nondegenerate_part = restrict_two_elementary(f, gens);
    return out;
}

inline FiniteQuadraticForm reassemble(const RadicalDecomposition& d)
{
    FiniteQuadraticForm f;
    for (int i = 0; i < d.k - d.mu; ++i) f = direct_sum(f, elementary_form(Elementary::z));
    if (d.mu) f = direct_sum(f, elementary_form(Elementary::w));
    return direct_sum(f, d.nondegenerate_part);
}

struct FormClassification {
    int rank_a = 0;
    int k = 0;
    int mu = 0;
    int sigma_mod8 = 0;
    int delta = 0;

    auto operator<=>(const FormClassification&) const = default;
};

// With mu = 1 the nondegenerate complement is only defined up to adding the
// w-vector, which flips each q_{+-1}(2) summand and turns v+(2) into u+(2).
// The normal form is then z^{k-1} + w + u+(2)^m or z^{k-1} + w + q_1(2)^m.
inline FormClassification classify(const FiniteQuadraticForm& f)
{
    auto d = radical_decompose(f);
    FormClassification c;
    c.rank_a = static_cast<int>(f.rank());
    c.k = d.k;
    c.mu = d.mu;
    for (int v : f.generator_values())
        if (v % 8 != 0) c.delta = 1;
    int nondeg_rank = static_cast<int>(d.nondegenerate_part.rank());
    if (nondeg_rank == 0)
        c.sigma_mod8 = 0;
    else if (c.mu == 1)
        c.sigma_mod8 = c.delta ? nondeg_rank % 8 : 0;
    else
        c.sigma_mod8 = signature_mod8(d.nondegenerate_part);
    return c;
}

inline std::vector<FiniteQuadraticForm::Element> characteristic_elements(const FiniteQuadraticForm& f)
{
    auto all = f.elements();
    std::vector<FiniteQuadraticForm::Element> out;
    for (const auto& v : all) {
        bool ok = true;
        for (const auto& x : all) {
            if (f.pairing(x, v) != f.value(x) % kBMod) {
                ok = false;
                break;
            }
        }
        if (ok) out.push_back(v);
    }
    return out;
}

namespace detail {

inline std::map<std::pair<int, int>, int> value_profile(const FiniteQuadraticForm& f)
{
    std::map<std::pair<int, int>, int> h;
    for (const auto& x : f.elements()) ++h[{f.element_order(x), f.value(x)}];
    return h;
}

inline long long subgroup_size(const FiniteQuadraticForm& g, const std::vector<FiniteQuadraticForm::Element>& gens)
{
    std::vector<FiniteQuadraticForm::Element> seen{g.zero()};
    std::map<FiniteQuadraticForm::Element, bool> mark{{g.zero(), true}};
    for (std::size_t head = 0; head < seen.size(); ++head) {
        for (const auto& s : gens) {
            auto y = g.add(seen[head], s);
            if (!mark.count(y)) {
                mark[y] = true;
                seen.push_back(y);
            }
        }
    }
    return static_cast<long long>(seen.size());
}

inline bool extend_isometry(const FiniteQuadraticForm& f, const FiniteQuadraticForm& g,
                            const std::vector<FiniteQuadraticForm::Element>& targets,
                            std::vector<FiniteQuadraticForm::Element>& images)
{
    std::size_t i = images.size();
    if (i == f.rank()) return true;
    long long expected = 1;
    for (std::size_t j = 0; j <= i; ++j) expected *= f.orders()[j];
    for (const auto& h : targets) {
        if (g.scale(h, f.orders()[i]) != g.zero()) continue;
        if (g.value(h) != f.generator_values()[i]) continue;
        bool ok = true;
        for (std::size_t j = 0; j < i && ok; ++j)
            if (g.pairing(h, images[j]) != f.generator_pairings()[i][j]) ok = false;
        if (!ok) continue;
        images.push_back(h);
        if (subgroup_size(g, images) == expected && extend_isometry(f, g, targets, images)) return true;
        images.pop_back();
    }
    return false;
}

}  // namespace detail

inline constexpr long long kOracleBound = 256;

inline bool is_isomorphic(const FiniteQuadraticForm& f, const FiniteQuadraticForm& g)
{
    if (f.order() > kOracleBound || g.order() > kOracleBound)
        throw std::length_error("oracle scale exceeded");
    if (f.order() != g.order()) return false;
    if (detail::value_profile(f) != detail::value_profile(g)) return false;
    std::vector<FiniteQuadraticForm::Element> images;
    return detail::extend_isometry(f, g, g.elements(), images);
}

}  // namespace k3census
