#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/rational.hpp>

#include "k3census/qform.hpp"

namespace k3census {

using IntVec = std::vector<long long>;
using IntMat = std::vector<IntVec>;
using Rational = boost::rational<long long>;
using RatVec = std::vector<Rational>;

inline IntMat identity_matrix(std::size_t n)
{
    IntMat m(n, IntVec(n, 0));
    for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

inline IntMat multiply(const IntMat& a, const IntMat& b)
{
    std::size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
    IntMat c(n, IntVec(m, 0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t l = 0; l < k; ++l)
            for (std::size_t j = 0; j < m; ++j) c[i][j] += a[i][l] * b[l][j];
    return c;
}

inline IntVec mat_vec(const IntMat& a, const IntVec& x)
{
    IntVec y(a.size(), 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < x.size(); ++j) y[i] += a[i][j] * x[j];
    return y;
}

inline IntMat transpose(const IntMat& a)
{
    if (a.empty()) return {};
    IntMat t(a[0].size(), IntVec(a.size()));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a[i].size(); ++j) t[j][i] = a[i][j];
    return t;
}

// Columns of the returned matrix are the given vectors.
inline IntMat columns(const std::vector<IntVec>& vecs, std::size_t dim)
{
    IntMat m(dim, IntVec(vecs.size(), 0));
    for (std::size_t j = 0; j < vecs.size(); ++j)
        for (std::size_t i = 0; i < dim; ++i) m[i][j] = vecs[j][i];
    return m;
}

struct SmithForm {
    IntMat d;  // diagonal
    IntMat u;  // unimodular, u * m * v = d
    IntMat v;
    std::vector<long long> diagonal() const
    {
        std::vector<long long> out;
        for (std::size_t i = 0; i < std::min(d.size(), d.empty() ? 0 : d[0].size()); ++i) out.push_back(d[i][i]);
        return out;
    }
};

inline SmithForm smith_normal_form(const IntMat& m)
{
    const std::size_t rows = m.size();
    const std::size_t cols = rows ? m[0].size() : 0;
    SmithForm s{m, identity_matrix(rows), identity_matrix(cols)};
    IntMat& a = s.d;

    auto swap_rows = [&](std::size_t i, std::size_t j) {
        std::swap(a[i], a[j]);
        std::swap(s.u[i], s.u[j]);
    };
    auto swap_cols = [&](std::size_t i, std::size_t j) {
        for (auto& row : a) std::swap(row[i], row[j]);
        for (auto& row : s.v) std::swap(row[i], row[j]);
    };
    auto add_row = [&](std::size_t dst, std::size_t src, long long f) {
        for (std::size_t j = 0; j < cols; ++j) a[dst][j] += f * a[src][j];
        for (std::size_t j = 0; j < rows; ++j) s.u[dst][j] += f * s.u[src][j];
    };
    auto add_col = [&](std::size_t dst, std::size_t src, long long f) {
        for (std::size_t i = 0; i < rows; ++i) a[i][dst] += f * a[i][src];
        for (std::size_t i = 0; i < cols; ++i) s.v[i][dst] += f * s.v[i][src];
    };

    for (std::size_t t = 0; t < std::min(rows, cols); ++t) {
        for (;;) {
            std::size_t pi = rows, pj = cols;
            for (std::size_t i = t; i < rows; ++i)
                for (std::size_t j = t; j < cols; ++j)
                    if (a[i][j] != 0 && (pi == rows || std::llabs(a[i][j]) < std::llabs(a[pi][pj]))) {
                        pi = i;
                        pj = j;
                    }
            if (pi == rows) return s;
            swap_rows(t, pi);
            swap_cols(t, pj);
            bool clean = true;
            for (std::size_t i = t + 1; i < rows; ++i) {
                add_row(i, t, -(a[i][t] / a[t][t]));
                if (a[i][t] != 0) clean = false;
            }
            for (std::size_t j = t + 1; j < cols; ++j) {
                add_col(j, t, -(a[t][j] / a[t][t]));
                if (a[t][j] != 0) clean = false;
            }
            if (!clean) continue;
            bool divides = true;
            for (std::size_t i = t + 1; i < rows && divides; ++i)
                for (std::size_t j = t + 1; j < cols && divides; ++j)
                    if (a[i][j] % a[t][t] != 0) {
                        add_row(t, i, 1);
                        divides = false;
                    }
            if (divides) break;
        }
        if (a[t][t] < 0) {
            for (std::size_t j = 0; j < cols; ++j) a[t][j] = -a[t][j];
            for (std::size_t j = 0; j < rows; ++j) s.u[t][j] = -s.u[t][j];
        }
    }
    return s;
}

inline Rational determinant(const IntMat& m)
{
    std::size_t n = m.size();
    std::vector<RatVec> a(n, RatVec(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a[i][j] = m[i][j];
    Rational det = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && a[p][c].numerator() == 0) ++p;
        if (p == n) return 0;
        if (p != c) {
            std::swap(a[p], a[c]);
            det = -det;
        }
        det *= a[c][c];
        for (std::size_t i = c + 1; i < n; ++i) {
            Rational f = a[i][c] / a[c][c];
            for (std::size_t j = c; j < n; ++j) a[i][j] -= f * a[c][j];
        }
    }
    return det;
}

inline std::vector<RatVec> inverse(const IntMat& m)
{
    std::size_t n = m.size();
    std::vector<RatVec> a(n, RatVec(2 * n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) a[i][j] = m[i][j];
        a[i][n + i] = 1;
    }
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && a[p][c].numerator() == 0) ++p;
        if (p == n) throw std::invalid_argument("matrix is singular");
        std::swap(a[p], a[c]);
        Rational piv = a[c][c];
        for (auto& x : a[c]) x /= piv;
        for (std::size_t i = 0; i < n; ++i) {
            if (i == c || a[i][c].numerator() == 0) continue;
            Rational f = a[i][c];
            for (std::size_t j = 0; j < 2 * n; ++j) a[i][j] -= f * a[c][j];
        }
    }
    std::vector<RatVec> inv(n, RatVec(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) inv[i][j] = a[i][n + j];
    return inv;
}

inline Rational bilinear(const IntMat& gram, const RatVec& x, const RatVec& y)
{
    Rational s = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = 0; j < y.size(); ++j) s += x[i] * gram[i][j] * y[j];
    return s;
}

inline long long bilinear(const IntMat& gram, const IntVec& x, const IntVec& y)
{
    long long s = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = 0; j < y.size(); ++j) s += x[i] * gram[i][j] * y[j];
    return s;
}

inline RatVec to_rational(const IntVec& x)
{
    return RatVec(x.begin(), x.end());
}

// Rational number r mod m expressed in units of 1/8; throws if 8r is not an integer.
inline int eighths_mod(const Rational& r, int m)
{
    Rational e = r * 8;
    if (e.denominator() != 1) throw std::domain_error("value has denominator beyond 8");
    return mod_pos(e.numerator(), m);
}

class EvenLattice {
public:
    EvenLattice() = default;

    explicit EvenLattice(IntMat gram) : gram_(std::move(gram))
    {
        for (std::size_t i = 0; i < gram_.size(); ++i) {
            if (gram_[i].size() != gram_.size()) throw std::invalid_argument("Gram matrix is not square");
            if (gram_[i][i] % 2 != 0) throw std::invalid_argument("Gram matrix has an odd diagonal entry");
            for (std::size_t j = 0; j < i; ++j)
                if (gram_[i][j] != gram_[j][i]) throw std::invalid_argument("Gram matrix is not symmetric");
        }
        if (determinant(gram_).numerator() == 0) throw std::invalid_argument("Gram matrix is degenerate");
    }

    const IntMat& gram() const { return gram_; }
    std::size_t rank() const { return gram_.size(); }
    long long det() const { return boost::rational_cast<long long>(determinant(gram_)); }

    // (n_plus, n_minus) from the signs of a diagonalization over Q
    std::pair<int, int> signature() const
    {
        std::size_t n = gram_.size();
        std::vector<RatVec> a(n, RatVec(n));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) a[i][j] = gram_[i][j];
        int plus = 0, minus = 0;
        for (std::size_t c = 0; c < n; ++c) {
            if (a[c][c].numerator() == 0) {
                std::size_t p = c + 1;
                while (p < n && a[p][c].numerator() == 0) ++p;
                if (p == n) throw std::logic_error("degenerate form in signature");
                if (a[p][p].numerator() != 0) {
                    std::swap(a[p], a[c]);
                    for (auto& row : a) std::swap(row[p], row[c]);
                } else {
                    // x_c -> x_c + x_p makes the pivot 2 a[c][p] != 0
                    for (std::size_t j = 0; j < n; ++j) a[c][j] += a[p][j];
                    for (std::size_t i = 0; i < n; ++i) a[i][c] += a[i][p];
                }
            }
            Rational piv = a[c][c];
            (piv.numerator() > 0 ? plus : minus)++;
            std::vector<RatVec> next = a;
            for (std::size_t i = c + 1; i < n; ++i)
                for (std::size_t j = c + 1; j < n; ++j) next[i][j] = a[i][j] - a[i][c] * a[c][j] / piv;
            for (std::size_t i = c + 1; i < n; ++i) next[i][c] = next[c][i] = 0;
            a = std::move(next);
        }
        return {plus, minus};
    }

    bool is_negative_definite() const { return signature().second == static_cast<int>(rank()); }

private:
    IntMat gram_;
};

struct DiscriminantForm {
    FiniteQuadraticForm form;
    std::vector<long long> invariant_factors;  // all factors, including 1s
    std::vector<RatVec> generators;            // dual vectors for the nontrivial factors
    IntMat v_inverse;
    std::vector<std::size_t> nontrivial;       // positions of factors > 1

    FiniteQuadraticForm::Element coordinates(const RatVec& x) const
    {
        FiniteQuadraticForm::Element e;
        for (std::size_t idx : nontrivial) {
            Rational z = 0;
            for (std::size_t j = 0; j < x.size(); ++j) z += Rational(v_inverse[idx][j]) * x[j];
            Rational c = z * invariant_factors[idx];
            if (c.denominator() != 1) throw std::invalid_argument("vector is not in the dual lattice");
            e.push_back(mod_pos(c.numerator(), static_cast<int>(invariant_factors[idx])));
        }
        return e;
    }
};

inline DiscriminantForm discriminant_form(const EvenLattice& lattice)
{
    const IntMat& g = lattice.gram();
    DiscriminantForm out;
    if (g.empty()) return out;
    SmithForm s = smith_normal_form(g);
    out.invariant_factors = s.diagonal();
    auto vinv = inverse(s.v);
    out.v_inverse.assign(vinv.size(), IntVec(vinv.size()));
    for (std::size_t i = 0; i < vinv.size(); ++i)
        for (std::size_t j = 0; j < vinv.size(); ++j) out.v_inverse[i][j] = boost::rational_cast<long long>(vinv[i][j]);
    std::vector<int> orders;
    for (std::size_t i = 0; i < out.invariant_factors.size(); ++i) {
        long long d = out.invariant_factors[i];
        if (d == 1) continue;
        if (d != 2 && d != 4 && d != 8)
            throw std::domain_error("invariant factor " + std::to_string(d) + " outside exponent 8");
        RatVec y(g.size());
        for (std::size_t r = 0; r < g.size(); ++r) y[r] = Rational(s.v[r][i], d);
        out.generators.push_back(y);
        out.nontrivial.push_back(i);
        orders.push_back(static_cast<int>(d));
    }
    std::size_t n = out.generators.size();
    std::vector<int> q(n);
    std::vector<std::vector<int>> b(n, std::vector<int>(n));
    for (std::size_t i = 0; i < n; ++i) {
        q[i] = eighths_mod(bilinear(g, out.generators[i], out.generators[i]), kQMod);
        for (std::size_t j = 0; j < n; ++j) b[i][j] = eighths_mod(bilinear(g, out.generators[i], out.generators[j]), kBMod);
    }
    out.form = FiniteQuadraticForm(std::move(orders), std::move(q), std::move(b));
    return out;
}

struct LatticeInvariants {
    int r = 0;
    int a = 0;
    int delta = 0;
    auto operator<=>(const LatticeInvariants&) const = default;
};

inline LatticeInvariants lattice_invariants(const EvenLattice& lattice)
{
    LatticeInvariants inv;
    inv.r = static_cast<int>(lattice.rank());
    if (lattice.rank() == 0) return inv;
    SmithForm s = smith_normal_form(lattice.gram());
    for (long long d : s.diagonal()) {
        if (d == 1) continue;
        if (d != 2) throw std::invalid_argument("lattice is not 2-elementary: invariant factor " + std::to_string(d));
        ++inv.a;
    }
    auto df = discriminant_form(lattice);
    for (int v : df.form.generator_values())
        if (v % 8 != 0) inv.delta = 1;
    return inv;
}

// Number of invariant factors of the discriminant group, and how many equal 2.
inline std::pair<int, int> discriminant_length(const EvenLattice& lattice)
{
    if (lattice.rank() == 0) return {0, 0};
    int l = 0, kappa = 0;
    for (long long d : smith_normal_form(lattice.gram()).diagonal()) {
        if (d == 1) continue;
        ++l;
        if (d == 2) ++kappa;
    }
    return {l, kappa};
}

// Vectors of the sublattice spanned by `basis` (given in ambient coordinates)
// with square -4 and even pairing with the whole ambient lattice.
inline std::vector<IntVec> roots_minus4(const std::vector<IntVec>& basis, const EvenLattice& ambient)
{
    const IntMat& g = ambient.gram();
    const std::size_t dim = ambient.rank();
    const std::size_t p = basis.size();
    std::vector<IntVec> out;
    if (p == 0) return out;
    IntMat b = columns(basis, dim);
    IntMat sub = multiply(transpose(b), multiply(g, b));
    EvenLattice sublattice(sub);

    auto accept = [&](const IntVec& c) {
        if (bilinear(sub, c, c) != -4) return;
        IntVec alpha = mat_vec(b, c);
        IntVec ga = mat_vec(g, alpha);
        for (long long x : ga)
            if (x % 2 != 0) return;
        out.push_back(alpha);
    };

    auto [np, nm] = sublattice.signature();
    if (nm == 0) return out;
    if (np == 0) {
        // negative definite: c_j^2 <= 4 * ((-sub)^{-1})_{jj}
        IntMat neg = sub;
        for (auto& row : neg)
            for (auto& x : row) x = -x;
        auto inv = inverse(neg);
        std::vector<long long> bound(p);
        for (std::size_t j = 0; j < p; ++j) {
            Rational m = inv[j][j] * 4;
            long long k = 0;
            while (Rational((k + 1) * (k + 1)) <= m) ++k;
            bound[j] = k;
        }
        IntVec c(p);
        for (std::size_t j = 0; j < p; ++j) c[j] = -bound[j];
        for (;;) {
            accept(c);
            std::size_t j = 0;
            while (j < p && ++c[j] > bound[j]) {
                c[j] = -bound[j];
                ++j;
            }
            if (j == p) break;
        }
    } else if (p == 2) {
        // isotropic binary form: factor A*Q = (A c1 + B c2)^2 - D c2^2
        long long A = sub[0][0], B = sub[0][1], C = sub[1][1];
        long long D = B * B - A * C;
        long long s = 0;
        while (s * s < D) ++s;
        if (s * s != D) throw std::invalid_argument("root search in an anisotropic indefinite lattice is unbounded");
        if (A == 0) {
            for (long long c2 : {-4LL, -2LL, -1LL, 1LL, 2LL, 4LL}) {
                long long rhs = -4 / c2 - C * c2;
                if (B != 0 && rhs % (2 * B) == 0) accept({rhs / (2 * B), c2});
            }
        } else {
            long long target = -4 * A;
            for (long long u = -std::llabs(target); u <= std::llabs(target); ++u) {
                if (u == 0 || target % u != 0) continue;
                long long w = target / u;
                if ((w - u) % (2 * s) != 0) continue;
                long long c2 = (w - u) / (2 * s);
                long long num = u - (B - s) * c2;
                if (num % A != 0) continue;
                accept({num / A, c2});
            }
        }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
    } else {
        throw std::invalid_argument("root search in an indefinite lattice of rank above 2 is unbounded");
    }
    std::sort(out.begin(), out.end());
    return out;
}

// Reflection x -> x + ((x, alpha)/2) alpha for alpha^2 = -4, as a matrix on coordinates.
inline IntMat reflection_minus4(const IntVec& alpha, const IntMat& gram)
{
    std::size_t n = gram.size();
    IntMat m(n, IntVec(n, 0));
    IntVec ga = mat_vec(gram, alpha);
    for (std::size_t j = 0; j < n; ++j) {
        long long f = ga[j] / 2;
        for (std::size_t i = 0; i < n; ++i) m[i][j] = (i == j ? 1 : 0) + f * alpha[i];
    }
    return m;
}

inline std::uint32_t mod2_bits(const IntVec& x)
{
    std::uint32_t bits = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i] % 2 != 0) bits |= 1U << i;
    return bits;
}

inline IntVec bits_vector(std::uint32_t bits, std::size_t n)
{
    IntVec x(n, 0);
    for (std::size_t i = 0; i < n; ++i) x[i] = (bits >> i) & 1U;
    return x;
}

inline int f2_rank(std::vector<std::uint32_t> vecs)
{
    return static_cast<int>(detail::independent_subset(vecs).size());
}

enum class Surface { P2, Hyperboloid, Ellipsoid, F1, F4 };

inline constexpr std::array<Surface, 5> kAllSurfaces = {Surface::P2, Surface::Hyperboloid, Surface::Ellipsoid,
                                                        Surface::F1, Surface::F4};

inline std::string surface_name(Surface s)
{
    switch (s) {
    case Surface::P2: return "p2";
    case Surface::Hyperboloid: return "hyperboloid";
    case Surface::Ellipsoid: return "ellipsoid";
    case Surface::F1: return "f1";
    case Surface::F4: return "f4";
    }
    return "?";
}

inline Surface parse_surface(const std::string& name)
{
    for (Surface s : kAllSurfaces)
        if (surface_name(s) == name) return s;
    throw std::invalid_argument("unknown surface: " + name);
}

struct SubgroupH {
    std::string name;
    std::vector<IntVec> plus_gens;   // elements of S_+ in S coordinates, taken mod 2S_+
    std::vector<IntVec> minus_gens;  // elements of S_- in S coordinates, taken mod 2S_-
};

// Per-subgroup data computed from the fixture.
struct SubgroupStructure {
    std::vector<std::uint32_t> elements;  // image in S/2S, sorted
    FiniteQuadraticForm q_rho;             // on an F2-basis of the image
    std::map<std::uint32_t, FiniteQuadraticForm::Element> coordinates;
    std::map<std::uint32_t, IntVec> plus_lift;   // elements of H_+ by image
    std::map<std::uint32_t, IntVec> minus_lift;  // elements of H_- by image
    int a_plus = 0;
    int a_minus = 0;
    int a_gamma = 0;
    int delta_plus = 0;
    int delta_minus = 0;

    int a_H() const { return a_plus + a_minus - a_gamma; }
    bool contains(std::uint32_t x) const { return coordinates.count(x) != 0; }
    int value(std::uint32_t x) const { return q_rho.value(coordinates.at(x)); }
};

struct GroupDescription {
    std::vector<IntMat> generators;
    std::vector<IntMat> elements;
    std::size_t order() const { return elements.size(); }
};

struct SThetaType {
    Surface surface;
    std::vector<std::string> basis_names;
    EvenLattice s_lattice;
    IntMat theta;
    std::vector<IntVec> s_plus;
    std::vector<IntVec> s_minus;
    std::vector<SubgroupH> subgroup_catalog;
    // epsilon[sign][delta_phi] with sign 0 for v_+ and 1 for v_-; used only where delta_phiS+- = 0
    std::array<std::array<int, 2>, 2> epsilon{};
    // rank of the pairing rho between H_+ and H_-
    int rk_rho = 0;

    // derived at construction
    GroupDescription group;
    std::vector<SubgroupStructure> subgroups;
    std::uint32_t s_theta = 0;

    std::string name() const { return surface_name(surface); }
    std::size_t dim() const { return s_lattice.rank(); }
    int s() const { return static_cast<int>(dim()); }
    int p() const { return static_cast<int>(s_plus.size()); }
    const IntMat& gram() const { return s_lattice.gram(); }

    EvenLattice sublattice(int sign) const
    {
        const auto& basis = sign > 0 ? s_plus : s_minus;
        if (basis.empty()) return EvenLattice{};
        IntMat b = columns(basis, dim());
        return EvenLattice(multiply(transpose(b), multiply(gram(), b)));
    }

    std::size_t subgroup_index(const std::string& name) const
    {
        for (std::size_t i = 0; i < subgroup_catalog.size(); ++i)
            if (subgroup_catalog[i].name == name) return i;
        throw std::invalid_argument("subgroup " + name + " is not in the catalog of " + this->name());
    }

    std::size_t subgroup_index_of_elements(const std::vector<std::uint32_t>& elems) const
    {
        for (std::size_t i = 0; i < subgroups.size(); ++i)
            if (subgroups[i].elements == elems) return i;
        throw std::logic_error("subgroup with the given elements is not in the catalog of " + name());
    }

    // x mod 2S rendered in the named basis, e.g. "e1+e2" or "0"
    std::string element_name(std::uint32_t bits) const
    {
        if (bits == 0) return "0";
        std::string out;
        for (std::size_t i = 0; i < dim(); ++i)
            if ((bits >> i) & 1U) {
                if (!out.empty()) out += "+";
                out += basis_names[i];
            }
        return out;
    }

    std::uint32_t parse_element(const std::string& text) const
    {
        if (text == "0") return 0;
        std::uint32_t bits = 0;
        std::size_t start = 0;
        while (start <= text.size()) {
            std::size_t plus = text.find('+', start);
            std::string term = text.substr(start, plus == std::string::npos ? std::string::npos : plus - start);
            auto it = std::find(basis_names.begin(), basis_names.end(), term);
            if (it == basis_names.end()) throw std::invalid_argument("unknown basis element: " + term);
            bits ^= 1U << (it - basis_names.begin());
            if (plus == std::string::npos) break;
            start = plus + 1;
        }
        return bits;
    }

    std::uint32_t act(const IntMat& g, std::uint32_t bits) const
    {
        return mod2_bits(mat_vec(g, bits_vector(bits, dim())));
    }

    // Elements x of S_sign mod 2S_sign with x/2 in the dual of S_sign, i.e. A^{(2)}.
    std::vector<IntVec> two_torsion_range(int sign) const
    {
        const auto& basis = sign > 0 ? s_plus : s_minus;
        std::vector<IntVec> out;
        for (std::uint32_t c = 0; c < (1U << basis.size()); ++c) {
            IntVec x(dim(), 0);
            for (std::size_t j = 0; j < basis.size(); ++j)
                if ((c >> j) & 1U)
                    for (std::size_t i = 0; i < dim(); ++i) x[i] += basis[j][i];
            bool dual = true;
            for (const auto& y : basis)
                if (bilinear(gram(), x, y) % 2 != 0) dual = false;
            if (dual) out.push_back(x);
        }
        return out;
    }

    // Characteristic elements of the restriction of q_{S_sign} to A^{(2)}, as lifts x with x/2 the element.
    std::vector<IntVec> two_torsion_characteristic(int sign) const
    {
        auto range = two_torsion_range(sign);
        std::vector<IntVec> out;
        for (const auto& x : range) {
            bool ok = true;
            for (const auto& y : range)
                if (mod_pos(2 * bilinear(gram(), x, y), kBMod) != mod_pos(2 * bilinear(gram(), y, y), kBMod)) ok = false;
            if (ok) out.push_back(x);
        }
        return out;
    }

    // Coordinates of x in the basis of S_sign (exact, must be integral).
    IntVec sub_coordinates(int sign, const IntVec& x) const
    {
        const auto& basis = sign > 0 ? s_plus : s_minus;
        std::size_t p = basis.size();
        if (p == 0) {
            for (long long c : x)
                if (c != 0) throw std::invalid_argument("vector is not in the sublattice");
            return {};
        }
        IntMat b = columns(basis, dim());
        IntMat bt = transpose(b);
        auto inv = inverse(multiply(bt, b));
        IntVec btx = mat_vec(bt, x);
        IntVec c(p);
        for (std::size_t i = 0; i < p; ++i) {
            Rational s = 0;
            for (std::size_t j = 0; j < p; ++j) s += inv[i][j] * btx[j];
            if (s.denominator() != 1) throw std::invalid_argument("vector is not in the sublattice");
            c[i] = s.numerator();
        }
        if (mat_vec(b, c) != x) throw std::invalid_argument("vector is not in the sublattice");
        return c;
    }

    bool same_mod_2(int sign, const IntVec& x, const IntVec& y) const
    {
        IntVec d(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) d[i] = x[i] - y[i];
        for (long long c : sub_coordinates(sign, d))
            if (c % 2 != 0) return false;
        return true;
    }
};

namespace detail {

inline IntVec combine(const std::vector<IntVec>& gens, std::uint32_t mask, std::size_t dim)
{
    IntVec x(dim, 0);
    for (std::size_t j = 0; j < gens.size(); ++j)
        if ((mask >> j) & 1U)
            for (std::size_t i = 0; i < dim; ++i) x[i] += gens[j][i];
    return x;
}

inline int f2_rank_in(const SThetaType& t, int sign, const std::vector<IntVec>& vecs)
{
    std::vector<std::uint32_t> bits;
    for (const auto& v : vecs) bits.push_back(mod2_bits(t.sub_coordinates(sign, v)));
    return f2_rank(bits);
}

inline SubgroupStructure analyze_subgroup(const SThetaType& t, const SubgroupH& h)
{
    const IntMat& g = t.gram();
    const std::size_t dim = t.dim();
    SubgroupStructure out;

    for (int sign : {+1, -1}) {
        const auto& gens = sign > 0 ? h.plus_gens : h.minus_gens;
        const auto& basis = sign > 0 ? t.s_plus : t.s_minus;
        for (const auto& x : gens) {
            t.sub_coordinates(sign, x);
            for (const auto& y : basis)
                if (bilinear(g, x, y) % 2 != 0)
                    throw std::invalid_argument("generator of " + h.name + " is not in the range A^(2)");
        }
    }

    // lifts (x_+, x_-): q_rho = q_{S+}(x_+/2) - q_{S-}(x_-/2), in units of 1/8
    struct Lift {
        IntVec plus, minus;
    };
    std::vector<Lift> lifts;
    for (const auto& x : h.plus_gens) lifts.push_back({x, IntVec(dim, 0)});
    for (const auto& y : h.minus_gens) lifts.push_back({IntVec(dim, 0), y});
    auto q_of = [&](const Lift& l) {
        return mod_pos(2 * bilinear(g, l.plus, l.plus) - 2 * bilinear(g, l.minus, l.minus), kQMod);
    };
    auto b_of = [&](const Lift& l, const Lift& m) {
        return mod_pos(2 * bilinear(g, l.plus, m.plus) - 2 * bilinear(g, l.minus, m.minus), kBMod);
    };
    auto image = [&](const Lift& l) {
        IntVec s(dim);
        for (std::size_t i = 0; i < dim; ++i) s[i] = l.plus[i] + l.minus[i];
        return mod2_bits(s);
    };

    std::vector<IntVec> plus_only = h.plus_gens, minus_only = h.minus_gens;
    std::map<std::uint32_t, int> value_by_image;
    for (std::uint32_t mask = 0; mask < (1U << lifts.size()); ++mask) {
        Lift l{IntVec(dim, 0), IntVec(dim, 0)};
        for (std::size_t j = 0; j < lifts.size(); ++j)
            if ((mask >> j) & 1U)
                for (std::size_t i = 0; i < dim; ++i) {
                    l.plus[i] += lifts[j].plus[i];
                    l.minus[i] += lifts[j].minus[i];
                }
        std::uint32_t im = image(l);
        int q = q_of(l);
        auto [it, fresh] = value_by_image.emplace(im, q);
        if (!fresh && it->second != q)
            throw std::logic_error("q_rho is not well defined modulo Gamma for " + h.name);
    }

    std::vector<std::uint32_t> images;
    for (const auto& l : lifts) images.push_back(image(l));
    std::vector<Lift> basis_lifts;
    std::vector<std::uint32_t> basis_images;
    for (std::size_t idx : independent_subset(images)) {
        basis_lifts.push_back(lifts[idx]);
        basis_images.push_back(images[idx]);
    }
    std::size_t n = basis_lifts.size();
    std::vector<int> q(n);
    std::vector<std::vector<int>> b(n, std::vector<int>(n));
    for (std::size_t i = 0; i < n; ++i) {
        q[i] = q_of(basis_lifts[i]);
        for (std::size_t j = 0; j < n; ++j) b[i][j] = b_of(basis_lifts[i], basis_lifts[j]);
    }
    out.q_rho = FiniteQuadraticForm(std::vector<int>(n, 2), std::move(q), std::move(b));
    for (std::uint32_t c = 0; c < (1U << n); ++c) {
        std::uint32_t im = 0;
        for (std::size_t j = 0; j < n; ++j)
            if ((c >> j) & 1U) im ^= basis_images[j];
        out.coordinates[im] = bits_to_element(c, n);
        out.elements.push_back(im);
    }
    std::sort(out.elements.begin(), out.elements.end());
    for (const auto& [im, val] : value_by_image)
        if (out.value(im) != val) throw std::logic_error("q_rho basis values disagree with lifts");

    for (std::uint32_t mask = 0; mask < (1U << h.plus_gens.size()); ++mask) {
        IntVec x = combine(h.plus_gens, mask, dim);
        out.plus_lift.emplace(mod2_bits(x), x);
        if (mod_pos(2 * bilinear(g, x, x), 8) != 0) out.delta_plus = 1;
    }
    for (std::uint32_t mask = 0; mask < (1U << h.minus_gens.size()); ++mask) {
        IntVec y = combine(h.minus_gens, mask, dim);
        out.minus_lift.emplace(mod2_bits(y), y);
        if (mod_pos(2 * bilinear(g, y, y), 8) != 0) out.delta_minus = 1;
    }
    out.a_plus = f2_rank_in(t, +1, h.plus_gens);
    out.a_minus = f2_rank_in(t, -1, h.minus_gens);

    std::vector<IntVec> gamma_plus;
    for (std::size_t i = 0; i < dim; ++i) {
        IntVec e(dim, 0);
        e[i] = 1;
        IntVec te = mat_vec(t.theta, e);
        IntVec gp(dim);
        for (std::size_t k = 0; k < dim; ++k) gp[k] = e[k] + te[k];
        gamma_plus.push_back(gp);
    }
    out.a_gamma = f2_rank_in(t, +1, gamma_plus);
    return out;
}

inline GroupDescription build_group(const SThetaType& t)
{
    GroupDescription gd;
    for (const auto* basis : {&t.s_plus, &t.s_minus}) {
        for (const auto& alpha : roots_minus4(*basis, t.s_lattice)) {
            IntMat r = reflection_minus4(alpha, t.gram());
            if (std::find(gd.generators.begin(), gd.generators.end(), r) == gd.generators.end())
                gd.generators.push_back(r);
        }
    }
    std::set<IntMat> seen{identity_matrix(t.dim())};
    gd.elements.push_back(identity_matrix(t.dim()));
    for (std::size_t head = 0; head < gd.elements.size(); ++head) {
        for (const auto& r : gd.generators) {
            IntMat m = multiply(r, gd.elements[head]);
            if (seen.insert(m).second) gd.elements.push_back(m);
            if (gd.elements.size() > 1024) throw std::logic_error("group G is unexpectedly large");
        }
    }
    return gd;
}

// s with 2(x, theta x) = (x, s) mod 2 for every x in S*
inline std::uint32_t compute_s_theta(const SThetaType& t)
{
    const IntMat& g = t.gram();
    auto ginv = inverse(g);
    std::size_t n = t.dim();
    std::vector<RatVec> duals(n, RatVec(n));
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) duals[j][i] = ginv[i][j];
    std::vector<std::uint32_t> found;
    for (std::uint32_t s = 0; s < (1U << n); ++s) {
        RatVec sv = to_rational(bits_vector(s, n));
        bool ok = true;
        for (std::uint32_t mask = 0; mask < (1U << n) && ok; ++mask) {
            RatVec x(n, 0);
            for (std::size_t j = 0; j < n; ++j)
                if ((mask >> j) & 1U)
                    for (std::size_t i = 0; i < n; ++i) x[i] += duals[j][i];
            RatVec tx(n, 0);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) tx[i] += Rational(t.theta[i][j]) * x[j];
            Rational lhs = bilinear(g, x, tx) * 2;
            Rational rhs = bilinear(g, x, sv);
            Rational diff = lhs - rhs;
            if (diff.denominator() != 1 || diff.numerator() % 2 != 0) ok = false;
        }
        if (ok) found.push_back(s);
    }
    if (found.size() != 1) throw std::logic_error("characteristic class s_theta is not unique");
    return found.front();
}

}  // namespace detail

inline SThetaType build_type(Surface surface)
{
    SThetaType t;
    t.surface = surface;
    switch (surface) {
    case Surface::P2:
        t.basis_names = {"h"};
        t.s_lattice = EvenLattice(IntMat{{2}});
        t.theta = {{-1}};
        t.s_minus = {{1}};
        t.subgroup_catalog = {{"0", {}, {}}, {"[h]", {}, {{1}}}};
        break;
    case Surface::Hyperboloid:
        t.basis_names = {"e1", "e2"};
        t.s_lattice = EvenLattice(IntMat{{0, 2}, {2, 0}});
        t.theta = {{-1, 0}, {0, -1}};
        t.s_minus = {{1, 0}, {0, 1}};
        t.subgroup_catalog = {{"0", {}, {}},
                              {"[e1]", {}, {{1, 0}}},
                              {"[e2]", {}, {{0, 1}}},
                              {"[h]", {}, {{1, 1}}},
                              {"S/2S", {}, {{1, 0}, {0, 1}}}};
        break;
    case Surface::Ellipsoid:
        t.basis_names = {"e1", "e2"};
        t.s_lattice = EvenLattice(IntMat{{0, 2}, {2, 0}});
        t.theta = {{0, -1}, {-1, 0}};
        t.s_plus = {{1, -1}};
        t.s_minus = {{1, 1}};
        t.subgroup_catalog = {{"[e1+e2]", {{1, -1}}, {{1, 1}}}};
        t.epsilon = {{{0, 1}, {0, 1}}};
        break;
    case Surface::F1:
        t.basis_names = {"h", "e"};
        t.s_lattice = EvenLattice(IntMat{{2, 0}, {0, -2}});
        t.theta = {{-1, 0}, {0, -1}};
        t.s_minus = {{1, 0}, {0, 1}};
        t.subgroup_catalog = {{"0", {}, {}},
                              {"[h]", {}, {{1, 0}}},
                              {"[e]", {}, {{0, 1}}},
                              {"[h+e]", {}, {{1, 1}}},
                              {"S/2S", {}, {{1, 0}, {0, 1}}}};
        break;
    case Surface::F4:
        t.basis_names = {"C", "E"};
        t.s_lattice = EvenLattice(IntMat{{0, 1}, {1, -2}});
        t.theta = {{-1, 0}, {0, -1}};
        t.s_minus = {{1, 0}, {0, 1}};
        t.subgroup_catalog = {{"0", {}, {}}};
        break;
    }
    t.group = detail::build_group(t);
    for (const auto& h : t.subgroup_catalog) t.subgroups.push_back(detail::analyze_subgroup(t, h));
    t.s_theta = detail::compute_s_theta(t);
    return t;
}

inline const SThetaType& make_type(Surface surface)
{
    static const std::array<SThetaType, 5> types = {build_type(Surface::P2), build_type(Surface::Hyperboloid),
                                                    build_type(Surface::Ellipsoid), build_type(Surface::F1),
                                                    build_type(Surface::F4)};
    return types[static_cast<std::size_t>(surface)];
}

inline const SThetaType& make_type(const std::string& name) { return make_type(parse_surface(name)); }

inline const GroupDescription& group_G(const SThetaType& t) { return t.group; }

// Image of each named basis vector under g, e.g. {"e2", "e1"} for the hyperboloid swap.
inline std::vector<std::string> basis_action(const SThetaType& t, const IntMat& g)
{
    std::vector<std::string> out;
    for (std::size_t j = 0; j < t.dim(); ++j) {
        std::string s;
        for (std::size_t i = 0; i < t.dim(); ++i) {
            long long c = g[i][j];
            if (c == 0) continue;
            if (c > 0 && !s.empty()) s += "+";
            if (c == -1)
                s += "-";
            else if (c != 1)
                s += std::to_string(c) + "*";
            s += t.basis_names[i];
        }
        out.push_back(s.empty() ? "0" : s);
    }
    return out;
}

}  // namespace k3census
