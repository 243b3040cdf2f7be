#include <algorithm>
#include <random>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "k3census/lattice.hpp"

using namespace k3census;

namespace {

IntMat random_matrix(std::mt19937& rng, std::size_t rows, std::size_t cols)
{
    std::uniform_int_distribution<int> dist(-6, 6);
    IntMat m(rows, IntVec(cols));
    for (auto& row : m)
        for (auto& x : row) x = dist(rng);
    return m;
}

long long brute_det(const IntMat& m)
{
    // cofactor expansion, fine for the small sizes used here
    if (m.size() == 1) return m[0][0];
    long long d = 0;
    for (std::size_t j = 0; j < m.size(); ++j) {
        IntMat minor;
        for (std::size_t i = 1; i < m.size(); ++i) {
            IntVec row;
            for (std::size_t k = 0; k < m.size(); ++k)
                if (k != j) row.push_back(m[i][k]);
            minor.push_back(row);
        }
        d += (j % 2 ? -1 : 1) * m[0][j] * brute_det(minor);
    }
    return d;
}

}  // namespace

TEST(Lattice, SmithFormIsUnimodularDiagonalChain)
{
    std::mt19937 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        std::size_t n = 1 + trial % 4;
        IntMat m = random_matrix(rng, n, n);
        SmithForm s = smith_normal_form(m);
        EXPECT_EQ(multiply(multiply(s.u, m), s.v), s.d);
        EXPECT_EQ(std::abs(brute_det(s.u)), 1);
        EXPECT_EQ(std::abs(brute_det(s.v)), 1);
        auto diag = s.diagonal();
        long long prod = 1;
        for (std::size_t i = 0; i < n; ++i) {
            EXPECT_GE(diag[i], 0);
            for (std::size_t j = 0; j < n; ++j)
                if (i != j) {
                    EXPECT_EQ(s.d[i][j], 0);
                }
            if (i + 1 < n && diag[i] != 0) {
                EXPECT_EQ(diag[i + 1] % diag[i], 0);
            }
            prod *= diag[i];
        }
        EXPECT_EQ(prod, std::abs(brute_det(m)));
    }
}

TEST(Lattice, DeterminantMatchesCofactorExpansion)
{
    std::mt19937 rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        IntMat m = random_matrix(rng, 4, 4);
        EXPECT_EQ(determinant(m), Rational(brute_det(m)));
    }
}

TEST(Lattice, RejectsBadGram)
{
    EXPECT_THROW(EvenLattice(IntMat{{1}}), std::invalid_argument);
    EXPECT_THROW(EvenLattice(IntMat{{2, 1}, {0, 2}}), std::invalid_argument);
    EXPECT_THROW(EvenLattice(IntMat{{2, 2}, {2, 2}}), std::invalid_argument);
}

TEST(Lattice, SignatureOfSmallLattices)
{
    EXPECT_EQ(EvenLattice(IntMat{{0, 1}, {1, 0}}).signature(), std::make_pair(1, 1));
    EXPECT_EQ(EvenLattice(IntMat{{-2, 1, 0}, {1, -2, 1}, {0, 1, -2}}).signature(), std::make_pair(0, 3));
    EXPECT_EQ(EvenLattice(IntMat{{2, 0}, {0, -2}}).signature(), std::make_pair(1, 1));
    EXPECT_TRUE(EvenLattice(IntMat{{-4}}).is_negative_definite());
}

TEST(Lattice, DiscriminantForms)
{
    auto d = discriminant_form(EvenLattice(IntMat{{-4}}));
    ASSERT_EQ(d.form.rank(), 1u);
    EXPECT_EQ(d.form.orders()[0], 4);
    EXPECT_EQ(format_value(d.form.generator_values()[0], kQMod), "7/4");

    auto u2 = discriminant_form(EvenLattice(IntMat{{0, 2}, {2, 0}}));
    EXPECT_TRUE(is_isomorphic(u2.form, elementary_form("u+(2)")));

    auto a1 = discriminant_form(EvenLattice(IntMat{{2}}));
    EXPECT_TRUE(is_isomorphic(a1.form, elementary_form("q(1,2)")));

    auto u = discriminant_form(EvenLattice(IntMat{{0, 1}, {1, -2}}));
    EXPECT_EQ(u.form.rank(), 0u);

    // D4 has discriminant v+(2)
    auto d4 = discriminant_form(EvenLattice(IntMat{{2, -1, 0, 0}, {-1, 2, -1, -1}, {0, -1, 2, 0}, {0, -1, 0, 2}}));
    EXPECT_TRUE(is_isomorphic(d4.form, elementary_form("v+(2)")));
}

TEST(Lattice, TwoElementaryInvariants)
{
    EXPECT_EQ(lattice_invariants(EvenLattice(IntMat{{2}})), (LatticeInvariants{1, 1, 1}));
    EXPECT_EQ(lattice_invariants(EvenLattice(IntMat{{0, 2}, {2, 0}})), (LatticeInvariants{2, 2, 0}));
    EXPECT_EQ(lattice_invariants(EvenLattice(IntMat{{2, 0}, {0, -2}})), (LatticeInvariants{2, 2, 1}));
    EXPECT_EQ(lattice_invariants(EvenLattice(IntMat{{0, 1}, {1, -2}})), (LatticeInvariants{2, 0, 0}));
    EXPECT_THROW(lattice_invariants(EvenLattice(IntMat{{-4}})), std::invalid_argument);
}

TEST(Lattice, RootsOfSquareMinusFourByBox)
{
    // Brute-force box search for x in U(2) with x^2 = -4 and (x, S) even
    EvenLattice u2(IntMat{{0, 2}, {2, 0}});
    std::set<IntVec> brute;
    for (long long a = -8; a <= 8; ++a)
        for (long long b = -8; b <= 8; ++b) {
            IntVec x{a, b};
            if (bilinear(u2.gram(), x, x) == -4 && (bilinear(u2.gram(), x, {1, 0}) % 2 == 0) &&
                (bilinear(u2.gram(), x, {0, 1}) % 2 == 0))
                brute.insert(x);
        }
    auto roots = roots_minus4({{1, 0}, {0, 1}}, u2);
    EXPECT_EQ(std::set<IntVec>(roots.begin(), roots.end()), brute);
    for (const auto& r : roots) {
        IntMat m = reflection_minus4(r, u2.gram());
        EXPECT_EQ(multiply(transpose(m), multiply(u2.gram(), m)), u2.gram());
        EXPECT_EQ(multiply(m, m), identity_matrix(2));
    }
}

class Fixture : public ::testing::TestWithParam<Surface> {};

TEST_P(Fixture, ThetaIsAnIsometricInvolution)
{
    const auto& t = make_type(GetParam());
    EXPECT_EQ(multiply(transpose(t.theta), multiply(t.gram(), t.theta)), t.gram());
    EXPECT_EQ(multiply(t.theta, t.theta), identity_matrix(t.dim()));
}

TEST_P(Fixture, EigenlatticesAreOrthogonalAndFull)
{
    const auto& t = make_type(GetParam());
    for (const auto& x : t.s_plus) EXPECT_EQ(mat_vec(t.theta, x), x);
    for (const auto& y : t.s_minus) {
        IntVec neg(y.size());
        for (std::size_t i = 0; i < y.size(); ++i) neg[i] = -y[i];
        EXPECT_EQ(mat_vec(t.theta, y), neg);
    }
    for (const auto& x : t.s_plus)
        for (const auto& y : t.s_minus) EXPECT_EQ(bilinear(t.gram(), x, y), 0);
    EXPECT_EQ(t.s_plus.size() + t.s_minus.size(), t.dim());
    // S_- is hyperbolic or positive of rank one
    auto sig = t.sublattice(-1).signature();
    EXPECT_EQ(sig.first, 1);
}

TEST_P(Fixture, GroupPreservesStructure)
{
    const auto& t = make_type(GetParam());
    std::set<std::vector<std::uint32_t>> catalog;
    for (const auto& hs : t.subgroups) catalog.insert(hs.elements);
    for (const auto& g : t.group.elements) {
        EXPECT_EQ(multiply(transpose(g), multiply(t.gram(), g)), t.gram());
        EXPECT_EQ(multiply(g, t.theta), multiply(t.theta, g));
        for (const auto& hs : t.subgroups) {
            std::vector<std::uint32_t> image;
            for (auto x : hs.elements) image.push_back(t.act(g, x));
            std::sort(image.begin(), image.end());
            EXPECT_TRUE(catalog.count(image));
        }
        EXPECT_EQ(t.act(g, t.s_theta), t.s_theta);
    }
}

TEST_P(Fixture, SubgroupsAreSubgroups)
{
    const auto& t = make_type(GetParam());
    for (const auto& hs : t.subgroups) {
        std::set<std::uint32_t> e(hs.elements.begin(), hs.elements.end());
        EXPECT_TRUE(e.count(0));
        for (auto x : e)
            for (auto y : e) EXPECT_TRUE(e.count(x ^ y));
        EXPECT_EQ(static_cast<long long>(e.size()), hs.q_rho.order());
        // q_rho agrees with the lifts: q(x+ + x-) = q_{S+}(x+/2) - q_{S-}(x-/2)
        for (auto x : e) {
            IntVec plus(t.dim(), 0), minus(t.dim(), 0);
            for (const auto& [im, lift] : hs.plus_lift)
                for (const auto& [im2, lift2] : hs.minus_lift)
                    if ((im ^ im2) == x) {
                        plus = lift;
                        minus = lift2;
                    }
            long long q4 = bilinear(t.gram(), plus, plus) - bilinear(t.gram(), minus, minus);
            // q in units of 1/8 mod 16, and (y/2)^2 = y^2/4
            EXPECT_EQ(hs.value(x), mod_pos(2 * q4, kQMod));
        }
    }
}

TEST_P(Fixture, SThetaBruteForce)
{
    const auto& t = make_type(GetParam());
    // 2(x, theta x) = (x, s_theta) mod 2 for x = G^{-1} y in the dual lattice, over a box of y
    auto ginv = inverse(t.gram());
    int hits = 0;
    for (std::uint32_t cand = 0; cand < (1U << t.dim()); ++cand) {
        RatVec sc = to_rational(bits_vector(cand, t.dim()));
        bool ok = true;
        for (long long a = -3; a <= 3; ++a)
            for (long long b = -3; b <= 3; ++b) {
                IntVec y = t.dim() == 1 ? IntVec{a} : IntVec{a, b};
                RatVec x(t.dim(), Rational(0));
                for (std::size_t i = 0; i < t.dim(); ++i)
                    for (std::size_t j = 0; j < t.dim(); ++j) x[i] += ginv[i][j] * y[j];
                RatVec tx(t.dim(), Rational(0));
                for (std::size_t i = 0; i < t.dim(); ++i)
                    for (std::size_t j = 0; j < t.dim(); ++j) tx[i] += Rational(t.theta[i][j]) * x[j];
                Rational d = bilinear(t.gram(), x, tx) * 2 - bilinear(t.gram(), x, sc);
                if (d.denominator() != 1 || d.numerator() % 2 != 0) ok = false;
            }
        if (ok) {
            ++hits;
            EXPECT_EQ(cand, t.s_theta) << t.name();
        }
    }
    EXPECT_EQ(hits, 1) << t.name();
}

INSTANTIATE_TEST_SUITE_P(AllSurfaces, Fixture, ::testing::ValuesIn(kAllSurfaces),
                         [](const auto& info) { return surface_name(info.param); });

TEST(Lattice, FixtureFacts)
{
    EXPECT_EQ(make_type(Surface::P2).group.order(), 1u);
    EXPECT_EQ(make_type(Surface::Hyperboloid).group.order(), 2u);
    EXPECT_EQ(make_type(Surface::Ellipsoid).group.order(), 2u);
    EXPECT_EQ(make_type(Surface::F1).group.order(), 1u);
    EXPECT_EQ(make_type(Surface::F4).group.order(), 1u);

    const auto& hyp = make_type(Surface::Hyperboloid);
    EXPECT_EQ(basis_action(hyp, hyp.group.elements.back()), (std::vector<std::string>{"e2", "e1"}));
    EXPECT_EQ(hyp.element_name(hyp.s_theta), "0");
    EXPECT_EQ(make_type(Surface::P2).element_name(make_type(Surface::P2).s_theta), "h");
    EXPECT_EQ(make_type(Surface::F1).element_name(make_type(Surface::F1).s_theta), "h+e");
    const auto& ell = make_type(Surface::Ellipsoid);
    EXPECT_EQ(ell.element_name(ell.s_theta), "e1+e2");
    EXPECT_EQ(ell.subgroups[0].a_H(), 1);

    EXPECT_EQ(hyp.parse_element("e1+e2"), 3u);
    EXPECT_THROW(hyp.parse_element("h"), std::invalid_argument);
    EXPECT_THROW(parse_surface("torus"), std::invalid_argument);
}

TEST(Lattice, BitHelpers)
{
    EXPECT_EQ(mod2_bits({3, -2, 5}), 5u);
    EXPECT_EQ(bits_vector(5, 3), (IntVec{1, 0, 1}));
    EXPECT_EQ(f2_rank({1, 2, 3}), 2);
    EXPECT_EQ(f2_rank({}), 0);
}
