#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "k3census/qform.hpp"
#include "oracles.hpp"

using namespace k3census;
using namespace oracles;

TEST(Qform, BlockSignatures)
{
    EXPECT_EQ(signature_mod8(elementary_form("u+(2)")), 0);
    EXPECT_EQ(signature_mod8(elementary_form("v+(2)")), 4);
    EXPECT_EQ(signature_mod8(elementary_form("q(1,2)")), 1);
    EXPECT_EQ(signature_mod8(elementary_form("q(-1,2)")), 7);
    EXPECT_EQ(signature_mod8(elementary_form("q(5,4)")), 5);
    EXPECT_EQ(signature_mod8(elementary_form("q(1,8)")), 1);
}

TEST(Qform, MilgramMatchesFloatingGaussSum)
{
    auto sums = catalog_sums(kNondegenerateCatalog, 64);
    ASSERT_GT(sums.size(), 100u);
    int checked = 0;
    for (const auto& s : sums) {
        if (!s.form.is_nondegenerate()) continue;
        int sigma = signature_mod8(s.form);
        auto expected = std::polar(std::sqrt(static_cast<double>(s.form.order())), std::numbers::pi * sigma / 4.0);
        auto got = float_gauss_sum(s.form);
        EXPECT_NEAR(std::abs(got - expected), 0.0, 1e-9) << s.name;
        ++checked;
    }
    EXPECT_GT(checked, 100);
}

TEST(Qform, SignatureIsAdditive)
{
    auto sums = catalog_sums(kNondegenerateCatalog, 16);
    for (const auto& a : sums)
        for (const auto& b : sums) {
            if (a.form.order() * b.form.order() > 64) continue;
            EXPECT_EQ(signature_mod8(direct_sum(a.form, b.form)),
                      (signature_mod8(a.form) + signature_mod8(b.form)) % 8)
                << a.name << " | " << b.name;
        }
}

TEST(Qform, DegenerateSignatureRejected)
{
    EXPECT_THROW(signature_mod8(elementary_form("z")), std::domain_error);
    EXPECT_THROW(signature_mod8(direct_sum(elementary_form("w"), elementary_form("q(1,2)"))), std::domain_error);
}

TEST(Qform, ClassifyAgreesWithBruteForceIsomorphism)
{
    auto sums = catalog_sums(kTwoElementaryCatalog, 64);
    std::vector<Sum> reps;
    for (const auto& s : sums) {
        std::vector<std::size_t> same_class, isomorphic;
        for (std::size_t i = 0; i < reps.size(); ++i) {
            if (classify(reps[i].form) == classify(s.form)) same_class.push_back(i);
            if (brute_isomorphic(s.form, reps[i].form)) isomorphic.push_back(i);
        }
        EXPECT_EQ(same_class, isomorphic) << s.name;
        EXPECT_LE(isomorphic.size(), 1u) << s.name;
        for (std::size_t i : isomorphic) EXPECT_TRUE(is_isomorphic(s.form, reps[i].form)) << s.name;
        if (isomorphic.empty()) reps.push_back(s);
    }
    EXPECT_GT(reps.size(), 20u);
}

TEST(Qform, LibraryIsomorphismAgreesWithBruteForce)
{
    auto sums = catalog_sums(kTwoElementaryCatalog, 16);
    for (const auto& a : sums)
        for (const auto& b : sums)
            EXPECT_EQ(is_isomorphic(a.form, b.form), brute_isomorphic(a.form, b.form)) << a.name << " | " << b.name;
}

TEST(Qform, KnownIsomorphisms)
{
    auto u = elementary_form("u+(2)"), v = elementary_form("v+(2)");
    auto q1 = elementary_form("q(1,2)"), qm = elementary_form("q(-1,2)");
    EXPECT_TRUE(is_isomorphic(direct_sum(u, u), direct_sum(v, v)));
    EXPECT_FALSE(is_isomorphic(u, v));
    EXPECT_TRUE(is_isomorphic(direct_sum(q1, qm), direct_sum(q1, qm)));
    EXPECT_TRUE(is_isomorphic(direct_sum(direct_sum(q1, q1), q1), direct_sum(v, qm)));
    EXPECT_TRUE(is_isomorphic(direct_sum(elementary_form("w"), u), direct_sum(elementary_form("w"), v)));
}

TEST(Qform, OracleBound)
{
    FiniteQuadraticForm big;
    for (int i = 0; i < 5; ++i) big = direct_sum(big, elementary_form("u+(2)"));
    EXPECT_THROW(is_isomorphic(big, big), std::length_error);
}

TEST(Qform, RadicalDecompositionReassembles)
{
    for (const auto& s : catalog_sums(kTwoElementaryCatalog, 64)) {
        auto d = radical_decompose(s.form);
        EXPECT_TRUE(d.nondegenerate_part.is_nondegenerate()) << s.name;
        EXPECT_EQ(d.k + static_cast<int>(d.nondegenerate_part.rank()), static_cast<int>(s.form.rank())) << s.name;
        EXPECT_TRUE(is_isomorphic(reassemble(d), s.form)) << s.name;
    }
}

TEST(Qform, RadicalParametersOfExamples)
{
    auto c = classify(direct_sum(elementary_form("z"), elementary_form("u+(2)")));
    EXPECT_EQ(c.k, 1);
    EXPECT_EQ(c.mu, 0);
    EXPECT_EQ(c.delta, 0);
    c = classify(direct_sum(elementary_form("w"), elementary_form("q(1,2)")));
    EXPECT_EQ(c.k, 1);
    EXPECT_EQ(c.mu, 1);
    EXPECT_EQ(c.delta, 1);
    c = classify(direct_sum(elementary_form("q(1,2)"), elementary_form("q(-1,2)")));
    EXPECT_EQ(c.k, 0);
    EXPECT_EQ(c.sigma_mod8, 0);
    EXPECT_EQ(c.delta, 1);
}

TEST(Qform, CharacteristicElementsByBruteForce)
{
    for (const auto& s : catalog_sums(kTwoElementaryCatalog, 32)) {
        auto chars = characteristic_elements(s.form);
        int expected = 0;
        for (const auto& v : s.form.elements()) {
            bool ok = true;
            for (const auto& x : s.form.elements()) ok = ok && (s.form.pairing(x, v) - s.form.value(x)) % 8 == 0;
            expected += ok;
        }
        EXPECT_EQ(static_cast<int>(chars.size()), expected) << s.name;
        // on the nondegenerate part the characteristic element is unique
        if (s.form.is_nondegenerate()) {
            EXPECT_EQ(chars.size(), 1u) << s.name;
        }
    }
}

TEST(Qform, InvalidInputRejected)
{
    EXPECT_THROW(elementary_form("q(3,2)"), std::invalid_argument);
    EXPECT_THROW(elementary_form("q(1,16)"), std::invalid_argument);
    EXPECT_THROW(elementary_form("nope"), std::invalid_argument);
    EXPECT_THROW(radical_decompose(elementary_form("q(1,4)")), std::invalid_argument);
}

TEST(Qform, ValueFormatting)
{
    EXPECT_EQ(elementary_form("q(-1,4)").value(elementary_form("q(-1,4)").basis(0)), 14);
    EXPECT_EQ(format_value(14, kQMod), "7/4");
}
