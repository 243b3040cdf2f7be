#pragma once

#include <algorithm>
#include <complex>
#include <cstdint>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "k3census/qform.hpp"

// Brute-force references shared by the unit tests and the acceptance run.
namespace oracles {

using k3census::direct_sum;
using k3census::elementary_form;
using k3census::FiniteQuadraticForm;

struct Sum {
    std::string name;
    FiniteQuadraticForm form;
};

// Every direct sum of catalog forms (multisets, taken in catalog order) with |A| <= max_order.
inline std::vector<Sum> catalog_sums(const std::vector<std::string>& catalog, long long max_order)
{
    std::vector<Sum> out;
    std::function<void(std::size_t, Sum)> grow = [&](std::size_t from, Sum cur) {
        if (cur.form.rank() > 0) out.push_back(cur);
        for (std::size_t i = from; i < catalog.size(); ++i) {
            auto piece = elementary_form(catalog[i]);
            if (cur.form.order() * piece.order() > max_order) continue;
            grow(i, {cur.name.empty() ? catalog[i] : cur.name + " + " + catalog[i], direct_sum(cur.form, piece)});
        }
    };
    grow(0, {"", FiniteQuadraticForm{}});
    return out;
}

inline const std::vector<std::string> kNondegenerateCatalog = {"u+(2)",   "v+(2)",   "q(1,2)",  "q(-1,2)", "q(1,4)",
                                                        "q(-1,4)", "q(5,4)",  "q(-5,4)", "q(1,8)",  "q(-1,8)",
                                                        "q(5,8)",  "q(-5,8)"};
inline const std::vector<std::string> kTwoElementaryCatalog = {"z", "w", "u+(2)", "v+(2)", "q(1,2)", "q(-1,2)"};

inline std::complex<double> float_gauss_sum(const FiniteQuadraticForm& f)
{
    std::complex<double> s = 0;
    for (const auto& x : f.elements()) s += std::polar(1.0, std::numbers::pi * f.value(x) / 8.0);
    return s;
}

// Brute-force isometry test for 2-elementary forms: choose images of the
// generators one at a time, matching q and b and staying independent. A
// partial choice x_j -> y_j is dropped as soon as the number of elements z
// with given (q(z), b(z, x_1), ..., b(z, x_i)) differs between the two sides,
// and the search is skipped when the counts of pairs by (q(x), q(y), b(x, y))
// already differ.
inline bool brute_isomorphic(const FiniteQuadraticForm& f, const FiniteQuadraticForm& g)
{
    if (f.order() != g.order() || f.rank() != g.rank()) return false;
    const std::size_t n = f.rank();
    const std::uint32_t size = 1U << n;
    struct Tables {
        std::vector<int> q;
        std::vector<std::vector<int>> b;
    };
    auto tables = [&](const FiniteQuadraticForm& h) {
        Tables t{std::vector<int>(size), std::vector<std::vector<int>>(size, std::vector<int>(size))};
        std::vector<FiniteQuadraticForm::Element> e(size, FiniteQuadraticForm::Element(n));
        for (std::uint32_t x = 0; x < size; ++x)
            for (std::size_t i = 0; i < n; ++i) e[x][i] = (x >> i) & 1U;
        for (std::uint32_t x = 0; x < size; ++x) {
            t.q[x] = h.value(e[x]);
            for (std::uint32_t y = 0; y < size; ++y) t.b[x][y] = h.pairing(e[x], e[y]);
        }
        return t;
    };
    const Tables tf = tables(f), tg = tables(g);
    auto profile = [&](const Tables& t, const std::vector<std::uint32_t>& xs) {
        std::vector<std::uint32_t> keys(size);
        for (std::uint32_t z = 0; z < size; ++z) {
            std::uint32_t key = t.q[z];
            for (std::uint32_t x : xs) key = key * 8 + t.b[z][x];
            keys[z] = key;
        }
        std::sort(keys.begin(), keys.end());
        return keys;
    };
    auto pair_profile = [&](const Tables& t) {
        std::vector<int> counts(16 * 16 * 8);
        for (std::uint32_t x = 0; x < size; ++x)
            for (std::uint32_t y = 0; y < size; ++y) ++counts[(t.q[x] * 16 + t.q[y]) * 8 + t.b[x][y]];
        return counts;
    };
    if (pair_profile(tf) != pair_profile(tg)) return false;
    std::vector<std::uint32_t> source, chosen;
    std::function<bool(std::vector<bool>)> step = [&](std::vector<bool> span) {
        std::size_t i = chosen.size();
        if (profile(tf, source) != profile(tg, chosen)) return false;
        if (i == n) return true;
        const std::uint32_t x = 1U << i;
        for (std::uint32_t y = 1; y < size; ++y) {
            if (span[y] || tg.q[y] != tf.q[x]) continue;
            bool ok = true;
            for (std::size_t j = 0; j < i && ok; ++j) ok = tg.b[y][chosen[j]] == tf.b[x][source[j]];
            if (!ok) continue;
            std::vector<bool> next = span;
            for (std::uint32_t s = 0; s < size; ++s)
                if (span[s]) next[s ^ y] = true;
            source.push_back(x);
            chosen.push_back(y);
            if (step(next)) return true;
            source.pop_back();
            chosen.pop_back();
        }
        return false;
    };
    std::vector<bool> span(size, false);
    span[0] = true;
    return step(span);
}

}  // namespace oracles
