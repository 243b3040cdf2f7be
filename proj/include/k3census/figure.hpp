#pragma once

#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "k3census/census.hpp"

namespace k3census {

inline constexpr int kFigureMaxA = 11;

// glyphs per (r, a) cell, each cell in the order O, o, *
struct Figure {
    Surface surface = Surface::P2;
    std::size_t h = 0;
    std::vector<std::pair<char, std::string>> legend;
    std::map<std::pair<int, int>, std::string> cells;
    std::vector<std::string> warnings;
};

inline char glyph_for(const GenusInvariant& g)
{
    if (g.delta_phiS == 1) return '*';
    auto chars = characteristic_vs(g.surface, g.h);
    for (std::size_t i = 0; i < chars.size(); ++i)
        if (chars[i] == *g.v) {
            if (i > 1) throw std::logic_error("more than two v-classes in " + describe(g));
            return i == 0 ? 'O' : 'o';
        }
    throw std::logic_error("v is not characteristic in " + describe(g));
}

inline Figure make_figure(Surface surface, std::size_t h, const std::vector<GenusInvariant>& census)
{
    const auto& t = make_type(surface);
    Figure f{surface, h, {}, {}, {}};
    auto chars = characteristic_vs(surface, h);
    for (std::size_t i = 0; i < chars.size() && i < 2; ++i)
        f.legend.emplace_back(i == 0 ? 'O' : 'o', "delta_phiS=0 and v=" + t.element_name(chars[i]));
    f.legend.emplace_back('*', "delta_phiS=1");

    std::map<std::pair<int, int>, std::set<char>> marks;
    for (const auto& g : census) {
        if (g.surface != surface || g.h != h) continue;
        if (g.a > kFigureMaxA) {
            f.warnings.push_back("outside the grid: " + describe(g));
            continue;
        }
        marks[{g.r, g.a}].insert(glyph_for(g));
    }
    for (const auto& [cell, set] : marks) {
        std::string s;
        for (char c : {'O', 'o', '*'})
            if (set.count(c)) s += c;
        f.cells[cell] = s;
    }
    if (f.cells.empty()) f.warnings.push_back("no tuples for H=" + t.subgroup_catalog.at(h).name);
    return f;
}

// Subgroups that survive G-deduplication, in catalog order.
inline std::vector<std::size_t> figure_subgroups(const std::vector<GenusInvariant>& census, Surface surface)
{
    std::set<std::size_t> hs;
    for (const auto& g : census)
        if (g.surface == surface) hs.insert(g.h);
    return {hs.begin(), hs.end()};
}

inline std::string render_ascii(const Figure& f)
{
    const auto& t = make_type(f.surface);
    std::ostringstream out;
    out << t.name() << " H=" << t.subgroup_catalog.at(f.h).name << "\n";
    for (const auto& [c, text] : f.legend) out << "  " << c << "  " << text << "\n";
    for (int a = kFigureMaxA; a >= 0; --a) {
        std::string row = (a < 10 ? " " : "") + std::to_string(a) + " |";
        for (int r = kMinR; r <= kMaxR; ++r) {
            auto it = f.cells.find({r, a});
            std::string cell = it == f.cells.end() ? "." : it->second;
            row += std::string(4 - cell.size(), ' ') + cell;
        }
        while (!row.empty() && row.back() == ' ') row.pop_back();
        out << row << "\n";
    }
    out << "   +" << std::string(4 * (kMaxR - kMinR + 1), '-') << "\n";
    out << "    ";
    for (int r = kMinR; r <= kMaxR; ++r) {
        std::string n = std::to_string(r);
        out << std::string(4 - n.size(), ' ') << n;
    }
    out << "  r\n";
    return out.str();
}

inline std::string render_svg(const Figure& f)
{
    const auto& t = make_type(f.surface);
    const int step = 24, left = 40, bottom = 40;
    const int width = left + step * (kMaxR + 1), height = bottom + step * (kFigureMaxA + 2);
    auto x_of = [&](int r) { return left + step * r; };
    auto y_of = [&](int a) { return height - bottom - step * a; };
    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\">\n";
    out << "<title>" << t.name() << " H=" << t.subgroup_catalog.at(f.h).name << "</title>\n";
    for (int r = kMinR; r <= kMaxR; ++r)
        out << "<line x1=\"" << x_of(r) << "\" y1=\"" << y_of(0) << "\" x2=\"" << x_of(r) << "\" y2=\"" << y_of(kFigureMaxA)
            << "\" stroke=\"#ccc\"/>\n";
    for (int a = 0; a <= kFigureMaxA; ++a)
        out << "<line x1=\"" << x_of(kMinR) << "\" y1=\"" << y_of(a) << "\" x2=\"" << x_of(kMaxR) << "\" y2=\"" << y_of(a)
            << "\" stroke=\"#ccc\"/>\n";
    for (const auto& [cell, glyphs] : f.cells)
        for (char c : glyphs) {
            int x = x_of(cell.first), y = y_of(cell.second);
            if (c == '*')
                out << "<circle cx=\"" << x << "\" cy=\"" << y << "\" r=\"3\" fill=\"black\"/>\n";
            else
                out << "<circle cx=\"" << x << "\" cy=\"" << y << "\" r=\"" << (c == 'O' ? 8 : 6)
                    << "\" fill=\"none\" stroke=\"black\"/>\n";
        }
    out << "<text x=\"" << x_of(kMaxR) + 12 << "\" y=\"" << y_of(0) + 4 << "\">r</text>\n";
    out << "<text x=\"" << x_of(kMinR) - 24 << "\" y=\"" << y_of(kFigureMaxA) - 10 << "\">a</text>\n";
    out << "</svg>\n";
    return out.str();
}

}  // namespace k3census
