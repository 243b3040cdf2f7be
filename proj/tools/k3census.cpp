#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "k3census/census.hpp"
#include "k3census/counts.hpp"
#include "k3census/deform.hpp"
#include "k3census/export.hpp"
#include "k3census/figure.hpp"

using namespace k3census;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<std::string> surface_names()
{
    std::vector<std::string> out;
    for (Surface s : kAllSurfaces) out.push_back(surface_name(s));
    return out;
}

std::vector<std::string> scroll_names()
{
    std::vector<std::string> out;
    for (ScrollType t : kAllScrollTypes) out.push_back(scroll_name(t));
    return out;
}

void emit(const std::string& text, const std::string& path)
{
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(path);
    if (!f) throw UsageError("cannot write " + path);
    f << text;
}

std::string matrix_text(const IntMat& m)
{
    std::string s = "[";
    for (std::size_t i = 0; i < m.size(); ++i) {
        s += i ? ", [" : "[";
        for (std::size_t j = 0; j < m[i].size(); ++j) s += (j ? ", " : "") + std::to_string(m[i][j]);
        s += "]";
    }
    return s + "]";
}

int cmd_fixtures(const std::string& format, const std::string& out)
{
    nlohmann::json j;
    j["schema"] = kSchema;
    j["surfaces"] = nlohmann::json::array();
    std::ostringstream text;
    for (Surface s : kAllSurfaces) {
        const auto& t = make_type(s);
        nlohmann::json js;
        js["surface"] = t.name();
        js["basis"] = t.basis_names;
        js["gram"] = t.gram();
        js["theta"] = t.theta;
        js["group_order"] = t.group.order();
        js["s_theta"] = t.element_name(t.s_theta);
        js["subgroups"] = nlohmann::json::array();
        text << t.name() << ": basis";
        for (const auto& b : t.basis_names) text << ' ' << b;
        text << ", gram " << matrix_text(t.gram()) << ", theta " << matrix_text(t.theta) << ", |G|=" << t.group.order()
             << ", s_theta=" << t.element_name(t.s_theta) << "\n";
        for (std::size_t h = 0; h < t.subgroups.size(); ++h) {
            const auto& hs = t.subgroups[h];
            auto c = classify(hs.q_rho);
            std::vector<std::string> chars;
            for (auto v : characteristic_vs(s, h)) chars.push_back(t.element_name(v));
            js["subgroups"].push_back({{"H", t.subgroup_catalog[h].name},
                                       {"a_H", hs.a_H()},
                                       {"a_plus", hs.a_plus},
                                       {"a_minus", hs.a_minus},
                                       {"k", c.k},
                                       {"mu", c.mu},
                                       {"sigma", c.sigma_mod8},
                                       {"delta", c.delta},
                                       {"characteristic", chars}});
            text << "  H=" << t.subgroup_catalog[h].name << " a_H=" << hs.a_H() << " (a+=" << hs.a_plus
                 << ", a-=" << hs.a_minus << ") k=" << c.k << " mu=" << c.mu << " sigma=" << c.sigma_mod8
                 << " delta=" << c.delta << " characteristic:";
            for (const auto& v : chars) text << ' ' << v;
            text << "\n";
        }
        j["surfaces"].push_back(js);
    }
    emit(format == "json" ? j.dump(2) + "\n" : text.str(), out);
    return 0;
}

int cmd_enumerate(const std::string& surface, const std::string& engine, bool identify, const std::string& format,
                  const std::string& out)
{
    Surface s = parse_surface(surface);
    auto census = enumerate(s, parse_engine(engine), default_threads());
    if (identify) {
        auto classes = identify_related(census);
        if (format == "json") {
            emit(related_json(s, classes).dump(2) + "\n", out);
        } else if (format == "csv") {
            std::ostringstream o;
            o << "first,second,fixed\n";
            for (const auto& c : classes)
                o << csv_field(describe(c.first)) << ',' << csv_field(describe(c.second)) << ',' << (c.fixed() ? 1 : 0)
                  << '\n';
            emit(o.str(), out);
        } else {
            std::ostringstream o;
            for (const auto& c : classes)
                o << describe(c.first) << (c.fixed() ? "" : " ~ " + describe(c.second)) << "\n";
            o << classes.size() << " classes\n";
            emit(o.str(), out);
        }
        return 0;
    }
    if (format == "json") {
        emit(census_json(s, census).dump(2) + "\n", out);
    } else if (format == "csv") {
        emit(census_csv(census), out);
    } else {
        std::ostringstream o;
        for (const auto& g : census)
            o << describe(g) << " type=" << type_name(genus_type(g))
              << " topology=" << topology(g.r, g.a, g.delta_phi()).to_string() << "\n";
        o << census.size() << " tuples\n";
        emit(o.str(), out);
    }
    return 0;
}

int cmd_figure(const std::string& surface, const std::string& subgroup, const std::string& format, const std::string& out)
{
    Surface s = parse_surface(surface);
    const auto& t = make_type(s);
    auto census = enumerate(s, Engine::generic, default_threads());
    std::vector<std::size_t> hs;
    if (subgroup.empty()) {
        hs = figure_subgroups(census, s);
        if (format == "svg" && hs.size() > 1) throw UsageError("svg output needs --subgroup for " + t.name());
    } else {
        hs.push_back(t.subgroup_index(subgroup));
    }
    std::string text;
    for (std::size_t i = 0; i < hs.size(); ++i) {
        Figure f = make_figure(s, hs[i], census);
        for (const auto& w : f.warnings) std::cerr << "warning: " << w << "\n";
        if (i) text += "\n";
        text += format == "svg" ? render_svg(f) : render_ascii(f);
    }
    emit(text, out);
    return 0;
}

int cmd_deform(int n, int bound, const std::vector<std::string>& types, const std::string& format, bool check_exc,
               const std::string& out)
{
    if (n < 2 || n % 2 != 0) throw UsageError("--n must be an even integer >= 2");
    if (n > bound) throw UsageError("--n exceeds the bound " + std::to_string(bound));
    auto full = image_with_provenance(n, default_threads());
    Provenance image;
    for (const auto& [p, sources] : full)
        for (const auto& src : sources)
            if (types.empty() || std::find(types.begin(), types.end(), scroll_name(src.first)) != types.end())
                image[p].push_back(src);

    if (format == "json") {
        emit(deform_json(n, image).dump(2) + "\n", out);
    } else if (format == "csv") {
        emit(deform_csv(image), out);
    } else {
        std::ostringstream o;
        for (const auto& [p, sources] : image) {
            o << describe(p) << "\n";
            for (const auto& [t, g] : sources) o << "    " << scroll_name(t) << " " << describe(g) << "\n";
        }
        o << image.size() << " targets\n";
        emit(o.str(), out);
    }

    if (!check_exc) return 0;
    int bad = 0;
    for (const auto& [p, sources] : full)
        if (is_exception(p)) {
            std::cerr << "exception tuple in image: " << describe(p) << "\n";
            ++bad;
        }
    std::cerr << "exceptions in image(" << n << "): " << bad << (bad ? " FAIL" : " PASS") << "\n";
    return bad ? 1 : 0;
}

int cmd_check_counts()
{
    bool ok = true;
    for (const auto& line : count_report(default_threads())) {
        std::cout << line.to_string() << "\n";
        ok = ok && line.pass();
    }
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Census of real K3 surfaces with non-symplectic involutions"};
    app.require_subcommand(1);

    std::string format = "ascii", out;

    auto* fixtures = app.add_subcommand("fixtures", "Print the (S, theta) fixtures and their subgroup data");
    fixtures->add_option("--format", format)->check(CLI::IsMember({"ascii", "json"}));
    fixtures->add_option("--out", out, "Write to a file instead of stdout");

    std::string surface, engine = "generic";
    bool identify = false;
    auto* enumerate_cmd = app.add_subcommand("enumerate", "Enumerate the census of one surface");
    enumerate_cmd->add_option("--surface", surface)->required()->check(CLI::IsMember(surface_names()));
    enumerate_cmd->add_option("--engine", engine)->check(CLI::IsMember({"generic", "percase"}));
    enumerate_cmd->add_flag("--identify-related", identify, "Pair each tuple with its related tuple");
    enumerate_cmd->add_option("--format", format)->check(CLI::IsMember({"ascii", "json", "csv"}));
    enumerate_cmd->add_option("--out", out);

    std::string subgroup;
    auto* figure = app.add_subcommand("figure", "Render the (r, a) grid of a census");
    figure->add_option("--surface", surface)->required()->check(CLI::IsMember(surface_names()));
    figure->add_option("--subgroup", subgroup, "Subgroup H by catalog name, e.g. [e1]");
    figure->add_option("--format", format)->check(CLI::IsMember({"ascii", "svg"}));
    figure->add_option("--out", out);

    int n = 0, bound = kDefaultMaxN;
    std::vector<std::string> types;
    bool check_exc = false;
    auto* deform = app.add_subcommand("deform", "Deformation image D_n into real polarized K3 surfaces");
    deform->add_option("--n", n)->required();
    deform->add_option("--bound", bound, "Largest accepted n")->capture_default_str();
    deform->add_option("--type", types, "Restrict to scroll types")->check(CLI::IsMember(scroll_names()));
    deform->add_option("--format", format)->check(CLI::IsMember({"ascii", "json", "csv"}));
    deform->add_flag("--check-exceptions", check_exc);
    deform->add_option("--out", out);

    auto* check_counts = app.add_subcommand("check-counts", "Compare all censuses with the expected counts");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*fixtures) return cmd_fixtures(format, out);
        if (*enumerate_cmd) return cmd_enumerate(surface, engine, identify, format, out);
        if (*figure) return cmd_figure(surface, subgroup, format, out);
        if (*deform) return cmd_deform(n, bound, types, format, check_exc, out);
        if (*check_counts) return cmd_check_counts();
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "failure: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
