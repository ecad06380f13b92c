#include "cantorsaw/diagram.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace cantorsaw {

namespace {

struct Scale {
    double lo = 0;
    double hi = 1;

    double operator()(const Rational& x) const
    {
        return hi > lo ? (x.convert_to<double>() - lo) / (hi - lo) : 0.5;
    }
};

Scale make_scale(const ConstructionState& state)
{
    std::vector<double> values;
    for (const auto& [w, n] : state.nodes)
        values.push_back(n.statistic().convert_to<double>());
    for (const auto& [w, b] : state.separators)
        values.push_back(b.convert_to<double>());
    auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    const double pad = (*hi - *lo) * 0.05;
    return Scale{*lo - pad, *hi + pad};
}

std::string word_label(const std::string& bits)
{
    return bits.empty() ? "()" : bits;
}

std::string star_label(const std::string& bits)
{
    return bits + "*";
}

} // namespace

std::string render_ascii(const ConstructionState& state, int width)
{
    width = std::max(width, 16);
    const Scale scale = make_scale(state);
    auto column = [&](const Rational& x) {
        return std::clamp(static_cast<int>(std::lround(scale(x) * (width - 1))), 0, width - 1);
    };

    std::ostringstream out;
    out << "S_n for " << state.base << ", moduli [";
    for (std::size_t i = 0; i < state.moduli.size(); ++i)
        out << (i ? "," : "") << state.moduli[i];
    out << "]; smaller words sit to the right\n";
    char range[96];
    std::snprintf(range, sizeof range, "axis %.6f .. %.6f\n", scale.lo, scale.hi);
    out << range;

    for (std::size_t level = 0; level <= state.depth; ++level) {
        std::string row(static_cast<std::size_t>(width), '-');
        for (const auto& [w, b] : state.separators)
            if (w.size() < level)
                row[static_cast<std::size_t>(column(b))] = '|';
        std::vector<std::string> notes;
        for (const auto& w : words_of_length(level)) {
            const Rational x = state.node(w).statistic();
            row[static_cast<std::size_t>(column(x))] = 'o';
            notes.push_back(word_label(w.bits) + "=" + rational_to_string(x));
        }
        for (const auto& [w, b] : state.separators)
            if (w.size() + 1 == level)
                notes.push_back("b_" + star_label(w.bits) + "=" + rational_to_string(b));
        out << "n=" << level << (level < 10 ? "  " : " ") << row << '\n';
        for (const auto& note : notes)
            out << "      " << note << '\n';
    }
    return out.str();
}

std::string render_svg(const ConstructionState& state)
{
    const Scale scale = make_scale(state);
    const double left = 40, right = 760, top = 40, step = 70;
    const double height = top + step * (static_cast<double>(state.depth) + 1) + 20;
    auto x_of = [&](const Rational& v) { return left + scale(v) * (right - left); };
    auto num = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.2f", v);
        return std::string(buf);
    };

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"" << num(height)
        << "\" font-family=\"monospace\" font-size=\"11\">\n";
    out << "<text x=\"" << num(left) << "\" y=\"18\">S_n for " << state.base << "</text>\n";

    for (const auto& [w, b] : state.separators) {
        const double y0 = top + step * (static_cast<double>(w.size()) + 1) - 25;
        const double y1 = top + step * static_cast<double>(state.depth) + 10;
        out << "<line x1=\"" << num(x_of(b)) << "\" y1=\"" << num(y0) << "\" x2=\"" << num(x_of(b)) << "\" y2=\""
            << num(y1) << "\" stroke=\"#888\" stroke-dasharray=\"4 3\"/>\n";
        out << "<text x=\"" << num(x_of(b) + 3) << "\" y=\"" << num(y0 + 10) << "\" fill=\"#888\">b_"
            << star_label(w.bits) << "</text>\n";
    }
    for (std::size_t level = 0; level <= state.depth; ++level) {
        const double y = top + step * static_cast<double>(level);
        out << "<line x1=\"" << num(left) << "\" y1=\"" << num(y) << "\" x2=\"" << num(right) << "\" y2=\"" << num(y)
            << "\" stroke=\"#ccc\"/>\n";
        out << "<text x=\"4\" y=\"" << num(y + 4) << "\">n=" << level << "</text>\n";
        for (const auto& w : words_of_length(level)) {
            const Rational v = state.node(w).statistic();
            out << "<circle cx=\"" << num(x_of(v)) << "\" cy=\"" << num(y) << "\" r=\"4\"/>\n";
            out << "<text x=\"" << num(x_of(v)) << "\" y=\"" << num(y + 18) << "\" text-anchor=\"middle\">"
                << word_label(w.bits) << "</text>\n";
        }
    }
    out << "</svg>\n";
    return out.str();
}

} // namespace cantorsaw
