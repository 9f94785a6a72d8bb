#include "tabrl/plot.hpp"

#include <algorithm>

namespace tabrl {
namespace {

struct CurveStyle {
    const char* color;
    int dash;  // gnuplot dashtype
};

CurveStyle style_for(const std::string& id, std::size_t fallback_index) {
    if (id == "ec") return {"#d62728", 1};
    if (id == "ps") return {"#1f77b4", 1};
    if (id == "ps_reset") return {"#ff7f0e", 1};
    if (id == "q_learning") return {"#2ca02c", 1};
    if (id == "q_lambda") return {"#bcbd22", 1};
    if (id == "nstep_td") return {"#00008b", 1};
    if (id == "mc") return {"#7f7f7f", 1};
    if (id == "q_learning_optimistic") return {"#2ca02c", 2};
    if (id == "ps_optimistic") return {"#1f77b4", 2};
    static constexpr const char* kPalette[] = {"#8c564b", "#e377c2", "#9467bd",
                                               "#17becf", "#aec7e8", "#ffbb78"};
    return {kPalette[fallback_index % 6], 1};
}

void append_quoted(std::string& out, const std::string& text) {
    out += '\'';
    for (char c : text) {
        if (c == '\'') out += "''";
        else out += c;
    }
    out += '\'';
}

}  // namespace

std::string emit_plot_script(const std::vector<SummaryRow>& summary,
                             const std::string& title) {
    std::vector<std::string> ids;
    for (const auto& row : summary)
        if (std::find(ids.begin(), ids.end(), row.algorithm) == ids.end())
            ids.push_back(row.algorithm);

    std::string gp;
    gp += "set datafile separator ','\n";
    gp += "set terminal pngcairo size 1000,700\n";
    gp += "set output 'curves.png'\n";
    gp += "set title ";
    append_quoted(gp, title);
    gp += "\nset xlabel 'time step'\n";
    gp += "set ylabel 'normalized reward rate'\n";
    gp += "set yrange [-0.2:1.1]\n";
    gp += "set key outside right top\n";
    gp += "plot \\\n";
    if (ids.empty()) {
        gp += "  NaN notitle\n";
        return gp;
    }
    for (std::size_t i = 0; i < ids.size(); ++i) {
        const CurveStyle style = style_for(ids[i], i);
        // thin per-run curves first so the means draw on top
        gp += "  'thin.csv' using (strcol(1) eq ";
        append_quoted(gp, ids[i]);
        gp += " ? $5 : NaN):7 with lines lw 1 dt ";
        gp += std::to_string(style.dash);
        gp += " lc rgb '";
        gp += style.color;
        gp += "' notitle, \\\n";
        gp += "  'summary.csv' using (strcol(1) eq ";
        append_quoted(gp, ids[i]);
        gp += " ? $3 : NaN):6 with lines lw 3 dt ";
        gp += std::to_string(style.dash);
        gp += " lc rgb '";
        gp += style.color;
        gp += "' title ";
        append_quoted(gp, ids[i]);
        gp += i + 1 < ids.size() ? ", \\\n" : "\n";
    }
    return gp;
}

}  // namespace tabrl
