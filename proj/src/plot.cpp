#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <regex>
#include <set>

#include <fmt/format.h>

#include "selfheal/io.hpp"

namespace selfheal {

PlotAxis parse_plot_axis(std::string_view name)
{
    if (name == "round") {
        return PlotAxis::round;
    }
    if (name == "n" || name == "size") {
        return PlotAxis::size;
    }
    throw std::invalid_argument(fmt::format("unknown plot axis '{}' (expected round|n)", name));
}

namespace {

struct Series {
    std::string label;
    std::vector<std::pair<double, double>> points; ///< sorted by x
};

struct Bounds {
    double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
};

constexpr double width = 640;
constexpr double height = 420;
constexpr double left = 70;
constexpr double right = 190;
constexpr double top = 30;
constexpr double bottom = 50;

const char* const palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::string series_stem(const std::string& path, PlotAxis axis)
{
    std::string stem = std::filesystem::path(path).stem().string();
    if (axis == PlotAxis::size) {
        static const std::regex size_suffix("_n[0-9]+$");
        stem = std::regex_replace(stem, size_suffix, "");
    }
    return stem;
}

// Mean of `metric` per round across replicates.
std::vector<std::pair<double, double>> per_round_means(const CsvTable& t, int col)
{
    const int round_col = t.column("round");
    std::map<int, std::pair<double, int>> acc;
    for (const auto& row : t.rows) {
        if (row[col].empty()) {
            continue;
        }
        auto& [sum, count] = acc[std::stoi(row[round_col])];
        sum += std::stod(row[col]);
        ++count;
    }
    std::vector<std::pair<double, double>> out;
    for (const auto& [round, sc] : acc) {
        out.emplace_back(round, sc.first / sc.second);
    }
    return out;
}

// (graph size, mean over replicates of the replicate's peak metric value)
std::optional<std::pair<double, double>> size_point(const CsvTable& t, int col)
{
    const int rep_col = t.column("replicate");
    const int round_col = t.column("round");
    const int alive_col = t.column("n_alive");
    std::map<int, double> peak;
    int size = 0;
    for (const auto& row : t.rows) {
        size = std::max(size, std::stoi(row[alive_col]) + std::stoi(row[round_col]));
        if (row[col].empty()) {
            continue;
        }
        const double v = std::stod(row[col]);
        const int rep = std::stoi(row[rep_col]);
        auto it = peak.find(rep);
        if (it == peak.end()) {
            peak.emplace(rep, v);
        } else {
            it->second = std::max(it->second, v);
        }
    }
    if (peak.empty()) {
        return std::nullopt;
    }
    double sum = 0;
    for (const auto& [rep, v] : peak) {
        sum += v;
    }
    return std::pair<double, double>{size, sum / static_cast<double>(peak.size())};
}

std::string num(double v) { return fmt::format("{:.2f}", v); }

std::string tick_label(double v) { return fmt::format("{:.4g}", v); }

} // namespace

std::string render_svg_plot(std::span<const std::string> csv_paths, const std::string& metric, PlotAxis axis)
{
    if (csv_paths.empty()) {
        throw std::invalid_argument("plot: no csv files given");
    }
    std::vector<Series> series;
    std::map<std::string, std::size_t> by_label;
    double largest_n = 0;

    for (const std::string& path : csv_paths) {
        const CsvTable table = read_csv(path);
        const int col = table.column(metric);
        if (col < 0) {
            throw std::invalid_argument(fmt::format("plot: '{}' has no column '{}'", path, metric));
        }
        for (const char* required : {"replicate", "round", "n_alive"}) {
            if (table.column(required) < 0) {
                throw std::invalid_argument(fmt::format("plot: '{}' has no column '{}'", path, required));
            }
        }
        for (const auto& row : table.rows) {
            largest_n = std::max(largest_n, std::stod(row[table.column("n_alive")]) + std::stod(row[table.column("round")]));
        }
        const std::string label = series_stem(path, axis);
        auto [it, inserted] = by_label.emplace(label, series.size());
        if (inserted) {
            series.push_back(Series{label, {}});
        }
        Series& s = series[it->second];
        if (axis == PlotAxis::round) {
            for (const auto& p : per_round_means(table, col)) {
                s.points.push_back(p);
            }
        } else if (const auto p = size_point(table, col)) {
            s.points.push_back(*p);
        }
    }
    for (Series& s : series) {
        std::stable_sort(s.points.begin(), s.points.end());
    }

    // Reference curve for degree plots.
    Series reference{"2 log2 n", {}};
    if (metric == "max_delta") {
        if (axis == PlotAxis::size) {
            std::set<double> xs;
            for (const Series& s : series) {
                for (const auto& p : s.points) {
                    xs.insert(p.first);
                }
            }
            for (double x : xs) {
                reference.points.emplace_back(x, x > 1 ? 2.0 * std::log2(x) : 0.0);
            }
        } else if (largest_n > 1) {
            double last_round = 1;
            for (const Series& s : series) {
                for (const auto& p : s.points) {
                    last_round = std::max(last_round, p.first);
                }
            }
            reference.points = {{1.0, 2.0 * std::log2(largest_n)}, {last_round, 2.0 * std::log2(largest_n)}};
        }
    }

    Bounds b;
    bool any = false;
    const auto extend = [&](const Series& s) {
        for (const auto& [x, y] : s.points) {
            if (!any) {
                b = {x, x, y, y};
                any = true;
            }
            b.x0 = std::min(b.x0, x);
            b.x1 = std::max(b.x1, x);
            b.y0 = std::min(b.y0, y);
            b.y1 = std::max(b.y1, y);
        }
    };
    for (const Series& s : series) {
        extend(s);
    }
    extend(reference);
    b.y0 = std::min(b.y0, 0.0);
    if (b.x1 == b.x0) {
        b.x0 -= 1;
        b.x1 += 1;
    }
    if (b.y1 == b.y0) {
        b.y1 += 1;
    }

    const double plot_w = width - left - right;
    const double plot_h = height - top - bottom;
    const auto sx = [&](double x) { return left + (x - b.x0) / (b.x1 - b.x0) * plot_w; };
    const auto sy = [&](double y) { return top + plot_h - (y - b.y0) / (b.y1 - b.y0) * plot_h; };

    std::string svg = fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\" "
        "font-family=\"sans-serif\" font-size=\"11\">\n",
        width, height);
    svg += fmt::format("<rect x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" fill=\"white\"/>\n", width, height);
    svg += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"black\"/>\n", num(left),
                       num(top + plot_h), num(left + plot_w));
    svg += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"black\"/>\n", num(left), num(top),
                       num(top + plot_h));
    for (int i = 0; i <= 4; ++i) {
        const double xv = b.x0 + (b.x1 - b.x0) * i / 4.0;
        const double yv = b.y0 + (b.y1 - b.y0) * i / 4.0;
        svg += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n", num(sx(xv)),
                           num(top + plot_h + 16), tick_label(xv));
        svg += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{}</text>\n", num(left - 6), num(sy(yv) + 4),
                           tick_label(yv));
    }
    svg += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n", num(left + plot_w / 2),
                       num(height - 12), axis == PlotAxis::round ? "round" : "graph size n");
    svg += fmt::format("<text x=\"16\" y=\"{0}\" text-anchor=\"middle\" transform=\"rotate(-90 16 {0})\">{1}</text>\n",
                       num(top + plot_h / 2), metric);

    const auto draw = [&](const Series& s, const std::string& colour, bool dashed, std::size_t legend_row) {
        if (s.points.size() >= 2) {
            std::string pts;
            for (const auto& [x, y] : s.points) {
                pts += fmt::format("{}{},{}", pts.empty() ? "" : " ", num(sx(x)), num(sy(y)));
            }
            svg += fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\"{} points=\"{}\"/>\n", colour,
                               dashed ? " stroke-dasharray=\"5,4\"" : "", pts);
        }
        if (!dashed) {
            for (const auto& [x, y] : s.points) {
                svg += fmt::format("<circle cx=\"{}\" cy=\"{}\" r=\"2.5\" fill=\"{}\"/>\n", num(sx(x)), num(sy(y)), colour);
            }
        }
        const double ly = top + 14.0 * static_cast<double>(legend_row);
        svg += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"{3}\" stroke-width=\"2\"{4}/>\n",
                           num(left + plot_w + 12), num(ly), num(left + plot_w + 32), colour,
                           dashed ? " stroke-dasharray=\"5,4\"" : "");
        svg += fmt::format("<text x=\"{}\" y=\"{}\">{}</text>\n", num(left + plot_w + 36), num(ly + 4), s.label);
    };
    for (std::size_t i = 0; i < series.size(); ++i) {
        draw(series[i], palette[i % std::size(palette)], false, i);
    }
    if (!reference.points.empty()) {
        draw(reference, "#555555", true, series.size());
    }
    svg += "</svg>\n";
    return svg;
}

void emit_svg_plot(std::span<const std::string> csv_paths, const std::string& metric, const std::string& out_path,
                   PlotAxis axis)
{
    const std::string svg = render_svg_plot(csv_paths, metric, axis);
    std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError(fmt::format("cannot open '{}' for writing", out_path));
    }
    out << svg;
    out.close();
    if (!out) {
        throw IoError(fmt::format("failed writing '{}'", out_path));
    }
}

} // namespace selfheal
