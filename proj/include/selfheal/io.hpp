#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "selfheal/harness.hpp"

namespace selfheal {

/// Filesystem failure; the message names the path.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr const char* csv_header =
    "replicate,round,n_alive,max_delta,mean_delta,stretch,total_messages,max_id_changes,"
    "forest_ok,rem_lower_ok,rem_monotone_ok,degree_bound_ok,weight_total";

/// One row per (replicate, round), replicates in ascending order.
/// Doubles use the shortest representation that parses back exactly;
/// unmeasured stretch and unevaluated lemma columns are empty.
std::string format_csv(const std::vector<RunResult>& results);
void write_csv(const std::vector<RunResult>& results, const std::string& path);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Column index, or -1.
    int column(std::string_view name) const;
};

CsvTable parse_csv(const std::string& text);
CsvTable read_csv(const std::string& path);

enum class PlotAxis { round, size };

PlotAxis parse_plot_axis(std::string_view name);

/// Renders a line chart of `metric` from one or more result CSVs.
///
/// With PlotAxis::round every file is one series and y is the
/// cross-replicate mean per round. With PlotAxis::size files are grouped into
/// series by stem (the "_n<N>" suffix removed), x is the graph size and y is
/// the cross-replicate mean of each replicate's peak value. Degree plots
/// (max_delta) overlay the 2 log2 n reference.
std::string render_svg_plot(std::span<const std::string> csv_paths, const std::string& metric, PlotAxis axis);

void emit_svg_plot(std::span<const std::string> csv_paths, const std::string& metric, const std::string& out_path,
                   PlotAxis axis = PlotAxis::round);

} // namespace selfheal
