#include <algorithm>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "selfheal/io.hpp"

namespace selfheal {

namespace {

std::string flag(const LemmaResult& r)
{
    if (!r.evaluated) {
        return "";
    }
    return r.ok ? "1" : "0";
}

} // namespace

std::string format_csv(const std::vector<RunResult>& results)
{
    std::vector<const RunResult*> ordered;
    for (const RunResult& r : results) {
        ordered.push_back(&r);
    }
    std::stable_sort(ordered.begin(), ordered.end(),
                     [](const RunResult* a, const RunResult* b) { return a->replicate < b->replicate; });

    std::string out = csv_header;
    out += '\n';
    for (const RunResult* run : ordered) {
        for (const MetricsRecord& m : run->rounds) {
            const LemmaReport empty;
            const LemmaReport& l = m.lemmas ? *m.lemmas : empty;
            out += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{}\n", run->replicate, m.round, m.n_alive,
                               m.max_delta, m.mean_delta, m.stretch ? fmt::format("{}", *m.stretch) : "",
                               m.total_messages, m.max_id_changes, flag(l.forest), flag(l.rem_lower),
                               flag(l.rem_monotone), flag(l.degree_bound), m.weight_total);
        }
    }
    return out;
}

void write_csv(const std::vector<RunResult>& results, const std::string& path)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError(fmt::format("cannot open '{}' for writing", path));
    }
    out << format_csv(results);
    out.close();
    if (!out) {
        throw IoError(fmt::format("failed writing '{}'", path));
    }
}

int CsvTable::column(std::string_view name) const
{
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) {
            return static_cast<int>(i);
        }
    }
    return -1;
}

CsvTable parse_csv(const std::string& text)
{
    // Plain comma-separated fields; the result schema never quotes.
    const auto split = [](const std::string& line) {
        std::vector<std::string> fields;
        std::string field;
        std::istringstream in(line);
        while (std::getline(in, field, ',')) {
            fields.push_back(field);
        }
        if (!line.empty() && line.back() == ',') {
            fields.emplace_back();
        }
        return fields;
    };

    CsvTable table;
    std::istringstream in(text);
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        if (first) {
            table.header = split(line);
            first = false;
            continue;
        }
        auto fields = split(line);
        if (fields.size() != table.header.size()) {
            throw std::invalid_argument(fmt::format("csv row has {} fields, header has {}", fields.size(), table.header.size()));
        }
        table.rows.push_back(std::move(fields));
    }
    return table;
}

CsvTable read_csv(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError(fmt::format("cannot open '{}' for reading", path));
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    try {
        return parse_csv(buffer.str());
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(fmt::format("{}: {}", path, e.what()));
    }
}

} // namespace selfheal
