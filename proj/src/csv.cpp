#include "rft/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <set>

#include "rft/error.hpp"

namespace rft {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

// Splits one record; double quotes group text and "" escapes a quote.
std::vector<std::string> split_record(const std::string& line, char delimiter) {
    std::vector<std::string> cells;
    std::string cell;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (quoted) {
            if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cell += '"';
                ++i;
            } else if (ch == '"') {
                quoted = false;
            } else {
                cell += ch;
            }
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == delimiter) {
            cells.push_back(trim(cell));
            cell.clear();
        } else {
            cell += ch;
        }
    }
    cells.push_back(trim(cell));
    return cells;
}

std::string location(std::size_t line, const std::string& column) {
    return "line " + std::to_string(line) + ", column '" + column + "'";
}

double parse_number(const std::string& cell, std::size_t line, const std::string& column) {
    double v = 0.0;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    if (!cell.empty() && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (cell.empty() || ec != std::errc() || ptr != last || !std::isfinite(v))
        throw DataError("unparseable numeric cell '" + cell + "' at " + location(line, column));
    return v;
}

int index_of(const std::vector<std::string>& values, const std::string& v) {
    const auto it = std::find(values.begin(), values.end(), v);
    return it == values.end() ? -1 : static_cast<int>(it - values.begin());
}

}  // namespace

Dataset load_csv(std::istream& in, const CsvOptions& options) {
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::string> header;
    while (header.empty() && std::getline(in, line)) {
        ++line_no;
        if (!trim(line).empty()) header = split_record(line, options.delimiter);
    }
    if (header.empty()) throw DataError("CSV has no header");
    const auto column = [&](const std::string& name) { return index_of(header, name); };

    const std::string label_name = options.reference ? options.reference->label_name : options.label_column;
    if (label_name.empty()) throw ConfigError("no label column configured");
    const int label_col = column(label_name);
    if (label_col < 0) throw ConfigError("label column '" + label_name + "' not found in CSV header");

    Schema schema;
    schema.label_name = label_name;
    std::vector<int> feature_cols;
    if (options.reference) {
        schema = *options.reference;
        for (const auto& f : schema.features) {
            const int c = column(f.name);
            if (c < 0) throw DataError("CSV lacks model feature column '" + f.name + "'");
            feature_cols.push_back(c);
        }
    } else {
        for (const auto& name : options.categorical_columns)
            if (column(name) < 0) throw ConfigError("categorical column '" + name + "' not found in CSV header");
        for (std::size_t c = 0; c < header.size(); ++c) {
            if (static_cast<int>(c) == label_col) continue;
            const bool categorical = std::find(options.categorical_columns.begin(), options.categorical_columns.end(),
                                               header[c]) != options.categorical_columns.end();
            schema.features.push_back(
                {header[c], categorical ? FeatureKind::categorical : FeatureKind::numeric, {}});
            feature_cols.push_back(static_cast<int>(c));
        }
    }

    // First pass: raw cells, numeric parsing, observed categories.
    const std::size_t r = schema.feature_count();
    std::vector<std::vector<std::string>> records;
    std::vector<std::size_t> record_lines;
    std::vector<std::set<std::string>> observed(r);
    std::set<std::string> observed_labels;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        auto cells = split_record(line, options.delimiter);
        if (cells.size() != header.size())
            throw DataError("line " + std::to_string(line_no) + " has " + std::to_string(cells.size()) +
                            " cells, header has " + std::to_string(header.size()));
        for (std::size_t f = 0; f < r; ++f)
            if (schema.features[f].kind == FeatureKind::categorical)
                observed[f].insert(cells[static_cast<std::size_t>(feature_cols[f])]);
        observed_labels.insert(cells[static_cast<std::size_t>(label_col)]);
        records.push_back(std::move(cells));
        record_lines.push_back(line_no);
    }
    if (!options.reference) {
        for (std::size_t f = 0; f < r; ++f)
            if (schema.features[f].kind == FeatureKind::categorical)
                schema.features[f].categories.assign(observed[f].begin(), observed[f].end());
        schema.classes.assign(observed_labels.begin(), observed_labels.end());
    }

    Dataset data(schema);
    data.reserve(records.size());
    std::vector<double> x(r);
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& cells = records[i];
        for (std::size_t f = 0; f < r; ++f) {
            const auto& cell = cells[static_cast<std::size_t>(feature_cols[f])];
            const auto& spec = schema.features[f];
            if (spec.kind == FeatureKind::numeric) {
                x[f] = parse_number(cell, record_lines[i], spec.name);
                continue;
            }
            const int v = index_of(spec.categories, cell);
            if (v < 0) throw DataError("unknown category '" + cell + "' at " + location(record_lines[i], spec.name));
            x[f] = v;
        }
        const auto& label_cell = cells[static_cast<std::size_t>(label_col)];
        const int y = index_of(schema.classes, label_cell);
        if (y < 0) throw DataError("unknown label '" + label_cell + "' at " + location(record_lines[i], label_name));
        data.add_row(x, y);
    }
    return data;
}

Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot read " + path.string());
    return load_csv(in, options);
}

void write_csv(std::ostream& out, const Dataset& data) {
    const Schema& s = data.schema();
    for (const auto& f : s.features) out << f.name << ',';
    out << s.label_name << '\n';
    out << std::setprecision(std::numeric_limits<double>::max_digits10);
    for (std::size_t i = 0; i < data.size(); ++i) {
        for (std::size_t f = 0; f < s.feature_count(); ++f) {
            const double v = data.value(i, static_cast<int>(f));
            if (s.features[f].kind == FeatureKind::numeric)
                out << v;
            else
                out << s.features[f].categories[static_cast<std::size_t>(v)];
            out << ',';
        }
        out << s.classes[static_cast<std::size_t>(data.label(i))] << '\n';
    }
}

}  // namespace rft
