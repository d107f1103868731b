#include "invnet/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include "invnet/error.hpp"

namespace invnet {

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        std::string field = line.substr(start, comma == std::string::npos ? std::string::npos
                                                                         : comma - start);
        // Trim surrounding blanks.
        const auto first = field.find_first_not_of(" \t");
        const auto last = field.find_last_not_of(" \t");
        out.push_back(first == std::string::npos ? std::string()
                                                 : field.substr(first, last - first + 1));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

bool starts_with(const std::string& s, const std::string& prefix) {
    return s.compare(0, prefix.size(), prefix) == 0;
}

}  // namespace

CsvTable parse_csv(const std::string& text, const std::string& source) {
    CsvTable t;
    t.source = source;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        if (line.front() == '#') {
            std::string c = line.substr(1);
            if (!c.empty() && c.front() == ' ') c.erase(0, 1);
            t.comments.push_back(std::move(c));
            continue;
        }
        auto fields = split_fields(line);
        if (!have_header) {
            t.header = std::move(fields);
            have_header = true;
            continue;
        }
        if (fields.size() != t.header.size()) {
            throw ParseError(source, lineno, std::min(fields.size(), t.header.size()) + 1,
                             "expected " + std::to_string(t.header.size()) + " fields, found " +
                                 std::to_string(fields.size()));
        }
        t.rows.push_back(std::move(fields));
        t.line_numbers.push_back(lineno);
    }
    if (!have_header) throw ParseError(source, lineno + 1, 1, "missing header row");
    return t;
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("error reading '" + path.string() + "'");
    return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out << text;
    out.flush();
    if (!out) throw IoError("error writing '" + path.string() + "'");
}

CsvTable read_csv(const std::filesystem::path& path) {
    return parse_csv(read_text_file(path), path.string());
}

double parse_double_field(const CsvTable& table, std::size_t row, std::size_t col) {
    const std::string& s = table.rows[row][col];
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size() || !std::isfinite(v)) {
        throw ParseError(table.source, table.line_numbers[row], col + 1,
                         "column '" + table.header[col] + "': '" + s + "' is not a finite number");
    }
    return v;
}

long long parse_int_field(const CsvTable& table, std::size_t row, std::size_t col) {
    const std::string& s = table.rows[row][col];
    long long v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        throw ParseError(table.source, table.line_numbers[row], col + 1,
                         "column '" + table.header[col] + "': '" + s + "' is not an integer");
    }
    return v;
}

std::string comment_block(const std::string& text) {
    std::string out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) out += line.empty() ? "#\n" : "# " + line + "\n";
    return out;
}

LabeledDataset parse_dataset_csv(const CsvTable& table) {
    const auto& h = table.header;
    if (h.size() < 3 || h[0] != "subject_id" || h[1] != "label") {
        throw ParseError(table.source, 1, 1,
                         "dataset header must start with subject_id,label and have feature columns");
    }
    std::vector<std::size_t> target_cols;
    std::vector<std::size_t> feature_cols;
    for (std::size_t c = 2; c < h.size(); ++c) {
        if (starts_with(h[c], kTargetPrefix)) {
            if (!feature_cols.empty()) {
                throw ParseError(table.source, 1, c + 1,
                                 "target column '" + h[c] + "' must precede the feature columns");
            }
            if (h[c].size() == std::string(kTargetPrefix).size()) {
                throw ParseError(table.source, 1, c + 1, "target column needs a name");
            }
            target_cols.push_back(c);
        } else {
            feature_cols.push_back(c);
        }
    }
    if (feature_cols.empty()) throw ParseError(table.source, 1, h.size(), "no feature columns");

    const std::size_t n = table.rows.size();
    LabeledDataset data;
    data.features = Matrix(n, feature_cols.size());
    data.labels.resize(n);
    data.ids.resize(n);
    for (std::size_t c : feature_cols) data.feature_names.push_back(h[c]);
    for (std::size_t c : target_cols) {
        data.targets.emplace(h[c].substr(std::string(kTargetPrefix).size()), Vector(n));
    }
    for (std::size_t i = 0; i < n; ++i) {
        data.ids[i] = table.rows[i][0];
        const long long label = parse_int_field(table, i, 1);
        if (label != 0 && label != 1) {
            throw ParseError(table.source, table.line_numbers[i], 2,
                             "label must be 0 or 1, found " + table.rows[i][1]);
        }
        data.labels[i] = static_cast<int>(label);
        for (std::size_t c : target_cols) {
            data.targets[h[c].substr(std::string(kTargetPrefix).size())][i] =
                parse_double_field(table, i, c);
        }
        for (std::size_t j = 0; j < feature_cols.size(); ++j) {
            data.features(i, j) = parse_double_field(table, i, feature_cols[j]);
        }
    }
    return data;
}

LabeledDataset read_dataset_csv(const std::filesystem::path& path) {
    return parse_dataset_csv(read_csv(path));
}

std::string dataset_to_csv(const LabeledDataset& data, const std::string& provenance) {
    data.validate();
    std::string out = comment_block(provenance);
    out += "subject_id,label";
    for (const auto& [name, values] : data.targets) out += "," + std::string(kTargetPrefix) + name;
    for (std::size_t j = 0; j < data.dim(); ++j) {
        out += ",";
        out += data.feature_names.empty() ? "x" + std::to_string(j) : data.feature_names[j];
    }
    out += "\n";
    for (std::size_t i = 0; i < data.size(); ++i) {
        out += data.ids.empty() ? "s" + std::to_string(i) : data.ids[i];
        out += "," + std::to_string(data.labels[i]);
        for (const auto& [name, values] : data.targets) out += "," + format_double(values[i]);
        for (double v : data.features.row(i)) out += "," + format_double(v);
        out += "\n";
    }
    return out;
}

TimeSeriesTable read_timeseries_csv(const std::filesystem::path& path) {
    const CsvTable t = read_csv(path);
    TimeSeriesTable ts;
    ts.roi_names = t.header;
    for (std::size_t c = 0; c < t.header.size(); ++c) {
        if (t.header[c].empty()) throw ParseError(t.source, 1, c + 1, "empty ROI name");
    }
    ts.values = Matrix(t.rows.size(), t.header.size());
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        for (std::size_t c = 0; c < t.header.size(); ++c) ts.values(i, c) = parse_double_field(t, i, c);
    }
    return ts;
}

std::string timeseries_to_csv(const TimeSeriesTable& ts) {
    std::string out;
    for (std::size_t c = 0; c < ts.roi_names.size(); ++c) out += (c ? "," : "") + ts.roi_names[c];
    out += "\n";
    for (std::size_t i = 0; i < ts.timepoints(); ++i) {
        const auto row = ts.values.row(i);
        for (std::size_t c = 0; c < row.size(); ++c) out += (c ? "," : "") + format_double(row[c]);
        out += "\n";
    }
    return out;
}

std::string ranking_to_csv(const ImportanceRanking& ranking, const std::string& provenance) {
    std::string out = comment_block(provenance);
    out += "feature_index,mean_importance,rank\n";
    const auto ranks = ranking.ranks();
    for (std::size_t j = 0; j < ranking.mean_importance.size(); ++j) {
        out += std::to_string(j) + "," + format_double(ranking.mean_importance[j]) + "," +
               std::to_string(ranks[j]) + "\n";
    }
    return out;
}

ImportanceRanking read_ranking_csv(const std::filesystem::path& path) {
    const CsvTable t = read_csv(path);
    if (t.header != std::vector<std::string>{"feature_index", "mean_importance", "rank"}) {
        throw ParseError(t.source, 1, 1, "ranking header must be feature_index,mean_importance,rank");
    }
    const std::size_t d = t.rows.size();
    if (d == 0) throw ParseError(t.source, 2, 1, "ranking has no rows");
    ImportanceRanking r;
    r.mean_importance.assign(d, 0.0);
    r.order.assign(d, d);
    std::vector<bool> seen(d, false);
    for (std::size_t i = 0; i < d; ++i) {
        const long long idx = parse_int_field(t, i, 0);
        const long long rank = parse_int_field(t, i, 2);
        if (idx < 0 || static_cast<std::size_t>(idx) >= d || seen[static_cast<std::size_t>(idx)]) {
            throw ParseError(t.source, t.line_numbers[i], 1, "feature_index out of range or repeated");
        }
        if (rank < 1 || static_cast<std::size_t>(rank) > d || r.order[rank - 1] != d) {
            throw ParseError(t.source, t.line_numbers[i], 3, "rank out of range or repeated");
        }
        seen[static_cast<std::size_t>(idx)] = true;
        const double m = parse_double_field(t, i, 1);
        if (m < 0.0) throw ParseError(t.source, t.line_numbers[i], 2, "negative importance");
        r.mean_importance[static_cast<std::size_t>(idx)] = m;
        r.order[static_cast<std::size_t>(rank - 1)] = static_cast<std::size_t>(idx);
    }
    return r;
}

std::string index_list_to_text(const std::vector<std::size_t>& indices,
                               const std::string& provenance) {
    std::string out = comment_block(provenance);
    for (std::size_t j : indices) out += std::to_string(j) + "\n";
    return out;
}

std::vector<std::size_t> read_index_list(const std::filesystem::path& path) {
    const std::string text = read_text_file(path);
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    std::vector<std::size_t> out;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') continue;
        const auto last = line.find_last_not_of(" \t");
        const std::string s = line.substr(first, last - first + 1);
        std::size_t v = 0;
        const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
        if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
            throw ParseError(path.string(), lineno, first + 1, "'" + s + "' is not an index");
        }
        out.push_back(v);
    }
    return out;
}

std::string explanation_to_csv(const Explanation& e, const std::string& provenance) {
    std::string out = comment_block(provenance);
    out += "feature_index,x,x_p,explanation,importance\n";
    for (std::size_t j = 0; j < e.x.size(); ++j) {
        out += std::to_string(j) + "," + format_double(e.x[j]) + "," + format_double(e.x_p[j]) +
               "," + format_double(e.explanation[j]) + "," + format_double(e.importance[j]) + "\n";
    }
    return out;
}

}  // namespace invnet
