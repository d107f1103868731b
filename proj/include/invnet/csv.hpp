#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "invnet/connectivity.hpp"
#include "invnet/dataset.hpp"
#include "invnet/interpret.hpp"

namespace invnet {

// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

// Comma-separated text with '#' comment lines. No quoting: fields never
// contain commas in any format this library writes.
struct CsvTable {
    std::string source;
    std::vector<std::string> comments;  // without the leading "# "
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> line_numbers;  // 1-based source line of each row
};

CsvTable parse_csv(const std::string& text, const std::string& source);
CsvTable read_csv(const std::filesystem::path& path);

double parse_double_field(const CsvTable& table, std::size_t row, std::size_t col);
long long parse_int_field(const CsvTable& table, std::size_t row, std::size_t col);

std::string read_text_file(const std::filesystem::path& path);
// Creates parent directories as needed; throws IoError on failure.
void write_text_file(const std::filesystem::path& path, const std::string& text);

// Each line of `text` prefixed with "# ".
std::string comment_block(const std::string& text);

// Dataset files:
//   subject_id,label,target_<name>...,<feature columns>...
// Target columns carry the "target_" prefix and must precede the features.
inline constexpr const char* kTargetPrefix = "target_";

LabeledDataset parse_dataset_csv(const CsvTable& table);
LabeledDataset read_dataset_csv(const std::filesystem::path& path);
std::string dataset_to_csv(const LabeledDataset& data, const std::string& provenance);

// Time-series files: header row of ROI names, then one row per timepoint.
TimeSeriesTable read_timeseries_csv(const std::filesystem::path& path);
std::string timeseries_to_csv(const TimeSeriesTable& ts);

// feature_index,mean_importance,rank
std::string ranking_to_csv(const ImportanceRanking& ranking, const std::string& provenance);
ImportanceRanking read_ranking_csv(const std::filesystem::path& path);

// One feature index per line.
std::string index_list_to_text(const std::vector<std::size_t>& indices,
                               const std::string& provenance);
std::vector<std::size_t> read_index_list(const std::filesystem::path& path);

// feature_index,x,x_p,explanation,importance
std::string explanation_to_csv(const Explanation& e, const std::string& provenance);

}  // namespace invnet
