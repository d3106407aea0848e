#ifndef MARKETNET_CSV_HPP
#define MARKETNET_CSV_HPP

#include <Eigen/Dense>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace marketnet::csv {

/// Split one CSV record on commas. No quoting support: the panel/sector
/// contracts forbid embedded commas. Trailing '\r' is stripped.
std::vector<std::string> split_record(std::string_view line);

/// Parse text into rows of fields. Empty lines are skipped.
std::vector<std::vector<std::string>> parse(std::string_view text);

std::string read_file(const std::filesystem::path& path);

/// Write text to path, creating parent directories. Always LF line endings.
void write_file(const std::filesystem::path& path, std::string_view text);

/// Shortest round-trip decimal representation of a double (std::to_chars).
/// Deterministic across runs, parses back to the identical bit pattern.
std::string format_double(double v);

/// Strict double parse of a whole field; throws FormatError(row, col) on
/// trailing garbage or empty input. "nan"/"NaN"/"" are NOT accepted here.
double parse_double(std::string_view field, std::size_t row, std::size_t col);

/// True for an empty field or a spelling of NaN ("nan", "NaN", "NA", "null").
bool is_missing(std::string_view field);

/// Square labeled matrix as CSV: header "label,<l1>,...", one row per label.
std::string labeled_matrix_to_csv(const std::vector<std::string>& labels,
                                  const Eigen::MatrixXd& m);

std::pair<std::vector<std::string>, Eigen::MatrixXd> labeled_matrix_from_csv(
    std::string_view text);

}  // namespace marketnet::csv

#endif  // MARKETNET_CSV_HPP
