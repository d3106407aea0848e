#include "marketnet/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "marketnet/errors.hpp"

namespace marketnet::csv {

std::vector<std::string> split_record(std::string_view line) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.emplace_back(line.substr(start));
            break;
        }
        fields.emplace_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return fields;
}

std::vector<std::vector<std::string>> parse(std::string_view text) {
    std::vector<std::vector<std::string>> rows;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t nl = text.find('\n', pos);
        std::string_view line = (nl == std::string_view::npos)
                                    ? text.substr(pos)
                                    : text.substr(pos, nl - pos);
        pos = (nl == std::string_view::npos) ? text.size() : nl + 1;
        if (line.empty() || line == "\r") continue;
        rows.push_back(split_record(line));
    }
    return rows;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return std::move(buf).str();
}

void write_file(const std::filesystem::path& path, std::string_view text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open file for writing: " + path.string());
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw Error("write failed: " + path.string());
}

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

double parse_double(std::string_view field, std::size_t row, std::size_t col) {
    double value = 0.0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    auto res = std::from_chars(first, last, value);
    if (res.ec != std::errc() || res.ptr != last)
        throw FormatError("not a number: '" + std::string(field) + "'", row, col);
    return value;
}

bool is_missing(std::string_view field) {
    return field.empty() || field == "nan" || field == "NaN" || field == "NAN" ||
           field == "NA" || field == "na" || field == "null";
}

std::string labeled_matrix_to_csv(const std::vector<std::string>& labels,
                                  const Eigen::MatrixXd& m) {
    if (m.rows() != m.cols() || static_cast<std::size_t>(m.rows()) != labels.size())
        throw DataError("labeled matrix export needs a square matrix matching the labels");
    std::string out = "label";
    for (const auto& l : labels) {
        out += ',';
        out += l;
    }
    out += '\n';
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        out += labels[static_cast<std::size_t>(r)];
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            out += ',';
            out += format_double(m(r, c));
        }
        out += '\n';
    }
    return out;
}

std::pair<std::vector<std::string>, Eigen::MatrixXd> labeled_matrix_from_csv(
    std::string_view text) {
    auto rows = parse(text);
    if (rows.empty()) throw FormatError("matrix csv is empty");
    if (rows[0].empty() || rows[0][0] != "label")
        throw FormatError("matrix csv header must start with 'label'", 1, 1);

    const std::size_t n = rows[0].size() - 1;
    if (rows.size() != n + 1)
        throw FormatError("matrix csv has " + std::to_string(rows.size() - 1) +
                          " rows for " + std::to_string(n) + " columns");
    std::vector<std::string> labels(rows[0].begin() + 1, rows[0].end());
    Eigen::MatrixXd m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t r = 1; r < rows.size(); ++r) {
        if (rows[r].size() != n + 1)
            throw FormatError("matrix row needs " + std::to_string(n + 1) + " fields", r + 1, 1);
        if (rows[r][0] != labels[r - 1])
            throw FormatError("matrix row label mismatch", r + 1, 1);
        for (std::size_t c = 1; c <= n; ++c)
            m(static_cast<Eigen::Index>(r - 1), static_cast<Eigen::Index>(c - 1)) =
                parse_double(rows[r][c], r + 1, c + 1);
    }
    return {std::move(labels), std::move(m)};
}

}  // namespace marketnet::csv
