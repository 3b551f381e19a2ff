#include "psfa/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "psfa/errors.hpp"

namespace psfa {

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream stream(line);
    while (std::getline(stream, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

double parse_field(const std::string& field, const std::string& path, std::size_t line_no) {
    const char* begin = field.data();
    const char* end = begin + field.size();
    while (begin < end && (*begin == ' ' || *begin == '\t')) ++begin;
    while (end > begin && (end[-1] == ' ' || end[-1] == '\t' || end[-1] == '\r')) --end;
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end)
        throw ValidationError(path + ":" + std::to_string(line_no) + ": field '" + field +
                              "' is not a number");
    if (!std::isfinite(value))
        throw ValidationError(path + ":" + std::to_string(line_no) + ": non-finite value rejected");
    return value;
}

}  // namespace

std::string format_double(double value) {
    char buffer[32];
    const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
    return std::string(buffer, ptr);
}

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");

    std::string line;
    if (!std::getline(in, line)) throw ValidationError(path + ": empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();

    CsvTable table;
    table.header = split_line(line);
    const auto m = table.header.size();
    if (m == 0) throw ValidationError(path + ": empty header row");

    std::vector<std::vector<double>> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_line(line);
        if (fields.size() != m)
            throw ValidationError(path + ":" + std::to_string(line_no) + ": expected " +
                                  std::to_string(m) + " fields, got " + std::to_string(fields.size()));
        std::vector<double> row(m);
        for (std::size_t i = 0; i < m; ++i) row[i] = parse_field(fields[i], path, line_no);
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ValidationError(path + ": no data rows");

    table.data.resize(m, rows.size());
    for (std::size_t t = 0; t < rows.size(); ++t)
        for (std::size_t i = 0; i < m; ++i)
            table.data(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(t)) = rows[t][i];
    return table;
}

void write_csv(const std::string& path,
               const std::vector<std::string>& header,
               const Eigen::MatrixXd& data) {
    if (static_cast<Eigen::Index>(header.size()) != data.rows())
        throw ValidationError("header size must equal variable count");
    std::ofstream out(path);
    if (!out) throw IoError("cannot write '" + path + "'");
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i > 0) out << ',';
        out << header[i];
    }
    out << '\n';
    for (Eigen::Index t = 0; t < data.cols(); ++t) {
        for (Eigen::Index i = 0; i < data.rows(); ++i) {
            if (i > 0) out << ',';
            out << format_double(data(i, t));
        }
        out << '\n';
    }
    if (!out) throw IoError("failed writing '" + path + "'");
}

}  // namespace psfa
