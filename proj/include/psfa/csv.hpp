#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace psfa {

/// Tabular sample data: one column per variable in the file, one row per
/// sample. data is stored variables-by-samples (m x N) to match the model
/// convention.
struct CsvTable {
    std::vector<std::string> header;
    Eigen::MatrixXd data;  // m x N
};

/// Shortest decimal representation that round-trips the exact double.
std::string format_double(double value);

/// Reads a comma-separated file with a header row; every body field must be
/// a finite number. Throws IoError / ValidationError on malformed input.
CsvTable read_csv(const std::string& path);

/// Writes header + samples (columns of data become rows of the file).
void write_csv(const std::string& path,
               const std::vector<std::string>& header,
               const Eigen::MatrixXd& data);

}  // namespace psfa
