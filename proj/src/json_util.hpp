#pragma once

#include <Eigen/Dense>
#include <string>

#include "json.hpp"
#include "psfa/errors.hpp"

namespace psfa::detail {

inline nlohmann::json vector_to_json(const Eigen::VectorXd& v) {
    nlohmann::json array = nlohmann::json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) array.push_back(v(i));
    return array;
}

inline nlohmann::json matrix_to_json(const Eigen::MatrixXd& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline Eigen::VectorXd vector_from_json(const nlohmann::json& array, const std::string& field) {
    if (!array.is_array() || array.empty())
        throw ValidationError("field '" + field + "' must be a nonempty array");
    Eigen::VectorXd v(array.size());
    for (std::size_t i = 0; i < array.size(); ++i) {
        if (!array[i].is_number())
            throw ValidationError("field '" + field + "' must contain numbers");
        v(static_cast<Eigen::Index>(i)) = array[i].get<double>();
    }
    return v;
}

inline Eigen::MatrixXd matrix_from_json(const nlohmann::json& rows, const std::string& field) {
    if (!rows.is_array() || rows.empty() || !rows[0].is_array() || rows[0].empty())
        throw ValidationError("field '" + field + "' must be a nonempty array of rows");
    const auto n_rows = rows.size();
    const auto n_cols = rows[0].size();
    Eigen::MatrixXd m(n_rows, n_cols);
    for (std::size_t r = 0; r < n_rows; ++r) {
        if (!rows[r].is_array() || rows[r].size() != n_cols)
            throw ValidationError("field '" + field + "' has ragged rows");
        for (std::size_t c = 0; c < n_cols; ++c) {
            if (!rows[r][c].is_number())
                throw ValidationError("field '" + field + "' must contain numbers");
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c].get<double>();
        }
    }
    return m;
}

}  // namespace psfa::detail
