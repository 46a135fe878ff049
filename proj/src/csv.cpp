#include "lcc/csv.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace lcc {

std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

void write_matrix_csv(std::ostream& os, const Matrix& rows, const std::vector<std::string>& header) {
    for (std::size_t k = 0; k < header.size(); ++k) os << (k ? "," : "") << header[k];
    if (!header.empty()) os << '\n';
    for (Index i = 0; i < rows.rows(); ++i) {
        for (Index j = 0; j < rows.cols(); ++j) os << (j ? "," : "") << format_double(rows(i, j));
        os << '\n';
    }
}

Matrix read_matrix_csv(std::istream& is, const std::string& source) {
    std::vector<std::vector<double>> data;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        bool numeric = true;
        while (std::getline(ss, cell, ',')) {
            double v = 0.0;
            const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
            if (res.ec != std::errc{} || res.ptr != cell.data() + cell.size()) {
                numeric = false;
                break;
            }
            row.push_back(v);
        }
        if (!numeric) {
            if (data.empty() && line_no == 1) continue;  // header
            throw Error(source + ": non-numeric value on line " + std::to_string(line_no));
        }
        if (!data.empty() && row.size() != data.front().size()) {
            throw DimensionError(source + ": ragged row on line " + std::to_string(line_no));
        }
        data.push_back(std::move(row));
    }
    if (data.empty()) return Matrix(0, 0);
    Matrix out(static_cast<Index>(data.size()), static_cast<Index>(data.front().size()));
    for (Index i = 0; i < out.rows(); ++i) {
        for (Index j = 0; j < out.cols(); ++j) out(i, j) = data[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
    return out;
}

Matrix load_matrix_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open file: " + path);
    return read_matrix_csv(in, path);
}

}  // namespace lcc
