#include "invlab/cli/csvio.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace invlab {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header)
    : out_(path), ncols_(header.size()) {
    if (!out_) throw std::runtime_error("cannot open " + path + " for writing");
    for (std::size_t i = 0; i < header.size(); ++i)
        out_ << header[i] << (i + 1 < header.size() ? "," : "\n");
}

void CsvWriter::row(const std::vector<double>& values) {
    if (values.size() != ncols_) throw std::runtime_error("csv row width mismatch");
    for (std::size_t i = 0; i < values.size(); ++i)
        out_ << format_double(values[i]) << (i + 1 < values.size() ? "," : "\n");
}

void CsvWriter::row_mixed(const std::vector<std::string>& values) {
    if (values.size() != ncols_) throw std::runtime_error("csv row width mismatch");
    for (std::size_t i = 0; i < values.size(); ++i)
        out_ << values[i] << (i + 1 < values.size() ? "," : "\n");
}

void CsvWriter::close() { out_.close(); }

int CsvTable::col(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return int(i);
    return -1;
}

double CsvTable::num(std::size_t row, int c) const {
    if (c < 0 || row >= rows.size() || std::size_t(c) >= rows[row].size())
        throw std::runtime_error("csv access out of range");
    return std::stod(rows[row][c]);
}

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    CsvTable t;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (first) {
            t.header = cells;
            first = false;
        } else {
            if (cells.size() != t.header.size())
                throw std::runtime_error(path + ": ragged csv row");
            t.rows.push_back(cells);
        }
    }
    if (first) throw std::runtime_error(path + ": empty csv");
    return t;
}

} // namespace invlab
