#pragma once
#include <fstream>
#include <string>
#include <vector>

namespace invlab {

/// RFC-4180-style CSV writer: header row, '.' decimal, doubles printed with
/// %.17g so re-reads round-trip bitwise.
class CsvWriter {
  public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header);
    void row(const std::vector<double>& values);
    void row_mixed(const std::vector<std::string>& values);
    void close();

  private:
    std::ofstream out_;
    std::size_t ncols_;
};

std::string format_double(double v);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    int col(const std::string& name) const;  // -1 if absent
    double num(std::size_t row, int col) const;
};

CsvTable read_csv(const std::string& path);

} // namespace invlab
