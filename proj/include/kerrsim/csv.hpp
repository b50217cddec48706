#pragma once

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace kerrsim {

/// Comma-separated output with '#' comment lines and one header row.
/// Numeric formatting is fixed ("%.10g") so identical runs produce
/// byte-identical files.
class CsvWriter {
  public:
    explicit CsvWriter(const std::string& path) : out_(path) {
        if (!out_) throw std::runtime_error("CsvWriter: cannot open " + path);
    }

    void comment(const std::string& text) {
        out_ << "# " << text << "\n";
    }

    void header(const std::vector<std::string>& cols) {
        write_cells(cols);
    }

    void row(const std::vector<double>& values) {
        std::vector<std::string> cells;
        cells.reserve(values.size());
        for (double v : values) cells.push_back(format(v));
        write_cells(cells);
    }

    void row_mixed(const std::vector<std::string>& cells) { write_cells(cells); }

    static std::string format(double v) {
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.10g", v);
        return buf;
    }

  private:
    void write_cells(const std::vector<std::string>& cells) {
        for (size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
        out_ << "\n";
    }

    std::ofstream out_;
};

}  // namespace kerrsim
