#include "nvlab/csv.hpp"

#include <charconv>
#include <stdexcept>
#include <system_error>

namespace nvlab {

std::string format_double(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    if (res.ec != std::errc()) throw std::runtime_error("format_double failed");
    return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(const std::string& path) : path_(path), to_file_(true) {}

void CsvWriter::header(const std::vector<std::string>& cols) {
    for (size_t i = 0; i < cols.size(); ++i) {
        if (i) buf_ += ',';
        buf_ += cols[i];
    }
    buf_ += '\n';
}

void CsvWriter::row(const std::vector<double>& vals) {
    for (size_t i = 0; i < vals.size(); ++i) {
        if (i) buf_ += ',';
        buf_ += format_double(vals[i]);
    }
    buf_ += '\n';
}

void CsvWriter::raw_line(const std::string& line) {
    buf_ += line;
    buf_ += '\n';
}

void CsvWriter::close() {
    if (!to_file_) return;
    std::ofstream f(path_, std::ios::binary);
    if (!f) throw std::runtime_error("CsvWriter: cannot open " + path_);
    f.write(buf_.data(), static_cast<std::streamsize>(buf_.size()));
    if (!f) throw std::runtime_error("CsvWriter: write failed for " + path_);
    to_file_ = false;
}

}  // namespace nvlab
