#pragma once

#include <fstream>
#include <string>
#include <vector>

// Locale-independent CSV writing: '.' decimal separator, '\n' line endings,
// shortest round-trip float formatting.
namespace nvlab {

std::string format_double(double v);

class CsvWriter {
  public:
    explicit CsvWriter(const std::string& path);
    CsvWriter() = default;  // in-memory only

    void header(const std::vector<std::string>& cols);
    void row(const std::vector<double>& vals);
    void raw_line(const std::string& line);
    const std::string& content() const { return buf_; }
    void close();

  private:
    std::string path_;
    std::string buf_;
    bool to_file_ = false;
};

}  // namespace nvlab
