#pragma once

#include <fstream>
#include <string>
#include <vector>

namespace tp {

// Deterministic CSV writer: comma separated, '.' decimal point, header row,
// LF line endings, doubles rendered with %.17g.
class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header);

    void row(const std::vector<std::string>& cells);
    const std::string& path() const { return path_; }

    static std::string num(double v);
    static std::string num(long long v);

private:
    std::string path_;
    std::ofstream out_;
};

} // namespace tp
