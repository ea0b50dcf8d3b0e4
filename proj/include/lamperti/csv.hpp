#ifndef LAMPERTI_CSV_HPP
#define LAMPERTI_CSV_HPP

#include <fstream>
#include <string>
#include <vector>

namespace lamperti {

// CSV with a header row, UTF-8, '.' decimal separator, fixed column order.
// Numeric formatting is locale-independent and round-trip exact, so equal
// (config, seed) runs produce byte-identical files.
class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header);
    void row(const std::vector<std::string>& cells);

    static std::string num(double v);
    static std::string num(std::size_t v);
    static std::string num(int v);

private:
    std::ofstream out_;
    std::size_t columns_;
};

} // namespace lamperti

#endif
