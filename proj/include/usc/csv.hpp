#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace usc {

/// Locale-independent "%.17g"; NaN prints as "nan".
std::string format_double(double v);

/// Writes '#'-prefixed provenance lines followed by a header row and data rows.
class CsvWriter {
public:
    CsvWriter(std::ostream &os, std::vector<std::string> columns);

    static void comment(std::ostream &os, std::string_view line);

    CsvWriter &cell(double v);
    CsvWriter &cell(long long v);
    CsvWriter &cell(int v) { return cell(static_cast<long long>(v)); }
    CsvWriter &cell(std::string_view v);
    void end_row();

private:
    std::ostream &os_;
    std::size_t columns_;
    std::size_t in_row_ = 0;
};

} // namespace usc
