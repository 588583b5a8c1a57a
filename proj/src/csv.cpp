#include "usc/csv.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace usc {

std::string format_double(double v)
{
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

CsvWriter::CsvWriter(std::ostream &os, std::vector<std::string> columns) : os_(os), columns_(columns.size())
{
    for (std::size_t i = 0; i < columns.size(); ++i) {
        os_ << (i ? "," : "") << columns[i];
    }
    os_ << '\n';
}

void CsvWriter::comment(std::ostream &os, std::string_view line)
{
    os << "# " << line << '\n';
}

CsvWriter &CsvWriter::cell(double v)
{
    return cell(std::string_view(format_double(v)));
}

CsvWriter &CsvWriter::cell(long long v)
{
    return cell(std::string_view(std::to_string(v)));
}

CsvWriter &CsvWriter::cell(std::string_view v)
{
    if (in_row_ == columns_) {
        throw std::logic_error("CsvWriter: too many cells in row");
    }
    os_ << (in_row_ ? "," : "") << v;
    ++in_row_;
    return *this;
}

void CsvWriter::end_row()
{
    if (in_row_ != columns_) {
        throw std::logic_error("CsvWriter: incomplete row");
    }
    os_ << '\n';
    in_row_ = 0;
}

} // namespace usc
