#include "truncpol/csv.hpp"

#include <cmath>
#include <cstdio>

#include "truncpol/errors.hpp"

namespace truncpol {

std::string format_real(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

CsvWriter::CsvWriter(std::string const& path) : out_(path) {
    if (!out_) throw ArgumentError("CsvWriter: cannot open " + path);
}

void CsvWriter::header(std::vector<std::string> const& columns) { row(columns); }

void CsvWriter::row(std::vector<std::string> const& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out_ << ',';
        out_ << cells[i];
    }
    out_ << '\n';
}

}  // namespace truncpol
