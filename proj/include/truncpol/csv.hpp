#pragma once

#include <fstream>
#include <string>
#include <vector>

namespace truncpol {

/// Formats doubles with 17 significant digits so values round-trip.
std::string format_real(double x);

class CsvWriter {
  public:
    explicit CsvWriter(std::string const& path);

    void header(std::vector<std::string> const& columns);
    void row(std::vector<std::string> const& cells);

  private:
    std::ofstream out_;
};

}  // namespace truncpol
