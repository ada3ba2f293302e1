#pragma once

#include <Eigen/Core>

#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace gpdev::cli {

/// Numeric CSV: comma separated, header row required, '.' decimal separator.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    [[nodiscard]] std::optional<std::size_t> column(const std::string& name) const;
    /// Rows x selected columns.
    [[nodiscard]] Eigen::MatrixXd columns(const std::vector<std::size_t>& idx) const;
};

CsvTable read_csv(std::istream& in, const std::string& source = "<stream>");
CsvTable read_csv_file(const std::string& path);

/// Shortest text that parses back to exactly `v`.
std::string format_double(double v);

void write_csv_row(std::ostream& out, const std::vector<std::string>& cells);

}  // namespace gpdev::cli
