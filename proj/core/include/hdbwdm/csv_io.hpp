#pragma once

#include "hdbwdm/types.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace hdbwdm {

/// Shortest decimal text that parses back to exactly `value`
/// ("inf", "-inf" and "nan" for non-finite values).
std::string format_double(double value);

double parse_double(std::string_view text);
std::uint64_t parse_u64(std::string_view text);
long long parse_i64(std::string_view text);

/// Comma-separated fields; surrounding whitespace trimmed. No quoting support.
std::vector<std::string> split_csv_line(std::string_view line);

std::string join_values(const Eigen::Ref<const Eigen::VectorXd>& values);
std::vector<double> parse_value_list(std::string_view line);

/// Plain rectangular CSV: an optional header plus rows of string fields.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Index of a header column, or -1.
  int column(std::string_view name) const;
};

/// Reads a CSV stream. When `header` is Auto, the first line is a header if
/// any of its fields fails to parse as a number. Blank lines are skipped.
enum class HeaderMode { Auto, Present, Absent };
CsvTable read_csv(std::istream& in, HeaderMode header = HeaderMode::Auto);

void write_csv_row(std::ostream& out, const std::vector<std::string>& fields);

}  // namespace hdbwdm
