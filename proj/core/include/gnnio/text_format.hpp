#pragma once

#include <initializer_list>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace gnnio {

std::string_view trim(std::string_view s) noexcept;
std::vector<std::string_view> split_whitespace(std::string_view s);

/// Fixed 6-significant-digit rendering used for every numeric CSV cell.
std::string format_number(double value);

/// Minimal CSV emitter. Cells are written verbatim; callers only pass
/// identifiers and numbers, which never need quoting.
class CsvWriter {
 public:
  CsvWriter(std::ostream& out, std::initializer_list<std::string_view> header);

  CsvWriter& cell(std::string_view text);
  CsvWriter& cell(double value);
  CsvWriter& cell(long long value);
  CsvWriter& cell(unsigned long long value);
  CsvWriter& cell(int value) { return cell(static_cast<long long>(value)); }
  CsvWriter& cell(unsigned value) { return cell(static_cast<unsigned long long>(value)); }
  CsvWriter& cell(unsigned long value) { return cell(static_cast<unsigned long long>(value)); }
  CsvWriter& cell(long value) { return cell(static_cast<long long>(value)); }
  void end_row();

 private:
  void separator();

  std::ostream& out_;
  std::size_t columns_;
  std::size_t filled_ = 0;
};

}  // namespace gnnio
