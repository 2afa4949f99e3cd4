#include "slosc/csv.hpp"

#include <array>
#include <charconv>

namespace slosc {

std::string format_double(double value) {
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), res.ptr);
}

void CsvWriter::header(std::initializer_list<std::string_view> columns) {
  for (auto c : columns) cell(c);
  end_row();
}

void CsvWriter::separator() {
  if (row_started_) os_ << ',';
  row_started_ = true;
}

CsvWriter& CsvWriter::cell(double v) {
  separator();
  os_ << format_double(v);
  return *this;
}

CsvWriter& CsvWriter::cell(long long v) {
  separator();
  os_ << v;
  return *this;
}

CsvWriter& CsvWriter::cell(std::string_view s) {
  separator();
  os_ << s;
  return *this;
}

void CsvWriter::end_row() {
  os_ << '\n';
  row_started_ = false;
}

}  // namespace slosc
