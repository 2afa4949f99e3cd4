#pragma once

#include <initializer_list>
#include <ostream>
#include <string>
#include <string_view>

namespace slosc {

/// Shortest decimal representation that round-trips to the same double.
std::string format_double(double value);

/// Minimal CSV row writer with deterministic number formatting.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& os) : os_(os) {}

  void comment(std::string_view text) { os_ << "# " << text << '\n'; }
  void header(std::initializer_list<std::string_view> columns);

  CsvWriter& cell(double v);
  CsvWriter& cell(long long v);
  CsvWriter& cell(int v) { return cell(static_cast<long long>(v)); }
  CsvWriter& cell(std::string_view s);
  void end_row();

 private:
  void separator();

  std::ostream& os_;
  bool row_started_ = false;
};

}  // namespace slosc
