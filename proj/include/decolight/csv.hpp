#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace decolight {

/// Shortest decimal string that parses back to exactly `x`.
std::string format_number(double x);

/// Comma-separated output with `#` comment lines ahead of a single header row.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}

  /// Each line of `text` becomes one `# ` comment. Only valid before header().
  void comment(const std::string& text);
  void header(const std::vector<std::string>& columns);
  /// Throws std::logic_error when the width differs from the header.
  void row(const std::vector<double>& values);

 private:
  std::ostream& out_;
  std::size_t columns_ = 0;
};

}  // namespace decolight
