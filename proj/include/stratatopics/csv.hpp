#pragma once

#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace stratatopics::csv {

/// Streaming RFC 4180 reader: `,` delimiter, `"` quoting with `""` escapes,
/// quoted fields may span lines. Accepts LF or CRLF and a leading UTF-8 BOM.
class Reader {
 public:
  explicit Reader(std::istream& in);

  /// Next record, or nullopt at end of input. Throws ParseError on an
  /// unterminated quote or stray characters after a closing quote.
  std::optional<std::vector<std::string>> next();

  /// 1-based record number of the record most recently returned.
  std::size_t row() const noexcept { return row_; }

 private:
  std::istream& in_;
  std::size_t row_ = 0;
  bool first_ = true;
};

/// Quote a field only if it contains a delimiter, quote, or line break.
std::string escape(std::string_view field);

/// Always quote, doubling embedded quotes.
std::string quote(std::string_view field);

std::string join_row(const std::vector<std::string>& fields);

}  // namespace stratatopics::csv
