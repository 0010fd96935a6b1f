#include "stratatopics/csv.hpp"

#include "stratatopics/error.hpp"

namespace stratatopics::csv {

Reader::Reader(std::istream& in) : in_(in) {}

std::optional<std::vector<std::string>> Reader::next() {
  if (first_) {
    first_ = false;
    if (in_.peek() == 0xEF) {
      char bom[3];
      in_.read(bom, 3);
      if (!(static_cast<unsigned char>(bom[1]) == 0xBB &&
            static_cast<unsigned char>(bom[2]) == 0xBF)) {
        throw ParseError(1, "invalid byte order mark");
      }
    }
  }
  if (in_.peek() == std::char_traits<char>::eof()) return std::nullopt;

  ++row_;
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;     // currently inside quotes
  bool was_quoted = false; // field began with a quote
  for (;;) {
    int c = in_.get();
    if (c == std::char_traits<char>::eof()) {
      if (quoted) throw ParseError(row_, "unterminated quoted field");
      fields.push_back(std::move(field));
      return fields;
    }
    char ch = static_cast<char>(c);
    if (quoted) {
      if (ch == '"') {
        if (in_.peek() == '"') {
          in_.get();
          field.push_back('"');
        } else {
          quoted = false;
        }
      } else {
        field.push_back(ch);
      }
      continue;
    }
    if (ch == ',') {
      fields.push_back(std::move(field));
      field.clear();
      was_quoted = false;
    } else if (ch == '\n' || ch == '\r') {
      if (ch == '\r' && in_.peek() == '\n') in_.get();
      fields.push_back(std::move(field));
      return fields;
    } else if (ch == '"') {
      if (!field.empty() || was_quoted) {
        throw ParseError(row_, "unexpected quote inside unquoted field");
      }
      quoted = true;
      was_quoted = true;
    } else {
      if (was_quoted) {
        throw ParseError(row_, "characters after closing quote");
      }
      field.push_back(ch);
    }
  }
}

std::string quote(std::string_view field) {
  std::string out;
  out.reserve(field.size() + 2);
  out.push_back('"');
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) {
    return std::string(field);
  }
  return quote(field);
}

std::string join_row(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out.push_back(',');
    out += escape(fields[i]);
  }
  return out;
}

}  // namespace stratatopics::csv
