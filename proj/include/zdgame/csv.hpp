#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace zdgame {

// Minimal CSV with deterministic byte output: '\n' line ends, quoting only
// when a cell contains a comma, quote or newline.
std::string csv_cell(std::string_view raw);

class CsvBuilder {
 public:
  explicit CsvBuilder(std::vector<std::string> header);
  void add_row(const std::vector<std::string>& cells);
  const std::string& text() const { return text_; }

 private:
  std::size_t columns_;
  std::string text_;
};

std::vector<std::string> split(std::string_view text, char sep);

std::uint64_t fnv1a64(std::string_view text);
std::string hash_hex(std::uint64_t value);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace zdgame
