#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace discovery::app {

/// Output could not be written; maps to exit status 3.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shortest round-trip decimal form ("0.1", "2.8200179", "1e-12").
std::string format_double(double value);

/// In-memory CSV with a fixed header. LF line endings, no quoting (cells are
/// numbers or plain identifiers).
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  CsvTable& cell(std::string_view text);
  CsvTable& cell(double value);
  CsvTable& cell(std::uint64_t value);
  /// "NA" for nullopt.
  CsvTable& cell(const std::optional<std::uint64_t>& value);
  void end_row();

  std::size_t columns() const noexcept { return header_.size(); }
  std::size_t rows() const noexcept { return rows_; }
  const std::string& text() const noexcept { return text_; }

  void write(const std::filesystem::path& path) const;

 private:
  void separator();

  std::vector<std::string> header_;
  std::string text_;
  std::size_t in_row_ = 0;
  std::size_t rows_ = 0;
};

/// Writes `contents` to `path`, creating parent directories.
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace discovery::app
