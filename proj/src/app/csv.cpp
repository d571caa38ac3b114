#include "discovery/app/csv.hpp"

#include <charconv>
#include <fstream>
#include <system_error>

namespace discovery::app {

std::string format_double(double value) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {
  if (header_.empty()) throw std::invalid_argument("CSV header must not be empty");
  for (std::size_t i = 0; i < header_.size(); ++i) {
    if (i > 0) text_ += ',';
    text_ += header_[i];
  }
  text_ += '\n';
}

void CsvTable::separator() {
  if (in_row_ == header_.size()) throw std::logic_error("CSV row has more cells than the header");
  if (in_row_ > 0) text_ += ',';
  ++in_row_;
}

CsvTable& CsvTable::cell(std::string_view text) {
  separator();
  text_ += text;
  return *this;
}

CsvTable& CsvTable::cell(double value) { return cell(std::string_view(format_double(value))); }

CsvTable& CsvTable::cell(std::uint64_t value) {
  char buf[24];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return cell(std::string_view(buf, static_cast<std::size_t>(res.ptr - buf)));
}

CsvTable& CsvTable::cell(const std::optional<std::uint64_t>& value) {
  return value ? cell(*value) : cell(std::string_view("NA"));
}

void CsvTable::end_row() {
  if (in_row_ != header_.size()) throw std::logic_error("CSV row has fewer cells than the header");
  text_ += '\n';
  in_row_ = 0;
  ++rows_;
}

void CsvTable::write(const std::filesystem::path& path) const {
  if (in_row_ != 0) throw std::logic_error("CSV table has an unfinished row");
  write_file(path, text_);
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  std::error_code ec;
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  out.close();
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace discovery::app
