#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <string>
#include <string_view>

namespace riddleforge {

// Pull-based line stream. Lines are returned without the trailing newline
// (and without a trailing '\r').
class LineSource {
 public:
  virtual ~LineSource() = default;
  virtual bool next_line(std::string& line) = 0;
  // 1-based number of the line most recently returned.
  std::size_t line_number() const { return line_number_; }

 protected:
  std::size_t line_number_ = 0;
};

/// Opens a file for line reading. gzip-compressed and plain files are both
/// accepted (detected from content, not the extension); "-" reads stdin.
/// Throws IoError if the path cannot be opened.
std::unique_ptr<LineSource> open_lines(const std::filesystem::path& path);

// Reads from a caller-owned stream.
class StreamLineSource final : public LineSource {
 public:
  explicit StreamLineSource(std::istream& in) : in_(in) {}
  bool next_line(std::string& line) override;

 private:
  std::istream& in_;
};

// Reads from an in-memory buffer.
class StringLineSource final : public LineSource {
 public:
  explicit StringLineSource(std::string text) : text_(std::move(text)) {}
  bool next_line(std::string& line) override;

 private:
  std::string text_;
  std::size_t pos_ = 0;
};

/// Byte sink for outputs. Paths ending in ".gz" are gzip-compressed, "-"
/// writes stdout. close() flushes and reports any deferred write error.
class OutputSink {
 public:
  virtual ~OutputSink() = default;
  virtual void write(std::string_view bytes) = 0;
  virtual void close() = 0;

  void write_line(std::string_view line) {
    write(line);
    write("\n");
  }
};

std::unique_ptr<OutputSink> open_output(const std::filesystem::path& path);

// Whole-file read with transparent gzip decompression.
std::string read_file(const std::filesystem::path& path);

// Writes `bytes` to `path` (gzip when the name ends in ".gz").
void write_file(const std::filesystem::path& path, std::string_view bytes);

// Lowercase hex SHA-256.
std::string sha256_hex(std::string_view bytes);
// Digest of the raw on-disk bytes (no decompression).
std::string sha256_file(const std::filesystem::path& path);

}  // namespace riddleforge
