#include "riddleforge/io.hpp"

#include <openssl/evp.h>
#include <zlib.h>

#include <algorithm>
#include <array>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iostream>
#include <unistd.h>

#include "riddleforge/error.hpp"

namespace riddleforge {
namespace {

constexpr std::size_t kReadChunk = 1 << 16;

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

// gzread passes plain files through untouched, so one reader covers both.
class GzLineSource final : public LineSource {
 public:
  GzLineSource(gzFile file, std::string name) : file_(file), name_(std::move(name)) {
    gzbuffer(file_, kReadChunk);
    buffer_.resize(kReadChunk);
  }

  ~GzLineSource() override { gzclose(file_); }

  GzLineSource(const GzLineSource&) = delete;
  GzLineSource& operator=(const GzLineSource&) = delete;

  bool next_line(std::string& line) override {
    line.clear();
    while (true) {
      if (pos_ == end_) {
        if (eof_) {
          if (line.empty() && !partial_) return false;
          partial_ = false;
          ++line_number_;
          strip_cr(line);
          return true;
        }
        fill();
        continue;
      }
      const char* begin = buffer_.data() + pos_;
      const char* stop = static_cast<const char*>(std::memchr(begin, '\n', end_ - pos_));
      if (stop == nullptr) {
        line.append(begin, end_ - pos_);
        partial_ = true;
        pos_ = end_;
        continue;
      }
      line.append(begin, stop - begin);
      pos_ += static_cast<std::size_t>(stop - begin) + 1;
      partial_ = false;
      ++line_number_;
      strip_cr(line);
      return true;
    }
  }

 private:
  void fill() {
    const int n = gzread(file_, buffer_.data(), static_cast<unsigned>(buffer_.size()));
    if (n < 0) {
      int errnum = 0;
      const char* message = gzerror(file_, &errnum);
      throw IoError("read error in " + name_ + ": " + (message ? message : "unknown"));
    }
    pos_ = 0;
    end_ = static_cast<std::size_t>(n);
    if (n == 0) eof_ = true;
  }

  gzFile file_;
  std::string name_;
  std::string buffer_;
  std::size_t pos_ = 0;
  std::size_t end_ = 0;
  bool eof_ = false;
  bool partial_ = false;
};

class FileSink final : public OutputSink {
 public:
  explicit FileSink(const std::filesystem::path& path)
      : out_(path, std::ios::binary | std::ios::trunc), name_(path.string()) {
    if (!out_) throw IoError("cannot open for writing: " + name_);
  }

  void write(std::string_view bytes) override {
    out_.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out_) throw IoError("write failed: " + name_);
  }

  void close() override {
    out_.close();
    if (!out_) throw IoError("close failed: " + name_);
  }

 private:
  std::ofstream out_;
  std::string name_;
};

class StdoutSink final : public OutputSink {
 public:
  void write(std::string_view bytes) override {
    std::cout.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  }
  void close() override {
    std::cout.flush();
    if (!std::cout) throw IoError("write to stdout failed");
  }
};

class GzSink final : public OutputSink {
 public:
  explicit GzSink(const std::filesystem::path& path) : name_(path.string()) {
    // Fixed compression level and no stored name/mtime keep output bytes
    // reproducible across runs.
    file_ = gzopen(name_.c_str(), "wb6");
    if (file_ == nullptr) throw IoError("cannot open for writing: " + name_);
  }

  ~GzSink() override {
    if (file_ != nullptr) gzclose(file_);
  }

  GzSink(const GzSink&) = delete;
  GzSink& operator=(const GzSink&) = delete;

  void write(std::string_view bytes) override {
    while (!bytes.empty()) {
      const auto chunk = static_cast<unsigned>(std::min<std::size_t>(bytes.size(), 1u << 30));
      if (gzwrite(file_, bytes.data(), chunk) != static_cast<int>(chunk)) {
        throw IoError("write failed: " + name_);
      }
      bytes.remove_prefix(chunk);
    }
  }

  void close() override {
    const int rc = gzclose(file_);
    file_ = nullptr;
    if (rc != Z_OK) throw IoError("close failed: " + name_);
  }

 private:
  std::string name_;
  gzFile file_ = nullptr;
};

}  // namespace

std::unique_ptr<LineSource> open_lines(const std::filesystem::path& path) {
  gzFile file = nullptr;
  if (path == "-") {
    file = gzdopen(dup(STDIN_FILENO), "rb");
  } else {
    file = gzopen(path.c_str(), "rb");
  }
  if (file == nullptr) throw IoError("cannot open: " + path.string());
  return std::make_unique<GzLineSource>(file, path.string());
}

bool StreamLineSource::next_line(std::string& line) {
  if (!std::getline(in_, line)) return false;
  ++line_number_;
  strip_cr(line);
  return true;
}

bool StringLineSource::next_line(std::string& line) {
  if (pos_ >= text_.size()) return false;
  std::size_t end = text_.find('\n', pos_);
  if (end == std::string::npos) end = text_.size();
  line.assign(text_, pos_, end - pos_);
  pos_ = end + 1;
  ++line_number_;
  strip_cr(line);
  return true;
}

std::unique_ptr<OutputSink> open_output(const std::filesystem::path& path) {
  if (path == "-") return std::make_unique<StdoutSink>();
  if (path.extension() == ".gz") return std::make_unique<GzSink>(path);
  return std::make_unique<FileSink>(path);
}

std::string read_file(const std::filesystem::path& path) {
  gzFile file = gzopen(path.c_str(), "rb");
  if (file == nullptr) throw IoError("cannot open: " + path.string());
  std::string out;
  std::array<char, kReadChunk> buffer{};
  while (true) {
    const int n = gzread(file, buffer.data(), static_cast<unsigned>(buffer.size()));
    if (n < 0) {
      gzclose(file);
      throw IoError("read error in " + path.string());
    }
    if (n == 0) break;
    out.append(buffer.data(), static_cast<std::size_t>(n));
  }
  gzclose(file);
  return out;
}

void write_file(const std::filesystem::path& path, std::string_view bytes) {
  auto sink = open_output(path);
  sink->write(bytes);
  sink->close();
}

namespace {

class Sha256 {
 public:
  Sha256() : ctx_(EVP_MD_CTX_new()) {
    if (ctx_ == nullptr || EVP_DigestInit_ex(ctx_, EVP_sha256(), nullptr) != 1) {
      throw Error("SHA-256 initialisation failed");
    }
  }
  ~Sha256() { EVP_MD_CTX_free(ctx_); }
  Sha256(const Sha256&) = delete;
  Sha256& operator=(const Sha256&) = delete;

  void update(const void* data, std::size_t size) {
    if (EVP_DigestUpdate(ctx_, data, size) != 1) throw Error("SHA-256 update failed");
  }

  std::string hex() {
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int len = 0;
    if (EVP_DigestFinal_ex(ctx_, digest.data(), &len) != 1) {
      throw Error("SHA-256 finalisation failed");
    }
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    out.reserve(len * 2);
    for (unsigned int i = 0; i < len; ++i) {
      out.push_back(kHex[digest[i] >> 4]);
      out.push_back(kHex[digest[i] & 0xF]);
    }
    return out;
  }

 private:
  EVP_MD_CTX* ctx_;
};

}  // namespace

std::string sha256_hex(std::string_view bytes) {
  Sha256 hash;
  hash.update(bytes.data(), bytes.size());
  return hash.hex();
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path.string());
  Sha256 hash;
  std::array<char, kReadChunk> buffer{};
  while (in) {
    in.read(buffer.data(), buffer.size());
    if (in.gcount() > 0) hash.update(buffer.data(), static_cast<std::size_t>(in.gcount()));
  }
  if (in.bad()) throw IoError("read error in " + path.string());
  return hash.hex();
}

}  // namespace riddleforge
