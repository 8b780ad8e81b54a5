#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace egowsd {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Malformed input at a known location. `line` is 1-based, 0 when unknown.
class ParseError : public Error {
 public:
  ParseError(std::string file, std::size_t line, const std::string& what)
      : Error(file + (line ? ":" + std::to_string(line) : std::string()) + ": " + what),
        file_(std::move(file)),
        line_(line) {}

  const std::string& file() const noexcept { return file_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string file_;
  std::size_t line_;
};

class Utf8Error : public Error {
 public:
  Utf8Error(const std::string& source, std::size_t byte_offset)
      : Error(source + ": invalid UTF-8 at byte offset " + std::to_string(byte_offset)),
        byte_offset_(byte_offset) {}

  std::size_t byte_offset() const noexcept { return byte_offset_; }

 private:
  std::size_t byte_offset_;
};

class UnknownWordError : public Error {
 public:
  explicit UnknownWordError(std::string word)
      : Error("unknown word: " + word), word_(std::move(word)) {}

  const std::string& word() const noexcept { return word_; }

 private:
  std::string word_;
};

class ModelNotLoadedError : public Error {
 public:
  ModelNotLoadedError() : Error("model not loaded") {}
};

class NotFoundError : public Error {
 public:
  using Error::Error;
};

class IncompleteModelError : public Error {
 public:
  explicit IncompleteModelError(const std::string& path)
      : Error("incomplete model: " + path + " has no COMPLETE marker") {}
};

class CountMismatchError : public Error {
 public:
  using Error::Error;
};

class VersionError : public Error {
 public:
  using Error::Error;
};

}  // namespace egowsd
