#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace citrank {

// Base class for every error the toolkit raises on purpose.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// A citation count below zero. `position` is the zero-based index for
// in-memory input, or the one-based line number for file input.
class NegativeCount : public Error {
 public:
  NegativeCount(std::size_t position, const std::string& context)
      : Error(context + ": negative citation count at position " +
              std::to_string(position)),
        position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

class EmptyInput : public Error {
 public:
  explicit EmptyInput(const std::string& context)
      : Error(context + ": empty input") {}
};

class TooFewPoints : public Error {
 public:
  TooFewPoints(std::size_t needed, std::size_t got)
      : Error("too few usable points: need " + std::to_string(needed) +
              ", got " + std::to_string(got)),
        needed_(needed),
        got_(got) {}
  std::size_t needed() const { return needed_; }
  std::size_t got() const { return got_; }

 private:
  std::size_t needed_;
  std::size_t got_;
};

class SingularDesign : public Error {
 public:
  explicit SingularDesign(const std::string& detail)
      : Error("singular design matrix: " + detail) {}
};

class InvalidConfig : public Error {
 public:
  explicit InvalidConfig(const std::string& detail)
      : Error("invalid config: " + detail) {}
};

class MalformedRow : public Error {
 public:
  MalformedRow(std::size_t line_no, const std::string& reason)
      : Error("line " + std::to_string(line_no) + ": " + reason),
        line_no_(line_no) {}
  std::size_t line_no() const { return line_no_; }

 private:
  std::size_t line_no_;
};

class MalformedDocument : public Error {
 public:
  explicit MalformedDocument(const std::string& reason)
      : Error("malformed document: " + reason) {}
};

class AuthorNotFound : public Error {
 public:
  explicit AuthorNotFound(const std::string& author_id)
      : Error("author not found: " + author_id) {}
};

class TransportError : public Error {
 public:
  explicit TransportError(const std::string& detail)
      : Error("transport error: " + detail) {}
};

class SchemaMismatch : public Error {
 public:
  explicit SchemaMismatch(const std::string& detail)
      : Error("schema mismatch: " + detail) {}
};

class MismatchedSets : public Error {
 public:
  explicit MismatchedSets(std::vector<std::string> ids)
      : Error(describe(ids)), ids_(std::move(ids)) {}
  const std::vector<std::string>& ids() const { return ids_; }

 private:
  static std::string describe(const std::vector<std::string>& ids) {
    std::string msg = "rankings cover different researcher sets;";
    std::size_t shown = 0;
    for (const auto& id : ids) {
      if (shown++ == 5) {
        msg += " ...";
        break;
      }
      msg += " " + id;
    }
    return msg;
  }

  std::vector<std::string> ids_;
};

}  // namespace citrank
