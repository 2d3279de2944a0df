#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace riddleforge {

// Base for every error raised by the library. Callers that only need to
// distinguish "bad input" from "I/O trouble" catch Error and IoError.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// A file was readable but its content is not in the expected format.
class FormatError : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class EmptyTerm : public Error {
 public:
  explicit EmptyTerm(const std::string& raw)
      : Error("term is empty after normalization: '" + raw + "'") {}
};

// Raised by ingest when the fraction of malformed records exceeds the cap.
class MalformedInput : public Error {
 public:
  MalformedInput(std::size_t malformed, std::size_t total)
      : Error("malformed records: " + std::to_string(malformed) + " of " +
              std::to_string(total) + " exceed the configured error cap"),
        malformed_(malformed),
        total_(total) {}

  std::size_t malformed() const { return malformed_; }
  std::size_t total() const { return total_; }

 private:
  std::size_t malformed_;
  std::size_t total_;
};

class UnmappedRelation : public Error {
 public:
  explicit UnmappedRelation(std::string relation)
      : Error("no surface template for relation '" + relation + "'"),
        relation_(std::move(relation)) {}

  const std::string& relation() const { return relation_; }

 private:
  std::string relation_;
};

class StepOutOfRange : public Error {
 public:
  using Error::Error;
};

class InsufficientData : public Error {
 public:
  using Error::Error;
};

class PoolExhausted : public Error {
 public:
  using Error::Error;
};

class NoPositive : public Error {
 public:
  using Error::Error;
};

class MissingScore : public Error {
 public:
  MissingScore(std::string query_id, std::string candidate_id)
      : Error("missing score for query '" + query_id + "', candidate '" +
              candidate_id + "'"),
        query_id_(std::move(query_id)),
        candidate_id_(std::move(candidate_id)) {}

  const std::string& query_id() const { return query_id_; }
  const std::string& candidate_id() const { return candidate_id_; }

 private:
  std::string query_id_;
  std::string candidate_id_;
};

}  // namespace riddleforge
