#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace vrpdi {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  enum class Kind { Malformed, Truncated, Empty };

  ParseError(Kind kind, std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), kind_(kind), line_(line) {}

  Kind kind() const { return kind_; }
  std::size_t line() const { return line_; }

 private:
  Kind kind_;
  std::size_t line_;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// Raised by the decoder when a genotype breaks a rule that repair would fix.
class InfeasibleError : public Error {
 public:
  InfeasibleError(std::size_t gene_index, const std::string& what)
      : Error("gene " + std::to_string(gene_index) + ": " + what), gene_index_(gene_index) {}

  std::size_t gene_index() const { return gene_index_; }

 private:
  std::size_t gene_index_;
};

}  // namespace vrpdi
