#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cws {

enum class ErrorKind {
  budget_exceeded,
  degenerate_input,
  not_sorted,
  not_a_mountain,
  retry_limit,
  round_cap,
  too_many_samples,
  conflict_overflow,
  parse,
  empty,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

class BudgetExceeded : public Error {
 public:
  BudgetExceeded(std::size_t requested, std::size_t limit)
      : Error(ErrorKind::budget_exceeded,
              "workspace budget exceeded: need " + std::to_string(requested) +
                  " words, limit " + std::to_string(limit)),
        requested_(requested),
        limit_(limit) {}
  std::size_t requested() const { return requested_; }
  std::size_t limit() const { return limit_; }

 private:
  std::size_t requested_;
  std::size_t limit_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& msg)
      : Error(ErrorKind::parse, "line " + std::to_string(line) + ": " + msg),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

}  // namespace cws
