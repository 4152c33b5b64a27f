#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace qseries {

enum class ErrorKind {
  pole_detected,
  non_convergent,
  zero_argument,
  sampling_exhausted,
  invalid_input,
};

class QSeriesError : public std::runtime_error {
 public:
  QSeriesError(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// A denominator factor vanished (or came within the pole threshold of zero).
// `index` is the Pochhammer / summation index at which it happened and
// `parameter` the position of the offending parameter, when known.
class PoleDetected : public QSeriesError {
 public:
  PoleDetected(const std::string& what, long index,
               std::optional<std::size_t> parameter = std::nullopt)
      : QSeriesError(ErrorKind::pole_detected, what),
        index_(index),
        parameter_(parameter) {}

  long index() const noexcept { return index_; }
  std::optional<std::size_t> parameter() const noexcept { return parameter_; }

 private:
  long index_;
  std::optional<std::size_t> parameter_;
};

class NonConvergent : public QSeriesError {
 public:
  explicit NonConvergent(const std::string& what)
      : QSeriesError(ErrorKind::non_convergent, what) {}
};

class ZeroArgument : public QSeriesError {
 public:
  explicit ZeroArgument(const std::string& what)
      : QSeriesError(ErrorKind::zero_argument, what) {}
};

class SamplingExhausted : public QSeriesError {
 public:
  explicit SamplingExhausted(const std::string& what)
      : QSeriesError(ErrorKind::sampling_exhausted, what) {}
};

class InvalidInput : public QSeriesError {
 public:
  explicit InvalidInput(const std::string& what)
      : QSeriesError(ErrorKind::invalid_input, what) {}
};

}  // namespace qseries
