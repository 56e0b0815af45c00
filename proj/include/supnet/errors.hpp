#pragma once

#include <stdexcept>
#include <string>

namespace supnet {

enum class ErrorCode {
  usage,                 // malformed arguments, incompatible shapes
  capacity,              // instance too large for an exhaustive routine
  evaluation,            // a user handle returned a non-finite value
  uncovered,             // query point outside every partition bump
  epsilon_unattainable,  // sampling too sparse for the requested accuracy
  ill_conditioned,       // linear solve failed or produced garbage
  degenerate,            // subspace with no usable directions
  io,                    // file read/write/parse failure
};

/// Exception carrying a coarse category plus optional context: the sample
/// index that triggered the failure and a numeric detail (e.g. the smallest
/// center distance for an uncovered point).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, long index = -1, double detail = 0.0)
      : std::runtime_error(message), code_(code), index_(index), detail_(detail) {}

  ErrorCode code() const { return code_; }
  long index() const { return index_; }
  double detail() const { return detail_; }

 private:
  ErrorCode code_;
  long index_;
  double detail_;
};

}  // namespace supnet
