#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <string>
#include <utility>

namespace dwp {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

enum class ErrorCode {
  Argument,             // bad dimensions / invalid parameter
  Parse,                // malformed problem file
  NotPositiveDefinite,  // B^T B singular or indefinite: outside supported scope
  PoleEvaluation,       // secular function evaluated too close to a pole
  EmptyInterval,        // root search requested on an empty interval
  Unsupported,          // e.g. exhaustive scan requested for too large n
  Numeric,              // iteration cap reached / residual not driven down
  Internal,             // broken invariant; indicates a bug, not a valid outcome
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string what) : std::runtime_error(std::move(what)), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& msg) { throw Error(code, msg); }

inline void require(bool cond, ErrorCode code, const std::string& msg) {
  if (!cond) fail(code, msg);
}

}  // namespace dwp
