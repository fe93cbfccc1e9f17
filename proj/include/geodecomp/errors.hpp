#pragma once

#include <stdexcept>
#include <string>

namespace geodecomp {

// Error taxonomy shared by the whole library.  The CLI maps these to distinct
// process exit codes, so codes must stay stable.
enum class ErrorCode {
  ParseError,          // malformed expression / surface spec / CLI input
  DomainViolation,     // query outside a chart or profile domain
  DegenerateMetric,    // warp factor hit zero while integrating
  InvalidProfile,      // revolution profile not positive / not finite
  InvalidBoundary,     // boundary loop is not geodesic (funnel attachment)
  InvalidCurve,        // curve fails closure / validity checks
  InvalidMesh,         // triangle inequality, non-manifold edge, ...
  RejectedWitness,     // growth witness violates its own differential bound
  UnsupportedBoundary, // curvature integral over a piece we cannot certify
  UnsupportedTopology, // decomposition hypothesis fails (torus, disk, ...)
  Inconclusive,        // iteration budget exhausted without a certificate
  IoError,             // file system problems
};

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& msg)
      : std::runtime_error(msg), code_(code) {}

  ErrorCode code() const { return code_; }

private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& msg) {
  throw Error(code, msg);
}

} // namespace geodecomp
