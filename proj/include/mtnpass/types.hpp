#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace mtnpass {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

enum class ErrorCode {
  InvalidArgument,
  UnknownFunction,
  ParseError,
  EvaluationError,
  NoLineMax,
  CrossingOutsideRegion,
  BadDirection,
  DegenerateDenominator,
  NotConcaveAlongV,
  NoEstimate,
  NonSymmetric,
  SingularMatrix,
  NewtonBreakdown,
  AvStalled,
  CriticalCandidate,
  LUpImpossible,
  BadEndpoints,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace mtnpass
