#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <cstdio>
#include <memory>
#include <stdexcept>
#include <string>

namespace lpm {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using SpMat = Eigen::SparseMatrix<double, Eigen::RowMajor>;
using Index = Eigen::Index;

enum class ErrorCode {
  invalid_argument = 1,
  grid_mismatch,
  nonconvex,
  origin_outside,
  not_converged,
  solver_failure,
  precondition,
  io,
  schema,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) fail(code, what);
}

// Shortest %g rendering for messages.
inline std::string fmt_g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

}  // namespace lpm
