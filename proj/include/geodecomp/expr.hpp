#pragma once

#include <memory>
#include <string>
#include <vector>

namespace geodecomp {

// Closed-form expression support for metric definitions.  The grammar covers
// +, -, *, /, ^, parentheses, numeric literals, the constants pi and e, the
// functions cosh, sinh, tanh, exp, log, sqrt, abs, cos, sin, and a fixed set
// of variables.  Which variables are legal depends on the caller: warp and
// curvature expressions may use (r, theta), revolution profiles use x.
//
// Parse errors carry 1-based line/column positions of the offending token.

struct ExprEnv {
  double r = 0.0;
  double theta = 0.0;
  double x = 0.0;
};

class Expr {
public:
  double eval(const ExprEnv& env) const;

  // Variables actually referenced by the expression.
  bool uses_r() const { return uses_r_; }
  bool uses_theta() const { return uses_theta_; }
  bool uses_x() const { return uses_x_; }

  const std::string& source() const { return source_; }

  // allowed: string over {'r','t','x'} listing permitted variables
  // ('t' stands for theta).  line0 offsets reported positions, so errors in
  // multi-line files point at the right file line.
  static Expr parse(const std::string& text, const std::string& allowed,
                    int line0 = 1, int col0 = 1);

  struct Node; // exposed for the parser implementation only

private:
  std::shared_ptr<const Node> root_;
  std::string source_;
  bool uses_r_ = false, uses_theta_ = false, uses_x_ = false;
};

} // namespace geodecomp
