#include "geodecomp/comparison.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "geodecomp/errors.hpp"

namespace geodecomp {

void GrowthWitness::validate() const {
  if (!(c > 0.0)) fail(ErrorCode::RejectedWitness, "witness needs c > 0");
  std::size_t n = t.size();
  if (n == 0 || y.size() != n || dy.size() != n || ddy.size() != n)
    fail(ErrorCode::RejectedWitness, "witness sample columns mismatch");
  if (t.front() < t0 - 1e-12)
    fail(ErrorCode::RejectedWitness, "witness samples start before t0");
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0 && !(t[i] > t[i - 1]))
      fail(ErrorCode::RejectedWitness,
           "witness samples must be strictly increasing in t");
    if (!(y[i] > 0.0)) {
      std::ostringstream os;
      os << "witness y must stay positive; y(" << t[i] << ") = " << y[i];
      fail(ErrorCode::RejectedWitness, os.str());
    }
  }
}

GrowthWitness GrowthWitness::from_csv(const std::string& path, double c,
                                      double t0) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::IoError, "cannot open witness file: " + path);
  GrowthWitness w;
  w.c = c;
  w.t0 = t0;
  std::string line;
  if (!std::getline(in, line) || line.rfind("t,y,dy,ddy", 0) != 0)
    fail(ErrorCode::ParseError, "witness CSV must start with header t,y,dy,ddy");
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream row(line);
    double vals[4];
    char comma;
    if (!(row >> vals[0] >> comma >> vals[1] >> comma >> vals[2] >> comma >>
          vals[3])) {
      std::ostringstream os;
      os << "witness CSV line " << lineno << " is malformed";
      fail(ErrorCode::ParseError, os.str());
    }
    w.t.push_back(vals[0]);
    w.y.push_back(vals[1]);
    w.dy.push_back(vals[2]);
    w.ddy.push_back(vals[3]);
  }
  w.validate();
  return w;
}

double linear_growth_solution(double c, double t0, double y0, double dy0,
                              double t) {
  if (!(c > 0.0)) fail(ErrorCode::DomainViolation, "c must be positive");
  double u = c * (t - t0);
  return y0 * std::cosh(u) + (dy0 / c) * std::sinh(u);
}

double cosh_lower_bound(double c, double t0, double y_t0, double t) {
  if (!(c > 0.0)) fail(ErrorCode::DomainViolation, "c must be positive");
  if (t < t0)
    fail(ErrorCode::DomainViolation, "cosh_lower_bound needs t >= t0");
  return y_t0 * std::cosh(c * (t - t0));
}

ComparisonReport verify_comparison(const GrowthWitness& witness,
                                   double dy0_cap, double tolerance) {
  witness.validate();
  const double c2 = witness.c * witness.c;
  for (std::size_t i = 0; i < witness.t.size(); ++i) {
    // Differential hypothesis y'' >= c^2 y with relative slack, resolved in
    // the witness's favor; a violation is a bad witness, not a comparison
    // failure.
    double slack = 1e-8 * std::abs(witness.ddy[i]);
    if (witness.ddy[i] < c2 * witness.y[i] - slack) {
      std::ostringstream os;
      os << "witness violates y'' >= c^2 y at t = " << witness.t[i]
         << " (y'' = " << witness.ddy[i] << ", c^2 y = " << c2 * witness.y[i]
         << ")";
      fail(ErrorCode::RejectedWitness, os.str());
    }
  }

  double anchor_t = witness.t.front();
  double y0 = witness.y.front();
  double dy0 = std::min(witness.dy.front(), dy0_cap);

  ComparisonReport rep;
  rep.holds = true;
  rep.worst_margin = std::numeric_limits<double>::infinity();
  rep.worst_t = anchor_t;
  for (std::size_t i = 0; i < witness.t.size(); ++i) {
    double comparator =
        linear_growth_solution(witness.c, anchor_t, y0, dy0, witness.t[i]);
    double margin = witness.y[i] - comparator;
    if (margin < rep.worst_margin) {
      rep.worst_margin = margin;
      rep.worst_t = witness.t[i];
    }
    if (margin < -tolerance) rep.holds = false;
  }
  return rep;
}

} // namespace geodecomp
