#include "symcap/core.hpp"

#include <cstdio>

namespace symcap {

VectorXd sample_ball(Rng& rng, int dim, double radius) {
  VectorXd v(dim);
  double n2 = 0.0;
  do {
    n2 = 0.0;
    for (int i = 0; i < dim; ++i) {
      v[i] = rng.gauss();
      n2 += v[i] * v[i];
    }
  } while (n2 < 1e-280);
  double u = rng.uniform();
  double scale = radius * std::pow(u, 1.0 / dim) / std::sqrt(n2);
  return scale * v;
}

MatrixXd fd_jacobian(const std::function<VectorXd(const VectorXd&)>& f, const VectorXd& x,
                     double h) {
  VectorXd fx = f(x);
  MatrixXd J(fx.size(), x.size());
  for (int j = 0; j < x.size(); ++j) {
    VectorXd xp = x, xm = x;
    xp[j] += h;
    xm[j] -= h;
    J.col(j) = (f(xp) - f(xm)) / (2.0 * h);
  }
  return J;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace symcap
