#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace symcap {

using Complex = std::complex<double>;
using Eigen::Matrix2d;
using Eigen::Matrix4d;
using Eigen::MatrixXd;
using Eigen::Vector2d;
using Eigen::Vector4d;
using Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846264338327950288;

// ---------------------------------------------------------------------------
// Error types.  Callers that can recover catch the specific type; everything
// derives from std::runtime_error so the CLI can report uniformly.
// ---------------------------------------------------------------------------

struct ChartDegenerateError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SingularFormError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DomainViolationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ContainmentViolationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct EndpointMismatchError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InfeasibleContainmentError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NormalizationFailureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InsufficientPremisesError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct UnsupportedError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct StepFailureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct UnverifiedMapError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct MissingSideError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Deterministic random source.  All stochastic results in the library are
// driven by one of these; forking with a label gives independent streams that
// do not depend on evaluation order.
// ---------------------------------------------------------------------------

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed ^ 0x9e3779b97f4a7c15ull) {
    // warm up so that small seeds decorrelate
    for (int i = 0; i < 4; ++i) next();
  }

  std::uint64_t next() {
    // SplitMix64: tiny, portable, bit-stable across platforms.
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  double gauss() {
    // Box-Muller, one value per call (second discarded for simplicity).
    double u1 = uniform();
    double u2 = uniform();
    if (u1 < 1e-300) u1 = 1e-300;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
  }

  std::size_t index(std::size_t n) { return static_cast<std::size_t>(next() % n); }

  Rng fork(std::uint64_t label) const {
    return Rng(state_ * 0x2545f4914f6cdd1dull + label * 0x9e3779b97f4a7c15ull + 0x853c49e6748fea9bull);
  }

 private:
  std::uint64_t state_;
};

// Uniform point in the closed n-ball of given radius.
VectorXd sample_ball(Rng& rng, int dim, double radius);

// ---------------------------------------------------------------------------
// Numerical differentiation helpers.
// ---------------------------------------------------------------------------

// Central-difference Jacobian of f : R^n -> R^m.
MatrixXd fd_jacobian(const std::function<VectorXd(const VectorXd&)>& f, const VectorXd& x,
                     double h = 1e-5);

// Forward-mode scalar with a fixed number of partials, used where maps have
// gauge singularities that finite differences resolve poorly.
template <int N>
struct Jet {
  double v = 0.0;
  Eigen::Matrix<double, N, 1> d = Eigen::Matrix<double, N, 1>::Zero();

  Jet() = default;
  Jet(double value) : v(value) {}
  static Jet variable(double value, int slot) {
    Jet j(value);
    j.d[slot] = 1.0;
    return j;
  }

  friend Jet operator+(const Jet& a, const Jet& b) {
    Jet r(a.v + b.v);
    r.d = a.d + b.d;
    return r;
  }
  friend Jet operator-(const Jet& a, const Jet& b) {
    Jet r(a.v - b.v);
    r.d = a.d - b.d;
    return r;
  }
  friend Jet operator-(const Jet& a) {
    Jet r(-a.v);
    r.d = -a.d;
    return r;
  }
  friend Jet operator*(const Jet& a, const Jet& b) {
    Jet r(a.v * b.v);
    r.d = a.v * b.d + b.v * a.d;
    return r;
  }
  friend Jet operator/(const Jet& a, const Jet& b) {
    Jet r(a.v / b.v);
    r.d = (a.d - (a.v / b.v) * b.d) / b.v;
    return r;
  }
  friend Jet sqrt(const Jet& a) {
    double s = std::sqrt(a.v);
    Jet r(s);
    r.d = a.d / (2.0 * s);
    return r;
  }
};

struct MeanStderr {
  double mean = 0.0;
  double stderr_ = 0.0;
};

std::string format_double(double v);

}  // namespace symcap
