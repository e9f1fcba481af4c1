#include "symcap/dynamics.hpp"

#include <algorithm>

namespace symcap {

namespace {

void other_indices(int chart, int& a, int& b) {
  a = (chart == 0) ? 1 : 0;
  b = (chart == 2) ? 1 : 2;
}

// Gradient (in chart coordinates) of (pi/2) |z_j|^2 / |z|^2 on a projective
// kind, times `scale`.
VectorXd moment_coord_gradient(const ManifoldModel& m, const PointRepr& p, int chart, int j,
                               double scale) {
  const double half_pi = 0.5 * kPi;
  if (m.kind == ManifoldKind::CP1) {
    VectorXd c = chart_coords(m, p, chart);
    double s = 1.0 + c.squaredNorm();
    VectorXd g(2);
    if (j == chart)
      g = -(half_pi * scale) * 2.0 / (s * s) * c;
    else
      g = (half_pi * scale) * 2.0 * (s - c.squaredNorm()) / (s * s) * c;
    return g;
  }
  VectorXd c = chart_coords(m, p, chart);
  double na = c[0] * c[0] + c[1] * c[1];
  double nb = c[2] * c[2] + c[3] * c[3];
  double s = 1.0 + na + nb;
  int a, b;
  other_indices(chart, a, b);
  VectorXd g = VectorXd::Zero(4);
  if (j == chart) {
    g = -(half_pi * scale) * 2.0 / (s * s) * c;
  } else if (j == a) {
    double f = (half_pi * scale);
    g[0] = f * 2.0 * c[0] * (s - na) / (s * s);
    g[1] = f * 2.0 * c[1] * (s - na) / (s * s);
    g[2] = -f * na * 2.0 * c[2] / (s * s);
    g[3] = -f * na * 2.0 * c[3] / (s * s);
  } else {
    double f = (half_pi * scale);
    g[0] = -f * nb * 2.0 * c[0] / (s * s);
    g[1] = -f * nb * 2.0 * c[1] / (s * s);
    g[2] = f * 2.0 * c[2] * (s - nb) / (s * s);
    g[3] = f * 2.0 * c[3] * (s - nb) / (s * s);
  }
  return g;
}

VectorXd fd_chart_gradient(const HamiltonianFn& H, const PointRepr& p, double t, int chart) {
  VectorXd y = chart_coords(H.manifold, p, chart);
  auto f = [&](const VectorXd& v) {
    VectorXd out(1);
    out[0] = H.value(point_from_chart(H.manifold, chart, v), t);
    return out;
  };
  return fd_jacobian(f, y, 1e-6).row(0).transpose();
}

double rotation_moment(const PointRepr& p, int j) {
  return 0.5 * kPi * std::norm(p.z[j]) / p.norm_sq();
}

PointRepr rotate_coordinate(const PointRepr& p, int j, double angle) {
  std::array<Complex, 3> z = p.z;
  z[j] *= std::polar(1.0, angle);
  PointRepr q;
  q.z = z;
  q.disk = p.disk;
  q.canonicalize();
  return q;
}

// Keep ascent iterates inside the model (blow-up annulus, disk radius).
PointRepr clamp_to_domain(const ManifoldModel& m, PointRepr p) {
  if (m.kind == ManifoldKind::BlowupCP2) {
    double l2 = m.lambda * m.lambda;
    double r2 = p.rho_sq();
    if (r2 < l2) {
      double srho = std::sqrt(r2);
      double target = m.lambda;
      Complex z1 = p.z[1], z2 = p.z[2];
      if (srho < 1e-14) {
        z1 = Complex(target, 0);
        z2 = Complex(0, 0);
      } else {
        z1 *= target / srho;
        z2 *= target / srho;
      }
      double z0m = std::sqrt(std::max(0.0, 1.0 - target * target));
      Complex z0 = (std::abs(p.z[0]) > 1e-14) ? p.z[0] * (z0m / std::abs(p.z[0]))
                                              : Complex(z0m, 0);
      p = PointRepr::projective(z0, z1, z2);
    }
  }
  if (m.has_disk_factor()) {
    double rmax = std::sqrt(m.disk_area / kPi) * (1.0 - 1e-12);
    double r = p.disk.norm();
    if (r > rmax) p.disk *= rmax / r;
  }
  return p;
}

}  // namespace

// --- builders -----------------------------------------------------------------

HamiltonianFn make_P(const ManifoldModel& m, double scale) {
  if (!m.projective()) throw UnsupportedError("P is defined on projective models");
  HamiltonianFn H;
  H.manifold = m;
  H.name = (scale == 1.0) ? "P" : (format_double(scale) + "*P");
  H.autonomous = true;
  H.value = [scale](const PointRepr& p, double) { return scale * rotation_moment(p, 0); };
  H.chart_gradient = [m, scale](const PointRepr& p, double, int chart) {
    return moment_coord_gradient(m, p, chart, 0, scale);
  };
  H.closed_flow = [m, scale](const PointRepr& p, double t) {
    return rotate_coordinate(p, 0, kPi * scale * t);
  };
  double osc = 0.5 * kPi * scale;
  if (m.kind == ManifoldKind::BlowupCP2) osc *= (1.0 - m.lambda * m.lambda);
  H.analytic_osc = [osc](double) { return osc; };
  H.analytic_mean = scale * mean_moment_x(m);
  H.min_period_analytic = 2.0 / scale;
  return H;
}

HamiltonianFn make_Q(const ManifoldModel& m, double scale) {
  if (!m.projective()) throw UnsupportedError("Q is defined on projective models");
  HamiltonianFn H;
  H.manifold = m;
  H.name = (scale == 1.0) ? "Q" : (format_double(scale) + "*Q");
  H.autonomous = true;
  H.value = [scale](const PointRepr& p, double) { return scale * rotation_moment(p, 1); };
  H.chart_gradient = [m, scale](const PointRepr& p, double, int chart) {
    return moment_coord_gradient(m, p, chart, 1, scale);
  };
  H.closed_flow = [m, scale](const PointRepr& p, double t) {
    return rotate_coordinate(p, 1, kPi * scale * t);
  };
  double osc = 0.5 * kPi * scale;  // L(Q) is pi/2 on CP2 and on the blow-up
  H.analytic_osc = [osc](double) { return osc; };
  H.analytic_mean = scale * mean_moment_y(m);
  H.min_period_analytic = 2.0 / scale;
  return H;
}

HamiltonianFn make_zero(const ManifoldModel& m) {
  HamiltonianFn H;
  H.manifold = m;
  H.name = "0";
  H.autonomous = true;
  H.value = [](const PointRepr&, double) { return 0.0; };
  H.chart_gradient = [m](const PointRepr& p, double, int chart) {
    return VectorXd::Zero(chart_coords(m, p, chart).size()).eval();
  };
  H.closed_flow = [](const PointRepr& p, double) { return p; };
  H.analytic_osc = [](double) { return 0.0; };
  H.analytic_mean = 0.0;
  return H;
}

HamiltonianFn make_reparam_P(const ManifoldModel& m, double beta) {
  if (!(beta >= 0.0 && beta < 1.0))
    throw DomainViolationError("reparametrization requires 0 <= beta < 1");
  HamiltonianFn base = make_P(m);
  auto fp = [beta](double t) { return 1.0 - beta * std::cos(2.0 * kPi * t); };
  auto f = [beta](double t) { return t - beta * std::sin(2.0 * kPi * t) / (2.0 * kPi); };
  HamiltonianFn H;
  H.manifold = m;
  H.name = "P_reparam(beta=" + format_double(beta) + ")";
  H.autonomous = false;
  H.value = [base, fp](const PointRepr& p, double t) { return fp(t) * base.value(p, 0.0); };
  H.chart_gradient = [base, fp](const PointRepr& p, double t, int chart) {
    return (fp(t) * base.chart_gradient(p, 0.0, chart)).eval();
  };
  H.closed_flow = [base, f](const PointRepr& p, double t) { return base.closed_flow(p, f(t)); };
  double oscP = base.analytic_osc(0.0);
  H.analytic_osc = [oscP, fp](double t) { return fp(t) * oscP; };
  H.analytic_mean = base.analytic_mean;  // integral of f' over [0,1] is 1
  return H;
}

RadialBump make_radial_bump(const ManifoldModel& m, double sup_fp) {
  if (!m.has_disk_factor()) throw UnsupportedError("radial bump needs a disk factor");
  double a = m.disk_area;
  // f'(I) = sup_fp * T(I/a) with T a smooth trapezoid: smoothstep ramps of
  // width d, plateau in [u0+d, u1-d].
  const double u0 = 0.01, u1 = 0.99, d = 0.06;
  auto smoothstep = [](double t) {
    t = std::clamp(t, 0.0, 1.0);
    return t * t * (3.0 - 2.0 * t);
  };
  auto T = [=](double u) {
    if (u <= u0 || u >= u1) return 0.0;
    if (u < u0 + d) return smoothstep((u - u0) / d);
    if (u > u1 - d) return smoothstep((u1 - u) / d);
    return 1.0;
  };
  // integral of T from 0 to u (each ramp integrates to d/2)
  auto Tint = [=](double u) {
    u = std::clamp(u, 0.0, 1.0);
    if (u <= u0) return 0.0;
    if (u < u0 + d) {
      double t = (u - u0) / d;
      return d * (t * t * t - 0.5 * t * t * t * t);
    }
    if (u <= u1 - d) return 0.5 * d + (u - u0 - d);
    if (u < u1) {
      double t = (u1 - u) / d;
      return 0.5 * d + (u1 - 2.0 * d - u0) + d * (0.5 - (t * t * t - 0.5 * t * t * t * t));
    }
    return 0.5 * d + (u1 - 2.0 * d - u0) + 0.5 * d;
  };
  double maxval = sup_fp * a * Tint(1.0);

  HamiltonianFn H;
  H.manifold = m;
  H.name = "radial_bump(sup_fp=" + format_double(sup_fp) + ")";
  H.autonomous = true;
  H.value = [=](const PointRepr& p, double) {
    double I = kPi * p.disk.squaredNorm();
    return sup_fp * a * Tint(I / a);
  };
  H.chart_gradient = [=](const PointRepr& p, double, int chart) {
    int n = static_cast<int>(chart_coords(m, p, chart).size());
    VectorXd g = VectorXd::Zero(n);
    double I = kPi * p.disk.squaredNorm();
    double fp = sup_fp * T(I / a);
    g[n - 2] = fp * 2.0 * kPi * p.disk[0];
    g[n - 1] = fp * 2.0 * kPi * p.disk[1];
    return g;
  };
  // orbits rotate the disk factor at angle rate 2 pi f'(I); period 1/f'(I)
  H.closed_flow = [=](const PointRepr& p, double t) {
    double I = kPi * p.disk.squaredNorm();
    double fp = sup_fp * T(I / a);
    double ang = 2.0 * kPi * fp * t;
    PointRepr q = p;
    double c = std::cos(ang), s = std::sin(ang);
    q.disk = Vector2d(c * p.disk[0] - s * p.disk[1], s * p.disk[0] + c * p.disk[1]);
    return q;
  };
  H.analytic_osc = [maxval](double) { return maxval; };
  {
    // mean over the disk factor: (1/a) int_0^a f(I) dI, Simpson
    int n = 2048;
    double acc = 0.0, h = 1.0 / n;
    auto fI = [&](double u) { return sup_fp * a * Tint(u); };
    for (int i = 0; i < n; i += 2)
      acc += h / 3.0 * (fI(i * h) + 4.0 * fI((i + 1) * h) + fI((i + 2) * h));
    H.analytic_mean = acc;
  }
  H.min_period_analytic = 1.0 / sup_fp;

  RadialBump bump;
  bump.H = H;
  bump.sup_fp = sup_fp;
  bump.max_value = maxval;
  bump.plateau_lo = (u0 + d) * a;
  bump.plateau_hi = (u1 - d) * a;
  return bump;
}

// --- vector field ---------------------------------------------------------------

VectorXd hamiltonian_vector_field(const HamiltonianFn& H, const PointRepr& p, double t,
                                  int chart) {
  MatrixXd omega = symplectic_form_matrix(H.manifold, p, chart);
  VectorXd g = H.chart_gradient ? H.chart_gradient(p, t, chart)
                                : fd_chart_gradient(H, p, t, chart);
  Eigen::PartialPivLU<MatrixXd> lu(omega);
  VectorXd X = lu.solve(g);
  if ((omega * X - g).norm() > 1e-10 * std::max(1.0, g.norm()))
    throw SingularFormError("form matrix numerically singular");
  return X;
}

VectorXd hamiltonian_vector_field(const HamiltonianFn& H, const PointRepr& p, double t) {
  return hamiltonian_vector_field(H, p, t, best_chart(H.manifold, p));
}

// --- integrator -----------------------------------------------------------------

namespace {

struct IntegratorState {
  int chart = 0;
  VectorXd y;
  double t = 0.0;
};

// Dormand-Prince 5(4) coefficients
const double A21 = 1.0 / 5;
const double A31 = 3.0 / 40, A32 = 9.0 / 40;
const double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9;
const double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187, A53 = 64448.0 / 6561,
             A54 = -212.0 / 729;
const double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247, A64 = 49.0 / 176,
             A65 = -5103.0 / 18656;
const double B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192, B5 = -2187.0 / 6784,
             B6 = 11.0 / 84;
const double E1 = 35.0 / 384 - 5179.0 / 57600, E3 = 500.0 / 1113 - 7571.0 / 16695,
             E4 = 125.0 / 192 - 393.0 / 640, E5 = -2187.0 / 6784 + 92097.0 / 339200,
             E6 = 11.0 / 84 - 187.0 / 2100, E7 = -1.0 / 40;
const double C2 = 1.0 / 5, C3 = 3.0 / 10, C4 = 4.0 / 5, C5 = 8.0 / 9;

}  // namespace

Trajectory flow(const HamiltonianFn& H, const PointRepr& x0, double t_end, double tol,
                int sample_count) {
  if (!(tol > 0.0)) throw DomainViolationError("flow: tol must be positive");
  if (!(t_end >= 0.0 && t_end <= 4.0 + 1e-12))
    throw DomainViolationError("flow: t_end must lie in [0, 4]");

  const ManifoldModel& m = H.manifold;
  Trajectory traj;
  IntegratorState st;
  st.chart = best_chart(m, x0);
  st.y = chart_coords(m, x0, st.chart);
  st.t = 0.0;

  auto rhs = [&](double t, int chart, const VectorXd& y) {
    PointRepr p = point_from_chart(m, chart, y);
    return hamiltonian_vector_field(H, p, t, chart);
  };

  double H0 = H.value(x0, 0.0);
  traj.samples.emplace_back(0.0, x0);
  if (t_end == 0.0) return traj;

  double local_tol = tol / 10.0;
  double h = std::min(0.01, t_end);
  sample_count = std::max(sample_count, 2);

  for (int si = 1; si < sample_count; ++si) {
    double target = t_end * si / (sample_count - 1);
    while (st.t < target - 1e-15) {
      h = std::min(h, target - st.t);
      if (h < 1e-14)
        throw StepFailureError("step underflow at t=" + format_double(st.t));
      VectorXd k1 = rhs(st.t, st.chart, st.y);
      VectorXd k2 = rhs(st.t + C2 * h, st.chart, st.y + h * (A21 * k1));
      VectorXd k3 = rhs(st.t + C3 * h, st.chart, st.y + h * (A31 * k1 + A32 * k2));
      VectorXd k4 = rhs(st.t + C4 * h, st.chart, st.y + h * (A41 * k1 + A42 * k2 + A43 * k3));
      VectorXd k5 = rhs(st.t + C5 * h, st.chart,
                        st.y + h * (A51 * k1 + A52 * k2 + A53 * k3 + A54 * k4));
      VectorXd k6 = rhs(st.t + h, st.chart,
                        st.y + h * (A61 * k1 + A62 * k2 + A63 * k3 + A64 * k4 + A65 * k5));
      VectorXd y5 = st.y + h * (B1 * k1 + B3 * k3 + B4 * k4 + B5 * k5 + B6 * k6);
      VectorXd k7 = rhs(st.t + h, st.chart, y5);
      VectorXd errv = h * (E1 * k1 + E3 * k3 + E4 * k4 + E5 * k5 + E6 * k6 + E7 * k7);
      double scale = local_tol * (1.0 + st.y.norm());
      double err = errv.norm() / scale;
      if (err <= 1.0) {
        st.t += h;
        st.y = y5;
        ++traj.steps;
        traj.max_local_error = std::max(traj.max_local_error, errv.norm());
        // chart switching keeps coordinates well conditioned
        if (m.projective() ||
            (m.kind == ManifoldKind::ProductWithDisk && m.base->projective())) {
          PointRepr p = point_from_chart(m, st.chart, st.y);
          const ManifoldModel& pm =
              (m.kind == ManifoldKind::ProductWithDisk) ? *m.base : m;
          int nb = best_chart(m, p);
          double cur = std::norm(p.z[st.chart]);
          double bst = std::norm(p.z[nb]);
          if (nb != st.chart && (cur < 0.25 || bst > cur + 0.1)) {
            (void)pm;
            st.chart = nb;
            st.y = chart_coords(m, p, st.chart);
          }
        }
      } else {
        ++traj.rejected;
      }
      double fac = 0.9 * std::pow(std::max(err, 1e-10), -0.2);
      h *= std::clamp(fac, 0.2, 5.0);
      h = std::min(h, t_end);
    }
    PointRepr p = point_from_chart(m, st.chart, st.y);
    traj.samples.emplace_back(target, p);
    if (H.autonomous) {
      double drift = std::abs(H.value(p, 0.0) - H0);
      traj.energy_drift = std::max(traj.energy_drift, drift);
    }
  }
  return traj;
}

PointRepr flow_point(const HamiltonianFn& H, const PointRepr& x0, double t_end, double tol) {
  if (t_end <= 0.0) return x0;
  return flow(H, x0, t_end, tol, 2).samples.back().second;
}

PointRepr closed_form_flow(NamedFlow which, const ManifoldModel& m, const PointRepr& x0,
                           double t, double scale) {
  if (!m.projective()) throw UnsupportedError("closed-form flow on projective models only");
  int j = (which == NamedFlow::P) ? 0 : 1;
  return rotate_coordinate(x0, j, kPi * scale * t);
}

// --- Hofer length -----------------------------------------------------------------

namespace {

double ascent_refine(const HamiltonianFn& H, double t, PointRepr p, double sign,
                     int max_iters = 300) {
  const ManifoldModel& m = H.manifold;
  double best = sign * H.value(p, t);
  for (int it = 0; it < max_iters; ++it) {
    int chart = best_chart(m, p);
    VectorXd y = chart_coords(m, p, chart);
    VectorXd g;
    try {
      g = H.chart_gradient ? H.chart_gradient(p, t, chart) : fd_chart_gradient(H, p, t, chart);
    } catch (const ChartDegenerateError&) {
      break;
    }
    g *= sign;
    if (g.norm() < 1e-13) break;
    double alpha = 1.0;
    bool improved = false;
    for (int ls = 0; ls < 45; ++ls) {
      PointRepr q = clamp_to_domain(m, point_from_chart(m, chart, (y + alpha * g).eval()));
      double v = sign * H.value(q, t);
      if (v > best + 1e-16) {
        best = v;
        p = q;
        improved = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!improved) break;
  }
  return sign * best;
}

}  // namespace

std::pair<double, double> slice_extrema_refined(const HamiltonianFn& H, double t, int samples,
                                                Rng& rng) {
  PointRepr best_max, best_min;
  double vmax = -std::numeric_limits<double>::infinity();
  double vmin = std::numeric_limits<double>::infinity();
  for (int i = 0; i < samples; ++i) {
    PointRepr p = sample_point(H.manifold, rng);
    double v = H.value(p, t);
    if (v > vmax) {
      vmax = v;
      best_max = p;
    }
    if (v < vmin) {
      vmin = v;
      best_min = p;
    }
  }
  double refined_max = ascent_refine(H, t, best_max, +1.0);
  double refined_min = ascent_refine(H, t, best_min, -1.0);
  return {refined_min, refined_max};
}

HoferLength hofer_length(const HamiltonianFn& H, int time_steps, int spatial_samples,
                         Rng& rng) {
  if (time_steps < 1 || spatial_samples < 1)
    throw DomainViolationError("hofer_length: sample counts must be >= 1");
  if (H.autonomous) {
    auto [lo, hi] = slice_extrema_refined(H, 0.0, spatial_samples, rng);
    return {hi - lo, 1e-12};
  }
  int n = time_steps;
  if (n % 2 == 1) ++n;  // Simpson needs an even interval count
  std::vector<double> osc(n + 1);
  for (int i = 0; i <= n; ++i) {
    double t = static_cast<double>(i) / n;
    Rng sub = rng.fork(1000 + i);
    auto [lo, hi] = slice_extrema_refined(H, t, spatial_samples, sub);
    osc[i] = hi - lo;
  }
  double simpson = 0.0, trapezoid = 0.0;
  double hstep = 1.0 / n;
  for (int i = 0; i < n; i += 2)
    simpson += hstep / 3.0 * (osc[i] + 4.0 * osc[i + 1] + osc[i + 2]);
  for (int i = 0; i < n; ++i) trapezoid += 0.5 * hstep * (osc[i] + osc[i + 1]);
  return {simpson, std::max(1e-12, std::abs(simpson - trapezoid))};
}

double hofer_length_analytic(const HamiltonianFn& H) {
  if (!H.analytic_osc) throw UnsupportedError("no analytic oscillation for " + H.name);
  if (H.autonomous) return H.analytic_osc(0.0);
  int n = 4096;
  double acc = 0.0, h = 1.0 / n;
  for (int i = 0; i < n; i += 2)
    acc += h / 3.0 *
           (H.analytic_osc(i * h) + 4.0 * H.analytic_osc((i + 1) * h) +
            H.analytic_osc((i + 2) * h));
  return acc;
}

// --- closed trajectories ------------------------------------------------------------

namespace {

TrajectoryClassification classify_one(const HamiltonianFn& H, const PointRepr& p0,
                                      const OrbitSearchOptions& opts) {
  TrajectoryClassification out;
  out.start = p0;
  const ManifoldModel& m = H.manifold;
  try {
    VectorXd X = hamiltonian_vector_field(H, p0, 0.0);
    out.field_norm = X.norm();
    if (out.field_norm < opts.field_tol) {
      out.verdict = OrbitVerdict::Fixed;
      return out;
    }
    double T_hi = std::min(opts.T_max * 1.05 + 1e-3, 4.0);
    Trajectory traj = flow(H, p0, T_hi, opts.integrator_tol, opts.dense_samples);
    std::vector<double> d(traj.samples.size());
    for (std::size_t i = 0; i < traj.samples.size(); ++i)
      d[i] = point_distance(m, p0, traj.samples[i].second);
    out.return_dist = std::numeric_limits<double>::infinity();
    double bracket_thresh = std::max(100.0 * opts.return_tol, 0.05);
    double best_T = 0.0;
    for (std::size_t i = 2; i + 1 < traj.samples.size(); ++i) {
      if (d[i] <= d[i - 1] && d[i] <= d[i + 1] && d[i] < bracket_thresh) {
        // golden-section refinement of the return-distance minimum
        double a = traj.samples[i - 1].first, b = traj.samples[i + 1].first;
        auto dist_at = [&](double T) {
          return point_distance(m, p0, flow_point(H, p0, T, opts.integrator_tol));
        };
        const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
        double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
        double f1 = dist_at(x1), f2 = dist_at(x2);
        while (b - a > 1e-7) {
          if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = dist_at(x1);
          } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = dist_at(x2);
          }
        }
        double T = 0.5 * (a + b);
        double dv = dist_at(T);
        if (dv < out.return_dist) {
          out.return_dist = dv;
          best_T = T;
        }
        if (dv < opts.return_tol) break;
      }
    }
    if (std::isfinite(out.return_dist) && out.return_dist < opts.return_tol &&
        best_T > 1e-9 && best_T <= opts.T_max * (1.0 + 1e-4) + 1e-6) {
      out.verdict = OrbitVerdict::Periodic;
      out.period = best_T;
    } else {
      out.verdict = OrbitVerdict::NonReturning;
      if (!std::isfinite(out.return_dist))
        out.return_dist = *std::min_element(d.begin() + 1, d.end());
    }
  } catch (const StepFailureError&) {
    out.verdict = OrbitVerdict::Inconclusive;
  }
  return out;
}

}  // namespace

std::vector<TrajectoryClassification> classify_starts(const HamiltonianFn& H,
                                                      const std::vector<PointRepr>& starts,
                                                      const OrbitSearchOptions& opts) {
  if (!H.autonomous) throw UnsupportedError("orbit detection requires an autonomous H");
  std::vector<TrajectoryClassification> out;
  out.reserve(starts.size());
  for (const auto& p : starts) out.push_back(classify_one(H, p, opts));
  return out;
}

std::vector<TrajectoryClassification> detect_closed_trajectories(const HamiltonianFn& H,
                                                                 double T_max, int n_starts,
                                                                 Rng& rng,
                                                                 const OrbitSearchOptions& o) {
  if (T_max > 4.0 + 1e-12) throw DomainViolationError("T_max must be <= 4");
  OrbitSearchOptions opts = o;
  opts.T_max = T_max;
  std::vector<PointRepr> starts;
  starts.reserve(n_starts);
  for (int i = 0; i < n_starts; ++i) starts.push_back(sample_point(H.manifold, rng));
  return classify_starts(H, starts, opts);
}

Certificate no_short_trajectory_check(const HamiltonianFn& H, int n_starts, Rng& rng) {
  if (!H.autonomous) throw UnsupportedError("no_short_trajectory_check requires autonomous H");
  auto results = detect_closed_trajectories(H, 1.0, n_starts, rng);
  Certificate cert;
  cert.kind = CertificateKind::NoShortOrbit;
  cert.title = "no non-constant closed trajectory in time <= 1 for " + H.name + " on " +
               H.manifold.label();
  cert.analytic = H.min_period_analytic > 0.0;
  int n_periodic = 0, n_fixed = 0, n_inconclusive = 0;
  double witness_period = 0.0;
  double min_return = std::numeric_limits<double>::infinity();
  for (const auto& r : results) {
    if (r.verdict == OrbitVerdict::Periodic) {
      ++n_periodic;
      if (witness_period == 0.0 || r.period < witness_period) witness_period = r.period;
    } else if (r.verdict == OrbitVerdict::Fixed) {
      ++n_fixed;
    } else if (r.verdict == OrbitVerdict::Inconclusive) {
      ++n_inconclusive;
    } else {
      min_return = std::min(min_return, r.return_dist);
    }
  }
  cert.pass = (n_periodic == 0);
  cert.evidence["starts"] = n_starts;
  cert.evidence["periodic"] = n_periodic;
  cert.evidence["fixed"] = n_fixed;
  cert.evidence["inconclusive"] = n_inconclusive;
  if (std::isfinite(min_return)) cert.evidence["min_nonreturn_distance"] = min_return;
  if (n_periodic > 0) {
    cert.with_value(witness_period);
    cert.evidence["witness_period"] = witness_period;
    cert.notes.push_back("witness orbit of period " + format_double(witness_period));
  } else if (H.min_period_analytic > 0.0) {
    cert.with_value(H.min_period_analytic);
    cert.notes.push_back("analytic minimal period " + format_double(H.min_period_analytic));
  }
  if (!cert.analytic)
    cert.notes.push_back("sampling-based evidence over " + std::to_string(n_starts) +
                         " starts");
  return cert;
}

}  // namespace symcap
