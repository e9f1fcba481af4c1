#pragma once

#include <functional>
#include <optional>

#include "symcap/certificates.hpp"
#include "symcap/geometry.hpp"

namespace symcap {

// ===========================================================================
// Hamiltonian functions and flows.
//
// The toric rotations P = (pi/2)|z0|^2/|z|^2 and Q = (pi/2)|z1|^2/|z|^2 have
// closed-form flows [e^{i pi t} z0 : z1 : z2] and [z0 : e^{i pi t} z1 : z2];
// these serve as oracles for the adaptive integrator everywhere they are
// available.
// ===========================================================================

struct HamiltonianFn {
  ManifoldModel manifold;
  std::string name;
  bool autonomous = true;

  std::function<double(const PointRepr&, double)> value;
  // gradient in the coordinates of `chart`; empty => finite differences
  std::function<VectorXd(const PointRepr&, double, int)> chart_gradient;
  // exact flow when available
  std::function<PointRepr(const PointRepr&, double)> closed_flow;
  // analytic oscillation max_x H_t - min_x H_t as a function of t
  std::function<double(double)> analytic_osc;
  // time-averaged mean of H against normalized Liouville measure, when known
  double analytic_mean = std::numeric_limits<double>::quiet_NaN();
  // least positive period of non-constant orbits (autonomous, when known)
  double min_period_analytic = 0.0;  // 0 = unknown

  double operator()(const PointRepr& p, double t = 0.0) const { return value(p, t); }
};

HamiltonianFn make_P(const ManifoldModel& m, double scale = 1.0);
HamiltonianFn make_Q(const ManifoldModel& m, double scale = 1.0);
HamiltonianFn make_zero(const ManifoldModel& m);
// K_t = f'(t) P at time t with f(t) = t - beta sin(2 pi t)/(2 pi); generates
// the reparametrized rotation phi^P_{f(t)} and has L(K) = L(P).
HamiltonianFn make_reparam_P(const ManifoldModel& m, double beta);

// Radial bump on D(a) (or on base x D(a), acting on the disk factor):
// H = f(pi |z|^2) with f' = sup_fp on a plateau, smooth ramps, f = 0 near the
// center and f = max near the boundary.  Non-constant orbits have period
// 1/f'(I) exactly.
struct RadialBump {
  HamiltonianFn H;
  double sup_fp = 0.0;
  double max_value = 0.0;   // analytic max of H
  double plateau_lo = 0.0;  // action-coordinate range of the f'=sup plateau
  double plateau_hi = 0.0;
};
RadialBump make_radial_bump(const ManifoldModel& m, double sup_fp);

// --- vector field / flow -----------------------------------------------------

// Solves omega(X, .) = -dH(.) in the given chart; residual <= 1e-10.
VectorXd hamiltonian_vector_field(const HamiltonianFn& H, const PointRepr& p, double t,
                                  int chart);
VectorXd hamiltonian_vector_field(const HamiltonianFn& H, const PointRepr& p, double t = 0.0);

struct Trajectory {
  std::vector<std::pair<double, PointRepr>> samples;
  long steps = 0;
  long rejected = 0;
  double max_local_error = 0.0;
  double energy_drift = 0.0;  // autonomous H only
};

// Adaptive embedded Runge-Kutta (Dormand-Prince 5(4)) with chart switching.
Trajectory flow(const HamiltonianFn& H, const PointRepr& x0, double t_end, double tol,
                int sample_count = 33);

PointRepr flow_point(const HamiltonianFn& H, const PointRepr& x0, double t_end, double tol);

// Exact rotation flows (descend to the blow-up).
enum class NamedFlow { P, Q };
PointRepr closed_form_flow(NamedFlow which, const ManifoldModel& m, const PointRepr& x0,
                           double t, double scale = 1.0);

// --- Hofer length -------------------------------------------------------------

struct HoferLength {
  double value = 0.0;
  double error = 0.0;
};

HoferLength hofer_length(const HamiltonianFn& H, int time_steps, int spatial_samples,
                         Rng& rng);
// Analytic value when the Hamiltonian carries analytic oscillation data.
double hofer_length_analytic(const HamiltonianFn& H);

// (min, max) of H_t over the manifold: random samples refined by local
// ascent/descent from the best ones.
std::pair<double, double> slice_extrema_refined(const HamiltonianFn& H, double t, int samples,
                                                Rng& rng);

// --- closed trajectories -------------------------------------------------------

enum class OrbitVerdict { Fixed, Periodic, NonReturning, Inconclusive };

struct TrajectoryClassification {
  OrbitVerdict verdict = OrbitVerdict::NonReturning;
  PointRepr start;
  double period = 0.0;       // Periodic only
  double return_dist = 0.0;  // closest return observed
  double field_norm = 0.0;
};

struct OrbitSearchOptions {
  double T_max = 1.0;
  double field_tol = 1e-8;
  double return_tol = 1e-6;
  double integrator_tol = 1e-9;
  int dense_samples = 256;
};

std::vector<TrajectoryClassification> detect_closed_trajectories(
    const HamiltonianFn& H, double T_max, int n_starts, Rng& rng,
    const OrbitSearchOptions& opts = {});

std::vector<TrajectoryClassification> classify_starts(
    const HamiltonianFn& H, const std::vector<PointRepr>& starts,
    const OrbitSearchOptions& opts);

// PASS iff no non-constant closed trajectory with period <= 1 was found over
// the sampled starts.  Sampling evidence unless the Hamiltonian carries an
// analytic minimal period.
Certificate no_short_trajectory_check(const HamiltonianFn& H, int n_starts, Rng& rng);

}  // namespace symcap
