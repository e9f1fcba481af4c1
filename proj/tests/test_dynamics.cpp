#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "symcap/dynamics.hpp"

using namespace symcap;

namespace {

// analytic tangent of the closed-form flow, by central differences in t of
// the exact rotation expressed in the chart at p
VectorXd oracle_tangent(const HamiltonianFn& H, const PointRepr& p, int chart) {
  double h = 1e-6;
  VectorXd a = chart_coords(H.manifold, H.closed_flow(p, h), chart);
  VectorXd b = chart_coords(H.manifold, H.closed_flow(p, -h), chart);
  return (a - b) / (2.0 * h);
}

}  // namespace

TEST_CASE("hamiltonian vector field examples") {
  ManifoldModel cp2 = ManifoldModel::cp2();
  HamiltonianFn P = make_P(cp2);

  // critical manifold {z0 = 0}: dP = 0
  PointRepr fixed = PointRepr::projective(0, 1, 0);
  CHECK(hamiltonian_vector_field(P, fixed, 0.0).norm() <= 1e-12);

  // generic point: matches d/dt of the exact rotation
  double s2 = 1.0 / std::sqrt(2.0);
  PointRepr p = PointRepr::projective(s2, s2, 0);
  int chart = best_chart(cp2, p);
  VectorXd X = hamiltonian_vector_field(P, p, 0.0, chart);
  VectorXd Xo = oracle_tangent(P, p, chart);
  CHECK((X - Xo).norm() <= 1e-8);

  // residual of the defining equation
  MatrixXd om = symplectic_form_matrix(cp2, p, chart);
  VectorXd g = P.chart_gradient(p, 0.0, chart);
  CHECK((om * X - g).norm() <= 1e-10);

  // constant Hamiltonian has zero field
  HamiltonianFn zero = make_zero(cp2);
  Rng rng(3);
  for (int i = 0; i < 10; ++i)
    CHECK(hamiltonian_vector_field(zero, sample_point(cp2, rng), 0.0).norm() == 0.0);
}

TEST_CASE("chart gradients agree with finite differences") {
  Rng rng(17);
  for (const ManifoldModel& m : {ManifoldModel::cp2(), ManifoldModel::blowup(0.4)}) {
    for (const HamiltonianFn& H : {make_P(m), make_Q(m)}) {
      for (int i = 0; i < 50; ++i) {
        PointRepr p = sample_point(m, rng);
        int chart = best_chart(m, p);
        VectorXd g = H.chart_gradient(p, 0.0, chart);
        VectorXd y = chart_coords(m, p, chart);
        auto f = [&](const VectorXd& v) {
          VectorXd out(1);
          out[0] = H.value(point_from_chart(m, chart, v), 0.0);
          return out;
        };
        VectorXd gfd = fd_jacobian(f, y, 1e-6).row(0).transpose();
        CHECK((g - gfd).norm() <= 1e-6);
      }
    }
  }
}

TEST_CASE("flow matches the closed-form oracle on the named examples") {
  ManifoldModel cp2 = ManifoldModel::cp2();
  HamiltonianFn P = make_P(cp2), Q = make_Q(cp2);
  double s2 = 1.0 / std::sqrt(2.0);

  PointRepr x0 = PointRepr::projective(s2, s2, 0);
  Trajectory tr = flow(P, x0, 1.0, 1e-9);
  PointRepr expect = PointRepr::projective(-s2, s2, 0);
  CHECK(point_distance(cp2, tr.samples.back().second, expect) <= 1e-6);
  CHECK(tr.energy_drift <= 1e-8);

  PointRepr q0 = PointRepr::projective(0, s2, s2);
  PointRepr qg = flow_point(Q, q0, 0.5, 1e-9);
  PointRepr qe = PointRepr::projective(Complex(0, 0), s2 * Complex(0, 1), Complex(s2, 0));
  CHECK(point_distance(cp2, qg, qe) <= 1e-6);

  // fixed point gives a constant trajectory
  PointRepr f0 = PointRepr::projective(0, 1, 0);
  Trajectory tf = flow(P, f0, 1.0, 1e-9);
  for (const auto& [t, pt] : tf.samples) CHECK(point_distance(cp2, f0, pt) <= 1e-9);
}

TEST_CASE("closed-form flow fixed points and periodicity") {
  ManifoldModel cp2 = ManifoldModel::cp2();
  PointRepr e0 = PointRepr::projective(1, 0, 0);
  CHECK(point_distance(cp2, closed_form_flow(NamedFlow::P, cp2, e0, 0.3), e0) <= 1e-12);
  Rng rng(11);
  for (int i = 0; i < 20; ++i) {
    PointRepr x = sample_point(cp2, rng);
    CHECK(point_distance(cp2, closed_form_flow(NamedFlow::P, cp2, x, 2.0), x) <= 1e-12);
  }
  PointRepr e1 = PointRepr::projective(0, 1, 0);
  CHECK(point_distance(cp2, closed_form_flow(NamedFlow::Q, cp2, e1, 0.37), e1) <= 1e-12);
}

TEST_CASE("oracle equivalence over random starts") {
  Rng rng(2025);
  for (const ManifoldModel& m : {ManifoldModel::cp2(), ManifoldModel::blowup(0.5)}) {
    for (const HamiltonianFn& H : {make_P(m), make_Q(m)}) {
      double sup = 0.0, drift = 0.0;
      for (int i = 0; i < 25; ++i) {
        PointRepr x0 = sample_point(m, rng);
        Trajectory tr = flow(H, x0, 1.0, 1e-9, 21);
        for (const auto& [t, pt] : tr.samples)
          sup = std::max(sup, point_distance(m, pt, H.closed_flow(x0, t)));
        drift = std::max(drift, tr.energy_drift);
      }
      INFO(H.name << " on " << m.label());
      CHECK(sup <= 1e-6);
      CHECK(drift <= 1e-8);
    }
  }
}

TEST_CASE("flow is symplectic to probe accuracy") {
  ManifoldModel cp2 = ManifoldModel::cp2();
  HamiltonianFn P = make_P(cp2);
  Rng rng(31);
  double worst = 0.0;
  for (int i = 0; i < 5; ++i) {
    PointRepr p = sample_point(cp2, rng);
    int chart = best_chart(cp2, p);
    auto F = [&](const VectorXd& v) {
      PointRepr q = point_from_chart(cp2, chart, v);
      PointRepr r = flow_point(P, q, 1.0, 1e-11);
      return chart_coords(cp2, r, best_chart(cp2, flow_point(P, p, 1.0, 1e-11)));
    };
    VectorXd y = chart_coords(cp2, p, chart);
    MatrixXd J = fd_jacobian(F, y, 1e-4);
    PointRepr img = flow_point(P, p, 1.0, 1e-11);
    MatrixXd om_in = symplectic_form_matrix(cp2, p, chart);
    MatrixXd om_out = symplectic_form_matrix(cp2, img, best_chart(cp2, img));
    worst = std::max(worst, (J.transpose() * om_out * J - om_in).cwiseAbs().maxCoeff());
  }
  CHECK(worst <= 1e-4);
}

TEST_CASE("hofer length") {
  Rng rng(41);
  ManifoldModel cp2 = ManifoldModel::cp2();

  HoferLength LP = hofer_length(make_P(cp2), 1, 20000, rng);
  CHECK(std::abs(LP.value - kPi / 2) <= 1e-3);
  CHECK(hofer_length_analytic(make_P(cp2)) == doctest::Approx(kPi / 2).epsilon(1e-14));

  for (double lam : {0.3, 0.5, 0.7}) {
    ManifoldModel bl = ManifoldModel::blowup(lam);
    HoferLength L = hofer_length(make_P(bl), 1, 20000, rng);
    double expect = 0.5 * kPi * (1.0 - lam * lam);
    INFO("lambda = " << lam);
    CHECK(std::abs(L.value - expect) <= 1e-3);
    HoferLength LQ = hofer_length(make_Q(bl), 1, 20000, rng);
    CHECK(std::abs(LQ.value - kPi / 2) <= 1e-3);
  }

  // scaling: same seed gives exactly scaled estimates
  Rng r1(99), r2(99);
  double a = hofer_length(make_P(cp2, 1.0), 1, 2000, r1).value;
  double b = hofer_length(make_P(cp2, 3.0), 1, 2000, r2).value;
  CHECK(b == doctest::Approx(3.0 * a).epsilon(1e-12));

  // time-dependent reparametrization has the same length as P
  HoferLength Lrep = hofer_length(make_reparam_P(cp2, 0.5), 16, 4000, rng);
  CHECK(std::abs(Lrep.value - kPi / 2) <= 2e-3);
  CHECK(hofer_length_analytic(make_reparam_P(cp2, 0.5)) ==
        doctest::Approx(kPi / 2).epsilon(1e-10));
}

TEST_CASE("closed trajectory detection") {
  ManifoldModel cp2 = ManifoldModel::cp2();
  Rng rng(51);

  // P has no non-constant closed trajectory in time <= 1
  auto res = detect_closed_trajectories(make_P(cp2), 1.0, 60, rng);
  for (const auto& r : res) CHECK(r.verdict != OrbitVerdict::Periodic);

  // explicit fixed loci
  std::vector<PointRepr> fixed_starts = {
      PointRepr::projective(1, 0, 0), PointRepr::projective(0, 1, 0),
      PointRepr::projective(0, 0, 1),
      PointRepr::projective(Complex(0, 0), Complex(0.6, 0.1), Complex(0.2, 0.77))};
  OrbitSearchOptions opts;
  opts.T_max = 1.0;
  for (const auto& r : classify_starts(make_P(cp2), fixed_starts, opts))
    CHECK(r.verdict == OrbitVerdict::Fixed);

  // doubling the Hamiltonian halves the period: 2P is periodic at T ~ 1
  auto res2 = detect_closed_trajectories(make_P(cp2, 2.0), 1.1, 12, rng);
  int periodic = 0;
  for (const auto& r : res2)
    if (r.verdict == OrbitVerdict::Periodic) {
      ++periodic;
      CHECK(std::abs(r.period - 1.0) <= 1e-4);
    }
  CHECK(periodic >= 10);

  // H = 0: everything is fixed
  for (const auto& r : detect_closed_trajectories(make_zero(cp2), 1.0, 10, rng))
    CHECK(r.verdict == OrbitVerdict::Fixed);
}

TEST_CASE("period scaling 2/c for scaled rotations") {
  ManifoldModel cp2 = ManifoldModel::cp2();
  Rng rng(61);
  for (double c : {1.0, 2.0, 4.0}) {
    auto res = detect_closed_trajectories(make_P(cp2, c), 3.9, 6, rng);
    int found = 0;
    for (const auto& r : res)
      if (r.verdict == OrbitVerdict::Periodic) {
        ++found;
        CHECK(std::abs(r.period - 2.0 / c) <= 1e-4);
      }
    INFO("c = " << c);
    CHECK(found >= 4);
  }
}

TEST_CASE("no-short-trajectory certificates") {
  ManifoldModel cp2 = ManifoldModel::cp2();
  ManifoldModel bl = ManifoldModel::blowup(0.5);
  Rng rng(71);

  Certificate ok = no_short_trajectory_check(make_P(cp2), 40, rng);
  CHECK(ok.pass);
  CHECK(ok.analytic);

  Certificate bad = no_short_trajectory_check(make_P(cp2, 2.0), 25, rng);
  CHECK_FALSE(bad.pass);
  CHECK(std::abs(bad.value - 1.0) <= 1e-3);

  Certificate q = no_short_trajectory_check(make_Q(bl), 40, rng);
  CHECK(q.pass);
}

TEST_CASE("flow preconditions") {
  ManifoldModel cp2 = ManifoldModel::cp2();
  PointRepr p = PointRepr::projective(1, 1, 1);
  CHECK_THROWS_AS(flow(make_P(cp2), p, 5.0, 1e-9), DomainViolationError);
  CHECK_THROWS_AS(flow(make_P(cp2), p, 1.0, -1.0), DomainViolationError);
}
