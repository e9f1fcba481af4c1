#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "symcap/geometry.hpp"

using namespace symcap;

namespace {

// Independent oracle: area of the line {z0 = 0} by quadrature of the chart
// form; the unit chart disks of charts 1 and 2 cover the two halves.
double line_area_oracle() {
  ManifoldModel m = ManifoldModel::cp2();
  double acc = 0.0;
  int nr = 20000;
  for (int i = 0; i < nr; ++i) {
    double r0 = static_cast<double>(i) / nr, r1 = static_cast<double>(i + 1) / nr;
    double rm = 0.5 * (r0 + r1);
    PointRepr p = PointRepr::projective(Complex(0, 0), Complex(rm, 0), Complex(1, 0));
    MatrixXd om = symplectic_form_matrix(m, p, 2);
    // on the line, the (w1x, w1y) block carries the induced area form
    acc += om(2, 3) * 2.0 * kPi * rm * (r1 - r0);
  }
  return 2.0 * acc;  // the chart-1 half contributes equally by symmetry
}

}  // namespace

TEST_CASE("moment map on the standard points") {
  PointRepr a = PointRepr::projective(1, 0, 0);
  PointRepr b = PointRepr::projective(0, 0, 1);
  double s3 = 1.0 / std::sqrt(3.0);
  PointRepr c = PointRepr::projective(s3, s3, s3);
  CHECK(moment_map_rho(a).x() == doctest::Approx(kPi / 2).epsilon(1e-14));
  CHECK(moment_map_rho(a).y() == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(moment_map_rho(b).norm() == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(moment_map_rho(c).x() == doctest::Approx(kPi / 6).epsilon(1e-12));
  CHECK(moment_map_rho(c).y() == doctest::Approx(kPi / 6).epsilon(1e-12));
}

TEST_CASE("polytope vertex data") {
  PolytopeModel tri = polytope(ManifoldModel::cp2());
  REQUIRE(tri.vertices.size() == 3);
  CHECK(tri.vertices[1].x() == doctest::Approx(kPi / 2).epsilon(1e-15));
  CHECK(tri.vertices[2].y() == doctest::Approx(kPi / 2).epsilon(1e-15));

  PolytopeModel quad = polytope(ManifoldModel::blowup(0.5));
  REQUIRE(quad.vertices.size() == 4);
  CHECK(quad.vertices[1].x() == doctest::Approx(3 * kPi / 8).epsilon(1e-15));
  CHECK(quad.vertices[2].x() == doctest::Approx(3 * kPi / 8).epsilon(1e-15));
  CHECK(quad.vertices[2].y() == doctest::Approx(kPi / 8).epsilon(1e-15));
  CHECK(quad.vertices[3].y() == doctest::Approx(kPi / 2).epsilon(1e-15));
  // last slanted edge lies on x + y = pi/2
  CHECK(quad.vertices[2].x() + quad.vertices[2].y() == doctest::Approx(kPi / 2).epsilon(1e-15));

  // degenerate blow-up approaches the triangle
  PolytopeModel small = polytope(ManifoldModel::blowup(1e-6));
  CHECK(small.vertices[1].x() == doctest::Approx(kPi / 2).epsilon(1e-10));

  CHECK_THROWS_AS(polytope(ManifoldModel::disk(1.0)), UnsupportedError);
}

TEST_CASE("volumes against the Monte Carlo oracle") {
  Rng rng(12345);
  for (const ManifoldModel& m :
       {ManifoldModel::cp2(), ManifoldModel::blowup(0.5), ManifoldModel::cp1(),
        ManifoldModel::disk(0.7)}) {
    MeanStderr est = mc_volume(m, 400000, rng);
    double analytic = volume(m);
    INFO(m.label());
    CHECK(std::abs(analytic - est.mean) <= 3.0 * est.stderr_ + 1e-9);
  }
  // toric 4-manifolds: Liouville volume is 4x the moment-polytope area (the
  // printed angle parameters have period 2 in each factor)
  CHECK(volume(ManifoldModel::cp2()) ==
        doctest::Approx(4.0 * polytope(ManifoldModel::cp2()).area()).epsilon(1e-13));
  CHECK(volume(ManifoldModel::blowup(0.5)) ==
        doctest::Approx(4.0 * polytope(ManifoldModel::blowup(0.5)).area()).epsilon(1e-13));
  CHECK(volume(ManifoldModel::cp2()) == doctest::Approx(kPi * kPi / 2).epsilon(1e-14));
  CHECK(volume(ManifoldModel::blowup(0.5)) ==
        doctest::Approx(kPi * kPi / 2 * (1.0 - 0.0625)).epsilon(1e-14));
  CHECK(volume(ManifoldModel::disk(0.7)) == doctest::Approx(0.7));
  CHECK(volume(ManifoldModel::product(ManifoldModel::cp1(), 1.0)) ==
        doctest::Approx(kPi).epsilon(1e-14));
}

TEST_CASE("symplectic form matrix") {
  ManifoldModel cp2 = ManifoldModel::cp2();
  PointRepr origin2 = PointRepr::projective(0, 0, 1);
  MatrixXd om = symplectic_form_matrix(cp2, origin2, 2);
  MatrixXd std4 = MatrixXd::Zero(4, 4);
  std4 << 0, 1, 0, 0, -1, 0, 0, 0, 0, 0, 0, 1, 0, 0, -1, 0;
  CHECK((om - std4).cwiseAbs().maxCoeff() <= 1e-14);

  // normalization oracle: the line {z0 = 0} has area pi under this form
  CHECK(line_area_oracle() == doctest::Approx(kPi).epsilon(1e-4));

  // disk: constant standard area form
  ManifoldModel d = ManifoldModel::disk(2.0);
  Rng rng(7);
  PointRepr pd = sample_point(d, rng);
  MatrixXd omd = symplectic_form_matrix(d, pd);
  CHECK(omd(0, 1) == 1.0);
  CHECK(omd(1, 0) == -1.0);

  // antisymmetry is exact by construction
  for (int i = 0; i < 100; ++i) {
    PointRepr p = sample_point(cp2, rng);
    MatrixXd o = symplectic_form_matrix(cp2, p);
    CHECK((o + o.transpose()).cwiseAbs().maxCoeff() == 0.0);
  }

  CHECK_THROWS_AS(symplectic_form_matrix(cp2, PointRepr::projective(1, 0, 0), 2),
                  ChartDegenerateError);
}

TEST_CASE("moment-map range invariant") {
  Rng rng(99);
  for (const ManifoldModel& m : {ManifoldModel::cp2(), ManifoldModel::blowup(0.3)}) {
    PolytopeModel poly = polytope(m);
    double worst = 1e300;
    for (int i = 0; i < 100000; ++i) {
      PointRepr p = sample_point(m, rng);
      worst = std::min(worst, poly.containment_margin(moment_map_rho(p)));
    }
    INFO(m.label());
    CHECK(worst >= -1e-12);
  }
}

TEST_CASE("chart transitions preserve the form") {
  ManifoldModel cp2 = ManifoldModel::cp2();
  Rng rng(2024);
  double worst = 0.0;
  int tested = 0;
  for (int i = 0; i < 500 && tested < 200; ++i) {
    PointRepr p = sample_point(cp2, rng);
    // need two good charts
    std::vector<int> charts;
    for (int k = 0; k < 3; ++k)
      if (std::norm(p.z[k]) > 0.15) charts.push_back(k);
    if (charts.size() < 2) continue;
    int ka = charts[0], kb = charts[1];
    auto trans = [&](const VectorXd& v) {
      return chart_coords(cp2, point_from_chart(cp2, ka, v), kb);
    };
    VectorXd va = chart_coords(cp2, p, ka);
    MatrixXd J = fd_jacobian(trans, va, 1e-6);
    MatrixXd oma = symplectic_form_matrix(cp2, p, ka);
    MatrixXd omb = symplectic_form_matrix(cp2, p, kb);
    worst = std::max(worst, (J.transpose() * omb * J - oma).cwiseAbs().maxCoeff());
    ++tested;
  }
  CHECK(tested >= 100);
  CHECK(worst <= 1e-9);
}

TEST_CASE("blow-up containment and divisor equivalence") {
  ManifoldModel bl = ManifoldModel::blowup(0.6);
  Rng rng(5);
  for (int i = 0; i < 20000; ++i) {
    PointRepr p = sample_point(bl, rng);
    CHECK(p.rho_sq() >= 0.36);
  }
  // divisor points with the same [z1:z2] ray are identified
  double l = 0.6;
  double z0m = std::sqrt(1.0 - l * l);
  PointRepr a = PointRepr::projective(Complex(z0m, 0), Complex(l, 0), Complex(0, 0));
  PointRepr b = PointRepr::projective(z0m * std::polar(1.0, 0.9), Complex(l, 0), Complex(0, 0));
  CHECK(point_distance(bl, a, b) <= 1e-12);
  CHECK(point_valid(bl, a));
}

TEST_CASE("mean moment coordinates match polygon moments") {
  // CP2: mean of x over the triangle with legs pi/2 is pi/6
  CHECK(mean_moment_x(ManifoldModel::cp2()) == doctest::Approx(kPi / 6).epsilon(1e-13));
  CHECK(mean_moment_y(ManifoldModel::cp2()) == doctest::Approx(kPi / 6).epsilon(1e-13));
  // Monte Carlo cross-check on the blow-up
  ManifoldModel bl = ManifoldModel::blowup(0.5);
  Rng rng(77);
  double acc = 0.0;
  int n = 200000;
  for (int i = 0; i < n; ++i) acc += moment_map_rho(sample_point(bl, rng)).y();
  CHECK(mean_moment_y(bl) == doctest::Approx(acc / n).epsilon(5e-3));
}
