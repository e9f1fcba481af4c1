#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "symcap/regions.hpp"

using namespace symcap;

TEST_CASE("graph region membership") {
  ManifoldModel cp2 = ManifoldModel::cp2();
  HamiltonianFn P = make_P(cp2);
  GraphRegion below = region_below(P, 0.2);

  // ([1:0:0], pi/4, t) lies below the graph since P([1:0:0]) = pi/2
  PointRepr top = PointRepr::projective(1, 0, 0);
  CHECK(below.contains(top, kPi / 4, 0.5));
  CHECK_FALSE(below.contains(top, kPi / 2 + 0.01, 0.5));
  CHECK(below.contains(top, -0.099, 0.5));   // ell = -nu/2 = -0.1
  CHECK_FALSE(below.contains(top, -0.11, 0.5));

  // H = 0 gives the slab M x [-nu/2, 0] x [0,1]
  GraphRegion slab = region_below(make_zero(cp2), 0.2);
  Rng rng(1);
  for (int i = 0; i < 200; ++i) {
    PointRepr x = sample_point(cp2, rng);
    double s = rng.uniform(-0.3, 0.1);
    bool in = (s >= -0.1 && s <= 0.0);
    CHECK(slab.contains(x, s, 0.5) == in);
  }

  // monotonicity in nu
  GraphRegion wide = region_below(P, 0.4);
  for (int i = 0; i < 500; ++i) {
    PointRepr x = sample_point(cp2, rng);
    double s = rng.uniform(-0.25, kPi / 2);
    double t = rng.uniform();
    if (below.contains(x, s, t)) CHECK(wide.contains(x, s, t));
  }
}

TEST_CASE("split areas are exact") {
  ManifoldModel cp2 = ManifoldModel::cp2();
  HamiltonianFn P = make_P(cp2);
  QuasiCylinder rp = split_graph(P, 0.1);
  CHECK(rp.area() == doctest::Approx(kPi / 2 + 0.1).epsilon(1e-12));
  QuasiCylinder prod = split_product(cp2, 1.0);
  CHECK(prod.area() == doctest::Approx(1.0));

  // Monte Carlo agrees within 3 sigma
  Rng rng(2);
  MeanStderr mc = mc_cylinder_volume(rp, 40000, rng);
  double expect = volume(cp2) * (kPi / 2 + 0.1);
  CHECK(std::abs(mc.mean - expect) <= 3.0 * mc.stderr_);
}

TEST_CASE("gluing with K = H is the identity") {
  ManifoldModel cp2 = ManifoldModel::cp2();
  HamiltonianFn P = make_P(cp2);
  Rng rng(3);
  QuasiCylinder pp = glue(P, P, 0.2, 200, rng);

  for (int i = 0; i < 100; ++i) {
    PointRepr x = sample_point(cp2, rng);
    double s = rng.uniform(0.0, kPi / 2);
    double t = rng.uniform();
    GluePoint g = g_map(P, P, {x, s, t});
    CHECK(point_distance(cp2, g.x, x) <= 1e-9);
    CHECK(std::abs(g.s - s) <= 1e-9);
  }

  // membership in R_{P,P}(nu) coincides with membership in R_P(nu)
  int agree = 0, total = 0;
  for (int i = 0; i < 10000; ++i) {
    PointRepr x = sample_point(cp2, rng);
    double s = rng.uniform(-0.2, kPi / 2 + 0.3);
    double t = rng.uniform();
    bool split_in = (s >= -0.1 && s <= kPi / 2 + 0.1);
    bool glued_in = glued_contains(pp, x, s, t);
    ++total;
    if (split_in == glued_in) ++agree;
  }
  CHECK(agree == total);
}

TEST_CASE("gluing requires matching time-one maps") {
  ManifoldModel cp2 = ManifoldModel::cp2();
  Rng rng(4);
  CHECK_THROWS_AS(glue(make_P(cp2), make_P(cp2, 0.5), 0.2, 100, rng),
                  EndpointMismatchError);
}

TEST_CASE("g maps the graph of K onto the graph of H") {
  ManifoldModel cp2 = ManifoldModel::cp2();
  HamiltonianFn P = make_P(cp2);
  HamiltonianFn K = make_reparam_P(cp2, 0.5);
  Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    PointRepr x = sample_point(cp2, rng);
    double t = rng.uniform();
    GluePoint g = g_map(P, K, {x, K.value(x, t), t});
    CHECK(std::abs(g.s - P.value(g.x, t)) <= 1e-9);
  }
}

TEST_CASE("g is symplectic at probes") {
  ManifoldModel cp2 = ManifoldModel::cp2();
  HamiltonianFn P = make_P(cp2);
  HamiltonianFn K = make_reparam_P(cp2, 0.4);
  Rng rng(6);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    PointRepr x = sample_point(cp2, rng);
    double s = rng.uniform(0.2, 1.0);
    double t = rng.uniform(0.1, 0.9);
    worst = std::max(worst, g_symplecticity_residual(P, K, {x, s, t}));
  }
  CHECK(worst <= 1e-5);
}

TEST_CASE("volume identity for H = K = P") {
  ManifoldModel cp2 = ManifoldModel::cp2();
  HamiltonianFn P = make_P(cp2);
  Rng rng(7);
  VolumeIdentityReport rep = volume_identity_report(P, P, 0.1, 60000, rng);
  CHECK(rep.identity_ok);
  double expect = 2.0 * volume(cp2) * (kPi / 2 + 0.1);
  CHECK(std::abs(rep.lhs - expect) <=
        3.0 * std::hypot(rep.vol_HK_err, rep.vol_KH_err) + 1e-9);
  CHECK(std::abs(rep.rhs - expect) <= 3.0 * std::hypot(rep.vol_H_err, rep.vol_K_err) + 1e-9);
}

TEST_CASE("volume identity for the reparametrized pair") {
  ManifoldModel cp2 = ManifoldModel::cp2();
  HamiltonianFn P = make_P(cp2);
  HamiltonianFn K = make_reparam_P(cp2, 0.5);
  Rng rng(8);
  VolumeIdentityReport rep = volume_identity_report(P, K, 0.1, 60000, rng);
  CHECK(rep.identity_ok);
  // L(K) = L(H), so the strict consequence clause is not applicable
  CHECK_FALSE(rep.consequence_applicable);
}

TEST_CASE("scaled pair: at least one area drops below L(H)") {
  ManifoldModel cp2 = ManifoldModel::cp2();
  HamiltonianFn P = make_P(cp2);
  HamiltonianFn K = make_P(cp2, 0.8);  // L(K) = 0.4 pi < L(P)
  Rng rng(9);
  VolumeIdentityReport rep = volume_identity_report(P, K, 0.1, 60000, rng, false);
  CHECK(rep.identity_ok);
  CHECK(rep.consequence_applicable);
  CHECK(rep.consequence_ok);
  CHECK(std::min(rep.area_HK, rep.area_KH) < kPi / 2);
}

TEST_CASE("region summary JSON") {
  ManifoldModel cp2 = ManifoldModel::cp2();
  Rng rng(10);
  nlohmann::json j = region_summary_json(make_P(cp2), 0.1, 20000, rng);
  CHECK(j["L"].get<double>() == doctest::Approx(kPi / 2));
  CHECK(j["area"].get<double>() == doctest::Approx(kPi / 2 + 0.1));
  CHECK(j.contains("volume"));
  CHECK(j.contains("stderr"));
}
