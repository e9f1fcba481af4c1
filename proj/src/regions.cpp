#include "symcap/regions.hpp"

#include <algorithm>

namespace symcap {

namespace {

// max_x H_t(x) over t in [0,1] for a Hamiltonian normalized to min 0
double sup_over_time(const HamiltonianFn& H, Rng& rng) {
  if (H.analytic_osc) {
    if (H.autonomous) return H.analytic_osc(0.0);
    double m = 0.0;
    for (int i = 0; i <= 512; ++i) m = std::max(m, H.analytic_osc(i / 512.0));
    return m;
  }
  double m = 0.0;
  int slices = H.autonomous ? 1 : 33;
  for (int i = 0; i < slices; ++i) {
    double t = (slices == 1) ? 0.0 : static_cast<double>(i) / (slices - 1);
    Rng sub = rng.fork(7000 + i);
    auto [lo, hi] = slice_extrema_refined(H, t, 2000, sub);
    m = std::max(m, hi);
  }
  return m;
}

void check_normalized(const HamiltonianFn& H) {
  Rng rng(20240901);
  int slices = H.autonomous ? 1 : 9;
  for (int i = 0; i < slices; ++i) {
    double t = (slices == 1) ? 0.0 : static_cast<double>(i) / (slices - 1);
    Rng sub = rng.fork(i);
    auto [lo, hi] = slice_extrema_refined(H, t, 500, sub);
    (void)hi;
    if (std::abs(lo) > 1e-7)
      throw NormalizationFailureError("H is not normalized to min 0 at t=" +
                                      format_double(t) + " (min=" + format_double(lo) + ")");
  }
}

PointRepr inverse_flow(const HamiltonianFn& H, const PointRepr& p, double t) {
  if (H.closed_flow) return H.closed_flow(p, -t);  // rotations form a group in t
  if (!H.autonomous)
    throw UnsupportedError("inverse flow for time-dependent H needs a closed form");
  HamiltonianFn neg = H;
  neg.value = [H](const PointRepr& q, double s) { return -H.value(q, s); };
  if (H.chart_gradient)
    neg.chart_gradient = [H](const PointRepr& q, double s, int chart) {
      return (-H.chart_gradient(q, s, chart)).eval();
    };
  neg.closed_flow = nullptr;
  return flow_point(neg, p, t, 1e-10);
}

PointRepr forward_flow(const HamiltonianFn& H, const PointRepr& p, double t) {
  if (H.closed_flow) return H.closed_flow(p, t);
  return flow_point(H, p, t, 1e-10);
}

}  // namespace

// --- graph regions -------------------------------------------------------------

double GraphRegion::membership_margin(const PointRepr& x, double s, double t) const {
  double h = H.value(x, t);
  double m_t = std::min(t, 1.0 - t);
  if (side == RegionSide::Below) return std::min({s - ell(t), h - s, m_t});
  return std::min({s - h, mu(t) - s, m_t});
}

GraphRegion region_below(const HamiltonianFn& H, double nu) {
  if (!(nu > 0.0)) throw DomainViolationError("nu must be positive");
  check_normalized(H);
  GraphRegion r;
  r.base = H.manifold;
  r.H = H;
  r.side = RegionSide::Below;
  r.nu = nu;
  Rng rng(555);
  r.h_inf = sup_over_time(H, rng);
  return r;
}

GraphRegion region_above(const HamiltonianFn& H, double nu) {
  GraphRegion r = region_below(H, nu);
  r.side = RegionSide::Above;
  return r;
}

SplitRegion region_pair(const HamiltonianFn& H, double nu) {
  return {region_below(H, nu), region_above(H, nu)};
}

// --- quasi-cylinders -------------------------------------------------------------

QuasiCylinder split_product(const ManifoldModel& m, double a) {
  QuasiCylinder c;
  c.base = m;
  c.form = CylinderForm::SplitProduct;
  c.disk_area = a;
  return c;
}

QuasiCylinder split_graph(const HamiltonianFn& H, double nu) {
  check_normalized(H);
  QuasiCylinder c;
  c.base = H.manifold;
  c.form = CylinderForm::SplitGraph;
  c.H = H;
  c.nu = nu;
  Rng rng(556);
  c.h_H = sup_over_time(H, rng);
  return c;
}

double QuasiCylinder::area() const {
  switch (form) {
    case CylinderForm::SplitProduct:
      return disk_area;
    case CylinderForm::SplitGraph:
      return h_H + nu;
    case CylinderForm::Glued:
      throw UnsupportedError("glued quasi-cylinder area has no closed form; use Monte Carlo");
  }
  return 0.0;
}

GluePoint g_map(const HamiltonianFn& H, const HamiltonianFn& K, const GluePoint& p) {
  PointRepr y = forward_flow(H, inverse_flow(K, p.x, p.t), p.t);
  double s2 = p.s - K.value(p.x, p.t) + H.value(y, p.t);
  return {y, s2, p.t};
}

QuasiCylinder glue(const HamiltonianFn& H, const HamiltonianFn& K, double nu,
                   int endpoint_samples, Rng& rng) {
  check_normalized(H);
  check_normalized(K);
  double worst = 0.0;
  for (int i = 0; i < endpoint_samples; ++i) {
    PointRepr x = sample_point(H.manifold, rng);
    double d = point_distance(H.manifold, forward_flow(H, x, 1.0), forward_flow(K, x, 1.0));
    worst = std::max(worst, d);
  }
  if (worst > 1e-6)
    throw EndpointMismatchError("phi_1^H != phi_1^K (max distance " + format_double(worst) +
                                ")");
  QuasiCylinder c;
  c.base = H.manifold;
  c.form = CylinderForm::Glued;
  c.H = H;
  c.K = K;
  c.nu = nu;
  Rng r2(560);
  c.h_H = sup_over_time(H, r2);
  c.h_K = sup_over_time(K, r2);
  return c;
}

bool glued_contains(const QuasiCylinder& c, const PointRepr& y, double s, double t) {
  if (c.form != CylinderForm::Glued) throw UnsupportedError("glued_contains: not glued");
  if (t < 0.0 || t > 1.0) return false;
  double hy = c.H.value(y, t);
  if (s >= -0.5 * c.nu && s <= hy) return true;  // R_H^-(nu/2)
  // g(R_K^+): pull back through g
  PointRepr x = forward_flow(c.K, inverse_flow(c.H, y, t), t);
  double muK = c.h_K + 0.5 * c.nu;
  double kx = c.K.value(x, t);
  double s_back = s - hy + kx;
  return (s_back >= kx - 1e-15 && s_back <= muK);
}

double g_symplecticity_residual(const HamiltonianFn& H, const HamiltonianFn& K,
                                const GluePoint& p) {
  const ManifoldModel& m = H.manifold;
  int chart_in = best_chart(m, p.x);
  int n = m.dim();
  GluePoint img = g_map(H, K, p);
  int chart_out = best_chart(m, img.x);

  auto G = [&](const VectorXd& v) {
    GluePoint q;
    q.x = point_from_chart(m, chart_in, v.head(n));
    q.s = v[n];
    q.t = v[n + 1];
    GluePoint r = g_map(H, K, q);
    VectorXd out(n + 2);
    out.head(n) = chart_coords(m, r.x, chart_out);
    out[n] = r.s;
    out[n + 1] = r.t;
    return out;
  };
  VectorXd v0(n + 2);
  v0.head(n) = chart_coords(m, p.x, chart_in);
  v0[n] = p.s;
  v0[n + 1] = p.t;
  MatrixXd J = fd_jacobian(G, v0, 1e-6);

  MatrixXd om_in = MatrixXd::Zero(n + 2, n + 2);
  om_in.topLeftCorner(n, n) = symplectic_form_matrix(m, p.x, chart_in);
  om_in(n, n + 1) = 1.0;
  om_in(n + 1, n) = -1.0;
  MatrixXd om_out = MatrixXd::Zero(n + 2, n + 2);
  om_out.topLeftCorner(n, n) = symplectic_form_matrix(m, img.x, chart_out);
  om_out(n, n + 1) = 1.0;
  om_out(n + 1, n) = -1.0;
  return (J.transpose() * om_out * J - om_in).cwiseAbs().maxCoeff();
}

// --- areas and volumes -------------------------------------------------------------

double region_area(const GraphRegion& r) {
  double mean = r.H.analytic_mean;
  if (!std::isfinite(mean))
    throw UnsupportedError("analytic region area needs an analytic mean; use Monte Carlo");
  if (r.side == RegionSide::Below) return mean + 0.5 * r.nu;
  return (r.h_inf + 0.5 * r.nu) - mean;
}

double region_area(const QuasiCylinder& c) { return c.area(); }

MeanStderr mc_region_volume(const GraphRegion& r, int samples, Rng& rng) {
  double volM = volume(r.base);
  double lo = -0.5 * r.nu, hi = r.h_inf + 0.5 * r.nu;
  double slab = volM * (hi - lo);
  long hits = 0;
  for (int i = 0; i < samples; ++i) {
    PointRepr x = sample_point(r.base, rng);
    double s = rng.uniform(lo, hi);
    double t = rng.uniform();
    if (r.membership_margin(x, s, t) >= 0.0) ++hits;
  }
  double p = static_cast<double>(hits) / samples;
  return {slab * p, slab * std::sqrt(std::max(p * (1 - p), 1e-12) / samples)};
}

MeanStderr mc_cylinder_volume(const QuasiCylinder& c, int samples, Rng& rng) {
  double volM = volume(c.base);
  switch (c.form) {
    case CylinderForm::SplitProduct:
      return {volM * c.disk_area, 0.0};
    case CylinderForm::SplitGraph: {
      // sum of the two half-region estimates; each depends on the graph
      GraphRegion below, above;
      below.base = above.base = c.base;
      below.H = above.H = c.H;
      below.nu = above.nu = c.nu;
      below.h_inf = above.h_inf = c.h_H;
      below.side = RegionSide::Below;
      above.side = RegionSide::Above;
      Rng ra = rng.fork(21), rb = rng.fork(22);
      MeanStderr lo_est = mc_region_volume(below, samples / 2, ra);
      MeanStderr hi_est = mc_region_volume(above, samples / 2, rb);
      return {lo_est.mean + hi_est.mean,
              std::hypot(lo_est.stderr_, hi_est.stderr_)};
    }
    case CylinderForm::Glued: {
      // the joined image can reach s = h_H + mu_K, so the slab must cover it
      double lo = -0.5 * c.nu, hi = c.h_H + c.h_K + c.nu;
      double slab = volM * (hi - lo);
      long hits = 0;
      for (int i = 0; i < samples; ++i) {
        PointRepr x = sample_point(c.base, rng);
        double s = rng.uniform(lo, hi);
        double t = rng.uniform();
        if (glued_contains(c, x, s, t)) ++hits;
      }
      double p = static_cast<double>(hits) / samples;
      return {slab * p, slab * std::sqrt(std::max(p * (1 - p), 1e-12) / samples)};
    }
  }
  throw UnsupportedError("mc_cylinder_volume");
}

MeanStderr mc_cylinder_area(const QuasiCylinder& c, int samples, Rng& rng) {
  MeanStderr v = mc_cylinder_volume(c, samples, rng);
  double volM = volume(c.base);
  return {v.mean / volM, v.stderr_ / volM};
}

// --- identity report ------------------------------------------------------------------

VolumeIdentityReport volume_identity_report(const HamiltonianFn& H, const HamiltonianFn& K,
                                            double nu, int samples, Rng& rng,
                                            bool enforce_endpoints) {
  QuasiCylinder HK, KH;
  if (enforce_endpoints) {
    Rng r1 = rng.fork(1);
    HK = glue(H, K, nu, 1000, r1);
    Rng r2 = rng.fork(2);
    KH = glue(K, H, nu, 1000, r2);
  } else {
    // diagnostic mode: the joined sets still make sense as sets and g is
    // volume preserving, so the volume identity can be probed without the
    // time-one endpoint condition
    check_normalized(H);
    check_normalized(K);
    Rng r2(561);
    HK.base = H.manifold;
    HK.form = CylinderForm::Glued;
    HK.H = H;
    HK.K = K;
    HK.nu = nu;
    HK.h_H = sup_over_time(H, r2);
    HK.h_K = sup_over_time(K, r2);
    KH.base = H.manifold;
    KH.form = CylinderForm::Glued;
    KH.H = K;
    KH.K = H;
    KH.nu = nu;
    KH.h_H = HK.h_K;
    KH.h_K = HK.h_H;
  }
  VolumeIdentityReport rep;
  Rng ra = rng.fork(11), rb = rng.fork(12), rc = rng.fork(13), rd = rng.fork(14);
  MeanStderr vHK = mc_cylinder_volume(HK, samples, ra);
  MeanStderr vKH = mc_cylinder_volume(KH, samples, rb);
  MeanStderr vH = mc_cylinder_volume(split_graph(H, nu), samples, rc);
  MeanStderr vKv = mc_cylinder_volume(split_graph(K, nu), samples, rd);
  rep.vol_HK = vHK.mean;
  rep.vol_HK_err = vHK.stderr_;
  rep.vol_KH = vKH.mean;
  rep.vol_KH_err = vKH.stderr_;
  rep.vol_H = vH.mean;
  rep.vol_H_err = vH.stderr_;
  rep.vol_K = vKv.mean;
  rep.vol_K_err = vKv.stderr_;
  rep.lhs = rep.vol_HK + rep.vol_KH;
  rep.rhs = rep.vol_H + rep.vol_K;
  double err = std::sqrt(vHK.stderr_ * vHK.stderr_ + vKH.stderr_ * vKH.stderr_ +
                         vH.stderr_ * vH.stderr_ + vKv.stderr_ * vKv.stderr_);
  rep.identity_sigma = (err > 0.0) ? std::abs(rep.lhs - rep.rhs) / err : 0.0;
  rep.identity_ok = std::abs(rep.lhs - rep.rhs) <= 3.0 * err + 1e-12;
  double volM = volume(H.manifold);
  rep.area_HK = rep.vol_HK / volM;
  rep.area_KH = rep.vol_KH / volM;
  double LH = hofer_length_analytic(H);
  double LK = hofer_length_analytic(K);
  rep.consequence_applicable = (LK + 2.0 * nu < LH);
  if (rep.consequence_applicable)
    rep.consequence_ok = std::min(rep.area_HK, rep.area_KH) < LH;
  return rep;
}

nlohmann::json VolumeIdentityReport::to_json() const {
  nlohmann::json j;
  j["vol_HK"] = vol_HK;
  j["vol_HK_stderr"] = vol_HK_err;
  j["vol_KH"] = vol_KH;
  j["vol_KH_stderr"] = vol_KH_err;
  j["vol_H"] = vol_H;
  j["vol_H_stderr"] = vol_H_err;
  j["vol_K"] = vol_K;
  j["vol_K_stderr"] = vol_K_err;
  j["lhs"] = lhs;
  j["rhs"] = rhs;
  j["identity_sigma"] = identity_sigma;
  j["identity_ok"] = identity_ok;
  j["area_HK"] = area_HK;
  j["area_KH"] = area_KH;
  j["consequence_applicable"] = consequence_applicable;
  j["consequence_ok"] = consequence_ok;
  return j;
}

nlohmann::json region_summary_json(const HamiltonianFn& H, double nu, int samples, Rng& rng) {
  nlohmann::json j;
  QuasiCylinder c = split_graph(H, nu);
  MeanStderr vol = mc_cylinder_volume(c, samples, rng);
  j["hamiltonian"] = H.name;
  j["manifold"] = H.manifold.label();
  j["L"] = hofer_length_analytic(H);
  j["nu"] = nu;
  j["area"] = c.area();
  j["volume"] = vol.mean;
  j["stderr"] = vol.stderr_;
  return j;
}

}  // namespace symcap
