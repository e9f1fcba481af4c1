#pragma once

#include "symcap/dynamics.hpp"

#include "json.hpp"

namespace symcap {

// ===========================================================================
// Graph regions and quasi-cylinders.
//
// For a Hamiltonian normalized to min_x H_t(x) = 0 the region below the graph
// thickened by nu/2 is
//     R_H^-(nu/2) = { (x,s,t) : -nu/2 <= s <= H_t(x) }
// and above,
//     R_H^+(nu/2) = { (x,s,t) : H_t(x) <= s <= h_inf + nu/2 },
// with the constant profiles ell = -nu/2 and mu = h_inf + nu/2.  R_H(nu) is
// their union, a split quasi-cylinder of area L(H) + nu; the area of a
// quasi-cylinder is vol(total) / vol(M).
// ===========================================================================

enum class RegionSide { Below, Above };

struct GraphRegion {
  ManifoldModel base;
  HamiltonianFn H;  // normalized: min_x H_t = 0 for every t
  RegionSide side = RegionSide::Below;
  double nu = 0.0;
  double h_inf = 0.0;

  double ell(double) const { return -0.5 * nu; }
  double mu(double) const { return h_inf + 0.5 * nu; }

  // positive inside; includes the t-range and profile constraints
  double membership_margin(const PointRepr& x, double s, double t) const;
  bool contains(const PointRepr& x, double s, double t) const {
    return membership_margin(x, s, t) >= 0.0;
  }
};

GraphRegion region_below(const HamiltonianFn& H, double nu);
GraphRegion region_above(const HamiltonianFn& H, double nu);

// full thickened region R_H(nu) (splits as below + above)
struct SplitRegion {
  GraphRegion below;
  GraphRegion above;
};
SplitRegion region_pair(const HamiltonianFn& H, double nu);

// --- quasi-cylinders ---------------------------------------------------------

enum class CylinderForm { SplitProduct, SplitGraph, Glued };

struct QuasiCylinder {
  ManifoldModel base;
  CylinderForm form = CylinderForm::SplitProduct;
  double disk_area = 0.0;          // SplitProduct
  HamiltonianFn H, K;              // SplitGraph (H only) / Glued
  double nu = 0.0;
  double h_H = 0.0, h_K = 0.0;     // cached sup_{x,t} of the normalized H, K

  // analytic area for the split forms; Glued has no closed form
  double area() const;
  bool is_split() const { return form != CylinderForm::Glued; }
};

QuasiCylinder split_product(const ManifoldModel& m, double a);
QuasiCylinder split_graph(const HamiltonianFn& H, double nu);

// The joining map g(x,s,t) = (phi_t^H (phi_t^K)^{-1} x,
//                             s - K_t(x) + H_t(phi_t^H (phi_t^K)^{-1} x), t).
struct GluePoint {
  PointRepr x;
  double s = 0.0;
  double t = 0.0;
};
GluePoint g_map(const HamiltonianFn& H, const HamiltonianFn& K, const GluePoint& p);

// R_{H,K}(nu) = R_H^-(nu/2) u g(R_K^+(nu/2)).  Requires phi_1^H = phi_1^K,
// verified at `endpoint_samples` random points to 1e-6.
QuasiCylinder glue(const HamiltonianFn& H, const HamiltonianFn& K, double nu,
                   int endpoint_samples, Rng& rng);

bool glued_contains(const QuasiCylinder& c, const PointRepr& x, double s, double t);

// Pullback residual of g against the product form at a sampled interior
// point (finite-difference Jacobian).
double g_symplecticity_residual(const HamiltonianFn& H, const HamiltonianFn& K,
                                const GluePoint& p);

// --- areas and volumes ---------------------------------------------------------

double region_area(const GraphRegion& r);    // analytic: L-part + nu/2
double region_area(const QuasiCylinder& c);  // analytic for split forms

MeanStderr mc_region_volume(const GraphRegion& r, int samples, Rng& rng);
MeanStderr mc_cylinder_volume(const QuasiCylinder& c, int samples, Rng& rng);
// Monte Carlo area of a glued cylinder: volume / vol(base)
MeanStderr mc_cylinder_area(const QuasiCylinder& c, int samples, Rng& rng);

// --- Lemma-2.1-style volume identity -------------------------------------------

struct VolumeIdentityReport {
  double vol_HK = 0.0, vol_HK_err = 0.0;
  double vol_KH = 0.0, vol_KH_err = 0.0;
  double vol_H = 0.0, vol_H_err = 0.0;
  double vol_K = 0.0, vol_K_err = 0.0;
  double lhs = 0.0, rhs = 0.0;
  double identity_sigma = 0.0;  // |lhs-rhs| in combined standard errors
  bool identity_ok = false;     // within 3 sigma
  double area_HK = 0.0, area_KH = 0.0;
  bool consequence_applicable = false;  // L(K) + 2 nu < L(H)
  bool consequence_ok = false;          // min(area_HK, area_KH) < L(H)
  nlohmann::json to_json() const;
};

VolumeIdentityReport volume_identity_report(const HamiltonianFn& H, const HamiltonianFn& K,
                                            double nu, int samples, Rng& rng,
                                            bool enforce_endpoints = true);

nlohmann::json region_summary_json(const HamiltonianFn& H, double nu, int samples, Rng& rng);

}  // namespace symcap
