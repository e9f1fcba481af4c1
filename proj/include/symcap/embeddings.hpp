#pragma once

#include <memory>

#include "symcap/regions.hpp"

namespace symcap {

// ===========================================================================
// Explicit symplectic embeddings and their verification.
//
// The chart embeddings i^-(z1,z2) = [sqrt(1-|z|^2) : z1 : z2] and
// i^+(z1,z2) = [z1 : sqrt(1-|z|^2) : z2] pull the Fubini-Study form back to
// the standard form on the unit ball.  The disk-to-rectangle families are
// built from nested smooth convex curves (p-norm "rounded rectangles") of
// enclosed area pi t^2 whose centers drift with the moving target
// rectangles; mapping circles onto the curves by matching swept area makes
// the map exactly area preserving wherever the curve family is transverse.
// ===========================================================================

enum class ImageKind { Flat, Manifold, GraphPoint };

struct ImagePoint {
  ImageKind kind = ImageKind::Flat;
  VectorXd flat;   // Flat
  PointRepr p;     // Manifold / GraphPoint
  double s = 0.0;  // GraphPoint
  double t = 0.0;  // GraphPoint
};

MatrixXd standard_form(int dim);

struct MapDomain {
  int dim = 2;
  double ball_radius = 0.0;  // > 0 when the domain is a standard ball
  MatrixXd form;  // constant form matrix in domain coordinates
  std::function<VectorXd(Rng&)> sample;
  std::string desc;
};

// open ball of the given radius; optionally excludes a thin tube around the
// zero set of the first complex coordinate (where gauge phases degenerate)
MapDomain ball_domain(int dim, double radius, double tube_w0 = 0.0);

struct MapCodomain {
  ImageKind kind = ImageKind::Flat;
  MatrixXd flat_form;    // Flat
  ManifoldModel manifold;  // Manifold / GraphPoint
  std::shared_ptr<const GraphRegion> region;  // GraphPoint
  // containment margin (>= 0 inside); may use the domain point
  std::function<double(const VectorXd&, const ImagePoint&)> margin;
};

struct SymplecticMapSpec {
  std::string name;
  MapDomain domain;
  MapCodomain codomain;
  std::function<ImagePoint(const VectorXd&)> evaluate;
  // analytic Jacobian d(image coordinates)/dx for a given image chart;
  // empty => central finite differences
  std::function<MatrixXd(const VectorXd&, int chart)> jacobian;
};

struct MapVerification {
  std::string map_name;
  int probes = 0;
  double max_pullback_residual = 0.0;
  double min_containment_margin = 0.0;
  double min_separation_ratio = 0.0;  // injectivity evidence
  double jacobian_fd_agreement = 0.0;  // analytic-vs-FD cross-check, when applicable
  bool pass = false;
  nlohmann::json to_json() const;
};

MapVerification verify_map(const SymplecticMapSpec& m, int probes, double tol, Rng& rng);

// --- chart embeddings -----------------------------------------------------------

PointRepr i_minus(Complex z1, Complex z2);
PointRepr i_plus(Complex z1, Complex z2);
SymplecticMapSpec make_i_minus_spec(double radius = 0.9);
SymplecticMapSpec make_i_plus_spec(double radius = 0.9);
// negative control: one complex input coordinate scaled by `factor`
SymplecticMapSpec make_corrupted_i_minus_spec(double factor = 1.01, double radius = 0.9);
// identity on D(a) (trivial control)
SymplecticMapSpec make_disk_identity_spec(double area);

// --- disk-to-rectangle families ---------------------------------------------------

enum class RectVariant { MinusCP2, PlusCP2, MinusBlowup, PlusBlowup };

struct RectBounds {
  double x0 = 0, x1 = 0, y0 = 0, y1 = 0;
};

class DiskRectFamily {
 public:
  DiskRectFamily(RectVariant variant, double R, double eps, double lambda);

  Vector2d evaluate(double u, double v) const;
  Matrix2d jacobian(double u, double v) const;  // analytic, det = 1
  RectBounds rect_of(double r) const;           // target rectangle labels
  double right_edge_bound(double r) const;      // strict per-radius x bound

  RectVariant variant() const { return variant_; }
  double R() const { return R_; }
  double eps() const { return eps_; }
  double lambda() const { return lambda_; }
  int curve_order() const { return p_; }

 private:
  friend struct FamilyAccess;
  bool minus_form() const {
    return variant_ == RectVariant::MinusCP2 || variant_ == RectVariant::MinusBlowup;
  }
  Vector2d eval_minus(double u, double v) const;
  Matrix2d jac_minus(double u, double v) const;

  RectVariant variant_;
  double R_, eps_, lambda_, delta_;
  int p_ = 6;
  double area_p_ = 0.0;  // area of the unit p-squircle
  double cb_ = 0.0, ka_ = 0.0;
  int panels_ = 256;
  void validate() const;
};

std::shared_ptr<const DiskRectFamily> build_disk_rect_family(RectVariant variant, double R,
                                                             double eps, double lambda = 0.0);

// wraps a family as a verifiable map (flat codomain, rect_of(r+eps) margins)
SymplecticMapSpec make_psi_spec(const std::shared_ptr<const DiskRectFamily>& fam);

// --- products into the graph regions ------------------------------------------------

// Psi^-/Psi^+ : B^6(1/sqrt(2)-eps) -> R_P^-/+ over CP2 (lambda = 0) or, for
// the + side over the blow-up, B^6(S) with S = sqrt((1-lambda^2)/2)-eps.
SymplecticMapSpec make_Psi_minus_spec(double eps, double nu);
SymplecticMapSpec make_Psi_plus_spec(double eps, double nu, double lambda = 0.0);

// Upsilon^- : B^6(S) -> R_P^- over the blow-up.
SymplecticMapSpec make_Upsilon_minus_spec(double lambda, double eps, double nu);

// --- the blow-up chain ----------------------------------------------------------------

// U_s in the blow-up, V_s in R^4, the cut T_s, and the standard trapezoid:
//   U_s = { [z0:z1:z2] : |z0|^2 = 1-lambda^2-tau^2, |z1|^2 < tau^2, tau < s }
//   V_s = { (zeta0, zeta1) : delta^2-s^2 < |zeta0|^2 < delta^2,
//                            |zeta1|^2 < delta^2-|zeta0|^2 },  delta^2 = 1-lambda^2
//   T_s = { (x, y, z1) : 0 < x < pi s, 0 < y < s, |z1|^2 < s y }
//   T4(pi s^2) = { (x, y, z1) : 0 < x < 1, 0 < y < pi s^2, |z1|^2 < s^2 - y/pi }
struct BlowupChain {
  double s = 0.0, lambda = 0.0;
  SymplecticMapSpec v_to_u;   // chart embedding into the blow-up
  SymplecticMapSpec v_to_t;   // annulus cut (action-angle on zeta0)
  SymplecticMapSpec t_to_t4;  // rescale + orientation flip onto T4(pi s^2)
  // inverses for round-trip checks
  std::function<VectorXd(const PointRepr&)> u_to_v;
  std::function<VectorXd(const VectorXd&)> t_to_v;
  std::function<VectorXd(const VectorXd&)> t4_to_t;
};

BlowupChain blowup_chain(double s, double lambda);

// j_s^- : B^4(s-eps) -> U_s.  Toric action-angle construction: spheres of
// radius sigma land on the exact P-level (pi/2)(1-lambda^2-sigma^2); the
// gauge is singular on the null slice {w0 = 0}, which the probe domain
// excludes (see the domain tube).
SymplecticMapSpec make_j_minus_spec(double s, double eps, double lambda);

// membership margin of U_s at a blow-up point
double u_region_margin(double s, double lambda, const PointRepr& p);

}  // namespace symcap
