#pragma once

#include <memory>
#include <optional>

#include "symcap/core.hpp"

namespace symcap {

// ===========================================================================
// Toric surface models.
//
// The projective kinds (CP2, its one-point blow-up, CP1 embedded as the line
// {z2 = 0}) carry the Fubini-Study form normalized so that a projective line
// has area pi.  Under that normalization the moment map
//     rho([z0:z1:z2]) = (pi/2) (|z0|^2, |z1|^2) / sum |z_i|^2
// sends CP2 onto the closed triangle with legs pi/2, the rotation generated
// by P = rho_x has flow [e^{i pi t} z0 : z1 : z2], and the chart embeddings
// (z1,z2) -> [sqrt(1-|z|^2) : z1 : z2] pull the form back to the standard
// form on the unit ball.  Liouville measure pushes forward to 4x Lebesgue on
// the moment polytope (each printed angle parameter has period 2), so
// vol(CP2) = pi^2/2 = 4 x (polytope area).
// ===========================================================================

enum class ManifoldKind { CP2, BlowupCP2, CP1, Disk, ProductWithDisk };

struct ManifoldModel {
  ManifoldKind kind = ManifoldKind::CP2;
  double lambda = 0.0;     // blow-up radius, BlowupCP2 only, in (0,1)
  double disk_area = 0.0;  // Disk / ProductWithDisk
  std::shared_ptr<const ManifoldModel> base;  // ProductWithDisk only

  static ManifoldModel cp2();
  static ManifoldModel blowup(double lambda);
  static ManifoldModel cp1();
  static ManifoldModel disk(double area);
  static ManifoldModel product(const ManifoldModel& base, double disk_area);

  int dim() const;  // real dimension: 4, 4, 2, 2, base+2
  bool projective() const {
    return kind == ManifoldKind::CP2 || kind == ManifoldKind::BlowupCP2 ||
           kind == ManifoldKind::CP1;
  }
  bool has_disk_factor() const {
    return kind == ManifoldKind::Disk || kind == ManifoldKind::ProductWithDisk;
  }
  std::string label() const;
};

// A point of any of the models.  Projective kinds use the homogeneous triple
// (normalized to |z|=1, first nonzero coordinate real positive); Disk uses
// `disk`; a product uses both.  CP1 points satisfy z2 = 0.
struct PointRepr {
  std::array<Complex, 3> z = {Complex(1, 0), Complex(0, 0), Complex(0, 0)};
  Vector2d disk = Vector2d::Zero();

  static PointRepr projective(Complex z0, Complex z1, Complex z2);
  static PointRepr disk_point(double x, double y);

  void canonicalize();
  double norm_sq() const { return std::norm(z[0]) + std::norm(z[1]) + std::norm(z[2]); }
  // |z1|^2 + |z2|^2 of the unit representative (the blow-up radial invariant)
  double rho_sq() const { return std::norm(z[1]) + std::norm(z[2]); }
};

// Phase-invariant chordal distance sqrt(1 - |<z,w>|^2) on the projective
// part, Euclidean on the disk part; respects the exceptional-divisor
// equivalence of the blow-up (points with rho^2 = lambda^2 and the same
// [z1:z2] ray are identified).
double point_distance(const ManifoldModel& m, const PointRepr& a, const PointRepr& b);

bool point_valid(const ManifoldModel& m, const PointRepr& p, double tol = 1e-9);

// --- charts -----------------------------------------------------------------
//
// For projective kinds chart k is the affine chart {z_k != 0} with complex
// coordinates (z_a/z_k, z_b/z_k), a<b the other indices, flattened to
// (re, im, re, im).  For CP1 the second complex coordinate is dropped.  Disk
// uses its own Euclidean chart; products concatenate base chart + disk.

int best_chart(const ManifoldModel& m, const PointRepr& p);
VectorXd chart_coords(const ManifoldModel& m, const PointRepr& p, int chart);
PointRepr point_from_chart(const ManifoldModel& m, int chart, const VectorXd& coords);

// Matrix of the symplectic form at p in the coordinates of `chart`
// (antisymmetric, dim x dim).  Throws ChartDegenerateError when p is too
// close to the chart boundary (|z_chart|^2 < 0.05).
MatrixXd symplectic_form_matrix(const ManifoldModel& m, const PointRepr& p, int chart);
MatrixXd symplectic_form_matrix(const ManifoldModel& m, const PointRepr& p);

// --- moment map / polytope ----------------------------------------------------

Vector2d moment_map_rho(const PointRepr& p);

struct PolytopeModel {
  std::vector<Vector2d> vertices;  // counterclockwise
  double area() const;
  // signed distance to the boundary (positive inside); margin >= -tol test
  double containment_margin(const Vector2d& xy) const;
};

PolytopeModel polytope(const ManifoldModel& m);  // CP2 / BlowupCP2 only

// --- volume -------------------------------------------------------------------

// Liouville volume (integral of omega^n / n!).
double volume(const ManifoldModel& m);

// Independent Monte Carlo volume oracle: integrates the chart volume form
// det(h) over per-chart cells (projective kinds) or samples the disk.
MeanStderr mc_volume(const ManifoldModel& m, int samples, Rng& rng);

// Uniform (Liouville) sampling; stays 1e-8 away from collapsed loci of the
// blow-up where chart formulas degenerate.
PointRepr sample_point(const ManifoldModel& m, Rng& rng);

// Mean of a function against normalized Liouville measure (analytic for the
// moment coordinates; used as cross-checks in the certificate engine).
double mean_moment_x(const ManifoldModel& m);  // E[(pi/2)|z0|^2]
double mean_moment_y(const ManifoldModel& m);  // E[(pi/2)|z1|^2]

}  // namespace symcap
