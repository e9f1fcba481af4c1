#include "symcap/geometry.hpp"

#include <algorithm>

namespace symcap {

namespace {

constexpr double kDivisorTube = 1e-8;

void other_indices(int chart, int& a, int& b) {
  a = (chart == 0) ? 1 : 0;
  b = (chart == 2) ? 1 : 2;
}

}  // namespace

// --- ManifoldModel ----------------------------------------------------------

ManifoldModel ManifoldModel::cp2() {
  ManifoldModel m;
  m.kind = ManifoldKind::CP2;
  return m;
}

ManifoldModel ManifoldModel::blowup(double lambda) {
  if (!(lambda > 0.0 && lambda < 1.0))
    throw DomainViolationError("blow-up radius must satisfy 0 < lambda < 1");
  ManifoldModel m;
  m.kind = ManifoldKind::BlowupCP2;
  m.lambda = lambda;
  return m;
}

ManifoldModel ManifoldModel::cp1() {
  ManifoldModel m;
  m.kind = ManifoldKind::CP1;
  return m;
}

ManifoldModel ManifoldModel::disk(double area) {
  if (!(area > 0.0)) throw DomainViolationError("disk area must be positive");
  ManifoldModel m;
  m.kind = ManifoldKind::Disk;
  m.disk_area = area;
  return m;
}

ManifoldModel ManifoldModel::product(const ManifoldModel& base, double disk_area) {
  if (base.has_disk_factor())
    throw UnsupportedError("products are supported over projective bases only");
  if (!(disk_area > 0.0)) throw DomainViolationError("disk area must be positive");
  ManifoldModel m;
  m.kind = ManifoldKind::ProductWithDisk;
  m.disk_area = disk_area;
  m.base = std::make_shared<ManifoldModel>(base);
  return m;
}

int ManifoldModel::dim() const {
  switch (kind) {
    case ManifoldKind::CP2:
    case ManifoldKind::BlowupCP2:
      return 4;
    case ManifoldKind::CP1:
    case ManifoldKind::Disk:
      return 2;
    case ManifoldKind::ProductWithDisk:
      return base->dim() + 2;
  }
  return 0;
}

std::string ManifoldModel::label() const {
  switch (kind) {
    case ManifoldKind::CP2:
      return "CP2";
    case ManifoldKind::BlowupCP2:
      return "BlowupCP2(lambda=" + format_double(lambda) + ")";
    case ManifoldKind::CP1:
      return "CP1";
    case ManifoldKind::Disk:
      return "Disk(" + format_double(disk_area) + ")";
    case ManifoldKind::ProductWithDisk:
      return base->label() + "xDisk(" + format_double(disk_area) + ")";
  }
  return "?";
}

// --- PointRepr ---------------------------------------------------------------

PointRepr PointRepr::projective(Complex z0, Complex z1, Complex z2) {
  PointRepr p;
  p.z = {z0, z1, z2};
  p.canonicalize();
  return p;
}

PointRepr PointRepr::disk_point(double x, double y) {
  PointRepr p;
  p.disk = Vector2d(x, y);
  return p;
}

void PointRepr::canonicalize() {
  double n = std::sqrt(norm_sq());
  if (n < 1e-300) throw DomainViolationError("zero homogeneous vector");
  for (auto& c : z) c /= n;
  for (const auto& c : z) {
    double a = std::abs(c);
    if (a > 1e-14) {
      Complex phase = std::conj(c) / a;
      for (auto& w : z) w *= phase;
      break;
    }
  }
  // kill the roundoff imaginary part of the pivot
  for (auto& c : z) {
    if (std::abs(c.imag()) < 1e-18 * std::abs(c.real())) c = Complex(c.real(), c.imag());
  }
}

bool point_valid(const ManifoldModel& m, const PointRepr& p, double tol) {
  switch (m.kind) {
    case ManifoldKind::CP2:
      return std::abs(p.norm_sq() - 1.0) <= tol;
    case ManifoldKind::BlowupCP2: {
      double r2 = p.rho_sq();
      return std::abs(p.norm_sq() - 1.0) <= tol && r2 >= m.lambda * m.lambda - tol;
    }
    case ManifoldKind::CP1:
      return std::abs(p.norm_sq() - 1.0) <= tol && std::abs(p.z[2]) <= tol;
    case ManifoldKind::Disk:
      return p.disk.squaredNorm() <= m.disk_area / kPi + tol;
    case ManifoldKind::ProductWithDisk:
      return point_valid(*m.base, p, tol) &&
             p.disk.squaredNorm() <= m.disk_area / kPi + tol;
  }
  return false;
}

namespace {

// chordal distance with a canonical-representative Euclidean floor (the
// chordal sqrt alone cannot resolve distances below ~1e-8)
double projective_distance(std::array<Complex, 3> a, std::array<Complex, 3> b) {
  Complex ip = std::conj(a[0]) * b[0] + std::conj(a[1]) * b[1] + std::conj(a[2]) * b[2];
  double chordal = std::sqrt(std::max(0.0, 1.0 - std::norm(ip)));
  double mag = std::abs(ip);
  if (mag > 1e-14) {
    Complex phase = ip / mag;
    double e2 = 0.0;
    for (int i = 0; i < 3; ++i) e2 += std::norm(a[i] * phase - b[i]);
    return std::min(chordal, std::sqrt(e2));
  }
  return chordal;
}

}  // namespace

double point_distance(const ManifoldModel& m, const PointRepr& a, const PointRepr& b) {
  double proj = 0.0;
  if (m.projective()) {
    if (m.kind == ManifoldKind::BlowupCP2) {
      double l2 = m.lambda * m.lambda;
      if (std::abs(a.rho_sq() - l2) < 1e-12 && std::abs(b.rho_sq() - l2) < 1e-12) {
        // exceptional divisor: compare [z1:z2] rays only
        proj = projective_distance({Complex(0, 0), a.z[1], a.z[2]},
                                   {Complex(0, 0), b.z[1], b.z[2]}) /
               std::sqrt(a.rho_sq() * b.rho_sq());
        double dd0 = m.has_disk_factor() ? (a.disk - b.disk).norm() : 0.0;
        return std::hypot(proj, dd0);
      }
    }
    proj = projective_distance(a.z, b.z);
  }
  double dd = m.has_disk_factor() ? (a.disk - b.disk).norm() : 0.0;
  return std::hypot(proj, dd);
}

// --- charts ------------------------------------------------------------------

int best_chart(const ManifoldModel& m, const PointRepr& p) {
  if (!m.projective()) {
    if (m.kind == ManifoldKind::ProductWithDisk) return best_chart(*m.base, p);
    return 0;
  }
  int n = (m.kind == ManifoldKind::CP1) ? 2 : 3;
  int k = 0;
  double best = -1.0;
  for (int i = 0; i < n; ++i) {
    double a = std::norm(p.z[i]);
    if (a > best) {
      best = a;
      k = i;
    }
  }
  return k;
}

VectorXd chart_coords(const ManifoldModel& m, const PointRepr& p, int chart) {
  switch (m.kind) {
    case ManifoldKind::CP2:
    case ManifoldKind::BlowupCP2: {
      if (std::abs(p.z[chart]) < 1e-12)
        throw ChartDegenerateError("point on the boundary of chart " + std::to_string(chart));
      int a, b;
      other_indices(chart, a, b);
      Complex wa = p.z[a] / p.z[chart];
      Complex wb = p.z[b] / p.z[chart];
      VectorXd v(4);
      v << wa.real(), wa.imag(), wb.real(), wb.imag();
      return v;
    }
    case ManifoldKind::CP1: {
      if (chart > 1) throw UnsupportedError("CP1 has charts 0 and 1");
      if (std::abs(p.z[chart]) < 1e-12) throw ChartDegenerateError("CP1 chart degenerate");
      Complex w = p.z[1 - chart] / p.z[chart];
      VectorXd v(2);
      v << w.real(), w.imag();
      return v;
    }
    case ManifoldKind::Disk:
      return p.disk;
    case ManifoldKind::ProductWithDisk: {
      VectorXd bc = chart_coords(*m.base, p, chart);
      VectorXd v(bc.size() + 2);
      v << bc, p.disk;
      return v;
    }
  }
  throw UnsupportedError("chart_coords");
}

PointRepr point_from_chart(const ManifoldModel& m, int chart, const VectorXd& coords) {
  switch (m.kind) {
    case ManifoldKind::CP2:
    case ManifoldKind::BlowupCP2: {
      int a, b;
      other_indices(chart, a, b);
      std::array<Complex, 3> z;
      z[chart] = Complex(1, 0);
      z[a] = Complex(coords[0], coords[1]);
      z[b] = Complex(coords[2], coords[3]);
      return PointRepr::projective(z[0], z[1], z[2]);
    }
    case ManifoldKind::CP1: {
      std::array<Complex, 3> z = {Complex(0, 0), Complex(0, 0), Complex(0, 0)};
      z[chart] = Complex(1, 0);
      z[1 - chart] = Complex(coords[0], coords[1]);
      return PointRepr::projective(z[0], z[1], z[2]);
    }
    case ManifoldKind::Disk:
      return PointRepr::disk_point(coords[0], coords[1]);
    case ManifoldKind::ProductWithDisk: {
      PointRepr p = point_from_chart(*m.base, chart, coords.head(coords.size() - 2));
      p.disk = coords.tail(2);
      return p;
    }
  }
  throw UnsupportedError("point_from_chart");
}

namespace {

// Form matrix of the Fubini-Study form (line area pi) in affine chart
// coordinates; nc complex coordinates w, flattened (re,im)*nc.
MatrixXd fs_form_matrix(const std::vector<Complex>& w) {
  int nc = static_cast<int>(w.size());
  double s = 1.0;
  for (const auto& c : w) s += std::norm(c);
  Eigen::MatrixXcd h(nc, nc);
  for (int j = 0; j < nc; ++j)
    for (int k = 0; k < nc; ++k)
      h(j, k) = ((j == k) ? Complex(1.0 / s, 0) : Complex(0, 0)) -
                std::conj(w[j]) * w[k] / (s * s);
  MatrixXd omega(2 * nc, 2 * nc);
  auto basis = [nc](int a) {
    Eigen::VectorXcd e = Eigen::VectorXcd::Zero(nc);
    e[a / 2] = (a % 2 == 0) ? Complex(1, 0) : Complex(0, 1);
    return e;
  };
  omega.setZero();
  for (int a = 0; a < 2 * nc; ++a)
    for (int b = a + 1; b < 2 * nc; ++b) {
      Eigen::VectorXcd u = basis(a), v = basis(b);
      Complex acc = 0;
      for (int j = 0; j < nc; ++j)
        for (int k = 0; k < nc; ++k) acc += h(j, k) * u[j] * std::conj(v[k]);
      omega(a, b) = -acc.imag();
      omega(b, a) = acc.imag();  // antisymmetric by construction
    }
  return omega;
}

}  // namespace

MatrixXd symplectic_form_matrix(const ManifoldModel& m, const PointRepr& p, int chart) {
  switch (m.kind) {
    case ManifoldKind::CP2:
    case ManifoldKind::BlowupCP2: {
      if (std::norm(p.z[chart]) < 0.05)
        throw ChartDegenerateError("chart " + std::to_string(chart) +
                                   " nearly degenerate; switch charts");
      VectorXd c = chart_coords(m, p, chart);
      return fs_form_matrix({Complex(c[0], c[1]), Complex(c[2], c[3])});
    }
    case ManifoldKind::CP1: {
      if (std::norm(p.z[chart]) < 0.05) throw ChartDegenerateError("CP1 chart degenerate");
      VectorXd c = chart_coords(m, p, chart);
      return fs_form_matrix({Complex(c[0], c[1])});
    }
    case ManifoldKind::Disk: {
      MatrixXd o(2, 2);
      o << 0, 1, -1, 0;
      return o;
    }
    case ManifoldKind::ProductWithDisk: {
      MatrixXd ob = symplectic_form_matrix(*m.base, p, chart);
      int n = static_cast<int>(ob.rows());
      MatrixXd o = MatrixXd::Zero(n + 2, n + 2);
      o.topLeftCorner(n, n) = ob;
      o(n, n + 1) = 1;
      o(n + 1, n) = -1;
      return o;
    }
  }
  throw UnsupportedError("symplectic_form_matrix");
}

MatrixXd symplectic_form_matrix(const ManifoldModel& m, const PointRepr& p) {
  return symplectic_form_matrix(m, p, best_chart(m, p));
}

// --- moment map / polytope -----------------------------------------------------

Vector2d moment_map_rho(const PointRepr& p) {
  double s = p.norm_sq();
  return Vector2d(0.5 * kPi * std::norm(p.z[0]) / s, 0.5 * kPi * std::norm(p.z[1]) / s);
}

double PolytopeModel::area() const {
  double a = 0.0;
  int n = static_cast<int>(vertices.size());
  for (int i = 0; i < n; ++i) {
    const Vector2d& p = vertices[i];
    const Vector2d& q = vertices[(i + 1) % n];
    a += p.x() * q.y() - q.x() * p.y();
  }
  return 0.5 * a;
}

double PolytopeModel::containment_margin(const Vector2d& xy) const {
  double margin = std::numeric_limits<double>::infinity();
  int n = static_cast<int>(vertices.size());
  for (int i = 0; i < n; ++i) {
    const Vector2d& p = vertices[i];
    const Vector2d& q = vertices[(i + 1) % n];
    Vector2d e = q - p;
    double len = e.norm();
    // inward distance for a counterclockwise polygon
    double d = (e.x() * (xy.y() - p.y()) - e.y() * (xy.x() - p.x())) / len;
    margin = std::min(margin, d);
  }
  return margin;
}

PolytopeModel polytope(const ManifoldModel& m) {
  PolytopeModel poly;
  double h = 0.5 * kPi;
  switch (m.kind) {
    case ManifoldKind::CP2:
      poly.vertices = {Vector2d(0, 0), Vector2d(h, 0), Vector2d(0, h)};
      return poly;
    case ManifoldKind::BlowupCP2: {
      double l2 = m.lambda * m.lambda;
      poly.vertices = {Vector2d(0, 0), Vector2d(h * (1 - l2), 0),
                       Vector2d(h * (1 - l2), h * l2), Vector2d(0, h)};
      return poly;
    }
    default:
      throw UnsupportedError("polytope is defined for CP2 and BlowupCP2 only");
  }
}

// --- volume --------------------------------------------------------------------

double volume(const ManifoldModel& m) {
  switch (m.kind) {
    case ManifoldKind::CP2:
      return kPi * kPi / 2.0;
    case ManifoldKind::BlowupCP2: {
      double l4 = std::pow(m.lambda, 4);
      return kPi * kPi / 2.0 * (1.0 - l4);
    }
    case ManifoldKind::CP1:
      return kPi;
    case ManifoldKind::Disk:
      return m.disk_area;
    case ManifoldKind::ProductWithDisk:
      return volume(*m.base) * m.disk_area;
  }
  return 0.0;
}

namespace {

// Polygon integral of x (resp. y) over the polytope, for analytic means.
double polygon_first_moment(const PolytopeModel& poly, bool of_x) {
  double acc = 0.0;
  int n = static_cast<int>(poly.vertices.size());
  for (int i = 0; i < n; ++i) {
    const Vector2d& p = poly.vertices[i];
    const Vector2d& q = poly.vertices[(i + 1) % n];
    double cross = p.x() * q.y() - q.x() * p.y();
    if (of_x)
      acc += (p.x() + q.x()) * cross;
    else
      acc += (p.y() + q.y()) * cross;
  }
  return acc / 6.0;
}

}  // namespace

double mean_moment_x(const ManifoldModel& m) {
  if (m.kind == ManifoldKind::CP1) return kPi / 4.0;
  PolytopeModel poly = polytope(m);
  return polygon_first_moment(poly, true) / poly.area();
}

double mean_moment_y(const ManifoldModel& m) {
  if (m.kind == ManifoldKind::CP1) return kPi / 4.0;
  PolytopeModel poly = polytope(m);
  return polygon_first_moment(poly, false) / poly.area();
}

MeanStderr mc_volume(const ManifoldModel& m, int samples, Rng& rng) {
  switch (m.kind) {
    case ManifoldKind::CP2:
    case ManifoldKind::BlowupCP2: {
      // Split into the three cells {|z_k| maximal}; in chart k each cell is
      // the closed unit bidisk and the Liouville density is (1+|w|^2)^-3.
      double l2 = (m.kind == ManifoldKind::BlowupCP2) ? m.lambda * m.lambda : -1.0;
      double sum = 0.0, sumsq = 0.0;
      for (int i = 0; i < samples; ++i) {
        double w = 0.0;
        for (int chart = 0; chart < 3; ++chart) {
          VectorXd a = sample_ball(rng, 2, 1.0);
          VectorXd b = sample_ball(rng, 2, 1.0);
          double n2 = a.squaredNorm() + b.squaredNorm();
          double s = 1.0 + n2;
          // rho^2 of the chart point (z_chart = 1 before normalizing)
          int ia, ib;
          other_indices(chart, ia, ib);
          double mods[3];
          mods[chart] = 1.0;
          mods[ia] = a.squaredNorm();
          mods[ib] = b.squaredNorm();
          double rho2 = (mods[1] + mods[2]) / s;
          if (l2 < 0.0 || rho2 >= l2) w += 1.0 / (s * s * s);
        }
        w *= kPi * kPi;  // bidisk proposal has area pi^2
        sum += w;
        sumsq += w * w;
      }
      double mean = sum / samples;
      double var = std::max(0.0, sumsq / samples - mean * mean);
      return {mean, std::sqrt(var / samples)};
    }
    case ManifoldKind::CP1: {
      double sum = 0.0, sumsq = 0.0;
      for (int i = 0; i < samples; ++i) {
        double w = 0.0;
        for (int chart = 0; chart < 2; ++chart) {
          VectorXd a = sample_ball(rng, 2, 1.0);
          double s = 1.0 + a.squaredNorm();
          w += 1.0 / (s * s);
        }
        w *= kPi;
        sum += w;
        sumsq += w * w;
      }
      double mean = sum / samples;
      double var = std::max(0.0, sumsq / samples - mean * mean);
      return {mean, std::sqrt(var / samples)};
    }
    case ManifoldKind::Disk: {
      // rejection from the bounding square of the radius-sqrt(a/pi) disk
      double r = std::sqrt(m.disk_area / kPi);
      int hits = 0;
      for (int i = 0; i < samples; ++i) {
        double x = rng.uniform(-r, r), y = rng.uniform(-r, r);
        if (x * x + y * y <= r * r) ++hits;
      }
      double p = static_cast<double>(hits) / samples;
      double box = 4.0 * r * r;
      return {box * p, box * std::sqrt(p * (1 - p) / samples)};
    }
    case ManifoldKind::ProductWithDisk: {
      MeanStderr base = mc_volume(*m.base, samples, rng);
      return {base.mean * m.disk_area, base.stderr_ * m.disk_area};
    }
  }
  throw UnsupportedError("mc_volume");
}

PointRepr sample_point(const ManifoldModel& m, Rng& rng) {
  switch (m.kind) {
    case ManifoldKind::CP2: {
      VectorXd v = sample_ball(rng, 4, 1.0);
      double n2 = v.squaredNorm();
      return PointRepr::projective(Complex(std::sqrt(std::max(0.0, 1.0 - n2)), 0),
                                   Complex(v[0], v[1]), Complex(v[2], v[3]));
    }
    case ManifoldKind::BlowupCP2: {
      double l2 = m.lambda * m.lambda;
      for (int tries = 0; tries < 10000; ++tries) {
        VectorXd v = sample_ball(rng, 4, 1.0);
        double n2 = v.squaredNorm();
        if (n2 < l2 + kDivisorTube || n2 > 1.0 - kDivisorTube) continue;
        return PointRepr::projective(Complex(std::sqrt(1.0 - n2), 0), Complex(v[0], v[1]),
                                     Complex(v[2], v[3]));
      }
      throw DomainViolationError("blow-up sampling failed");
    }
    case ManifoldKind::CP1: {
      VectorXd v = sample_ball(rng, 2, 1.0);
      double n2 = v.squaredNorm();
      return PointRepr::projective(Complex(std::sqrt(std::max(0.0, 1.0 - n2)), 0),
                                   Complex(v[0], v[1]), Complex(0, 0));
    }
    case ManifoldKind::Disk: {
      VectorXd v = sample_ball(rng, 2, std::sqrt(m.disk_area / kPi));
      return PointRepr::disk_point(v[0], v[1]);
    }
    case ManifoldKind::ProductWithDisk: {
      PointRepr p = sample_point(*m.base, rng);
      VectorXd v = sample_ball(rng, 2, std::sqrt(m.disk_area / kPi));
      p.disk = v;
      return p;
    }
  }
  throw UnsupportedError("sample_point");
}

}  // namespace symcap
