#include "symcap/embeddings.hpp"

#include <algorithm>
#include <vector>

namespace symcap {

namespace {

void other_indices(int chart, int& a, int& b) {
  a = (chart == 0) ? 1 : 0;
  b = (chart == 2) ? 1 : 2;
}

// --- forward-mode complex scalars (4 partials) -----------------------------------

using J4 = Jet<4>;

struct JC {
  J4 re, im;
  JC() = default;
  JC(const J4& r, const J4& i) : re(r), im(i) {}
  JC(double r, double i) : re(r), im(i) {}
};

JC operator+(const JC& a, const JC& b) { return {a.re + b.re, a.im + b.im}; }
JC operator-(const JC& a, const JC& b) { return {a.re - b.re, a.im - b.im}; }
JC operator*(const JC& a, const JC& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
JC operator*(const J4& s, const JC& a) { return {s * a.re, s * a.im}; }
JC conj(const JC& a) { return {a.re, J4(-1.0) * a.im}; }
J4 abs2(const JC& a) { return a.re * a.re + a.im * a.im; }
JC operator/(const JC& a, const J4& s) { return {a.re / s, a.im / s}; }
JC cdiv(const JC& a, const JC& b) { return (a * conj(b)) / abs2(b); }

J4 atan2j(const J4& y, const J4& x) {
  J4 r(std::atan2(y.v, x.v));
  double den = x.v * x.v + y.v * y.v;
  r.d = (x.v * y.d - y.v * x.d) / den;
  return r;
}

// Jacobian of the affine-chart coordinates of a projective point given by
// homogeneous jet coordinates.
MatrixXd jet_chart_jacobian(const std::array<JC, 3>& z, int chart) {
  int a, b;
  other_indices(chart, a, b);
  JC wa = cdiv(z[a], z[chart]);
  JC wb = cdiv(z[b], z[chart]);
  MatrixXd J(4, 4);
  J.row(0) = wa.re.d.transpose();
  J.row(1) = wa.im.d.transpose();
  J.row(2) = wb.re.d.transpose();
  J.row(3) = wb.im.d.transpose();
  return J;
}

std::array<JC, 3> i_minus_jets(const VectorXd& x) {
  J4 x1 = J4::variable(x[0], 0), y1 = J4::variable(x[1], 1);
  J4 x2 = J4::variable(x[2], 2), y2 = J4::variable(x[3], 3);
  J4 n2 = x1 * x1 + y1 * y1 + x2 * x2 + y2 * y2;
  J4 f = sqrt(J4(1.0) - n2);
  return {JC(f, J4(0.0)), JC(x1, y1), JC(x2, y2)};
}

std::array<JC, 3> i_plus_jets(const VectorXd& x) {
  auto zm = i_minus_jets(x);
  return {zm[1], zm[0], zm[2]};
}

std::array<JC, 3> j_minus_jets(const VectorXd& x, double lambda) {
  J4 x0 = J4::variable(x[0], 0), y0 = J4::variable(x[1], 1);
  J4 x1 = J4::variable(x[2], 2), y1 = J4::variable(x[3], 3);
  J4 q0 = x0 * x0 + y0 * y0;
  J4 sigma2 = q0 + x1 * x1 + y1 * y1;
  double d2 = 1.0 - lambda * lambda;
  J4 f = sqrt(J4(d2) - sigma2);
  J4 g = sqrt(J4(lambda * lambda) + q0);
  J4 m0 = sqrt(q0);
  JC phase = JC(x0, y0) / m0;
  return {JC(f, J4(0.0)), JC(x1, y1), g * phase};
}

std::array<JC, 3> v_to_u_jets(const VectorXd& x) {
  J4 a0 = J4::variable(x[0], 0), b0 = J4::variable(x[1], 1);
  J4 a1 = J4::variable(x[2], 2), b1 = J4::variable(x[3], 3);
  J4 q = a0 * a0 + b0 * b0 + a1 * a1 + b1 * b1;
  J4 f = sqrt(J4(1.0) - q);
  return {JC(a0, b0), JC(a1, b1), JC(f, J4(0.0))};
}

}  // namespace

// --- verification machinery ---------------------------------------------------------

MatrixXd standard_form(int dim) {
  MatrixXd o = MatrixXd::Zero(dim, dim);
  for (int i = 0; i + 1 < dim; i += 2) {
    o(i, i + 1) = 1.0;
    o(i + 1, i) = -1.0;
  }
  return o;
}

MapDomain ball_domain(int dim, double radius, double tube_w0) {
  MapDomain d;
  d.dim = dim;
  d.ball_radius = radius;
  d.form = standard_form(dim);
  d.desc = "B^" + std::to_string(dim) + "(" + format_double(radius) + ")";
  if (tube_w0 > 0.0) d.desc += " \\ {|w0|<" + format_double(tube_w0) + "}";
  d.sample = [dim, radius, tube_w0](Rng& rng) {
    for (int tries = 0; tries < 100000; ++tries) {
      VectorXd x = sample_ball(rng, dim, radius * (1.0 - 1e-12));
      if (tube_w0 > 0.0 && std::hypot(x[0], x[1]) < tube_w0) continue;
      return x;
    }
    throw DomainViolationError("domain sampling failed");
  };
  return d;
}

namespace {

VectorXd image_coords(const MapCodomain& cod, const ImagePoint& img, int chart) {
  switch (img.kind) {
    case ImageKind::Flat:
      return img.flat;
    case ImageKind::Manifold:
      return chart_coords(cod.manifold, img.p, chart);
    case ImageKind::GraphPoint: {
      VectorXd c = chart_coords(cod.manifold, img.p, chart);
      VectorXd out(c.size() + 2);
      out << c, img.s, img.t;
      return out;
    }
  }
  throw UnsupportedError("image_coords");
}

MatrixXd image_form(const MapCodomain& cod, const ImagePoint& img, int chart) {
  switch (img.kind) {
    case ImageKind::Flat:
      return cod.flat_form;
    case ImageKind::Manifold:
      return symplectic_form_matrix(cod.manifold, img.p, chart);
    case ImageKind::GraphPoint: {
      MatrixXd base = symplectic_form_matrix(cod.manifold, img.p, chart);
      int n = static_cast<int>(base.rows());
      MatrixXd o = MatrixXd::Zero(n + 2, n + 2);
      o.topLeftCorner(n, n) = base;
      o(n, n + 1) = 1.0;
      o(n + 1, n) = -1.0;
      return o;
    }
  }
  throw UnsupportedError("image_form");
}

double image_distance(const MapCodomain& cod, const ImagePoint& a, const ImagePoint& b) {
  switch (a.kind) {
    case ImageKind::Flat:
      return (a.flat - b.flat).norm();
    case ImageKind::Manifold:
      return point_distance(cod.manifold, a.p, b.p);
    case ImageKind::GraphPoint: {
      double dp = point_distance(cod.manifold, a.p, b.p);
      return std::sqrt(dp * dp + (a.s - b.s) * (a.s - b.s) + (a.t - b.t) * (a.t - b.t));
    }
  }
  return 0.0;
}

}  // namespace

nlohmann::json MapVerification::to_json() const {
  nlohmann::json j;
  j["map"] = map_name;
  j["probes"] = probes;
  j["pullback_residual_max"] = max_pullback_residual;
  j["containment_margin_min"] = min_containment_margin;
  j["min_separation_ratio"] = min_separation_ratio;
  if (jacobian_fd_agreement > 0.0) j["jacobian_fd_agreement"] = jacobian_fd_agreement;
  j["pass"] = pass;
  return j;
}

MapVerification verify_map(const SymplecticMapSpec& m, int probes, double tol, Rng& rng) {
  if (probes < 1) throw DomainViolationError("verify_map: probes must be >= 1");
  MapVerification rec;
  rec.map_name = m.name;
  rec.probes = probes;
  rec.min_containment_margin = std::numeric_limits<double>::infinity();
  rec.min_separation_ratio = std::numeric_limits<double>::infinity();

  std::vector<VectorXd> kept_x;
  std::vector<ImagePoint> kept_img;
  int keep_every = std::max(1, probes / 1200);

  for (int i = 0; i < probes; ++i) {
    VectorXd x = m.domain.sample(rng);
    ImagePoint img = m.evaluate(x);
    double margin = m.codomain.margin ? m.codomain.margin(x, img)
                                      : std::numeric_limits<double>::infinity();
    rec.min_containment_margin = std::min(rec.min_containment_margin, margin);

    int chart = (img.kind == ImageKind::Flat) ? 0 : best_chart(m.codomain.manifold, img.p);
    MatrixXd J;
    if (m.jacobian) {
      J = m.jacobian(x, chart);
      if (i % 109 == 0) {
        auto G = [&](const VectorXd& v) { return image_coords(m.codomain, m.evaluate(v), chart); };
        MatrixXd Jfd = fd_jacobian(G, x, 1e-6);
        rec.jacobian_fd_agreement =
            std::max(rec.jacobian_fd_agreement, (J - Jfd).cwiseAbs().maxCoeff());
      }
    } else {
      auto G = [&](const VectorXd& v) { return image_coords(m.codomain, m.evaluate(v), chart); };
      J = fd_jacobian(G, x, 1e-5);
    }
    MatrixXd om_out = image_form(m.codomain, img, chart);
    double res = (J.transpose() * om_out * J - m.domain.form).cwiseAbs().maxCoeff();
    rec.max_pullback_residual = std::max(rec.max_pullback_residual, res);

    if (i % keep_every == 0) {
      kept_x.push_back(x);
      kept_img.push_back(img);
    }
  }

  // injectivity evidence: separated probes must stay separated
  std::size_t n = kept_x.size();
  if (n >= 2) {
    std::size_t pairs = std::min<std::size_t>(200000, n * (n - 1) / 2);
    for (std::size_t k = 0; k < pairs; ++k) {
      std::size_t i = rng.index(n), j = rng.index(n);
      if (i == j) continue;
      double dd = (kept_x[i] - kept_x[j]).norm();
      if (dd < 1e-3) continue;
      double di = image_distance(m.codomain, kept_img[i], kept_img[j]);
      rec.min_separation_ratio = std::min(rec.min_separation_ratio, di / dd);
    }
  }
  if (!std::isfinite(rec.min_separation_ratio)) rec.min_separation_ratio = 0.0;

  rec.pass = rec.max_pullback_residual <= tol && rec.min_containment_margin >= -1e-12;
  return rec;
}

// --- chart embeddings ------------------------------------------------------------------

PointRepr i_minus(Complex z1, Complex z2) {
  double n2 = std::norm(z1) + std::norm(z2);
  if (n2 >= 1.0) throw DomainViolationError("i^-: |z1|^2+|z2|^2 must be < 1");
  return PointRepr::projective(Complex(std::sqrt(1.0 - n2), 0.0), z1, z2);
}

PointRepr i_plus(Complex z1, Complex z2) {
  double n2 = std::norm(z1) + std::norm(z2);
  if (n2 >= 1.0) throw DomainViolationError("i^+: |z1|^2+|z2|^2 must be < 1");
  return PointRepr::projective(z1, Complex(std::sqrt(1.0 - n2), 0.0), z2);
}

namespace {

SymplecticMapSpec chart_embedding_spec(const std::string& name, bool plus, double radius) {
  SymplecticMapSpec s;
  s.name = name;
  s.domain = ball_domain(4, radius);
  s.codomain.kind = ImageKind::Manifold;
  s.codomain.manifold = ManifoldModel::cp2();
  s.codomain.margin = [radius](const VectorXd& x, const ImagePoint&) {
    return 1.0 - x.squaredNorm();  // stays inside the unit chart ball
  };
  s.evaluate = [plus](const VectorXd& x) {
    ImagePoint img;
    img.kind = ImageKind::Manifold;
    Complex z1(x[0], x[1]), z2(x[2], x[3]);
    img.p = plus ? i_plus(z1, z2) : i_minus(z1, z2);
    return img;
  };
  // finite differences serve as the Jacobian oracle here (the map is smooth)
  return s;
}

}  // namespace

SymplecticMapSpec make_i_minus_spec(double radius) {
  return chart_embedding_spec("i_minus", false, radius);
}

SymplecticMapSpec make_i_plus_spec(double radius) {
  return chart_embedding_spec("i_plus", true, radius);
}

SymplecticMapSpec make_corrupted_i_minus_spec(double factor, double radius) {
  SymplecticMapSpec s = chart_embedding_spec("i_minus_corrupted", false, radius / factor);
  s.name = "i_minus_corrupted";
  auto base_eval = s.evaluate;
  s.evaluate = [base_eval, factor](const VectorXd& x) {
    VectorXd y = x;
    y[0] *= factor;  // scale one complex coordinate
    y[1] *= factor;
    return base_eval(y);
  };
  return s;
}

SymplecticMapSpec make_disk_identity_spec(double area) {
  double rmax = std::sqrt(area / kPi);
  SymplecticMapSpec s;
  s.name = "disk_identity";
  s.domain = ball_domain(2, rmax * 0.999);
  s.codomain.kind = ImageKind::Flat;
  s.codomain.flat_form = standard_form(2);
  s.codomain.margin = [rmax](const VectorXd&, const ImagePoint& img) {
    return rmax - img.flat.norm();
  };
  s.evaluate = [](const VectorXd& x) {
    ImagePoint img;
    img.kind = ImageKind::Flat;
    img.flat = x;
    return img;
  };
  s.jacobian = [](const VectorXd&, int) { return MatrixXd::Identity(2, 2).eval(); };
  return s;
}

// --- disk-to-rectangle families -----------------------------------------------------------

namespace {

constexpr double kHeightFactor = 0.995;  // fraction of the available half-height
constexpr double kRightSlack = 0.01;     // fraction shaved off the quadratic edge term

// Gauss-Legendre 8-point rule on [-1, 1]
const double kGlx[8] = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
                        -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                        0.7966664774136267,  0.9602898564975363};
const double kGlw[8] = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                        0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                        0.2223810344533745, 0.1012285362903763};

double squircle_area(int p) {
  return 4.0 * std::tgamma(1.0 + 1.0 / p) * std::tgamma(1.0 + 1.0 / p) /
         std::tgamma(1.0 + 2.0 / p);
}

struct CurvePoint {
  double X, Y, Xp, Yp;  // squircle point and theta-derivative
};

CurvePoint squircle(int p, double theta) {
  double c = std::cos(theta), s = std::sin(theta);
  double cp = std::pow(std::abs(c), p), sp = std::pow(std::abs(s), p);
  double S = cp + sp;
  double rho = std::pow(S, -1.0 / p);
  double cpm1 = (c >= 0 ? 1.0 : -1.0) * std::pow(std::abs(c), p - 1);
  double spm1 = (s >= 0 ? 1.0 : -1.0) * std::pow(std::abs(s), p - 1);
  double rhop = std::pow(rho, p + 1) * (cpm1 * s - spm1 * c);
  CurvePoint out;
  out.X = rho * c;
  out.Y = rho * s;
  out.Xp = rhop * c - rho * s;
  out.Yp = rhop * s + rho * c;
  return out;
}

}  // namespace

struct FamilyAccess {
  const DiskRectFamily& f;

  double a(double t) const { return f.ka_ * t * (t + f.eps_) / (t + 2 * f.eps_); }
  double ap(double t) const {
    double e = f.eps_;
    return f.ka_ * (t * t + 4 * e * t + 2 * e * e) / ((t + 2 * e) * (t + 2 * e));
  }
  double app(double t) const {
    double e = f.eps_;
    return 4.0 * f.ka_ * e * e / std::pow(t + 2 * e, 3);
  }
  double b(double t) const { return f.cb_ * t * (t + 2 * f.eps_) / (t + f.eps_); }
  double bp(double t) const {
    double e = f.eps_;
    return f.cb_ * (t * t + 2 * e * t + 2 * e * e) / ((t + e) * (t + e));
  }
  double bpp(double t) const {
    double e = f.eps_;
    return -2.0 * f.cb_ * e * e / std::pow(t + f.eps_, 3);
  }
  double re(double t) const {
    return 0.25 * kPi * f.delta_ * f.delta_ + 0.5 * kPi * (1.0 - kRightSlack) * t * t;
  }
  double rep(double t) const { return kPi * (1.0 - kRightSlack) * t; }
  double repp(double) const { return kPi * (1.0 - kRightSlack); }
  double cx(double t) const { return re(t) - a(t); }
  double cxp(double t) const { return rep(t) - ap(t); }
  double cxpp(double t) const { return repp(t) - app(t); }

  // curve gamma(t, theta) and the transversality density J = gamma_t x gamma_theta
  void gamma(double t, double theta, Vector2d* pt, Vector2d* gt, Vector2d* gth) const {
    CurvePoint u = squircle(f.p_, theta);
    double at = a(t), bt = b(t);
    if (pt) *pt = Vector2d(cx(t) + at * u.X, 0.5 + bt * u.Y);
    if (gt) *gt = Vector2d(cxp(t) + ap(t) * u.X, bp(t) * u.Y);
    if (gth) *gth = Vector2d(at * u.Xp, bt * u.Yp);
  }

  double Jcurve(double t, double theta) const {
    CurvePoint u = squircle(f.p_, theta);
    double gtx = cxp(t) + ap(t) * u.X, gty = bp(t) * u.Y;
    double ghx = a(t) * u.Xp, ghy = b(t) * u.Yp;
    return gtx * ghy - gty * ghx;
  }

  double Jcurve_t(double t, double theta) const {
    CurvePoint u = squircle(f.p_, theta);
    double gtx = cxp(t) + ap(t) * u.X, gty = bp(t) * u.Y;
    double ghx = a(t) * u.Xp, ghy = b(t) * u.Yp;
    double gttx = cxpp(t) + app(t) * u.X, gtty = bpp(t) * u.Y;
    double gthx = ap(t) * u.Xp, gthy = bp(t) * u.Yp;
    return gttx * ghy - gtty * ghx + gtx * gthy - gty * gthx;
  }

  // prefix table of the panel integrals of J (and optionally dJ/dt), so a
  // solve costs one table build plus a partial panel per Newton step
  struct PrefixTable {
    double width = 0.0;
    std::vector<double> phi;    // phi[i] = integral of J over [0, i*width]
    std::vector<double> phi_t;  // same for dJ/dt (empty unless requested)
  };

  PrefixTable build_table(double t, bool with_t) const {
    PrefixTable tab;
    tab.width = 2.0 * kPi / f.panels_;
    tab.phi.assign(f.panels_ + 1, 0.0);
    if (with_t) tab.phi_t.assign(f.panels_ + 1, 0.0);
    for (int i = 0; i < f.panels_; ++i) {
      double lo = i * tab.width, hi = (i + 1) * tab.width;
      double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
      double acc = 0.0, acc_t = 0.0;
      for (int g = 0; g < 8; ++g) {
        double th = mid + half * kGlx[g];
        acc += half * kGlw[g] * Jcurve(t, th);
        if (with_t) acc_t += half * kGlw[g] * Jcurve_t(t, th);
      }
      tab.phi[i + 1] = tab.phi[i] + acc;
      if (with_t) tab.phi_t[i + 1] = tab.phi_t[i] + acc_t;
    }
    return tab;
  }

  double partial(double t, double lo, double theta, bool with_t) const {
    double mid = 0.5 * (lo + theta), half = 0.5 * (theta - lo);
    double acc = 0.0;
    for (int g = 0; g < 8; ++g) {
      double th = mid + half * kGlx[g];
      acc += half * kGlw[g] * (with_t ? Jcurve_t(t, th) : Jcurve(t, th));
    }
    return acc;
  }

  double table_phi(const PrefixTable& tab, double t, double theta, bool deriv) const {
    int full = std::min(static_cast<int>(theta / tab.width), f.panels_ - 1);
    const std::vector<double>& pre = deriv ? tab.phi_t : tab.phi;
    double acc = pre[full];
    if (theta > full * tab.width) acc += partial(t, full * tab.width, theta, deriv);
    return acc;
  }

  double solve_theta_with(const PrefixTable& tab, double t, double phi) const {
    double target = t * phi;
    double lo = 0.0, hi = 2.0 * kPi;
    double theta = phi;
    for (int it = 0; it < 80; ++it) {
      double Phi = table_phi(tab, t, theta, false);
      double g = Phi - target;
      if (g > 0)
        hi = theta;
      else
        lo = theta;
      double J = Jcurve(t, theta);
      double step = g / std::max(J, 1e-300);
      double next = theta - step;
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      if (std::abs(next - theta) < 1e-15 || std::abs(g) < 1e-15 * std::max(1.0, target)) {
        theta = next;
        break;
      }
      theta = next;
    }
    return theta;
  }

  double solve_theta(double t, double phi) const {
    return solve_theta_with(build_table(t, false), t, phi);
  }
};

DiskRectFamily::DiskRectFamily(RectVariant variant, double R, double eps, double lambda)
    : variant_(variant), R_(R), eps_(eps), lambda_(lambda) {
  bool blow = (variant == RectVariant::MinusBlowup || variant == RectVariant::PlusBlowup);
  if (blow && !(lambda > 0.0 && lambda < 1.0))
    throw DomainViolationError("blow-up rectangle family needs 0 < lambda < 1");
  if (!blow) lambda_ = 0.0;
  delta_ = std::sqrt(1.0 - lambda_ * lambda_);
  double Rcap = delta_ / std::sqrt(2.0) - eps_;
  if (!(eps > 0.0 && eps < Rcap + eps))
    throw DomainViolationError("rect family needs 0 < eps < delta/sqrt(2)");
  if (!(R > 0.0 && R <= Rcap + 1e-12))
    throw DomainViolationError("rect family needs R <= delta/sqrt(2) - eps");
  R_ = Rcap;  // family is built once for the maximal domain: nesting is exact
  cb_ = kHeightFactor / (std::sqrt(2.0) * delta_);

  const int candidates[] = {6, 8, 12, 16, 20, 24, 28, 32};
  std::string worst_report;
  for (int p : candidates) {
    p_ = p;
    area_p_ = squircle_area(p);
    ka_ = kPi / (area_p_ * cb_);
    panels_ = std::max(256, 32 * p);
    try {
      validate();
      return;
    } catch (const InfeasibleContainmentError& e) {
      worst_report = e.what();
    }
  }
  throw InfeasibleContainmentError("no feasible curve order; last: " + worst_report);
}

void DiskRectFamily::validate() const {
  FamilyAccess F{*this};
  double worst_edge = std::numeric_limits<double>::infinity();
  double worst_J = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= 64; ++k) {
    double t = R_ * k / 64.0;
    // left edge of the curve box must stay right of the target rectangle
    double Lb = 0.25 * kPi * delta_ * delta_ + 0.5 * kPi * (t + eps_) * (t + eps_) -
                (kPi / std::sqrt(2.0)) * delta_ * (t + eps_);
    double le = F.cx(t) - F.a(t);
    worst_edge = std::min(worst_edge, le - Lb);
    // height fits (true by construction, checked anyway)
    double hb = (t + eps_) / (std::sqrt(2.0) * delta_);
    worst_edge = std::min(worst_edge, hb - F.b(t));
    for (int j = 0; j < 256; ++j) {
      double theta = 2.0 * kPi * (j + 0.3137) / 256.0;
      worst_J = std::min(worst_J, F.Jcurve(t, theta) / t);
    }
  }
  if (worst_edge < 1e-9 || worst_J <= 1e-9)
    throw InfeasibleContainmentError(
        "curve order p=" + std::to_string(p_) + " infeasible: edge margin " +
        format_double(worst_edge) + ", min J/t " + format_double(worst_J));
}

RectBounds DiskRectFamily::rect_of(double r) const {
  double c = 0.25 * kPi * delta_ * delta_;
  RectBounds rb;
  double width = (kPi / std::sqrt(2.0)) * delta_ * r;
  double halfh = r / (std::sqrt(2.0) * delta_);
  if (minus_form()) {
    rb.x1 = c + 0.5 * kPi * r * r;
    rb.x0 = rb.x1 - width;
  } else {
    rb.x0 = c - 0.5 * kPi * r * r;
    rb.x1 = rb.x0 + width;
  }
  rb.y0 = 0.5 - halfh;
  rb.y1 = 0.5 + halfh;
  return rb;
}

double DiskRectFamily::right_edge_bound(double r) const {
  double c = 0.25 * kPi * delta_ * delta_;
  return minus_form() ? c + 0.5 * kPi * r * r : c - 0.5 * kPi * r * r;
}

Vector2d DiskRectFamily::eval_minus(double u, double v) const {
  FamilyAccess F{*this};
  double r = std::hypot(u, v);
  if (r > R_ * (1.0 + 1e-12)) throw DomainViolationError("disk family: point outside B^2(R)");
  if (r < 1e-150) return Vector2d(F.cx(0.0), 0.5);
  double phi = std::atan2(v, u);
  if (phi < 0) phi += 2.0 * kPi;
  double theta = F.solve_theta(r, phi);
  Vector2d pt;
  F.gamma(r, theta, &pt, nullptr, nullptr);
  return pt;
}

Matrix2d DiskRectFamily::jac_minus(double u, double v) const {
  FamilyAccess F{*this};
  double r = std::hypot(u, v);
  double phi = std::atan2(v, u);
  if (phi < 0) phi += 2.0 * kPi;
  FamilyAccess::PrefixTable tab = F.build_table(r, true);
  double theta = F.solve_theta_with(tab, r, phi);
  double Phi_t = F.table_phi(tab, r, theta, true);
  double J = F.Jcurve(r, theta);
  Vector2d pt, gt, gth;
  F.gamma(r, theta, &pt, &gt, &gth);
  double theta_r = (phi - Phi_t) / J;

  double theta_phi = r / J;
  double cphi = u / r, sphi = v / r;
  // dr = (cphi, sphi), dphi = (-sphi/r, cphi/r)
  Vector2d col_u = gt * cphi + gth * (theta_r * cphi + theta_phi * (-sphi / r));
  Vector2d col_v = gt * sphi + gth * (theta_r * sphi + theta_phi * (cphi / r));
  Matrix2d Jm;
  Jm.col(0) = col_u;
  Jm.col(1) = col_v;
  return Jm;
}

Vector2d DiskRectFamily::evaluate(double u, double v) const {
  if (minus_form()) return eval_minus(u, v);
  Vector2d e = eval_minus(u, -v);
  double c = 0.25 * kPi * delta_ * delta_;
  return Vector2d(2.0 * c - e.x(), e.y());
}

Matrix2d DiskRectFamily::jacobian(double u, double v) const {
  if (minus_form()) return jac_minus(u, v);
  Matrix2d g = jac_minus(u, -v);
  Matrix2d J;
  J << -g(0, 0), g(0, 1), g(1, 0), -g(1, 1);
  return J;
}

std::shared_ptr<const DiskRectFamily> build_disk_rect_family(RectVariant variant, double R,
                                                             double eps, double lambda) {
  return std::make_shared<const DiskRectFamily>(variant, R, eps, lambda);
}

SymplecticMapSpec make_psi_spec(const std::shared_ptr<const DiskRectFamily>& fam) {
  SymplecticMapSpec s;
  switch (fam->variant()) {
    case RectVariant::MinusCP2:
      s.name = "psi_minus";
      break;
    case RectVariant::PlusCP2:
      s.name = "psi_plus";
      break;
    case RectVariant::MinusBlowup:
      s.name = "upsilon_minus";
      break;
    case RectVariant::PlusBlowup:
      s.name = "upsilon_plus";
      break;
  }
  double Rdom = fam->R();
  s.domain = ball_domain(2, Rdom);
  s.codomain.kind = ImageKind::Flat;
  s.codomain.flat_form = standard_form(2);
  s.codomain.margin = [fam](const VectorXd& x, const ImagePoint& img) {
    double r = x.norm();
    RectBounds rb = fam->rect_of(r + fam->eps());
    return std::min({img.flat[0] - rb.x0, rb.x1 - img.flat[0], img.flat[1] - rb.y0,
                     rb.y1 - img.flat[1]});
  };
  s.evaluate = [fam](const VectorXd& x) {
    ImagePoint img;
    img.kind = ImageKind::Flat;
    Vector2d y = fam->evaluate(x[0], x[1]);
    img.flat = y;
    return img;
  };
  s.jacobian = [fam](const VectorXd& x, int) {
    return MatrixXd(fam->jacobian(x[0], x[1]));
  };
  return s;
}

// --- products into graph regions --------------------------------------------------------------

namespace {

SymplecticMapSpec product_spec(const std::string& name, const ManifoldModel& target,
                               std::shared_ptr<const GraphRegion> region,
                               std::shared_ptr<const DiskRectFamily> fam, double ball_radius,
                               bool plus_side, bool use_j, double lambda, double tube) {
  SymplecticMapSpec s;
  s.name = name;
  s.domain = ball_domain(6, ball_radius, tube);
  s.codomain.kind = ImageKind::GraphPoint;
  s.codomain.manifold = target;
  s.codomain.region = region;
  s.codomain.margin = [region](const VectorXd&, const ImagePoint& img) {
    return region->membership_margin(img.p, img.s, img.t);
  };
  s.evaluate = [fam, plus_side, use_j, lambda](const VectorXd& x) {
    ImagePoint img;
    img.kind = ImageKind::GraphPoint;
    Complex z1(x[0], x[1]), z2(x[2], x[3]);
    if (use_j) {
      double sigma2 = std::norm(z1) + std::norm(z2);
      double d2 = 1.0 - lambda * lambda;
      double f = std::sqrt(d2 - sigma2);
      double g = std::sqrt(lambda * lambda + std::norm(z1));
      double m0 = std::abs(z1);
      Complex phase = (m0 > 1e-300) ? z1 / m0 : Complex(1, 0);
      img.p = PointRepr::projective(Complex(f, 0), z2, g * phase);
    } else {
      img.p = plus_side ? i_plus(z1, z2) : i_minus(z1, z2);
    }
    Vector2d st = fam->evaluate(x[4], x[5]);
    img.s = st.x();
    img.t = st.y();
    return img;
  };
  s.jacobian = [fam, plus_side, use_j, lambda](const VectorXd& x, int chart) {
    MatrixXd J = MatrixXd::Zero(6, 6);
    VectorXd z = x.head(4);
    std::array<JC, 3> jets;
    if (use_j)
      jets = j_minus_jets(z, lambda);
    else
      jets = plus_side ? i_plus_jets(z) : i_minus_jets(z);
    J.topLeftCorner(4, 4) = jet_chart_jacobian(jets, chart);
    J.block(4, 4, 2, 2) = fam->jacobian(x[4], x[5]);
    return J;
  };
  return s;
}

}  // namespace

SymplecticMapSpec make_Psi_minus_spec(double eps, double nu) {
  ManifoldModel m = ManifoldModel::cp2();
  double R = 1.0 / std::sqrt(2.0) - eps;
  auto fam = build_disk_rect_family(RectVariant::MinusCP2, R, eps);
  auto region = std::make_shared<const GraphRegion>(region_below(make_P(m), nu));
  return product_spec("Psi_minus(eps=" + format_double(eps) + ")", m, region, fam, R, false,
                      false, 0.0, 0.0);
}

SymplecticMapSpec make_Psi_plus_spec(double eps, double nu, double lambda) {
  ManifoldModel m = (lambda > 0.0) ? ManifoldModel::blowup(lambda) : ManifoldModel::cp2();
  double d2 = 1.0 - lambda * lambda;
  double R = std::sqrt(d2 / 2.0) - eps;
  auto fam = build_disk_rect_family(
      (lambda > 0.0) ? RectVariant::PlusBlowup : RectVariant::PlusCP2, R, eps, lambda);
  auto region = std::make_shared<const GraphRegion>(region_above(make_P(m), nu));
  return product_spec("Psi_plus(eps=" + format_double(eps) +
                          (lambda > 0 ? ",lambda=" + format_double(lambda) : "") + ")",
                      m, region, fam, R, true, false, 0.0, 0.0);
}

SymplecticMapSpec make_Upsilon_minus_spec(double lambda, double eps, double nu) {
  ManifoldModel m = ManifoldModel::blowup(lambda);
  double d2 = 1.0 - lambda * lambda;
  double S = std::sqrt(d2 / 2.0) - eps;
  auto fam = build_disk_rect_family(RectVariant::MinusBlowup, S, eps, lambda);
  auto region = std::make_shared<const GraphRegion>(region_below(make_P(m), nu));
  return product_spec("Upsilon_minus(lambda=" + format_double(lambda) +
                          ",eps=" + format_double(eps) + ")",
                      m, region, fam, S, false, true, lambda, 1e-3 * S);
}

// --- blow-up chain -------------------------------------------------------------------------------

double u_region_margin(double s, double lambda, const PointRepr& p) {
  double l2 = lambda * lambda;
  double tau2 = p.rho_sq() / p.norm_sq() - l2;
  double z1n = std::norm(p.z[1]) / p.norm_sq();
  return std::min({tau2, s * s - tau2, tau2 - z1n});
}

BlowupChain blowup_chain(double s, double lambda) {
  double l2 = lambda * lambda;
  double d2 = 1.0 - l2;
  if (!(s > 0.0 && s * s <= d2 + 1e-12))
    throw DomainViolationError("blow-up chain needs 0 < s^2 <= 1 - lambda^2");

  BlowupChain chain;
  chain.s = s;
  chain.lambda = lambda;

  // shared V_s sampler (action-angle uniform, away from the annulus cut)
  auto v_sample = [s, d2](Rng& rng) {
    double m0 = rng.uniform(d2 - s * s * (1.0 - 1e-9), d2 * (1.0 - 1e-12));
    double tau2 = d2 - m0;
    double a0 = rng.uniform(0.02, 2.0 * kPi - 0.02);
    double m1 = rng.uniform(0.0, tau2 * (1.0 - 1e-9));
    double a1 = rng.uniform(0.0, 2.0 * kPi);
    VectorXd x(4);
    x << std::sqrt(m0) * std::cos(a0), std::sqrt(m0) * std::sin(a0),
        std::sqrt(m1) * std::cos(a1), std::sqrt(m1) * std::sin(a1);
    return x;
  };
  MapDomain vdom;
  vdom.dim = 4;
  vdom.form = standard_form(4);
  vdom.sample = v_sample;
  vdom.desc = "V_s";

  // V_s -> U_s (chart embedding into the blow-up)
  {
    SymplecticMapSpec m;
    m.name = "v_to_u(s=" + format_double(s) + ",lambda=" + format_double(lambda) + ")";
    m.domain = vdom;
    m.codomain.kind = ImageKind::Manifold;
    m.codomain.manifold = ManifoldModel::blowup(lambda);
    m.codomain.margin = [s, lambda](const VectorXd&, const ImagePoint& img) {
      return u_region_margin(s, lambda, img.p);
    };
    m.evaluate = [](const VectorXd& x) {
      ImagePoint img;
      img.kind = ImageKind::Manifold;
      Complex z0(x[0], x[1]), z1(x[2], x[3]);
      double q = std::norm(z0) + std::norm(z1);
      img.p = PointRepr::projective(z0, z1, Complex(std::sqrt(1.0 - q), 0));
      return img;
    };
    m.jacobian = [](const VectorXd& x, int chart) {
      return jet_chart_jacobian(v_to_u_jets(x), chart);
    };
    chain.v_to_u = m;
  }

  // V_s -> T_s (cut the zeta0 annulus along angle 0)
  {
    SymplecticMapSpec m;
    m.name = "v_to_t(s=" + format_double(s) + ")";
    m.domain = vdom;
    m.codomain.kind = ImageKind::Flat;
    m.codomain.flat_form = standard_form(4);
    m.codomain.margin = [s](const VectorXd&, const ImagePoint& img) {
      double x = img.flat[0], y = img.flat[1];
      double z1n = img.flat[2] * img.flat[2] + img.flat[3] * img.flat[3];
      return std::min({x, kPi * s - x, y, s - y, s * y - z1n});
    };
    m.evaluate = [s, d2](const VectorXd& v) {
      ImagePoint img;
      img.kind = ImageKind::Flat;
      double alpha = std::atan2(v[1], v[0]);
      if (alpha < 0) alpha += 2.0 * kPi;
      double m0 = v[0] * v[0] + v[1] * v[1];
      VectorXd out(4);
      out << 0.5 * s * alpha, (d2 - m0) / s, v[2], v[3];
      img.flat = out;
      return img;
    };
    m.jacobian = [s](const VectorXd& v, int) {
      J4 x0 = J4::variable(v[0], 0), y0 = J4::variable(v[1], 1);
      J4 alpha = atan2j(y0, x0);
      if (alpha.v < 0) alpha.v += 2.0 * kPi;
      J4 m0 = x0 * x0 + y0 * y0;
      MatrixXd J = MatrixXd::Zero(4, 4);
      J.row(0) = (J4(0.5 * s) * alpha).d.transpose();
      J.row(1) = ((J4(0.0) - m0) / J4(s)).d.transpose();
      J(2, 2) = 1.0;
      J(3, 3) = 1.0;
      return J;
    };
    chain.v_to_t = m;
  }

  // T_s -> T^4(pi s^2): rescale and flip, fibers match exactly
  {
    SymplecticMapSpec m;
    m.name = "t_to_t4(s=" + format_double(s) + ")";
    MapDomain tdom;
    tdom.dim = 4;
    tdom.form = standard_form(4);
    tdom.desc = "T_s";
    tdom.sample = [s](Rng& rng) {
      double x = rng.uniform(1e-6, kPi * s * (1.0 - 1e-9));
      double y = rng.uniform(1e-6, s * (1.0 - 1e-9));
      VectorXd z = sample_ball(rng, 2, std::sqrt(s * y) * (1.0 - 1e-9));
      VectorXd out(4);
      out << x, y, z[0], z[1];
      return out;
    };
    m.domain = tdom;
    m.codomain.kind = ImageKind::Flat;
    m.codomain.flat_form = standard_form(4);
    m.codomain.margin = [s](const VectorXd&, const ImagePoint& img) {
      double x = img.flat[0], y = img.flat[1];
      double z1n = img.flat[2] * img.flat[2] + img.flat[3] * img.flat[3];
      return std::min({x, 1.0 - x, y, kPi * s * s - y, (s * s - y / kPi) - z1n});
    };
    m.evaluate = [s](const VectorXd& v) {
      ImagePoint img;
      img.kind = ImageKind::Flat;
      VectorXd out(4);
      out << 1.0 - v[0] / (kPi * s), kPi * s * s - kPi * s * v[1], v[2], v[3];
      img.flat = out;
      return img;
    };
    m.jacobian = [s](const VectorXd&, int) {
      MatrixXd J = MatrixXd::Zero(4, 4);
      J(0, 0) = -1.0 / (kPi * s);
      J(1, 1) = -kPi * s;
      J(2, 2) = 1.0;
      J(3, 3) = 1.0;
      return J;
    };
    chain.t_to_t4 = m;
  }

  chain.u_to_v = [](const PointRepr& p) {
    if (std::abs(p.z[2]) < 1e-12) throw ChartDegenerateError("u_to_v: z2 = 0");
    Complex mu = std::conj(p.z[2]) / std::abs(p.z[2]);
    Complex z0 = p.z[0] * mu, z1 = p.z[1] * mu;
    VectorXd v(4);
    v << z0.real(), z0.imag(), z1.real(), z1.imag();
    return v;
  };
  chain.t_to_v = [s, d2](const VectorXd& t) {
    double m0 = d2 - s * t[1];
    double alpha = 2.0 * t[0] / s;
    VectorXd v(4);
    v << std::sqrt(m0) * std::cos(alpha), std::sqrt(m0) * std::sin(alpha), t[2], t[3];
    return v;
  };
  chain.t4_to_t = [s](const VectorXd& t4) {
    VectorXd t(4);
    t << kPi * s * (1.0 - t4[0]), (kPi * s * s - t4[1]) / (kPi * s), t4[2], t4[3];
    return t;
  };
  return chain;
}

SymplecticMapSpec make_j_minus_spec(double s, double eps, double lambda) {
  double d2 = 1.0 - lambda * lambda;
  if (!(eps > 0.0 && eps < s && s <= std::sqrt(d2) + 1e-12))
    throw DomainViolationError("j_s^- needs 0 < eps < s <= sqrt(1-lambda^2)");
  double radius = s - eps;
  SymplecticMapSpec m;
  m.name = "j_minus(s=" + format_double(s) + ",lambda=" + format_double(lambda) + ")";
  m.domain = ball_domain(4, radius, 1e-3 * radius);
  m.codomain.kind = ImageKind::Manifold;
  m.codomain.manifold = ManifoldModel::blowup(lambda);
  m.codomain.margin = [s, lambda](const VectorXd&, const ImagePoint& img) {
    return u_region_margin(s, lambda, img.p);
  };
  m.evaluate = [lambda, d2](const VectorXd& x) {
    ImagePoint img;
    img.kind = ImageKind::Manifold;
    Complex w0(x[0], x[1]), w1(x[2], x[3]);
    double sigma2 = std::norm(w0) + std::norm(w1);
    double f = std::sqrt(d2 - sigma2);
    double g = std::sqrt(lambda * lambda + std::norm(w0));
    double m0 = std::abs(w0);
    Complex phase = (m0 > 1e-300) ? w0 / m0 : Complex(1, 0);
    img.p = PointRepr::projective(Complex(f, 0), w1, g * phase);
    return img;
  };
  m.jacobian = [lambda](const VectorXd& x, int chart) {
    return jet_chart_jacobian(j_minus_jets(x, lambda), chart);
  };
  return m;
}

}  // namespace symcap
