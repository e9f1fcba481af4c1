#include "symcap/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "symcap/certificates.hpp"

namespace symcap {

std::string certificate_kind_name(CertificateKind k) {
  switch (k) {
    case CertificateKind::GromovLowerBound:
      return "GromovLowerBound";
    case CertificateKind::HZAdmissible:
      return "HZAdmissible";
    case CertificateKind::HZLowerBound:
      return "HZLowerBound";
    case CertificateKind::CapacityAreaPremise:
      return "CapacityAreaPremise";
    case CertificateKind::NoShortOrbit:
      return "NoShortOrbit";
    case CertificateKind::LengthMinimal:
      return "LengthMinimal";
    case CertificateKind::VolumeObstruction:
      return "VolumeObstruction";
    case CertificateKind::CapacityOfHamiltonian:
      return "CapacityOfHamiltonian";
    case CertificateKind::Premise:
      return "Premise";
  }
  return "?";
}

nlohmann::json Certificate::to_json() const {
  nlohmann::json j;
  j["kind"] = certificate_kind_name(kind);
  j["title"] = title;
  j["pass"] = pass;
  j["analytic"] = analytic;
  if (has_value) j["value"] = value;
  if (!scope.empty()) j["scope"] = scope;
  if (!evidence.empty()) j["evidence"] = evidence;
  if (!notes.empty()) j["notes"] = notes;
  if (!premises.empty()) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& p : premises) arr.push_back(p.to_json());
    j["premises"] = arr;
  }
  if (!attachments.empty()) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& a : attachments) arr.push_back(a.to_json());
    j["attachments"] = arr;
  }
  return j;
}

std::string Certificate::render_text(int indent) const {
  std::ostringstream os;
  std::string pad(indent * 2, ' ');
  os << pad << (pass ? "[PASS] " : "[FAIL] ") << certificate_kind_name(kind) << ": " << title;
  if (has_value) os << "  (value = " << format_double(value) << ")";
  if (!scope.empty()) os << "  [scope: " << scope << "]";
  os << (analytic ? "  {analytic}" : "  {sampled}") << "\n";
  for (const auto& n : notes) os << pad << "  - " << n << "\n";
  for (const auto& [k, v] : evidence) os << pad << "  . " << k << " = " << format_double(v) << "\n";
  for (const auto& p : premises) os << p.render_text(indent + 1);
  for (const auto& a : attachments) {
    os << pad << "  (attachment)\n";
    os << a.render_text(indent + 1);
  }
  return os.str();
}

namespace {

struct Bounds {
  double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  void include(double x, double y) {
    xmin = std::min(xmin, x);
    xmax = std::max(xmax, x);
    ymin = std::min(ymin, y);
    ymax = std::max(ymax, y);
  }
};

}  // namespace

std::string polytope_svg(const PolytopeModel& poly, const std::vector<Vector2d>& scatter,
                         const std::vector<SvgOverlayRect>& rects, double px_per_unit) {
  Bounds b;
  b.xmin = b.ymin = 1e300;
  b.xmax = b.ymax = -1e300;
  for (const auto& v : poly.vertices) b.include(v.x(), v.y());
  for (const auto& r : rects) {
    b.include(r.x0, r.y0);
    b.include(r.x1, r.y1);
  }
  double margin = 0.08 * std::max(b.xmax - b.xmin, b.ymax - b.ymin) + 1e-6;
  b.xmin -= margin;
  b.ymin -= margin;
  b.xmax += margin;
  b.ymax += margin;
  double w = (b.xmax - b.xmin) * px_per_unit;
  double h = (b.ymax - b.ymin) * px_per_unit;
  auto X = [&](double x) { return (x - b.xmin) * px_per_unit; };
  auto Y = [&](double y) { return h - (y - b.ymin) * px_per_unit; };  // y axis up

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
     << "\" viewBox=\"0 0 " << w << " " << h << "\">\n";
  os << "<polygon points=\"";
  for (const auto& v : poly.vertices) os << X(v.x()) << "," << Y(v.y()) << " ";
  os << "\" fill=\"#ecf0f1\" stroke=\"#2c3e50\" stroke-width=\"2\"/>\n";
  for (const auto& v : poly.vertices) {
    os << "<text x=\"" << X(v.x()) + 4 << "\" y=\"" << Y(v.y()) - 4
       << "\" font-size=\"12\">(" << format_double(v.x()) << ", " << format_double(v.y())
       << ")</text>\n";
  }
  for (const auto& r : rects) {
    os << "<rect x=\"" << X(r.x0) << "\" y=\"" << Y(r.y1) << "\" width=\""
       << (r.x1 - r.x0) * px_per_unit << "\" height=\"" << (r.y1 - r.y0) * px_per_unit
       << "\" fill=\"none\" stroke=\"" << r.color << "\" stroke-width=\"1.5\"/>\n";
  }
  for (const auto& p : scatter) {
    os << "<circle cx=\"" << X(p.x()) << "\" cy=\"" << Y(p.y())
       << "\" r=\"1.6\" fill=\"#2980b9\" fill-opacity=\"0.6\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::string rectangles_svg(const std::vector<SvgOverlayRect>& rects, double px_per_unit) {
  PolytopeModel dummy;
  // frame from the rectangles themselves
  Bounds b;
  b.xmin = b.ymin = 1e300;
  b.xmax = b.ymax = -1e300;
  for (const auto& r : rects) {
    b.include(r.x0, r.y0);
    b.include(r.x1, r.y1);
  }
  dummy.vertices = {Vector2d(b.xmin, b.ymin), Vector2d(b.xmax, b.ymin),
                    Vector2d(b.xmax, b.ymax), Vector2d(b.xmin, b.ymax)};
  return polytope_svg(dummy, {}, rects, px_per_unit);
}

std::string polytope_csv(const PolytopeModel& poly) {
  std::ostringstream os;
  os << "x,y\n";
  for (const auto& v : poly.vertices)
    os << format_double(v.x()) << "," << format_double(v.y()) << "\n";
  return os.str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + tmp);
    f << content;
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw std::runtime_error("cannot rename " + tmp + " -> " + path);
}

}  // namespace symcap
