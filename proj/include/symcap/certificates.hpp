#pragma once

#include <map>
#include <string>
#include <vector>

#include "symcap/core.hpp"

#include "json.hpp"

namespace symcap {

enum class CertificateKind {
  GromovLowerBound,
  HZAdmissible,
  HZLowerBound,
  CapacityAreaPremise,
  NoShortOrbit,
  LengthMinimal,
  VolumeObstruction,
  CapacityOfHamiltonian,
  Premise,
};

std::string certificate_kind_name(CertificateKind k);

// A typed verdict with the premises it consumed.  Premises are held by value,
// so the premise graph is a tree and acyclic by construction.
struct Certificate {
  CertificateKind kind = CertificateKind::Premise;
  std::string title;
  bool pass = false;
  bool analytic = false;  // closed-form oracle vs sampled evidence
  double value = 0.0;
  bool has_value = false;
  std::string scope;  // LengthMinimal: "among homotopic paths" / "globally"
  std::vector<Certificate> premises;
  std::vector<Certificate> attachments;  // informational records, not premises
  std::map<std::string, double> evidence;
  std::vector<std::string> notes;

  Certificate& with_value(double v) {
    value = v;
    has_value = true;
    return *this;
  }

  // every certificate in the premise closure passes
  bool closure_pass() const {
    if (!pass) return false;
    for (const auto& p : premises)
      if (!p.closure_pass()) return false;
    return true;
  }

  std::size_t closure_size() const {
    std::size_t n = 1;
    for (const auto& p : premises) n += p.closure_size();
    return n;
  }

  nlohmann::json to_json() const;
  std::string render_text(int indent = 0) const;
};

}  // namespace symcap
