#pragma once

#include <map>
#include <optional>

#include "symcap/embeddings.hpp"

namespace symcap {

// ===========================================================================
// Capacity certificates and the length-minimality engine.
//
// The engine assembles the standard criteria: a capacity lower bound for the
// regions below/above the graph of H plus the capacity-area inequality (a
// recorded theorem, never "verified" numerically) yields length minimality
// among homotopic paths; the loop-length threshold r1(M) upgrades the scope
// to global when L(H) <= r1(M)/2.
// ===========================================================================

// Gromov lower bound pi r^2 from a verified ball embedding into the region.
Certificate gromov_lower_bound(const GraphRegion& target, const SymplecticMapSpec& m,
                               const MapVerification& rec);

// c(H) >= min over sides of the best certified value.
Certificate capacity_of_hamiltonian(const HamiltonianFn& H,
                                    const std::vector<Certificate>& below_certs,
                                    const std::vector<Certificate>& above_certs);

// Hofer-Zehnder admissibility conditions (a)-(d); PASS carries value max(H).
Certificate hz_admissibility(const HamiltonianFn& H, const ManifoldModel& N, int grid_samples,
                             int orbit_samples, Rng& rng);

// Recorded capacity-area premises (dimension 2 or 4 only).
Certificate capacity_area_premise(const ManifoldModel& m, const std::string& capacity_name);

// Volume obstruction: vol B^6(r) = pi^3 r^6 / 6 against the region volume.
// pass = the obstruction holds (no symplectic embedding of radius r exists).
Certificate volume_obstruction(double r, const GraphRegion& region, int samples, Rng& rng);

// Smallest lambda for which the radius-r obstruction holds for R_Q^-(nu/2)
// over the blow-up (analytic volumes, bisection).
double volume_obstruction_lambda_threshold(double r, double nu);

// --- r1 registry ------------------------------------------------------------------

struct R1Entry {
  double value = 0.0;
  std::string citation;
  bool user_asserted = false;
};

class R1Registry {
 public:
  static R1Registry standard();
  std::optional<R1Entry> lookup(const ManifoldModel& m) const;
  void set_user_entry(const ManifoldModel& m, double value, const std::string& provenance);
  nlohmann::json to_json() const;

 private:
  std::map<std::string, R1Entry> entries_;
  static std::string key_of(const ManifoldModel& m);
};

// --- the length-minimality verdict ---------------------------------------------------

struct LengthMinimalInputs {
  double L_value = 0.0;
  double L_error = 0.0;
  std::optional<Certificate> capacity_cert;   // route A: c(H) lower bound
  std::optional<Certificate> no_short_orbit;  // route B: autonomous H
  std::optional<Certificate> capacity_area;   // required premise
  std::optional<R1Entry> r1;                  // optional global-scope upgrade
  std::vector<Certificate> attachments;       // informational (e.g. obstruction)
};

Certificate length_minimal_certificate(const HamiltonianFn& H, const ManifoldModel& m,
                                       const LengthMinimalInputs& in);

}  // namespace symcap
