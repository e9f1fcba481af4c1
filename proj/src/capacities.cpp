#include "symcap/capacities.hpp"

#include <algorithm>

namespace symcap {

Certificate gromov_lower_bound(const GraphRegion& target, const SymplecticMapSpec& m,
                               const MapVerification& rec) {
  if (!rec.pass)
    throw UnverifiedMapError("gromov_lower_bound: map " + m.name + " is not verified");
  if (m.domain.ball_radius <= 0.0)
    throw UnverifiedMapError("gromov_lower_bound: domain of " + m.name + " is not a ball");
  double r = m.domain.ball_radius;
  Certificate c;
  c.kind = CertificateKind::GromovLowerBound;
  c.title = "ball of radius " + format_double(r) + " embeds into R_" + target.H.name +
            (target.side == RegionSide::Below ? "^-" : "^+") + "(nu/2) over " +
            target.base.label();
  c.pass = true;
  c.analytic = false;  // backed by the numeric verification record
  c.with_value(kPi * r * r);
  c.evidence["radius"] = r;
  c.evidence["nu"] = target.nu;
  c.evidence["probes"] = rec.probes;
  c.evidence["pullback_residual_max"] = rec.max_pullback_residual;
  c.evidence["containment_margin_min"] = rec.min_containment_margin;
  c.notes.push_back("map " + m.name + " verified on " + m.domain.desc);
  return c;
}

Certificate capacity_of_hamiltonian(const HamiltonianFn& H,
                                    const std::vector<Certificate>& below_certs,
                                    const std::vector<Certificate>& above_certs) {
  auto best_of = [](const std::vector<Certificate>& v, const char* side) {
    double best = -1.0;
    const Certificate* which = nullptr;
    for (const auto& c : v)
      if (c.pass && c.has_value && c.value > best) {
        best = c.value;
        which = &c;
      }
    if (!which)
      throw MissingSideError(std::string("capacity_of_hamiltonian: no certificate for the ") +
                             side + " side");
    return std::make_pair(best, which);
  };
  auto [vb, cb] = best_of(below_certs, "below");
  auto [va, ca] = best_of(above_certs, "above");
  Certificate c;
  c.kind = CertificateKind::CapacityOfHamiltonian;
  c.title = "c(" + H.name + ") lower bound on " + H.manifold.label();
  c.pass = true;
  c.analytic = false;
  c.with_value(std::min(vb, va));
  double L = H.analytic_osc ? hofer_length_analytic(H) : 0.0;
  if (L > 0.0) {
    c.evidence["L"] = L;
    c.evidence["gap_to_L"] = L - c.value;
  }
  c.evidence["below_value"] = vb;
  c.evidence["above_value"] = va;
  c.premises.push_back(*cb);
  c.premises.push_back(*ca);
  return c;
}

// --- Hofer-Zehnder admissibility ------------------------------------------------------

Certificate hz_admissibility(const HamiltonianFn& H, const ManifoldModel& N, int grid_samples,
                             int orbit_samples, Rng& rng) {
  if (!H.autonomous) throw UnsupportedError("HZ admissibility requires an autonomous H");
  Certificate c;
  c.kind = CertificateKind::HZAdmissible;
  c.title = H.name + " admissible on " + N.label();
  c.analytic = H.min_period_analytic > 0.0;

  Rng r1 = rng.fork(1);
  auto [vmin, vmax] = slice_extrema_refined(H, 0.0, grid_samples, r1);
  c.evidence["max"] = vmax;
  c.evidence["min"] = vmin;

  if (vmax <= 1e-12) {
    c.pass = false;
    c.notes.push_back("degenerate: max(H) = 0, conditions (a)/(b) cannot hold nontrivially");
    return c;
  }

  // (c) 0 <= H <= max on a sample
  Rng r2 = rng.fork(2);
  double worst_low = 0.0, worst_high = 0.0;
  for (int i = 0; i < grid_samples; ++i) {
    double v = H.value(sample_point(N, r2), 0.0);
    worst_low = std::min(worst_low, v);
    worst_high = std::max(worst_high, v - vmax);
  }
  bool cond_c = worst_low >= -1e-9 && worst_high <= 1e-9;
  if (!cond_c) {
    c.pass = false;
    c.notes.push_back("(c) fails: H leaves [0, max(H)]");
    return c;
  }

  // (a) H = max outside a compact kappa away from the boundary: probe a thin
  // shell of the disk factor.  Closed manifolds have empty boundary and (a)
  // holds with kappa = N.
  bool cond_a = true;
  double kappa_radius = 0.0;
  if (N.has_disk_factor()) {
    double rmax = std::sqrt(N.disk_area / kPi);
    Rng r3 = rng.fork(3);
    for (int i = 0; i < grid_samples; ++i) {
      PointRepr p = sample_point(N, r3);
      double rr = rng.uniform(0.995 * rmax, rmax * (1.0 - 1e-9));
      double ang = r3.uniform(0.0, 2.0 * kPi);
      p.disk = Vector2d(rr * std::cos(ang), rr * std::sin(ang));
      if (std::abs(H.value(p, 0.0) - vmax) > 1e-9) {
        cond_a = false;
        break;
      }
    }
    // locate kappa as the sublevel closure {H < max} via bisection in radius
    double lo = 0.0, hi = rmax;
    for (int it = 0; it < 60; ++it) {
      double mid = 0.5 * (lo + hi);
      PointRepr p = sample_point(N, r3);
      p.disk = Vector2d(mid, 0.0);
      if (std::abs(H.value(p, 0.0) - vmax) > 1e-9)
        lo = mid;
      else
        hi = mid;
    }
    kappa_radius = hi;
    c.evidence["kappa_radius"] = kappa_radius;
  } else {
    c.notes.push_back("(a) holds with kappa = N (closed manifold, empty boundary)");
  }
  if (!cond_a) {
    c.pass = false;
    c.notes.push_back("(a) fails: H is not constant = max near the boundary");
    return c;
  }

  // (b) H = 0 on an open set around the minimum locus
  bool cond_b = true;
  {
    Rng r4 = rng.fork(4);
    double u_radius = N.has_disk_factor() ? 0.05 * std::sqrt(N.disk_area / kPi) : 0.0;
    for (int i = 0; i < grid_samples; ++i) {
      PointRepr p = sample_point(N, r4);
      if (N.has_disk_factor()) {
        VectorXd d = sample_ball(r4, 2, u_radius);
        p.disk = Vector2d(d[0], d[1]);
      }
      if (std::abs(H.value(p, 0.0)) > 1e-12) {
        cond_b = false;
        break;
      }
    }
    if (cond_b && N.has_disk_factor()) c.evidence["U_radius"] = u_radius;
  }
  if (!cond_b) {
    c.pass = false;
    c.notes.push_back("(b) fails: no open set with H = 0 was located");
    return c;
  }

  // (d) all T-periodic orbits with T <= 1 constant
  Rng r5 = rng.fork(5);
  auto orbits = detect_closed_trajectories(H, 1.0, orbit_samples, r5);
  double witness = 0.0;
  int periodic = 0;
  for (const auto& o : orbits)
    if (o.verdict == OrbitVerdict::Periodic) {
      ++periodic;
      if (witness == 0.0 || o.period < witness) witness = o.period;
    }
  c.evidence["orbit_samples"] = orbit_samples;
  c.evidence["periodic_found"] = periodic;
  if (periodic > 0) {
    c.pass = false;
    c.with_value(vmax);
    c.evidence["witness_period"] = witness;
    c.notes.push_back("(d) fails: witness orbit of period " + format_double(witness));
    return c;
  }

  c.pass = true;
  c.with_value(vmax);
  if (!c.analytic) c.notes.push_back("(d) is sampling evidence, not a proof");
  return c;
}

Certificate capacity_area_premise(const ManifoldModel& m, const std::string& capacity_name) {
  if (m.dim() != 2 && m.dim() != 4)
    throw UnsupportedError("capacity-area premise is recorded for dimension 2 or 4 only");
  Certificate c;
  c.kind = CertificateKind::CapacityAreaPremise;
  c.title = "capacity-area inequality for " + capacity_name + " on quasi-cylinders over " +
            m.label();
  c.pass = true;
  c.analytic = true;
  if (capacity_name == "c_G") {
    c.notes.push_back(
        "recorded theorem: c_G(M x D(a)) <= a for M compact of dimension <= 4 "
        "(Lalonde-McDuff)");
  } else {
    c.notes.push_back(
        "recorded theorem: c_HZ(M x D(a)) <= a for M compact of dimension 2 or 4");
  }
  c.notes.push_back("recorded citation, not a numerical verification");
  return c;
}

Certificate volume_obstruction(double r, const GraphRegion& region, int samples, Rng& rng) {
  if (region.base.dim() != 4)
    throw UnsupportedError("volume obstruction applies to regions over 4-manifolds");
  double ball_vol = std::pow(kPi, 3) * std::pow(r, 6) / 6.0;
  MeanStderr reg = mc_region_volume(region, samples, rng);
  Certificate c;
  c.kind = CertificateKind::VolumeObstruction;
  c.title = "volume obstruction for B^6(" + format_double(r) + ") into R_" + region.H.name +
            (region.side == RegionSide::Below ? "^-" : "^+") + "(nu/2) over " +
            region.base.label();
  c.analytic = false;
  c.with_value(ball_vol - reg.mean);
  c.evidence["ball_volume"] = ball_vol;
  c.evidence["region_volume"] = reg.mean;
  c.evidence["region_volume_stderr"] = reg.stderr_;
  double mean = region.H.analytic_mean;
  if (std::isfinite(mean)) {
    double analytic = volume(region.base) * (mean + 0.5 * region.nu);
    c.evidence["region_volume_analytic"] = analytic;
  }
  c.pass = ball_vol > reg.mean + 3.0 * reg.stderr_;
  c.notes.push_back(c.pass
                        ? "obstruction holds: no symplectic embedding of this radius exists"
                        : "no obstruction at this radius");
  return c;
}

double volume_obstruction_lambda_threshold(double r, double nu) {
  double ball_vol = std::pow(kPi, 3) * std::pow(r, 6) / 6.0;
  auto gap = [&](double lambda) {
    ManifoldModel m = ManifoldModel::blowup(lambda);
    double reg = volume(m) * (mean_moment_y(m) + 0.5 * nu);
    return ball_vol - reg;  // positive = obstruction
  };
  double lo = 1e-3, hi = 1.0 - 1e-9;
  if (gap(lo) > 0.0) return lo;
  if (gap(hi) < 0.0) return hi;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (gap(mid) > 0.0)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

// --- r1 registry ----------------------------------------------------------------------

std::string R1Registry::key_of(const ManifoldModel& m) { return m.label(); }

R1Registry R1Registry::standard() {
  R1Registry reg;
  R1Entry cp2;
  cp2.value = kPi;
  cp2.citation =
      "pi_1(Ham(CP^2)) = Z/3, generated by the full rotation; the minimal positive loop "
      "length is pi (Polterovich)";
  cp2.user_asserted = false;
  reg.entries_[key_of(ManifoldModel::cp2())] = cp2;
  return reg;
}

std::optional<R1Entry> R1Registry::lookup(const ManifoldModel& m) const {
  auto it = entries_.find(key_of(m));
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void R1Registry::set_user_entry(const ManifoldModel& m, double value,
                                const std::string& provenance) {
  if (!(value > 0.0)) throw DomainViolationError("r1 must be positive");
  R1Entry e;
  e.value = value;
  e.citation = provenance;
  e.user_asserted = true;
  entries_[key_of(m)] = e;
}

nlohmann::json R1Registry::to_json() const {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [k, e] : entries_) {
    j[k] = {{"value", e.value}, {"citation", e.citation}, {"user_asserted", e.user_asserted}};
  }
  return j;
}

// --- the verdict ------------------------------------------------------------------------

Certificate length_minimal_certificate(const HamiltonianFn& H, const ManifoldModel& m,
                                       const LengthMinimalInputs& in) {
  if (!in.capacity_area.has_value())
    throw InsufficientPremisesError("missing premise: capacity-area inequality for " +
                                    m.label());
  if (!in.capacity_area->pass)
    throw InsufficientPremisesError("capacity-area premise is not a PASS certificate");

  Certificate c;
  c.kind = CertificateKind::LengthMinimal;
  c.title = "the path generated by " + H.name + " on " + m.label() +
            " is length minimizing";
  c.evidence["L"] = in.L_value;
  c.evidence["L_error"] = in.L_error;
  c.premises.push_back(*in.capacity_area);

  bool route_a = false, route_b = false;
  if (in.capacity_cert.has_value() && in.capacity_cert->pass) {
    double slack = in.L_value - in.capacity_cert->value;
    c.evidence["capacity_lower_bound"] = in.capacity_cert->value;
    c.evidence["slack"] = slack;
    c.premises.push_back(*in.capacity_cert);
    route_a = true;
    c.notes.push_back("capacity route: c(H) >= " + format_double(in.capacity_cert->value) +
                      ", slack to L(H) = " + format_double(slack) +
                      " (conclusion up to stated slack)");
  }
  if (in.no_short_orbit.has_value()) {
    if (in.no_short_orbit->pass && H.autonomous) {
      route_b = true;
      c.premises.push_back(*in.no_short_orbit);
      Certificate hz;
      hz.kind = CertificateKind::HZLowerBound;
      hz.title = "c_HZ(" + H.name + ") >= L(" + H.name + ")";
      hz.pass = true;
      hz.analytic = true;
      hz.notes.push_back(
          "recorded theorem: an autonomous Hamiltonian with no non-constant closed "
          "trajectory in time less than 1 has c_HZ(H) >= L(H) (Lalonde-McDuff)");
      c.premises.push_back(hz);
      c.notes.push_back("no-short-orbit route: autonomous flow with no non-constant closed "
                        "trajectory in time <= 1");
    } else if (!in.no_short_orbit->pass && !route_a) {
      Certificate fail = *in.no_short_orbit;
      throw InsufficientPremisesError(
          "no-short-orbit check failed (witness period " +
          format_double(fail.has_value ? fail.value : 0.0) +
          ") and no capacity route was supplied");
    }
  }
  if (!route_a && !route_b)
    throw InsufficientPremisesError(
        "need either a capacity lower-bound certificate (route A) or a passing "
        "no-short-orbit certificate (route B)");

  c.pass = true;
  c.analytic = false;
  c.scope = "among homotopic paths";
  if (in.r1.has_value() && in.L_value <= 0.5 * in.r1->value + 1e-12) {
    c.scope = "globally";
    Certificate r1c;
    r1c.kind = CertificateKind::Premise;
    r1c.title = "r1(" + m.label() + ") = " + format_double(in.r1->value);
    r1c.pass = true;
    r1c.analytic = !in.r1->user_asserted;
    r1c.notes.push_back(in.r1->citation);
    if (in.r1->user_asserted) r1c.notes.push_back("user-asserted registry entry");
    c.premises.push_back(r1c);
    c.notes.push_back("L(H) <= r1(M)/2 upgrades the scope to globally length minimizing");
  }
  for (const auto& a : in.attachments) c.attachments.push_back(a);
  return c;
}

}  // namespace symcap
