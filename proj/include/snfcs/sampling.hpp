// SPDX-License-Identifier: Apache-2.0
//
// Measurement-point generators on the sphere (spiral, Hammersley, uniform
// random, equiangular), polarization-angle assignment policies, and CSV
// persistence of sampling sets.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace snfcs {

enum class Provenance {
  Random,
  Spiral,
  Hammersley,
  Equiangular,
  OptimizedGD,
  OptimizedALM,
  File,
};

std::string to_string(Provenance p);
Provenance provenance_from_string(const std::string& name);

// K measurement triples (theta_i, phi_i, chi_i): elevation in [0, pi],
// azimuth and polarization in [0, 2 pi) after canonical wrapping.
struct SamplingSet {
  std::vector<double> theta;
  std::vector<double> phi;
  std::vector<double> chi;
  Provenance provenance = Provenance::File;

  int size() const { return static_cast<int>(theta.size()); }

  // Throws std::invalid_argument on length mismatch, emptiness, or angles
  // outside their domains.
  void validate() const;
};

// Generalized spiral nodes (Saff-Kuijlaars): h_i = -1 + 2(i-1)/(K-1),
// theta_i = acos(h_i), phi_1 = phi_K = 0 and
// phi_i = phi_{i-1} + 3.6 / (sqrt(K) sqrt(1 - h_i^2)) mod 2 pi.
// Requires K >= 2. chi is zero; assign it with apply_chi.
SamplingSet spiral(int k);

// Hammersley set mapped area-preservingly to the sphere: point i in [0, K)
// uses u_i = i/K and the base-2 radical inverse v_i, with phi = 2 pi u_i
// and theta = acos(1 - 2 v_i). chi is zero.
SamplingSet hammersley(int k);

// theta = acos(1 - 2u), phi and chi uniform on [0, 2 pi); deterministic
// for a given seed.
SamplingSet random_uniform(int k, std::uint64_t seed);

// Tensor grid theta in {0, ..., 180deg}, phi in {0, ..., 360deg - step} at
// the given step, which must divide 180. chi is zero.
SamplingSet equiangular(int step_deg);

struct ChiPolicy {
  enum class Kind { EvenSpread, AlternatePair, Fixed, Free };
  Kind kind = Kind::Free;
  double fixed_value = 0.0;

  static ChiPolicy even_spread() { return {Kind::EvenSpread, 0.0}; }
  static ChiPolicy alternate_pair() { return {Kind::AlternatePair, 0.0}; }
  static ChiPolicy fixed(double value) { return {Kind::Fixed, value}; }
  static ChiPolicy free() { return {Kind::Free, 0.0}; }
};

std::string to_string(const ChiPolicy& policy);
ChiPolicy chi_policy_from_string(const std::string& name);

// Reassigns chi per policy, leaving the spatial angles untouched.
// EvenSpread: chi_i = 2 pi i / K. AlternatePair: chi alternates 0, pi/2 by
// index and requires even K. Fixed: constant. Free: no change.
SamplingSet apply_chi(SamplingSet samples, const ChiPolicy& policy);

// Each spatial point duplicated in place (i -> 2i, 2i+1); combined with
// ChiPolicy::alternate_pair this yields the two-polarization acquisition
// of every spatial point.
SamplingSet duplicate_pairwise(const SamplingSet& samples);

// CSV with header "theta,phi,chi" (radians, 17 significant digits) plus a
// JSON sidecar at path + ".json" recording provenance and K.
void save_sampling_csv(const SamplingSet& samples, const std::string& path);
SamplingSet load_sampling_csv(const std::string& path);

}  // namespace snfcs
