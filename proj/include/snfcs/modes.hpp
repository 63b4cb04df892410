// SPDX-License-Identifier: Apache-2.0
//
// Enumeration and counting of expansion modes: the bijection between a flat
// column index q and the mode identifiers (n, m, mu) (or (n, m) for the
// spherical-harmonics case), in one canonical ordering shared by every
// matrix builder and every recovered coefficient vector.
#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

namespace snfcs {

enum class ModeKind {
  // All degrees 1..N and the full order ranges -n <= mu, m <= n.
  WignerGeneral,
  // Spherical harmonics (the mu = 0 slice), degrees 1..N.
  SphericalHarmonics,
  // First-order probe expansion restricted to mu = +-1: two concatenated
  // blocks over (n, m), s = 1 holding the mu-sum combination and s = 2 the
  // mu-difference combination.
  SnfMuPm1,
};

std::string to_string(ModeKind kind);
ModeKind mode_kind_from_string(const std::string& name);

struct ModeEntry {
  int n = 0;
  int m = 0;
  int mu = 0;  // 0 for SphericalHarmonics and SnfMuPm1 entries
  int s = 0;   // 1 or 2 for SnfMuPm1, 0 otherwise

  bool operator==(const ModeEntry&) const = default;
};

// Number of columns L for a given kind and maximum degree N >= 1.
//   WignerGeneral      -> (4N^3 + 12N^2 + 11N) / 3
//   SphericalHarmonics -> N(N + 2)
//   SnfMuPm1           -> 2 N(N + 2)
long mode_count(ModeKind kind, int n_max);

// Truncation degree N = ceil(k * r_min) + n0 for wavenumber k and minimum
// enclosing radius r_min, both positive.
int truncation_degree(double wavenumber, double r_min, int n0);

// Immutable, canonically ordered table of all modes for (kind, N). Ordering
// is n ascending, then m ascending, then mu ascending; for SnfMuPm1 the
// whole s = 1 block precedes the s = 2 block. Degree starts at n = 1: there
// is no monopole term anywhere in this project, unlike most spherical
// harmonics libraries.
class ModeTable {
 public:
  ModeTable(ModeKind kind, int n_max);

  ModeKind kind() const { return kind_; }
  int max_degree() const { return n_max_; }
  int size() const { return static_cast<int>(entries_.size()); }

  const ModeEntry& operator[](int q) const { return entries_[static_cast<std::size_t>(q)]; }
  const std::vector<ModeEntry>& entries() const { return entries_; }

  // Inverse of operator[]; throws std::out_of_range for unknown entries.
  int index_of(const ModeEntry& entry) const;

  nlohmann::json to_json() const;
  static ModeTable from_json(const nlohmann::json& j);

 private:
  ModeKind kind_;
  int n_max_;
  std::vector<ModeEntry> entries_;
  std::unordered_map<long, int> lookup_;
};

}  // namespace snfcs
