// SPDX-License-Identifier: Apache-2.0

#include "snfcs/modes.hpp"

#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace snfcs {

namespace {

// Packs (s, n, m, mu) into one key for the inverse lookup. Orders are
// bounded by |m|, |mu| <= n <= a few hundred, far inside the bit budget.
long pack_entry(const ModeEntry& e) {
  const long base = 2048;
  return ((static_cast<long>(e.s) * base + (e.n + base / 2)) * base +
          (e.m + base / 2)) *
             base +
         (e.mu + base / 2);
}

}  // namespace

std::string to_string(ModeKind kind) {
  switch (kind) {
    case ModeKind::WignerGeneral: return "wigner";
    case ModeKind::SphericalHarmonics: return "sh";
    case ModeKind::SnfMuPm1: return "snf";
  }
  throw std::logic_error("unreachable mode kind");
}

ModeKind mode_kind_from_string(const std::string& name) {
  if (name == "wigner") return ModeKind::WignerGeneral;
  if (name == "sh") return ModeKind::SphericalHarmonics;
  if (name == "snf") return ModeKind::SnfMuPm1;
  throw std::invalid_argument("unknown mode kind '" + name +
                              "' (expected wigner, sh or snf)");
}

long mode_count(ModeKind kind, int n_max) {
  if (n_max < 1) throw std::invalid_argument("mode_count: N must be >= 1");
  const long n = n_max;
  switch (kind) {
    case ModeKind::WignerGeneral:
      return (4 * n * n * n + 12 * n * n + 11 * n) / 3;
    case ModeKind::SphericalHarmonics:
      return n * (n + 2);
    case ModeKind::SnfMuPm1:
      return 2 * n * (n + 2);
  }
  throw std::logic_error("unreachable mode kind");
}

int truncation_degree(double wavenumber, double r_min, int n0) {
  if (!(wavenumber > 0.0) || !(r_min > 0.0))
    throw std::invalid_argument("truncation_degree: k and r_min must be positive");
  return static_cast<int>(std::ceil(wavenumber * r_min)) + n0;
}

ModeTable::ModeTable(ModeKind kind, int n_max) : kind_(kind), n_max_(n_max) {
  const long count = mode_count(kind, n_max);
  entries_.reserve(static_cast<std::size_t>(count));
  switch (kind) {
    case ModeKind::WignerGeneral:
      for (int n = 1; n <= n_max; ++n)
        for (int m = -n; m <= n; ++m)
          for (int mu = -n; mu <= n; ++mu)
            entries_.push_back({n, m, mu, 0});
      break;
    case ModeKind::SphericalHarmonics:
      for (int n = 1; n <= n_max; ++n)
        for (int m = -n; m <= n; ++m) entries_.push_back({n, m, 0, 0});
      break;
    case ModeKind::SnfMuPm1:
      for (int s = 1; s <= 2; ++s)
        for (int n = 1; n <= n_max; ++n)
          for (int m = -n; m <= n; ++m) entries_.push_back({n, m, 0, s});
      break;
  }
  if (static_cast<long>(entries_.size()) != count)
    throw std::logic_error("mode enumeration disagrees with mode_count");
  lookup_.reserve(entries_.size());
  for (int q = 0; q < size(); ++q) lookup_.emplace(pack_entry(entries_[q]), q);
}

int ModeTable::index_of(const ModeEntry& entry) const {
  const auto it = lookup_.find(pack_entry(entry));
  if (it == lookup_.end())
    throw std::out_of_range("ModeTable::index_of: entry not in table");
  return it->second;
}

nlohmann::json ModeTable::to_json() const {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : entries_) {
    switch (kind_) {
      case ModeKind::WignerGeneral:
        entries.push_back({e.n, e.m, e.mu});
        break;
      case ModeKind::SphericalHarmonics:
        entries.push_back({e.n, e.m});
        break;
      case ModeKind::SnfMuPm1:
        entries.push_back({e.n, e.m, e.s});
        break;
    }
  }
  return {{"kind", to_string(kind_)}, {"N", n_max_}, {"entries", entries}};
}

ModeTable ModeTable::from_json(const nlohmann::json& j) {
  ModeTable table(mode_kind_from_string(j.at("kind").get<std::string>()),
                  j.at("N").get<int>());
  const auto& entries = j.at("entries");
  if (static_cast<int>(entries.size()) != table.size())
    throw std::invalid_argument("ModeTable::from_json: entry count mismatch");
  for (int q = 0; q < table.size(); ++q) {
    const auto& je = entries[static_cast<std::size_t>(q)];
    const ModeEntry& e = table[q];
    bool ok = je[0].get<int>() == e.n && je[1].get<int>() == e.m;
    if (table.kind() == ModeKind::WignerGeneral)
      ok = ok && je[2].get<int>() == e.mu;
    if (table.kind() == ModeKind::SnfMuPm1) ok = ok && je[2].get<int>() == e.s;
    if (!ok)
      throw std::invalid_argument(
          "ModeTable::from_json: entries not in canonical order");
  }
  return table;
}

}  // namespace snfcs
