// SPDX-License-Identifier: Apache-2.0

#include "snfcs/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "snfcs/rng.hpp"

namespace snfcs {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::Random: return "random";
    case Provenance::Spiral: return "spiral";
    case Provenance::Hammersley: return "hammersley";
    case Provenance::Equiangular: return "equiangular";
    case Provenance::OptimizedGD: return "optimized_gd";
    case Provenance::OptimizedALM: return "optimized_alm";
    case Provenance::File: return "file";
  }
  throw std::logic_error("unreachable provenance");
}

Provenance provenance_from_string(const std::string& name) {
  for (Provenance p :
       {Provenance::Random, Provenance::Spiral, Provenance::Hammersley,
        Provenance::Equiangular, Provenance::OptimizedGD,
        Provenance::OptimizedALM, Provenance::File})
    if (to_string(p) == name) return p;
  throw std::invalid_argument("unknown provenance '" + name + "'");
}

void SamplingSet::validate() const {
  if (theta.empty()) throw std::invalid_argument("SamplingSet: empty set");
  if (theta.size() != phi.size() || theta.size() != chi.size())
    throw std::invalid_argument("SamplingSet: angle vectors differ in length");
  for (std::size_t i = 0; i < theta.size(); ++i) {
    if (!(theta[i] >= 0.0 && theta[i] <= std::numbers::pi + 1e-12))
      throw std::invalid_argument("SamplingSet: theta outside [0, pi]");
    if (!(phi[i] >= 0.0 && phi[i] < kTwoPi + 1e-12))
      throw std::invalid_argument("SamplingSet: phi outside [0, 2pi)");
    if (!(chi[i] >= 0.0 && chi[i] < kTwoPi + 1e-12))
      throw std::invalid_argument("SamplingSet: chi outside [0, 2pi)");
  }
}

SamplingSet spiral(int k) {
  if (k < 2) throw std::invalid_argument("spiral: K must be >= 2");
  SamplingSet out;
  out.provenance = Provenance::Spiral;
  out.theta.resize(k);
  out.phi.resize(k);
  out.chi.assign(k, 0.0);
  double prev_phi = 0.0;
  for (int i = 1; i <= k; ++i) {
    const double h = -1.0 + 2.0 * (i - 1.0) / (k - 1.0);
    out.theta[i - 1] = std::acos(std::clamp(h, -1.0, 1.0));
    if (i == 1 || i == k) {
      prev_phi = 0.0;
    } else {
      prev_phi = std::fmod(
          prev_phi + 3.6 / std::sqrt(static_cast<double>(k)) /
                         std::sqrt(1.0 - h * h),
          kTwoPi);
    }
    out.phi[i - 1] = prev_phi;
  }
  return out;
}

SamplingSet hammersley(int k) {
  if (k < 1) throw std::invalid_argument("hammersley: K must be >= 1");
  SamplingSet out;
  out.provenance = Provenance::Hammersley;
  out.theta.resize(k);
  out.phi.resize(k);
  out.chi.assign(k, 0.0);
  for (int i = 0; i < k; ++i) {
    double v = 0.0;
    double base = 0.5;
    for (unsigned bits = static_cast<unsigned>(i); bits != 0; bits >>= 1) {
      if (bits & 1u) v += base;
      base *= 0.5;
    }
    out.phi[i] = kTwoPi * static_cast<double>(i) / k;
    out.theta[i] = std::acos(std::clamp(1.0 - 2.0 * v, -1.0, 1.0));
  }
  return out;
}

SamplingSet random_uniform(int k, std::uint64_t seed) {
  if (k < 1) throw std::invalid_argument("random_uniform: K must be >= 1");
  SamplingSet out;
  out.provenance = Provenance::Random;
  out.theta.resize(k);
  out.phi.resize(k);
  out.chi.resize(k);
  Rng rng(Rng::derive(seed, {0x5a}));
  for (int i = 0; i < k; ++i) {
    out.theta[i] = std::acos(std::clamp(1.0 - 2.0 * rng.next_double(), -1.0, 1.0));
    out.phi[i] = rng.uniform(0.0, kTwoPi);
    out.chi[i] = rng.uniform(0.0, kTwoPi);
  }
  return out;
}

SamplingSet equiangular(int step_deg) {
  if (step_deg < 1 || 180 % step_deg != 0)
    throw std::invalid_argument("equiangular: step must divide 180");
  SamplingSet out;
  out.provenance = Provenance::Equiangular;
  const int n_theta = 180 / step_deg + 1;
  const int n_phi = 360 / step_deg;
  const double step = step_deg * std::numbers::pi / 180.0;
  for (int it = 0; it < n_theta; ++it) {
    for (int ip = 0; ip < n_phi; ++ip) {
      out.theta.push_back(std::min(it * step, std::numbers::pi));
      out.phi.push_back(ip * step);
      out.chi.push_back(0.0);
    }
  }
  return out;
}

SamplingSet apply_chi(SamplingSet samples, const ChiPolicy& policy) {
  const int k = samples.size();
  switch (policy.kind) {
    case ChiPolicy::Kind::Free:
      break;
    case ChiPolicy::Kind::EvenSpread:
      for (int i = 0; i < k; ++i) samples.chi[i] = kTwoPi * i / k;
      break;
    case ChiPolicy::Kind::AlternatePair:
      if (k % 2 != 0)
        throw std::invalid_argument("apply_chi: AlternatePair requires even K");
      for (int i = 0; i < k; ++i)
        samples.chi[i] = (i % 2 == 0) ? 0.0 : 0.5 * std::numbers::pi;
      break;
    case ChiPolicy::Kind::Fixed:
      for (int i = 0; i < k; ++i) samples.chi[i] = policy.fixed_value;
      break;
  }
  return samples;
}

SamplingSet duplicate_pairwise(const SamplingSet& samples) {
  SamplingSet out;
  out.provenance = samples.provenance;
  out.theta.reserve(2 * samples.theta.size());
  out.phi.reserve(2 * samples.phi.size());
  out.chi.reserve(2 * samples.chi.size());
  for (int i = 0; i < samples.size(); ++i) {
    for (int copy = 0; copy < 2; ++copy) {
      out.theta.push_back(samples.theta[i]);
      out.phi.push_back(samples.phi[i]);
      out.chi.push_back(samples.chi[i]);
    }
  }
  return out;
}

std::string to_string(const ChiPolicy& policy) {
  switch (policy.kind) {
    case ChiPolicy::Kind::EvenSpread: return "even";
    case ChiPolicy::Kind::AlternatePair: return "alternate";
    case ChiPolicy::Kind::Fixed: return "fixed:" + g17(policy.fixed_value);
    case ChiPolicy::Kind::Free: return "free";
  }
  throw std::logic_error("unreachable chi policy");
}

ChiPolicy chi_policy_from_string(const std::string& name) {
  if (name == "even") return ChiPolicy::even_spread();
  if (name == "alternate") return ChiPolicy::alternate_pair();
  if (name == "free") return ChiPolicy::free();
  if (name.rfind("fixed:", 0) == 0)
    return ChiPolicy::fixed(std::stod(name.substr(6)));
  throw std::invalid_argument("unknown chi policy '" + name +
                              "' (expected even, alternate, free or fixed:VAL)");
}

void save_sampling_csv(const SamplingSet& samples, const std::string& path) {
  samples.validate();
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "theta,phi,chi\n";
  for (int i = 0; i < samples.size(); ++i)
    out << g17(samples.theta[i]) << ',' << g17(samples.phi[i]) << ','
        << g17(samples.chi[i]) << '\n';
  nlohmann::json sidecar = {{"provenance", to_string(samples.provenance)},
                            {"k", samples.size()}};
  std::ofstream meta(path + ".json");
  meta << sidecar.dump(2) << '\n';
}

SamplingSet load_sampling_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("theta,phi,chi", 0) != 0)
    throw std::runtime_error(path + ": expected header 'theta,phi,chi'");
  SamplingSet out;
  out.provenance = Provenance::File;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string field;
    double vals[3];
    for (double& val : vals) {
      if (!std::getline(row, field, ','))
        throw std::runtime_error(path + ": malformed row '" + line + "'");
      val = std::stod(field);
    }
    out.theta.push_back(vals[0]);
    out.phi.push_back(vals[1]);
    out.chi.push_back(vals[2]);
  }
  std::ifstream meta(path + ".json");
  if (meta) {
    const auto sidecar = nlohmann::json::parse(meta, nullptr, false);
    if (!sidecar.is_discarded() && sidecar.contains("provenance"))
      out.provenance =
          provenance_from_string(sidecar["provenance"].get<std::string>());
  }
  out.validate();
  return out;
}

}  // namespace snfcs
