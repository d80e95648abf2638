#pragma once

// Corpus recipes used by the benchmark and acceptance suites.

#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "nurse/generator.hpp"

namespace nurse {

struct Band {
  const char* name;
  double tightness;
  int count;
};

inline std::string indexed_name(const std::string& prefix, int index) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%02d", index);
  return prefix + "-" + buf;
}

/// 52 full-size wards (30 nurses, 3 grades) in three tightness bands. Each
/// ward offers a sampled set of 12 patterns per shift count.
inline std::vector<GenParams> full_corpus(std::uint64_t seed = 2004) {
  static constexpr Band bands[] = {{"loose", 0.85, 17}, {"medium", 0.92, 17}, {"tight", 0.97, 18}};
  std::vector<GenParams> out;
  int serial = 0;
  for (const auto& band : bands)
    for (int b = 0; b < band.count; ++b) {
      GenParams g;
      g.name = indexed_name(std::string("ward-") + band.name, b);
      g.tightness = band.tightness;
      g.universe = UniversePolicy::sampled;
      g.sampled_per_size = 12;
      g.seed = seed * 1000 + static_cast<std::uint64_t>(serial++);
      out.push_back(g);
    }
  return out;
}

/// Desk-scale wards small enough for exhaustive enumeration: 4 to 6 nurses,
/// sampled universe so that every |F(i)| stays at or below 20.
inline std::vector<GenParams> small_corpus(int count = 50, std::uint64_t seed = 7) {
  std::vector<GenParams> out;
  for (int x = 0; x < count; ++x) {
    GenParams g;
    g.name = indexed_name("small", x);
    g.nurses = 4 + x % 3;
    g.universe = UniversePolicy::sampled;
    g.sampled_per_size = 10;
    g.combined_per_split = 8;
    g.max_request_weight = 3;
    g.tightness = 0.6;
    g.seed = seed * 1000 + static_cast<std::uint64_t>(x);
    out.push_back(g);
  }
  return out;
}

}  // namespace nurse
