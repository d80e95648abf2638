#pragma once

// Permutation crossovers and swap mutation over nurse orderings.
//
// Each operator has a deterministic form taking the cut points or template
// explicitly, and a randomised form that draws them from an Rng.

#include <algorithm>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "nurse/errors.hpp"
#include "nurse/rng.hpp"

namespace nurse {

using Genotype = std::vector<int>;

enum class CrossoverKind { pmx, order, c1, uniform_order, pux };

inline const char* to_string(CrossoverKind k) {
  switch (k) {
    case CrossoverKind::pmx: return "pmx";
    case CrossoverKind::order: return "order";
    case CrossoverKind::c1: return "c1";
    case CrossoverKind::uniform_order: return "uniform";
    case CrossoverKind::pux: return "pux";
  }
  return "?";
}

inline CrossoverKind parse_crossover(std::string_view s) {
  if (s == "pmx") return CrossoverKind::pmx;
  if (s == "order") return CrossoverKind::order;
  if (s == "c1") return CrossoverKind::c1;
  if (s == "uniform") return CrossoverKind::uniform_order;
  if (s == "pux") return CrossoverKind::pux;
  throw ConfigInvalid("unknown crossover '" + std::string(s) + "'");
}

inline bool is_permutation_of_iota(std::span<const int> g) {
  std::vector<char> seen(g.size(), 0);
  for (int x : g) {
    if (x < 0 || static_cast<std::size_t>(x) >= g.size() || seen[x]) return false;
    seen[x] = 1;
  }
  return true;
}

namespace detail {

inline void require_same_length(std::span<const int> a, std::span<const int> b) {
  if (a.size() != b.size()) throw std::invalid_argument("parents differ in length");
}

inline std::pair<std::size_t, std::size_t> draw_cuts(std::size_t n, Rng& rng) {
  auto lo = static_cast<std::size_t>(uniform_below(rng, n + 1));
  auto hi = static_cast<std::size_t>(uniform_below(rng, n + 1));
  if (lo > hi) std::swap(lo, hi);
  return {lo, hi};
}

}  // namespace detail

/// Partially mapped crossover. Positions [lo, hi) come from `a`; the rest
/// from `b`, with clashes resolved through the segment's a<->b mapping.
inline Genotype crossover_pmx(std::span<const int> a, std::span<const int> b, std::size_t lo, std::size_t hi) {
  detail::require_same_length(a, b);
  const auto n = a.size();
  Genotype child(n);
  std::vector<std::size_t> pos_in_a(n);
  std::vector<char> in_segment(n, 0);
  for (std::size_t x = 0; x < n; ++x) pos_in_a[a[x]] = x;
  for (std::size_t x = lo; x < hi; ++x) {
    child[x] = a[x];
    in_segment[a[x]] = 1;
  }
  for (std::size_t x = 0; x < n; ++x) {
    if (x >= lo && x < hi) continue;
    int gene = b[x];
    while (in_segment[gene]) gene = b[pos_in_a[gene]];
    child[x] = gene;
  }
  return child;
}

inline Genotype crossover_pmx(std::span<const int> a, std::span<const int> b, Rng& rng) {
  const auto [lo, hi] = detail::draw_cuts(a.size(), rng);
  return crossover_pmx(a, b, lo, hi);
}

/// Davis order crossover. Positions [lo, hi) come from `a`; the remaining
/// positions, starting at `hi` and wrapping, take `b`'s other genes in `b`'s
/// cyclic order from `hi`.
inline Genotype crossover_order(std::span<const int> a, std::span<const int> b, std::size_t lo, std::size_t hi) {
  detail::require_same_length(a, b);
  const auto n = a.size();
  Genotype child(n);
  std::vector<char> kept(n, 0);
  for (std::size_t x = lo; x < hi; ++x) {
    child[x] = a[x];
    kept[a[x]] = 1;
  }
  if (n == 0) return child;
  std::size_t out = hi % n;
  for (std::size_t step = 0; step < n; ++step) {
    const int gene = b[(hi + step) % n];
    if (kept[gene]) continue;
    child[out] = gene;
    out = (out + 1) % n;
  }
  return child;
}

inline Genotype crossover_order(std::span<const int> a, std::span<const int> b, Rng& rng) {
  const auto [lo, hi] = detail::draw_cuts(a.size(), rng);
  return crossover_order(a, b, lo, hi);
}

/// One-point C1 crossover: head a[0, cut), tail = b's remaining genes in b's order.
inline Genotype crossover_c1(std::span<const int> a, std::span<const int> b, std::size_t cut) {
  detail::require_same_length(a, b);
  Genotype child(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(cut));
  std::vector<char> used(a.size(), 0);
  for (int g : child) used[g] = 1;
  for (int g : b)
    if (!used[g]) child.push_back(g);
  return child;
}

inline Genotype crossover_c1(std::span<const int> a, std::span<const int> b, Rng& rng) {
  return crossover_c1(a, b, static_cast<std::size_t>(uniform_below(rng, a.size() + 1)));
}

/// Template-driven order crossover: where `keep` is true the child holds a's
/// gene; the other genes fill the remaining positions in the order they
/// appear in b.
inline Genotype crossover_template(std::span<const int> a, std::span<const int> b, const std::vector<bool>& keep) {
  detail::require_same_length(a, b);
  const auto n = a.size();
  if (keep.size() != n) throw std::invalid_argument("template length differs from parents");
  Genotype child(n);
  std::vector<char> used(n, 0);
  for (std::size_t x = 0; x < n; ++x)
    if (keep[x]) {
      child[x] = a[x];
      used[a[x]] = 1;
    }
  std::size_t src = 0;
  for (std::size_t x = 0; x < n; ++x) {
    if (keep[x]) continue;
    while (used[b[src]]) ++src;
    child[x] = b[src++];
  }
  return child;
}

inline std::vector<bool> draw_template(std::size_t n, double p, Rng& rng) {
  std::vector<bool> keep(n);
  for (std::size_t x = 0; x < n; ++x) keep[x] = bernoulli(rng, p);
  return keep;
}

/// Syswerda's uniform order-based crossover (template bits are fair coins).
inline Genotype crossover_uniform_order(std::span<const int> a, std::span<const int> b, Rng& rng) {
  return crossover_template(a, b, draw_template(a.size(), 0.5, rng));
}

/// Parameterised uniform order crossover: template bits are 1 with
/// probability p. p = 0.5 reproduces crossover_uniform_order.
inline Genotype crossover_pux(std::span<const int> a, std::span<const int> b, double p, Rng& rng) {
  if (!(p >= 0.0 && p <= 1.0)) throw ConfigInvalid("PUX probability must lie in [0, 1]");
  return crossover_template(a, b, draw_template(a.size(), p, rng));
}

inline Genotype crossover(CrossoverKind kind, std::span<const int> a, std::span<const int> b, double pux_p,
                          Rng& rng) {
  switch (kind) {
    case CrossoverKind::pmx: return crossover_pmx(a, b, rng);
    case CrossoverKind::order: return crossover_order(a, b, rng);
    case CrossoverKind::c1: return crossover_c1(a, b, rng);
    case CrossoverKind::uniform_order: return crossover_uniform_order(a, b, rng);
    case CrossoverKind::pux: return crossover_pux(a, b, pux_p, rng);
  }
  throw ConfigInvalid("unknown crossover");
}

/// Each position, with probability `rate`, swaps its gene with a uniformly
/// chosen other position.
inline void mutate_swap(std::span<int> genotype, double rate, Rng& rng) {
  const auto n = genotype.size();
  if (n < 2) return;
  for (std::size_t x = 0; x < n; ++x) {
    if (!bernoulli(rng, rate)) continue;
    auto y = static_cast<std::size_t>(uniform_below(rng, n - 1));
    if (y >= x) ++y;
    std::swap(genotype[x], genotype[y]);
  }
}

}  // namespace nurse
