// Copyright 2026 The febe Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace febe {

using Word = std::uint64_t;

inline constexpr int kMatrixModeCap = 14;

/// Occupation-number basis state. Bit i of `bits` is the occupancy of mode i.
struct FockState {
  int n = 0;
  Word bits = 0;

  int popcount() const { return std::popcount(bits); }
  bool occupied(int mode) const { return (bits >> mode) & 1U; }
  friend bool operator==(const FockState&, const FockState&) = default;
};

enum class LadderKind { Create, Annihilate };

struct LadderOp {
  LadderKind kind;
  int mode;
};

inline LadderOp cr(int p) { return {LadderKind::Create, p}; }
inline LadderOp an(int p) { return {LadderKind::Annihilate, p}; }

/// Product of ladder operators; factors[0] is leftmost, so it acts last.
struct Monomial {
  std::vector<LadderOp> factors;
  double coeff = 1.0;
};

struct SignedState {
  bool zero = true;
  int phase = 1;
  FockState state;

  static SignedState Zero() { return {}; }
  static SignedState Of(int phase, FockState s) { return {false, phase, s}; }
};

inline SignedState apply_ladder(const LadderOp& op, const FockState& s) {
  if (op.mode < 0 || op.mode >= s.n) throw std::out_of_range("ladder mode out of range");
  const bool occ = s.occupied(op.mode);
  if ((op.kind == LadderKind::Create) == occ) return SignedState::Zero();
  const Word below = s.bits & ((Word{1} << op.mode) - 1);
  const int phase = (std::popcount(below) & 1) ? -1 : 1;
  return SignedState::Of(phase, FockState{s.n, s.bits ^ (Word{1} << op.mode)});
}

inline SignedState apply_monomial(const Monomial& m, const FockState& s) {
  SignedState cur = SignedState::Of(1, s);
  for (auto it = m.factors.rbegin(); it != m.factors.rend(); ++it) {
    SignedState nxt = apply_ladder(*it, cur.state);
    if (nxt.zero) return nxt;
    cur = SignedState::Of(cur.phase * nxt.phase, nxt.state);
  }
  return cur;
}

/// Parity of the occupied modes strictly between p and q.
inline int phase_exponent(const FockState& j, int p, int q) {
  const int lo = std::min(p, q), hi = std::max(p, q);
  if (hi - lo <= 1) return 0;
  const Word mask = ((Word{1} << hi) - 1) & ~((Word{1} << (lo + 1)) - 1);
  return std::popcount(j.bits & mask) & 1;
}

inline FockState flip(const FockState& j, int p, int q) {
  if (p < 0 || q < 0 || p >= j.n || q >= j.n) throw std::out_of_range("flip index");
  Word b = j.bits ^ (Word{1} << p);
  b ^= (Word{1} << q);
  return {j.n, b};
}

// ---------------------------------------------------------------------------
// Hamiltonian specification

enum class StructureKind { General, NumberOnly, NearestNeighbor, TranslationInvariant, FactorizedNN };

struct Structure {
  StructureKind kind = StructureKind::General;
  int M = 1;
};

struct TiMaps {
  std::map<int, double> T;  // signed offset d = p - q
  std::map<int, double> U;  // on-site n_p
  std::map<int, double> V;  // distance |p - q| for n_p n_q
  bool empty() const { return T.empty() && U.empty() && V.empty(); }
};

using PairKey = std::pair<int, int>;
using QuadKey = std::array<int, 4>;

/// H = sum h_pq a+_p a_q + sum h_pqrs a+_p a+_q a_r a_s + translation-invariant maps.
struct HamiltonianSpec {
  int n = 0;
  std::map<PairKey, double> one_body;
  std::map<QuadKey, double> two_body;
  Structure structure;
  TiMaps ti;
  std::optional<int> eta;

  bool has_two_body() const { return !two_body.empty() || !ti.V.empty(); }
};

inline void validate(const HamiltonianSpec& h) {
  if (h.n <= 0 || h.n > 62) throw std::invalid_argument("mode count out of range");
  auto in = [&](int x) { return x >= 0 && x < h.n; };
  for (auto& [k, v] : h.one_body)
    if (!in(k.first) || !in(k.second)) throw std::invalid_argument("one-body index out of range");
  for (auto& [k, v] : h.two_body) {
    for (int x : k)
      if (!in(x)) throw std::invalid_argument("two-body index out of range");
    if (!(k[0] < k[1]) || !(k[2] > k[3])) throw std::invalid_argument("two-body key must have p<q and r>s");
  }
  for (auto& [d, v] : h.ti.T)
    if (d <= -h.n || d >= h.n) throw std::invalid_argument("TI offset out of range");
  for (auto& [p, v] : h.ti.U)
    if (!in(p)) throw std::invalid_argument("TI on-site index out of range");
  for (auto& [d, v] : h.ti.V)
    if (d == 0 || d <= -h.n || d >= h.n) throw std::invalid_argument("TI interaction offset out of range");
  if (h.eta && (*h.eta < 0 || *h.eta > h.n)) throw std::invalid_argument("eta out of range");
}

/// Expands every stored term (including the translation-invariant maps) into monomials.
inline std::vector<Monomial> monomials(const HamiltonianSpec& h) {
  std::vector<Monomial> out;
  for (auto& [k, v] : h.one_body) out.push_back({{cr(k.first), an(k.second)}, v});
  for (auto& [k, v] : h.two_body) out.push_back({{cr(k[0]), cr(k[1]), an(k[2]), an(k[3])}, v});
  for (auto& [d, v] : h.ti.T)
    for (int q = 0; q < h.n; ++q)
      if (int p = q + d; p >= 0 && p < h.n) out.push_back({{cr(p), an(q)}, v});
  for (auto& [p, v] : h.ti.U) out.push_back({{cr(p), an(p)}, v});
  for (auto& [d, v] : h.ti.V) {
    const int ad = std::abs(d);
    for (int p = 0; p + ad < h.n; ++p) out.push_back({{cr(p), cr(p + ad), an(p + ad), an(p)}, v});
  }
  return out;
}

inline bool number_conserving(const Monomial& m) {
  int c = 0;
  for (auto& f : m.factors) c += f.kind == LadderKind::Create ? 1 : -1;
  return c == 0;
}

inline Eigen::SparseMatrix<double> build_matrix_full(const HamiltonianSpec& h, int cap = kMatrixModeCap) {
  if (h.n > cap) throw std::invalid_argument("mode count exceeds matrix cap");
  const auto terms = monomials(h);
  const Word dim = Word{1} << h.n;
  std::vector<Eigen::Triplet<double>> trip;
  for (Word j = 0; j < dim; ++j) {
    for (auto& m : terms) {
      auto r = apply_monomial(m, {h.n, j});
      if (!r.zero) trip.emplace_back(static_cast<int>(r.state.bits), static_cast<int>(j), r.phase * m.coeff);
    }
  }
  Eigen::SparseMatrix<double> mat(static_cast<int>(dim), static_cast<int>(dim));
  mat.setFromTriplets(trip.begin(), trip.end());
  return mat;
}

/// Weight-eta occupation words in increasing numeric order.
inline std::vector<Word> eta_basis(int n, int eta) {
  std::vector<Word> out;
  if (eta < 0 || eta > n) return out;
  for (Word j = 0; j < (Word{1} << n); ++j)
    if (std::popcount(j) == eta) out.push_back(j);
  return out;
}

inline Eigen::MatrixXd build_matrix_eta(const HamiltonianSpec& h, int eta) {
  if (eta < 0 || eta > h.n) throw std::invalid_argument("eta out of range");
  const auto terms = monomials(h);
  for (auto& m : terms)
    if (!number_conserving(m)) throw std::invalid_argument("Hamiltonian does not conserve particle number");
  const auto basis = eta_basis(h.n, eta);
  std::map<Word, int> rank;
  for (std::size_t i = 0; i < basis.size(); ++i) rank[basis[i]] = static_cast<int>(i);
  Eigen::MatrixXd mat = Eigen::MatrixXd::Zero(basis.size(), basis.size());
  for (std::size_t c = 0; c < basis.size(); ++c)
    for (auto& m : terms) {
      auto r = apply_monomial(m, {h.n, basis[c]});
      if (!r.zero) mat(rank.at(r.state.bits), static_cast<int>(c)) += r.phase * m.coeff;
    }
  return mat;
}

// ---------------------------------------------------------------------------
// Truncation of decaying one-body coefficients

struct DecayModel {
  enum class Kind { Exponential, Algebraic, HardCutoff } kind = Kind::Exponential;
  double C = 1.0;
  double alpha = 1.0;
  double gamma = 2.0;
  int M = 1;

  static DecayModel exponential(double C, double a) { return {Kind::Exponential, C, a, 0, 0}; }
  static DecayModel algebraic(double C, double g) { return {Kind::Algebraic, C, 0, g, 0}; }
  static DecayModel hard_cutoff(int M) { return {Kind::HardCutoff, 0, 0, 0, M}; }

  double bound(int d) const {
    switch (kind) {
      case Kind::Exponential: return C * std::exp(-alpha * d);
      case Kind::Algebraic: return d == 0 ? C : C / std::pow(static_cast<double>(d), gamma);
      case Kind::HardCutoff: return d <= M ? 1.0 : 0.0;
    }
    return 0;
  }
};

struct Truncation {
  HamiltonianSpec spec;
  int cutoff = 0;  // -1 when every term was dropped
  double dropped_bound = 0;
  double dropped_actual = 0;
  double c_prime = 0;  // M = ceil(c_prime * ln(n/eps)) - 1 for the exponential model
};

/// Decay-bound mass of all (p,q) pairs with |p-q| > M on an n-mode open chain.
inline double tail_bound(const DecayModel& d, int n, int M) {
  double s = 0;
  for (int dist = M + 1; dist < n; ++dist) s += 2.0 * (n - dist) * d.bound(dist);
  return s;
}

inline Truncation truncate_coeffs(const HamiltonianSpec& h, const DecayModel& d, double eps) {
  if (!(eps > 0)) throw std::invalid_argument("eps must be positive");
  Truncation t;
  double total = 0;
  for (auto& [k, v] : h.one_body) total += std::abs(v);
  if (d.kind == DecayModel::Kind::HardCutoff) {
    t.cutoff = d.M;
  } else {
    int M = 0;
    while (M < h.n - 1 && tail_bound(d, h.n, M) > eps) ++M;
    t.cutoff = M;
    t.dropped_bound = tail_bound(d, h.n, M);
  }
  if (d.kind == DecayModel::Kind::Exponential) {
    const double g = std::log(2.0 * d.C / (1.0 - std::exp(-d.alpha)));
    t.c_prime = (1.0 + g / std::log(h.n / eps)) / d.alpha;
  }
  if (eps >= total) t.cutoff = -1;
  t.spec = h;
  t.spec.one_body.clear();
  for (auto& [k, v] : h.one_body) {
    if (std::abs(k.first - k.second) <= t.cutoff)
      t.spec.one_body[k] = v;
    else
      t.dropped_actual += std::abs(v);
  }
  return t;
}

// ---------------------------------------------------------------------------
// Synthetic models

enum class ModelKind { Hubbard, ExtendedHubbard, TIFactorized, Localized };

struct ModelParams {
  ModelKind kind = ModelKind::Hubbard;
  double T = 1.0;
  double U = 2.0;
  double V = 0.5;
  DecayModel decay = DecayModel::exponential(1.0, 1.0);
  bool dyadic = true;  // round synthetic draws to multiples of 1/16
};

// Rounds to a multiple of 1/16 and keeps |x| <= 15/16 so a 4-bit magnitude needs no prescale.
inline double dyadic16(double x) { return std::clamp(std::nearbyint(x * 16.0), -15.0, 15.0) / 16.0; }

/// Spin-orbital chain: modes 2s and 2s+1 are the two spin states of site s.
inline HamiltonianSpec gen_synthetic(const ModelParams& mp, int n, std::uint64_t seed) {
  if (n < 2 || std::popcount(static_cast<unsigned>(n)) != 1) throw std::invalid_argument("n must be a power of two >= 2");
  HamiltonianSpec h;
  h.n = n;
  std::mt19937_64 rng(seed);
  auto unit = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53 * 2.0 - 1.0; };
  switch (mp.kind) {
    case ModelKind::Hubbard:
    case ModelKind::ExtendedHubbard: {
      h.structure = {StructureKind::NearestNeighbor, 1};
      for (int p = 0; p < n; ++p) {
        const int q = (p + 1) % n;
        h.one_body[{p, q}] = -mp.T;
        h.one_body[{q, p}] = -mp.T;
      }
      for (int p = 0; p + 1 < n; p += 2) h.two_body[{p, p + 1, p + 1, p}] = mp.U;
      if (mp.kind == ModelKind::ExtendedHubbard)
        for (int p = 1; p + 1 < n; p += 2) h.two_body[{p, p + 1, p + 1, p}] = mp.V;
      break;
    }
    case ModelKind::TIFactorized: {
      h.structure = {StructureKind::TranslationInvariant, 1};
      for (int d = 1; d < n; ++d) {
        double v = mp.decay.bound(d) * unit();
        if (mp.dyadic) v = dyadic16(v);
        if (v != 0.0) {
          h.ti.T[d] = v;
          h.ti.T[-d] = v;
        }
      }
      h.ti.T[0] = mp.dyadic ? dyadic16(0.5 * unit()) : 0.5 * unit();
      h.ti.V[1] = mp.V;
      break;
    }
    case ModelKind::Localized: {
      h.structure = {StructureKind::General, 1};
      for (int p = 0; p < n; ++p)
        for (int q = p; q < n; ++q) {
          double v = unit() * mp.decay.bound(std::abs(p - q));
          if (mp.dyadic) v = dyadic16(v);
          if (v == 0.0) continue;
          h.one_body[{p, q}] = v;
          if (p != q) h.one_body[{q, p}] = v;
        }
      break;
    }
  }
  return h;
}

}  // namespace febe
