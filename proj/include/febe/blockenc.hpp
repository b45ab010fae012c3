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
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "febe/circuit.hpp"
#include "febe/fock.hpp"
#include "febe/oracles.hpp"
#include "febe/spec_io.hpp"

namespace febe {

struct EncodeOptions {
  int m_b = 5;
  std::optional<std::uint64_t> lambda;  // optimal power of two when unset
  std::optional<int> eta;               // falls back to the spec's eta
  bool torus = true;                    // boundary for nearest-neighbour offsets
};

struct LcuPart;

/// (alpha, m, eps) block encoding together with what it encodes.
struct BlockEncoding {
  Circuit circuit;
  Qubits anc_mask;
  Qubits system_qubits;
  double alpha = 1;
  double eps_budget = 0;

  std::string cls;
  int n = 0;
  std::optional<int> eta;
  int M = 0;
  LookupTable table;
  std::uint64_t table_entries = 0;  // slots that carry a term
  double prescale = 1;
  double dropped_l1 = 0;  // weight of input terms outside the encoded class
  HamiltonianSpec encoded;
  std::vector<LcuPart> parts;
};

struct LcuPart {
  double weight = 1;
  BlockEncoding be;
};

using TableOverrides = std::vector<LookupTable>;

namespace detail {

inline Qubits cat(Qubits a, const Qubits& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

inline void hadamards(Builder& b, const Qubits& r) {
  for (int q : r) b.c.h(q);
}

/// Smallest power of two s >= 1 with max|v| / s <= 1. A coefficient of
/// exactly s is clamped to the largest code and shows up in the budget.
inline double prescale_for(const std::vector<double>& vals) {
  double mx = 0;
  for (double v : vals) mx = std::max(mx, std::abs(v));
  double s = 1;
  while (mx > s) s *= 2;
  return s;
}

struct TableBuild {
  LookupTable table;
  double prescale = 1;
  double eps = 0;
  std::uint64_t entries = 0;
};

/// Quantizes `vals` (slot -> coefficient) into a lookup table. `mult` counts how
/// many matrix terms read each slot; slots with mult 0 are unused.
inline TableBuild make_table(const std::vector<double>& vals, const std::vector<std::uint64_t>& mult, const EncodeOptions& o,
                             const LookupTable* override_table) {
  if (o.m_b < 2 || o.m_b > 32) throw std::invalid_argument("m_b must lie in [2, 32]");
  TableBuild tb;
  const std::uint64_t L = vals.size();
  tb.prescale = prescale_for(vals);
  tb.table.L = L;
  tb.table.m_b = o.m_b;
  tb.table.lambda = o.lambda ? *o.lambda : select_swap_lambda(L, o.m_b);
  for (std::uint64_t l = 0; l < L; ++l) {
    const std::uint64_t code = mult[l] ? quantize(vals[l] / tb.prescale, o.m_b) : 0;
    tb.table.words.push_back(code);
    tb.eps += static_cast<double>(mult[l]) * std::abs(vals[l] - tb.prescale * decode(code, o.m_b));
    if (mult[l]) ++tb.entries;
  }
  tb.table.check();
  if (override_table) {
    if (override_table->L != L || override_table->m_b != o.m_b) throw std::invalid_argument("stored table does not match the spec");
    override_table->check();
    tb.table = *override_table;
  }
  return tb;
}

struct Ancillas {
  Qubits word, samp;
  int flag = -1;
};

inline Ancillas amplitude_registers(Builder& b, int m_b) {
  Ancillas a;
  a.word = b.reg("lookup", m_b, Role::Lookup);
  a.samp = b.reg("sampling", m_b - 1, Role::Sampling);
  a.flag = b.reg("flag", 1, Role::Sampling)[0];
  return a;
}

/// Lookup, direct sampling, lookup again: the word register returns to |0>.
inline void amplitude(Builder& b, const LookupTable& t, const Qubits& addr, const Ancillas& a) {
  select_swap(b, t, addr, a.word);
  direct_sampling(b, a.word, a.samp, a.flag);
  select_swap(b, t, addr, a.word);
}

/// d = p - q in two's complement over |d| bits (one more than p and q).
inline void offset(Builder& b, const Qubits& p, const Qubits& q, const Qubits& d) {
  for (std::size_t i = 0; i < p.size(); ++i) b.c.cx(p[i], d[i]);
  const int z = b.scratch();
  const Qubits qz = cat(q, {z});
  for (int x : d) b.c.x(x);
  add(b, qz, d);
  for (int x : d) b.c.x(x);
  b.release(z);
}

/// t += (m + 1) when s = 0, t -= (m + 1) when s = 1, modulo 2^|t|.
inline void shift(Builder& b, const Qubits& t, const Qubits& m, int s) {
  if (!m.empty()) {
    const Qubits pad = b.scratch(static_cast<int>(t.size() - m.size()));
    add(b, cat(m, pad), t, s);
    b.release(pad);
  }
  increment(b, t, {off(s)});
  increment(b, t, {on(s)}, true);
}

/// Ordinal register for eta occupied modes, padded to a power of two; the
/// flag is set on padding branches and is projected out.
inline Qubits ordinal(Builder& b, const std::string& name, int eta) {
  const auto pad = next_pow2(static_cast<std::uint64_t>(eta));
  Qubits i = b.reg(name, index_bits(pad), Role::Index);
  hadamards(b, i);
  if (pad != static_cast<std::uint64_t>(eta)) {
    const int f = b.reg(name + "_pad", 1, Role::Validation)[0];
    for (std::uint64_t v = static_cast<std::uint64_t>(eta); v < pad; ++v) eq_const(b, i, v, f);
  }
  return i;
}

/// After a+_p a_q moved the particle from q to p, restores i = rank(q) to 0:
/// in the new occupation rank(q) = i + [p < q].
inline void clear_ordinal(Builder& b, const Qubits& i, const Qubits& p, const Qubits& q, const Qubits& j) {
  if (i.empty()) return;
  const Qubits t = b.scratch(static_cast<int>(i.size()));
  const auto m0 = b.mark();
  rank(b, q, j, t);
  const int c = b.scratch();
  comp(b, p, q, c);
  increment(b, t, {on(c)}, true);
  comp(b, p, q, c);
  b.release(c);
  const auto m1 = b.mark();
  xor_copy(b, t, i);
  b.c.append_inverse_range(m0, m1);
  b.release(t);
}

inline void read_bit(Builder& b, const Qubits& sel, const Qubits& j, int x) {
  auto w = bit_words(j);
  swap_up(b, sel, w);
  b.c.cx(j[0], x);
  swap_up_dag(b, sel, w);
}

inline BlockEncoding seal(Builder& b, const Qubits& sys, const std::string& cls, int n, double branches, const TableBuild& tb) {
  BlockEncoding be;
  be.system_qubits = sys;
  Qubits all_but;
  for (int q = 0; q < b.c.qubit_count; ++q)
    if (std::find(sys.begin(), sys.end(), q) == sys.end()) all_but.push_back(q);
  be.anc_mask = all_but;
  be.circuit = std::move(b.c);
  be.cls = cls;
  be.n = n;
  be.prescale = tb.prescale;
  be.alpha = branches * tb.prescale;
  be.eps_budget = tb.eps;
  be.table = tb.table;
  be.table_entries = tb.entries;
  be.encoded.n = n;
  return be;
}

inline int checked_eta(int n, std::optional<int> eta) {
  if (!eta) throw std::invalid_argument("particle number required");
  if (*eta < 1 || *eta > n) throw std::invalid_argument("eta must lie in [1, n]");
  return *eta;
}

inline std::map<PairKey, double> pair_terms(const HamiltonianSpec& h) {
  std::map<PairKey, double> out;
  for (auto& [k, v] : h.one_body) out[k] += v;
  for (auto& [d, v] : h.ti.T)
    for (int q = 0; q < h.n; ++q)
      if (int p = q + d; p >= 0 && p < h.n) out[{p, q}] += v;
  for (auto& [p, v] : h.ti.U) out[{p, p}] += v;
  return out;
}

inline void require_one_body(const HamiltonianSpec& h) {
  if (h.has_two_body()) throw std::invalid_argument("two-body terms need the two-body or factorized encoder");
}

/// (p, q) -> V for n_p n_q, from two-body keys of the form (p,q,q,p) or (p,q,p,q).
inline std::optional<std::map<PairKey, double>> density_pairs(const HamiltonianSpec& h) {
  std::map<PairKey, double> out;
  for (auto& [k, v] : h.two_body) {
    if (k[0] == k[1]) return std::nullopt;
    if (k[2] == k[1] && k[3] == k[0])
      out[{k[0], k[1]}] += v;
    else if (k[2] == k[0] && k[3] == k[1])
      out[{k[0], k[1]}] -= v;
    else
      return std::nullopt;
  }
  for (auto& [d, v] : h.ti.V) {
    const int ad = std::abs(d);
    if (ad == 0) return std::nullopt;
    for (int p = 0; p + ad < h.n; ++p) out[{p, p + ad}] += v;
  }
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Full-space encoders

/// sum_{pq} h_pq a+_p a_q with n^2 branches.
inline BlockEncoding encode_one_body_full(const HamiltonianSpec& h, const EncodeOptions& o = {}, const LookupTable* tab = nullptr) {
  detail::require_one_body(h);
  require_pow2_modes(h.n);
  const int n = h.n, k = index_bits(static_cast<std::uint64_t>(n));
  const auto terms = detail::pair_terms(h);
  std::vector<double> vals(static_cast<std::size_t>(n) * n, 0.0);
  std::vector<std::uint64_t> mult(vals.size(), 1);
  for (auto& [key, v] : terms) vals[static_cast<std::size_t>(key.first) | (static_cast<std::size_t>(key.second) << k)] = v;
  auto tb = detail::make_table(vals, mult, o, tab);

  Builder b;
  const Qubits j = b.reg("system", n, Role::System);
  const Qubits P = b.reg("p", k, Role::Index), Q = b.reg("q", k, Role::Index);
  const auto anc = detail::amplitude_registers(b, o.m_b);
  const int v = b.reg("validation", 1, Role::Validation)[0];
  detail::hadamards(b, detail::cat(P, Q));
  detail::amplitude(b, tb.table, detail::cat(P, Q), anc);
  b.c.x(v);
  oc_one_body(b, P, Q, j, v);
  detail::hadamards(b, detail::cat(P, Q));

  auto be = detail::seal(b, j, "one-body", n, static_cast<double>(n) * n, tb);
  for (auto& [key, val] : terms) be.encoded.one_body[key] = val;
  return be;
}

/// sum_p U_p n_p with n branches.
inline BlockEncoding encode_number_full(const HamiltonianSpec& h, const EncodeOptions& o = {}, const LookupTable* tab = nullptr) {
  detail::require_one_body(h);
  require_pow2_modes(h.n);
  const int n = h.n, k = index_bits(static_cast<std::uint64_t>(n));
  const auto terms = detail::pair_terms(h);
  std::vector<double> vals(static_cast<std::size_t>(n), 0.0);
  std::vector<std::uint64_t> mult(vals.size(), 1);
  for (auto& [key, v] : terms) {
    if (key.first != key.second) throw std::invalid_argument("number encoder takes diagonal terms only");
    vals[static_cast<std::size_t>(key.first)] = v;
  }
  auto tb = detail::make_table(vals, mult, o, tab);

  Builder b;
  const Qubits j = b.reg("system", n, Role::System);
  const Qubits P = b.reg("p", k, Role::Index);
  const auto anc = detail::amplitude_registers(b, o.m_b);
  const int v = b.reg("validation", 1, Role::Validation)[0];
  detail::hadamards(b, P);
  detail::amplitude(b, tb.table, P, anc);
  b.c.x(v);
  os_one_body(b, OsVariant::Number, P, P, j, v);
  detail::hadamards(b, P);

  auto be = detail::seal(b, j, "number", n, n, tb);
  for (auto& [key, val] : terms) be.encoded.one_body[key] = val;
  be.encoded.structure = {StructureKind::NumberOnly, 1};
  return be;
}

/// sum h_pqrs a+_p a+_q a_r a_s with n^4 branches.
inline BlockEncoding encode_two_body_full(const HamiltonianSpec& h, const EncodeOptions& o = {}, const LookupTable* tab = nullptr) {
  if (!h.one_body.empty() || !h.ti.T.empty() || !h.ti.U.empty()) throw std::invalid_argument("one-body terms need a one-body encoder");
  require_pow2_modes(h.n);
  const int n = h.n, k = index_bits(static_cast<std::uint64_t>(n));
  std::map<QuadKey, double> terms = h.two_body;
  for (auto& [d, v] : h.ti.V) {
    const int ad = std::abs(d);
    for (int p = 0; p + ad < n; ++p) terms[{p, p + ad, p + ad, p}] += v;
  }
  std::vector<double> vals(std::size_t{1} << (4 * k), 0.0);
  std::vector<std::uint64_t> mult(vals.size(), 1);
  for (auto& [key, v] : terms) {
    std::size_t idx = 0;
    for (int i = 0; i < 4; ++i) idx |= static_cast<std::size_t>(key[static_cast<std::size_t>(i)]) << (i * k);
    vals[idx] = v;
  }
  auto tb = detail::make_table(vals, mult, o, tab);

  Builder b;
  const Qubits j = b.reg("system", n, Role::System);
  const Qubits P = b.reg("p", k, Role::Index), Q = b.reg("q", k, Role::Index);
  const Qubits R = b.reg("r", k, Role::Index), S = b.reg("s", k, Role::Index);
  const auto anc = detail::amplitude_registers(b, o.m_b);
  const int v1 = b.reg("validation", 1, Role::Validation)[0];
  const int v2 = b.reg("validation2", 1, Role::Validation)[0];
  const Qubits addr = detail::cat(detail::cat(P, Q), detail::cat(R, S));
  detail::hadamards(b, addr);
  detail::amplitude(b, tb.table, addr, anc);
  b.c.x(v1);
  b.c.x(v2);
  oc_two_body(b, P, Q, R, S, j, v1, v2);
  detail::hadamards(b, addr);

  const double nn = static_cast<double>(n) * n;
  auto be = detail::seal(b, j, "two-body", n, nn * nn, tb);
  be.encoded.two_body = terms;
  return be;
}

/// sum_{p != q} V_pq n_p n_q: no flips and no phases, valid iff both modes are occupied.
inline BlockEncoding encode_factorized(const HamiltonianSpec& h, const EncodeOptions& o = {}, const LookupTable* tab = nullptr) {
  require_pow2_modes(h.n);
  if (!h.one_body.empty() || !h.ti.T.empty() || !h.ti.U.empty()) throw std::invalid_argument("one-body terms need a one-body encoder");
  const auto pairs = detail::density_pairs(h);
  if (!pairs) throw std::invalid_argument("factorized encoder takes n_p n_q terms with p != q only");
  const int n = h.n, k = index_bits(static_cast<std::uint64_t>(n));
  std::vector<double> vals(static_cast<std::size_t>(n) * n, 0.0);
  std::vector<std::uint64_t> mult(vals.size(), 0);
  for (auto& [key, v] : *pairs) {
    const std::size_t idx = static_cast<std::size_t>(key.first) | (static_cast<std::size_t>(key.second) << k);
    vals[idx] = v;
    mult[idx] = 1;
  }
  auto tb = detail::make_table(vals, mult, o, tab);

  Builder b;
  const Qubits j = b.reg("system", n, Role::System);
  const Qubits P = b.reg("p", k, Role::Index), Q = b.reg("q", k, Role::Index);
  const auto anc = detail::amplitude_registers(b, o.m_b);
  const int v = b.reg("validation", 1, Role::Validation)[0];
  detail::hadamards(b, detail::cat(P, Q));
  detail::amplitude(b, tb.table, detail::cat(P, Q), anc);
  b.c.x(v);
  const int x1 = b.scratch(), x2 = b.scratch();
  detail::read_bit(b, P, j, x1);
  detail::read_bit(b, Q, j, x2);
  b.c.mcx({on(x1), on(x2)}, v);
  detail::read_bit(b, Q, j, x2);
  detail::read_bit(b, P, j, x1);
  b.release(x2);
  b.release(x1);
  detail::hadamards(b, detail::cat(P, Q));

  auto be = detail::seal(b, j, "factorized", n, static_cast<double>(n) * n, tb);
  for (auto& [key, val] : *pairs) be.encoded.two_body[{key.first, key.second, key.second, key.first}] = val;
  return be;
}

/// Translation-invariant hopping T(p - q): one table word per offset, 2n - 1 in use.
inline BlockEncoding encode_ti(const HamiltonianSpec& h, const EncodeOptions& o = {}, const LookupTable* tab = nullptr);

/// Hopping within distance M. Branches run over (p, m in [1, M], +/-).
inline BlockEncoding encode_nn(const HamiltonianSpec& h, int M, const EncodeOptions& o = {}, const LookupTable* tab = nullptr);

// ---------------------------------------------------------------------------
// Particle-number sector encoders

namespace detail {

enum class Key { Pair, Offset };

inline TableBuild pair_or_offset_table(int n, const std::map<PairKey, double>& terms, const std::map<int, double>& ti, Key key,
                                       const EncodeOptions& o, const LookupTable* tab) {
  const int k = index_bits(static_cast<std::uint64_t>(n));
  if (key == Key::Pair) {
    std::vector<double> vals(static_cast<std::size_t>(n) * n, 0.0);
    std::vector<std::uint64_t> mult(vals.size(), 1);
    for (auto& [kk, v] : terms) vals[static_cast<std::size_t>(kk.first) | (static_cast<std::size_t>(kk.second) << k)] = v;
    return make_table(vals, mult, o, tab);
  }
  std::vector<double> vals(2 * static_cast<std::size_t>(n), 0.0);
  std::vector<std::uint64_t> mult(vals.size(), 0);
  for (int d = -(n - 1); d < n; ++d) {
    const std::size_t slot = static_cast<std::size_t>((d + 2 * n) % (2 * n));
    mult[slot] = static_cast<std::uint64_t>(n - std::abs(d));
    if (auto it = ti.find(d); it != ti.end()) vals[slot] = it->second;
  }
  return make_table(vals, mult, o, tab);
}

inline void offset_amplitude(Builder& b, const LookupTable& t, const Qubits& P, const Qubits& Q, const Ancillas& anc) {
  const Qubits D = b.scratch(static_cast<int>(P.size()) + 1);
  const auto m0 = b.mark();
  offset(b, P, Q, D);
  const auto m1 = b.mark();
  amplitude(b, t, D, anc);
  b.c.append_inverse_range(m0, m1);
  b.release(D);
}

inline std::map<int, double> ti_offsets(const HamiltonianSpec& h) {
  std::map<int, double> out;
  for (auto& [d, v] : h.ti.T)
    if (std::abs(d) < h.n) out[d] = v;
  return out;
}

inline void require_ti(const HamiltonianSpec& h) {
  if (!h.one_body.empty() || !h.ti.U.empty() || h.has_two_body())
    throw std::invalid_argument("translation-invariant encoder takes the hopping map only");
}

}  // namespace detail

inline BlockEncoding encode_ti(const HamiltonianSpec& h, const EncodeOptions& o, const LookupTable* tab) {
  detail::require_ti(h);
  require_pow2_modes(h.n);
  const int n = h.n, k = index_bits(static_cast<std::uint64_t>(n));
  const auto offs = detail::ti_offsets(h);
  auto tb = detail::pair_or_offset_table(n, {}, offs, detail::Key::Offset, o, tab);

  Builder b;
  const Qubits j = b.reg("system", n, Role::System);
  const Qubits P = b.reg("p", k, Role::Index), Q = b.reg("q", k, Role::Index);
  const auto anc = detail::amplitude_registers(b, o.m_b);
  const int v = b.reg("validation", 1, Role::Validation)[0];
  detail::hadamards(b, detail::cat(P, Q));
  detail::offset_amplitude(b, tb.table, P, Q, anc);
  b.c.x(v);
  oc_one_body(b, P, Q, j, v);
  detail::hadamards(b, detail::cat(P, Q));

  auto be = detail::seal(b, j, "ti", n, static_cast<double>(n) * n, tb);
  be.encoded.ti.T = offs;
  be.encoded.structure = {StructureKind::TranslationInvariant, 1};
  return be;
}

namespace detail {

/// Sector one-body circuit shared by the general and translation-invariant keys.
inline BlockEncoding eta_one_body(const HamiltonianSpec& h, int eta, Key key, const std::map<PairKey, double>& terms,
                                  const std::map<int, double>& offs, const EncodeOptions& o, const LookupTable* tab) {
  require_pow2_modes(h.n);
  const int n = h.n, k = index_bits(static_cast<std::uint64_t>(n));
  auto tb = pair_or_offset_table(n, terms, offs, key, o, tab);

  Builder b;
  const Qubits j = b.reg("system", n, Role::System);
  const Qubits P = b.reg("p", k, Role::Index), Q = b.reg("q", k, Role::Index);
  const auto anc = amplitude_registers(b, o.m_b);
  const int v = b.reg("validation", 1, Role::Validation)[0];
  hadamards(b, P);
  const Qubits I = ordinal(b, "i", eta);
  occ(b, I, Q, j, eta);
  if (key == Key::Pair)
    amplitude(b, tb.table, cat(P, Q), anc);
  else
    offset_amplitude(b, tb.table, P, Q, anc);
  b.c.x(v);
  oc_one_body(b, P, Q, j, v);
  clear_ordinal(b, I, P, Q, j);
  rank(b, P, j, I);
  occ(b, I, P, j, eta);
  hadamards(b, Q);
  hadamards(b, I);

  const double pad = static_cast<double>(next_pow2(static_cast<std::uint64_t>(eta)));
  auto be = seal(b, j, key == Key::Pair ? "eta-one-body" : "ti-eta", n, n * pad, tb);
  be.eta = eta;
  be.encoded.eta = eta;
  return be;
}

}  // namespace detail

/// One-body operator on the eta-particle sector with n * eta branches.
inline BlockEncoding encode_eta_one_body(const HamiltonianSpec& h, int eta, const EncodeOptions& o = {}, const LookupTable* tab = nullptr) {
  detail::require_one_body(h);
  eta = detail::checked_eta(h.n, eta);
  const auto terms = detail::pair_terms(h);
  auto be = detail::eta_one_body(h, eta, detail::Key::Pair, terms, {}, o, tab);
  for (auto& [key, val] : terms) be.encoded.one_body[key] = val;
  return be;
}

inline BlockEncoding encode_ti_eta(const HamiltonianSpec& h, int eta, const EncodeOptions& o = {}, const LookupTable* tab = nullptr) {
  detail::require_ti(h);
  eta = detail::checked_eta(h.n, eta);
  const auto offs = detail::ti_offsets(h);
  auto be = detail::eta_one_body(h, eta, detail::Key::Offset, {}, offs, o, tab);
  be.encoded.ti.T = offs;
  be.encoded.structure = {StructureKind::TranslationInvariant, 1};
  return be;
}

/// sum_p U_p n_p on the sector: diffusion over occupied modes only, eta branches.
inline BlockEncoding encode_eta_number(const HamiltonianSpec& h, int eta, const EncodeOptions& o = {}, const LookupTable* tab = nullptr) {
  detail::require_one_body(h);
  require_pow2_modes(h.n);
  eta = detail::checked_eta(h.n, eta);
  const int n = h.n, k = index_bits(static_cast<std::uint64_t>(n));
  const auto terms = detail::pair_terms(h);
  std::vector<double> vals(static_cast<std::size_t>(n), 0.0);
  std::vector<std::uint64_t> mult(vals.size(), 1);
  for (auto& [key, v] : terms) {
    if (key.first != key.second) throw std::invalid_argument("number encoder takes diagonal terms only");
    vals[static_cast<std::size_t>(key.first)] = v;
  }
  auto tb = detail::make_table(vals, mult, o, tab);

  Builder b;
  const Qubits j = b.reg("system", n, Role::System);
  const Qubits P = b.reg("p", k, Role::Index);
  const auto anc = detail::amplitude_registers(b, o.m_b);
  const Qubits I = detail::ordinal(b, "i", eta);
  occ(b, I, P, j, eta);
  detail::amplitude(b, tb.table, P, anc);
  occ_dag(b, I, P, j, eta);
  detail::hadamards(b, I);

  auto be = detail::seal(b, j, "eta-number", n, static_cast<double>(next_pow2(static_cast<std::uint64_t>(eta))), tb);
  for (auto& [key, val] : terms) be.encoded.one_body[key] = val;
  be.encoded.structure = {StructureKind::NumberOnly, 1};
  be.eta = eta;
  be.encoded.eta = eta;
  return be;
}

/// sum V_pq n_p n_q on the sector: two ordinal registers, eta^2 branches.
inline BlockEncoding encode_eta_factorized(const HamiltonianSpec& h, int eta, const EncodeOptions& o = {}, const LookupTable* tab = nullptr) {
  require_pow2_modes(h.n);
  if (!h.one_body.empty() || !h.ti.T.empty() || !h.ti.U.empty()) throw std::invalid_argument("one-body terms need a one-body encoder");
  eta = detail::checked_eta(h.n, eta);
  const auto pairs = detail::density_pairs(h);
  if (!pairs) throw std::invalid_argument("factorized encoder takes n_p n_q terms with p != q only");
  const int n = h.n, k = index_bits(static_cast<std::uint64_t>(n));
  std::vector<double> vals(static_cast<std::size_t>(n) * n, 0.0);
  std::vector<std::uint64_t> mult(vals.size(), 0);
  for (auto& [key, v] : *pairs) {
    const std::size_t idx = static_cast<std::size_t>(key.first) | (static_cast<std::size_t>(key.second) << k);
    vals[idx] = v;
    mult[idx] = 1;
  }
  auto tb = detail::make_table(vals, mult, o, tab);

  Builder b;
  const Qubits j = b.reg("system", n, Role::System);
  const Qubits P = b.reg("p", k, Role::Index), Q = b.reg("q", k, Role::Index);
  const auto anc = detail::amplitude_registers(b, o.m_b);
  const Qubits I1 = detail::ordinal(b, "i", eta);
  const Qubits I2 = detail::ordinal(b, "i2", eta);
  occ(b, I1, P, j, eta);
  occ(b, I2, Q, j, eta);
  detail::amplitude(b, tb.table, detail::cat(P, Q), anc);
  occ_dag(b, I2, Q, j, eta);
  occ_dag(b, I1, P, j, eta);
  detail::hadamards(b, I1);
  detail::hadamards(b, I2);

  const double pad = static_cast<double>(next_pow2(static_cast<std::uint64_t>(eta)));
  auto be = detail::seal(b, j, "eta-factorized", n, pad * pad, tb);
  for (auto& [key, val] : *pairs) be.encoded.two_body[{key.first, key.second, key.second, key.first}] = val;
  be.eta = eta;
  be.encoded.eta = eta;
  return be;
}

// ---------------------------------------------------------------------------
// Nearest-neighbour encoders

namespace detail {

struct NnTable {
  TableBuild tb;
  std::map<PairKey, double> kept;
  double dropped = 0;
};

/// Slot (a, m, s) holds the coefficient of a+_t a_a with t = a + (m+1) or a - (m+1).
inline NnTable nn_table(const HamiltonianSpec& h, int M, const EncodeOptions& o, const LookupTable* tab) {
  const int n = h.n, k = index_bits(static_cast<std::uint64_t>(n)), km = index_bits(static_cast<std::uint64_t>(M));
  const auto terms = pair_terms(h);
  for (auto& [key, v] : terms)
    if (key.first == key.second) throw std::invalid_argument("nearest-neighbour encoder takes off-diagonal terms only");
  NnTable out;
  std::vector<double> vals(2 * static_cast<std::size_t>(n) * static_cast<std::size_t>(M), 0.0);
  std::vector<std::uint64_t> mult(vals.size(), 0);
  std::map<PairKey, bool> covered;
  for (int s = 0; s < 2; ++s)
    for (int m = 0; m < M; ++m)
      for (int a = 0; a < n; ++a) {
        int t = s ? a - (m + 1) : a + (m + 1);
        if (t < 0 || t >= n) {
          if (!o.torus) continue;
          t = ((t % n) + n) % n;
        }
        if (covered[{t, a}]) continue;  // the two signs meet when m + 1 = n/2
        covered[{t, a}] = true;
        const std::size_t idx = static_cast<std::size_t>(a) | (static_cast<std::size_t>(m) << k) | (static_cast<std::size_t>(s) << (k + km));
        mult[idx] = 1;
        if (auto it = terms.find({t, a}); it != terms.end()) {
          vals[idx] = it->second;
          out.kept[{t, a}] = it->second;
        }
      }
  for (auto& [key, v] : terms)
    if (!out.kept.count(key)) out.dropped += std::abs(v);
  out.tb = make_table(vals, mult, o, tab);
  return out;
}

inline void check_range(int n, int M) {
  require_pow2_modes(n);
  if (M < 1 || !is_pow2(static_cast<std::uint64_t>(M)) || 2 * M > n) throw std::invalid_argument("M must be a power of two with 2M <= n");
}

}  // namespace detail

inline BlockEncoding encode_nn(const HamiltonianSpec& h, int M, const EncodeOptions& o, const LookupTable* tab) {
  detail::require_one_body(h);
  detail::check_range(h.n, M);
  const int n = h.n, k = index_bits(static_cast<std::uint64_t>(n)), km = index_bits(static_cast<std::uint64_t>(M));
  auto nt = detail::nn_table(h, M, o, tab);

  Builder b;
  const Qubits j = b.reg("system", n, Role::System);
  const Qubits A = b.reg("p", k, Role::Index);
  const Qubits Mr = b.reg("m", km, Role::Index);
  const int S = b.reg("sign", 1, Role::Index)[0];
  const Qubits T = b.reg("q", k, Role::Index);
  const auto anc = detail::amplitude_registers(b, o.m_b);
  const int v = b.reg("validation", 1, Role::Validation)[0];
  const Qubits addr = detail::cat(detail::cat(A, Mr), {S});
  detail::hadamards(b, addr);
  const auto m0 = b.mark();
  xor_copy(b, A, T);
  detail::shift(b, T, Mr, S);
  const auto m1 = b.mark();
  detail::amplitude(b, nt.tb.table, addr, anc);
  b.c.x(v);
  oc_one_body(b, T, A, j, v);
  b.c.append_inverse_range(m0, m1);
  detail::hadamards(b, addr);

  auto be = detail::seal(b, j, "nn", n, 2.0 * n * M, nt.tb);
  be.M = M;
  be.dropped_l1 = nt.dropped;
  be.encoded.one_body = nt.kept;
  be.encoded.structure = {StructureKind::NearestNeighbor, M};
  return be;
}

/// Sector version: the hopping source is an occupied mode, 2M * eta branches.
inline BlockEncoding encode_nn_eta(const HamiltonianSpec& h, int M, int eta, const EncodeOptions& o = {}, const LookupTable* tab = nullptr) {
  detail::require_one_body(h);
  detail::check_range(h.n, M);
  eta = detail::checked_eta(h.n, eta);
  const int n = h.n, k = index_bits(static_cast<std::uint64_t>(n)), km = index_bits(static_cast<std::uint64_t>(M));
  auto nt = detail::nn_table(h, M, o, tab);

  Builder b;
  const Qubits j = b.reg("system", n, Role::System);
  const Qubits A = b.reg("p", k, Role::Index);
  const Qubits Mr = b.reg("m", km, Role::Index);
  const int S = b.reg("sign", 1, Role::Index)[0];
  const Qubits T = b.reg("q", k, Role::Index);
  const auto anc = detail::amplitude_registers(b, o.m_b);
  const int v = b.reg("validation", 1, Role::Validation)[0];
  const Qubits I = detail::ordinal(b, "i", eta);
  detail::hadamards(b, detail::cat(Mr, {S}));
  occ(b, I, A, j, eta);
  xor_copy(b, A, T);
  detail::shift(b, T, Mr, S);
  detail::amplitude(b, nt.tb.table, detail::cat(detail::cat(A, Mr), {S}), anc);
  b.c.x(v);
  oc_one_body(b, T, A, j, v);
  detail::clear_ordinal(b, I, T, A, j);
  // a - t = -(m+1) or +(m+1); the same shift brings it back to 0.
  for (int x : A) b.c.x(x);
  add(b, T, A);
  for (int x : A) b.c.x(x);
  detail::shift(b, A, Mr, S);
  rank(b, T, j, I);
  occ(b, I, T, j, eta);
  detail::hadamards(b, detail::cat(Mr, {S}));
  detail::hadamards(b, I);

  const double pad = static_cast<double>(next_pow2(static_cast<std::uint64_t>(eta)));
  auto be = detail::seal(b, j, "nn-eta", n, 2.0 * M * pad, nt.tb);
  be.M = M;
  be.eta = eta;
  be.dropped_l1 = nt.dropped;
  be.encoded.one_body = nt.kept;
  be.encoded.structure = {StructureKind::NearestNeighbor, M};
  be.encoded.eta = eta;
  return be;
}

// ---------------------------------------------------------------------------
// Linear combination

/// sum_k w_k H_k with alpha = sum_k w_k alpha_k. Each part gets its own ancillas;
/// the system register is shared.
inline BlockEncoding lcu_combine(std::vector<LcuPart> parts) {
  if (parts.empty()) throw std::invalid_argument("lcu needs at least one part");
  const int n = parts[0].be.n;
  for (auto& p : parts) {
    if (p.be.n != n || p.be.system_qubits.size() != static_cast<std::size_t>(n)) throw std::invalid_argument("lcu parts act on different systems");
    if (!(p.weight > 0)) throw std::invalid_argument("lcu weights must be positive");
  }
  const std::size_t K = parts.size();
  const int kb = index_bits(K);
  std::vector<double> w(std::size_t{1} << kb, 0.0);
  double total = 0;
  for (std::size_t i = 0; i < K; ++i) total += w[i] = parts[i].weight * parts[i].be.alpha;

  Builder b;
  const Qubits j = b.reg("system", n, Role::System);
  const Qubits sel = b.reg("select", kb, Role::Index);

  // Ry tree over the selector, most significant bit first.
  const auto m0 = b.mark();
  for (int lvl = kb - 1; lvl >= 0; --lvl) {
    const std::size_t block = std::size_t{1} << (lvl + 1);
    for (std::size_t base = 0; base < w.size(); base += block) {
      double lo = 0, hi = 0;
      for (std::size_t i = base; i < base + block / 2; ++i) lo += w[i];
      for (std::size_t i = base + block / 2; i < base + block; ++i) hi += w[i];
      if (lo + hi == 0) continue;
      std::vector<Control> cs;
      for (int up = kb - 1; up > lvl; --up) cs.push_back({sel[static_cast<std::size_t>(up)], ((base >> up) & 1U) != 0});
      b.c.add({Op::Ry, {sel[static_cast<std::size_t>(lvl)]}, cs, 2.0 * std::atan2(std::sqrt(hi), std::sqrt(lo))});
    }
  }
  const auto m1 = b.mark();

  for (std::size_t i = 0; i < K; ++i) {
    const auto& be = parts[i].be;
    std::vector<int> map(static_cast<std::size_t>(be.circuit.qubit_count), -1);
    for (int s = 0; s < n; ++s) map[static_cast<std::size_t>(be.system_qubits[static_cast<std::size_t>(s)])] = j[static_cast<std::size_t>(s)];
    for (auto& r : be.circuit.registers) {
      if (r.role == Role::System) continue;
      auto q = b.reg("part" + std::to_string(i) + "." + r.name, static_cast<int>(r.qubits.size()), r.role);
      for (std::size_t t = 0; t < q.size(); ++t) map[static_cast<std::size_t>(r.qubits[t])] = q[t];
    }
    const auto ctl = pattern(sel, i);
    for (Gate g : be.circuit.gates) {
      if (g.op == Op::And || g.op == Op::Unand) {
        g.op = Op::X;
        g.free = false;
      }
      for (int& t : g.t) t = map[static_cast<std::size_t>(t)];
      for (auto& c : g.c) c.q = map[static_cast<std::size_t>(c.q)];
      g.c.insert(g.c.end(), ctl.begin(), ctl.end());
      b.c.add(std::move(g));
    }
  }
  b.c.append_inverse_range(m0, m1);

  BlockEncoding out;
  out.system_qubits = j;
  for (int q = 0; q < b.c.qubit_count; ++q)
    if (std::find(j.begin(), j.end(), q) == j.end()) out.anc_mask.push_back(q);
  out.circuit = std::move(b.c);
  out.cls = "lcu";
  out.n = n;
  out.alpha = total;
  out.encoded.n = n;
  for (auto& p : parts) {
    out.eps_budget += p.weight * p.be.eps_budget;
    out.dropped_l1 += p.weight * p.be.dropped_l1;
    const auto& e = p.be.encoded;
    for (auto& [k, v] : e.one_body) out.encoded.one_body[k] += p.weight * v;
    for (auto& [k, v] : e.two_body) out.encoded.two_body[k] += p.weight * v;
    for (auto& [k, v] : e.ti.T) out.encoded.ti.T[k] += p.weight * v;
    if (p.be.eta) out.eta = p.be.eta;
  }
  out.encoded.eta = out.eta;
  out.parts = std::move(parts);
  return out;
}

// ---------------------------------------------------------------------------
// Class dispatch

/// Splits a spec into the parts its structure tag admits and encodes each.
/// `tables` replaces the freshly quantized tables in part order.
inline BlockEncoding encode(const HamiltonianSpec& h, const EncodeOptions& o = {}, const TableOverrides* tables = nullptr) {
  validate(h);
  const std::optional<int> eta = o.eta ? o.eta : h.eta;
  std::size_t next = 0;
  auto tab = [&]() -> const LookupTable* {
    if (!tables) return nullptr;
    if (next >= tables->size()) throw std::invalid_argument("fewer stored tables than parts");
    return &(*tables)[next++];
  };
  std::vector<LcuPart> parts;
  auto base = [&] {
    HamiltonianSpec s;
    s.n = h.n;
    return s;
  };

  const auto pairs = detail::pair_terms(h);
  HamiltonianSpec diag = base(), offd = base(), all1 = base();
  for (auto& [k, v] : pairs) {
    (k.first == k.second ? diag : offd).one_body[k] = v;
    all1.one_body[k] = v;
  }
  HamiltonianSpec dens = base(), gen2 = base();
  dens.ti.V = h.ti.V;
  for (auto& [k, v] : h.two_body) {
    HamiltonianSpec probe = base();
    probe.two_body[k] = v;
    (detail::density_pairs(probe) ? dens : gen2).two_body[k] = v;
  }

  auto number_part = [&](const HamiltonianSpec& s) {
    parts.push_back({1.0, eta ? encode_eta_number(s, *eta, o, tab()) : encode_number_full(s, o, tab())});
  };
  auto one_body_part = [&](const HamiltonianSpec& s) {
    parts.push_back({1.0, eta ? encode_eta_one_body(s, *eta, o, tab()) : encode_one_body_full(s, o, tab())});
  };

  switch (h.structure.kind) {
    case StructureKind::NumberOnly:
      if (!offd.one_body.empty() || h.has_two_body()) throw std::invalid_argument("number-only spec has other terms");
      number_part(diag);
      break;
    case StructureKind::NearestNeighbor:
      if (!offd.one_body.empty())
        parts.push_back({1.0, eta ? encode_nn_eta(offd, h.structure.M, *eta, o, tab()) : encode_nn(offd, h.structure.M, o, tab())});
      if (!diag.one_body.empty()) number_part(diag);
      break;
    case StructureKind::TranslationInvariant: {
      HamiltonianSpec ti = base(), rest = base(), on = base();
      ti.ti.T = h.ti.T;
      for (auto& [k, v] : h.one_body) (k.first == k.second ? on : rest).one_body[k] = v;
      for (auto& [p, v] : h.ti.U) on.one_body[{p, p}] += v;
      if (!ti.ti.T.empty()) parts.push_back({1.0, eta ? encode_ti_eta(ti, *eta, o, tab()) : encode_ti(ti, o, tab())});
      if (!rest.one_body.empty()) one_body_part(rest);
      if (!on.one_body.empty()) number_part(on);
      break;
    }
    case StructureKind::General:
    case StructureKind::FactorizedNN:
      if (!all1.one_body.empty()) one_body_part(all1);
      break;
  }
  if (!dens.two_body.empty() || !dens.ti.V.empty())
    parts.push_back({1.0, eta ? encode_eta_factorized(dens, *eta, o, tab()) : encode_factorized(dens, o, tab())});
  if (!gen2.two_body.empty()) parts.push_back({1.0, encode_two_body_full(gen2, o, tab())});
  if (parts.empty()) {
    // Zero Hamiltonian: an empty one-body table encodes 0.
    parts.push_back({1.0, encode_one_body_full(base(), o, tab())});
  }
  if (tables && next != tables->size()) throw std::invalid_argument("more stored tables than parts");
  if (parts.size() == 1) return std::move(parts[0].be);
  return lcu_combine(std::move(parts));
}

inline const std::vector<std::string>& encoder_classes() {
  static const std::vector<std::string> names = {"auto",       "one-body",       "number",         "two-body",
                                                 "factorized", "eta-one-body",   "eta-number",     "eta-factorized",
                                                 "nn",         "nn-eta",         "ti",             "ti-eta"};
  return names;
}

/// Encodes with a named class instead of the structure-driven split.
inline BlockEncoding encode_class(const std::string& cls, const HamiltonianSpec& h, const EncodeOptions& o = {},
                                  const TableOverrides* tables = nullptr) {
  const auto& names = encoder_classes();
  if (std::find(names.begin(), names.end(), cls) == names.end()) throw std::invalid_argument("unknown encoder class '" + cls + "'");
  if (cls == "auto") return encode(h, o, tables);
  if (tables && tables->size() != 1) throw std::invalid_argument("expected one stored table");
  const LookupTable* t = tables ? &(*tables)[0] : nullptr;
  const std::optional<int> eta = o.eta ? o.eta : h.eta;
  const int M = h.structure.kind == StructureKind::NearestNeighbor ? h.structure.M : 1;
  if (cls == "one-body") return encode_one_body_full(h, o, t);
  if (cls == "number") return encode_number_full(h, o, t);
  if (cls == "two-body") return encode_two_body_full(h, o, t);
  if (cls == "factorized") return encode_factorized(h, o, t);
  if (cls == "nn") return encode_nn(h, M, o, t);
  if (cls == "ti") return encode_ti(h, o, t);
  const int e = detail::checked_eta(h.n, eta);
  if (cls == "eta-one-body") return encode_eta_one_body(h, e, o, t);
  if (cls == "eta-number") return encode_eta_number(h, e, o, t);
  if (cls == "eta-factorized") return encode_eta_factorized(h, e, o, t);
  if (cls == "nn-eta") return encode_nn_eta(h, M, e, o, t);
  return encode_ti_eta(h, e, o, t);
}

// ---------------------------------------------------------------------------
// Verification

struct VerificationReport {
  double max_abs_dev = 0;
  double fro_dev = 0;
  double alpha_used = 0;
  double eps_bound = 0;
  bool pass = false;
  std::size_t columns_checked = 0;
};

inline constexpr int kVerifyModeCap = 8;

/// alpha * <0|U|0> against the reference matrix of what the encoding encodes.
/// With an eta the columns are the weight-eta states and every output row is
/// compared, so leakage out of the sector counts as deviation.
inline VerificationReport verify(const BlockEncoding& be, std::optional<int> eta = std::nullopt, int jobs = 1) {
  if (!eta) eta = be.eta;
  if (be.n > kVerifyModeCap) throw std::length_error("verification limited to 8 modes");
  const std::uint64_t dim = std::uint64_t{1} << be.n;
  std::vector<std::uint64_t> cols;
  Eigen::MatrixXcd ref;
  if (eta) {
    const auto basis = eta_basis(be.n, *eta);
    const Eigen::MatrixXd he = build_matrix_eta(be.encoded, *eta);
    ref = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(basis.size()));
    for (std::size_t c = 0; c < basis.size(); ++c) {
      cols.push_back(basis[c]);
      for (std::size_t r = 0; r < basis.size(); ++r)
        ref(static_cast<Eigen::Index>(basis[r]), static_cast<Eigen::Index>(c)) = he(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    }
  } else {
    ref = Eigen::MatrixXd(build_matrix_full(be.encoded)).cast<cplx>();
    for (std::uint64_t c = 0; c < dim; ++c) cols.push_back(c);
  }
  const Eigen::MatrixXcd blk = projected_block(be.circuit, be.anc_mask, cols, jobs);
  const Eigen::MatrixXcd dev = be.alpha * blk - ref;
  VerificationReport r;
  r.max_abs_dev = dev.size() ? dev.cwiseAbs().maxCoeff() : 0.0;
  r.fro_dev = dev.norm();
  r.alpha_used = be.alpha;
  r.eps_bound = be.eps_budget;
  r.pass = r.max_abs_dev <= r.eps_bound + 1e-10;
  r.columns_checked = cols.size();
  return r;
}

// ---------------------------------------------------------------------------
// Manifest

inline json to_json(const ResourceReport& r) {
  json j;
  j["model"] = cost_model_name(r.model);
  j["t_count"] = r.t_count;
  j["t_depth"] = r.t_depth;
  j["clifford_count"] = r.clifford_count;
  j["toffoli_count"] = r.toffoli_count;
  j["qubit_count"] = r.qubit_count;
  j["ancilla_high_water"] = r.ancilla_high_water;
  return j;
}

inline json to_json(const LookupTable& t) {
  json j;
  j["L"] = t.L;
  j["lambda"] = t.lambda;
  j["m_b"] = t.m_b;
  json w = json::array();
  for (auto x : t.words) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "0x%llx", static_cast<unsigned long long>(x));
    w.push_back(buf);
  }
  j["words"] = w;
  return j;
}

inline LookupTable table_from_json(const json& j) {
  reject_unknown(j, {"L", "lambda", "m_b", "words"}, "table");
  LookupTable t;
  t.L = j.at("L").get<std::uint64_t>();
  t.lambda = j.at("lambda").get<std::uint64_t>();
  t.m_b = j.at("m_b").get<int>();
  for (auto& w : j.at("words")) t.words.push_back(std::stoull(w.get<std::string>(), nullptr, 16));
  t.check();
  return t;
}

inline json to_json(const VerificationReport& r) {
  json j;
  j["max_abs_dev"] = r.max_abs_dev;
  j["fro_dev"] = r.fro_dev;
  j["alpha_used"] = r.alpha_used;
  j["eps_bound"] = r.eps_bound;
  j["pass"] = r.pass;
  j["columns_checked"] = r.columns_checked;
  return j;
}

namespace detail {

inline json part_json(const BlockEncoding& be) {
  json j;
  j["class"] = be.cls;
  j["alpha"] = be.alpha;
  j["eps_budget"] = be.eps_budget;
  j["table_entries"] = be.table_entries;
  j["table"] = to_json(be.table);
  return j;
}

}  // namespace detail

inline json manifest(const BlockEncoding& be, const EncodeOptions& o, CostModel model) {
  json j;
  j["class"] = be.cls;
  j["n"] = be.n;
  j["eta"] = be.eta ? json(*be.eta) : json(nullptr);
  if (be.parts.empty()) {
    j["L"] = be.table.L;
    j["lambda"] = be.table.lambda;
  } else {
    std::uint64_t L = 0, lam = 0;
    for (auto& p : be.parts) {
      L = std::max(L, p.be.table.L);
      lam = std::max(lam, p.be.table.lambda);
    }
    j["L"] = L;
    j["lambda"] = lam;
  }
  j["m_b"] = o.m_b;
  j["alpha"] = be.alpha;
  j["eps_budget"] = be.eps_budget;
  j["ancillas"] = be.anc_mask.size();
  j["resource"] = to_json(count_resources(be.circuit, model));
  if (be.parts.empty()) {
    j["table"] = to_json(be.table);
    j["table_entries"] = be.table_entries;
  } else {
    json ps = json::array();
    for (auto& p : be.parts) {
      json pj = detail::part_json(p.be);
      pj["weight"] = p.weight;
      ps.push_back(pj);
    }
    j["parts"] = ps;
  }
  json params;
  params["torus"] = o.torus;
  params["M"] = be.M;
  params["prescale"] = be.prescale;
  params["dropped_l1"] = be.dropped_l1;
  j["params"] = params;
  return j;
}

inline TableOverrides tables_from_manifest(const json& m) {
  TableOverrides out;
  if (m.contains("parts"))
    for (auto& p : m.at("parts")) out.push_back(table_from_json(p.at("table")));
  else
    out.push_back(table_from_json(m.at("table")));
  return out;
}

/// Options that reproduce the manifest's circuit from the same spec.
inline EncodeOptions options_from_manifest(const json& m) {
  EncodeOptions o;
  o.m_b = m.at("m_b").get<int>();
  if (!m.at("eta").is_null()) o.eta = m.at("eta").get<int>();
  o.torus = m.at("params").at("torus").get<bool>();
  return o;
}

}  // namespace febe
