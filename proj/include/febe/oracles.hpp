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

#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "febe/circuit.hpp"

namespace febe {

inline bool is_pow2(std::uint64_t x) { return x && !(x & (x - 1)); }
inline std::uint64_t next_pow2(std::uint64_t x) { return x <= 1 ? 1 : std::bit_ceil(x); }
/// Number of bits needed to index x values (ceil(log2 x)).
inline int index_bits(std::uint64_t x) { return x <= 1 ? 0 : std::bit_width(x - 1); }

/// Circuit under construction together with a pool of clean scratch qubits.
/// Every scratch qubit handed out must be returned in |0>.
class Builder {
 public:
  Circuit c;

  Qubits reg(const std::string& name, int size, Role role) { return c.add_register(name, size, role); }

  int scratch() {
    if (!pool_.empty()) {
      int q = pool_.back();
      pool_.pop_back();
      return q;
    }
    return c.add_register("scratch" + std::to_string(made_++), 1, Role::Scratch)[0];
  }
  Qubits scratch(int k) {
    Qubits out;
    for (int i = 0; i < k; ++i) out.push_back(scratch());
    return out;
  }
  void release(int q) { pool_.push_back(q); }
  void release(const Qubits& qs) {
    for (auto it = qs.rbegin(); it != qs.rend(); ++it) release(*it);
  }

  std::size_t mark() const { return c.gates.size(); }
  /// Appends the inverse of everything emitted since `m`.
  void undo_since(std::size_t m) { c.append_inverse_range(m, c.gates.size()); }

 private:
  std::vector<int> pool_;
  int made_ = 0;
};

inline Control on(int q) { return {q, true}; }
inline Control off(int q) { return {q, false}; }

/// Controls that fire when register `r` holds `value`.
inline std::vector<Control> pattern(const Qubits& r, std::uint64_t value) {
  std::vector<Control> cs;
  for (std::size_t i = 0; i < r.size(); ++i) cs.push_back({r[i], ((value >> i) & 1U) != 0});
  return cs;
}

inline std::vector<Control> join(std::vector<Control> a, const std::vector<Control>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

// ---------------------------------------------------------------------------
// Routing and parity

/// Fredkin tree moving word `sel` of `words` into position 0.
inline void swap_up(Builder& b, const Qubits& sel, const std::vector<Qubits>& words) {
  const std::size_t n = words.size();
  if (n != (std::size_t{1} << sel.size())) throw std::invalid_argument("swap_up needs 2^|sel| words");
  for (int lvl = static_cast<int>(sel.size()) - 1; lvl >= 0; --lvl) {
    const std::size_t stride = std::size_t{1} << lvl;
    for (std::size_t i = 0; i < stride; ++i)
      for (std::size_t t = 0; t < words[i].size(); ++t) b.c.cswap(sel[static_cast<std::size_t>(lvl)], words[i][t], words[i + stride][t]);
  }
}

inline void swap_up_dag(Builder& b, const Qubits& sel, const std::vector<Qubits>& words) {
  auto m = b.mark();
  swap_up(b, sel, words);
  std::vector<Gate> fwd(b.c.gates.begin() + static_cast<std::ptrdiff_t>(m), b.c.gates.end());
  b.c.gates.resize(m);
  for (auto it = fwd.rbegin(); it != fwd.rend(); ++it) b.c.gates.push_back(*it);
}

inline std::vector<Qubits> bit_words(const Qubits& j) {
  std::vector<Qubits> w;
  for (int q : j) w.push_back({q});
  return w;
}

/// Prefix parity: bit k becomes j_0 ^ ... ^ j_k.
inline void ladder(Builder& b, const Qubits& j) {
  for (std::size_t k = 1; k < j.size(); ++k) b.c.cx(j[k - 1], j[k]);
}

inline void ladder_dag(Builder& b, const Qubits& j) {
  for (std::size_t k = j.size(); k-- > 1;) b.c.cx(j[k - 1], j[k]);
}

/// Z on bit `sel` of `j`, optionally controlled.
inline void swap_z(Builder& b, const Qubits& sel, const Qubits& j, const std::vector<Control>& ctl = {}) {
  auto w = bit_words(j);
  swap_up(b, sel, w);
  b.c.add({Op::Z, {j[0]}, ctl});
  swap_up_dag(b, sel, w);
}

/// X on bit `sel` of `j`.
inline void swx(Builder& b, const Qubits& sel, const Qubits& j) {
  auto w = bit_words(j);
  swap_up(b, sel, w);
  b.c.x(j[0]);
  swap_up_dag(b, sel, w);
}

inline void xor_copy(Builder& b, const Qubits& src, const Qubits& dst) {
  if (src.size() != dst.size()) throw std::invalid_argument("xor_copy width mismatch");
  for (std::size_t i = 0; i < src.size(); ++i) b.c.cx(src[i], dst[i]);
}

// ---------------------------------------------------------------------------
// Arithmetic

inline void maj(Builder& b, int x, int y, int z) {
  b.c.cx(z, y);
  b.c.cx(z, x);
  b.c.ccx(x, y, z);
}

inline void maj_dag(Builder& b, int x, int y, int z) {
  b.c.ccx(x, y, z);
  b.c.cx(z, x);
  b.c.cx(z, y);
}

inline void uma(Builder& b, int x, int y, int z) {
  b.c.ccx(x, y, z);
  b.c.cx(z, x);
  b.c.cx(x, y);
}

/// result ^= [a < b] for equal-width unsigned registers (carry-out of ~a + b).
inline void comp(Builder& b, const Qubits& a, const Qubits& bb, int result) {
  if (a.size() != bb.size() || a.empty()) throw std::invalid_argument("comp width mismatch");
  const int c0 = b.scratch();
  for (int q : a) b.c.x(q);
  maj(b, c0, bb[0], a[0]);
  for (std::size_t i = 1; i < a.size(); ++i) maj(b, a[i - 1], bb[i], a[i]);
  b.c.cx(a.back(), result);
  for (std::size_t i = a.size(); i-- > 1;) maj_dag(b, a[i - 1], bb[i], a[i]);
  maj_dag(b, c0, bb[0], a[0]);
  for (int q : a) b.c.x(q);
  b.release(c0);
}

/// target ^= [a == v] for a classical constant v.
inline void eq_const(Builder& b, const Qubits& a, std::uint64_t v, int target) { b.c.mcx(pattern(a, v), target); }

/// target ^= [a == b]; `b` may be narrower than `a` (missing high bits read as 0).
inline void eq(Builder& b, const Qubits& a, const Qubits& bb, int target, const std::vector<Control>& ctl = {}) {
  if (bb.size() > a.size()) throw std::invalid_argument("eq: second register wider");
  for (std::size_t i = 0; i < bb.size(); ++i) b.c.cx(bb[i], a[i]);
  std::vector<Control> cs = ctl;
  for (int q : a) cs.push_back(off(q));
  b.c.mcx(cs, target);
  for (std::size_t i = bb.size(); i-- > 0;) b.c.cx(bb[i], a[i]);
}

/// b += a mod 2^w (ripple carry), or b -= a when `sign` is given and set.
inline void add(Builder& b, const Qubits& a, const Qubits& bb, std::optional<int> sign = std::nullopt) {
  if (a.size() != bb.size() || a.empty()) throw std::invalid_argument("add width mismatch");
  if (sign)
    for (int q : bb) b.c.cx(*sign, q);
  const std::size_t w = a.size();
  if (w == 1) {
    b.c.cx(a[0], bb[0]);
  } else {
    const int c0 = b.scratch();
    maj(b, c0, bb[0], a[0]);
    for (std::size_t i = 1; i + 1 < w; ++i) maj(b, a[i - 1], bb[i], a[i]);
    b.c.cx(a[w - 1], bb[w - 1]);
    b.c.cx(a[w - 2], bb[w - 1]);
    for (std::size_t i = w - 1; i-- > 1;) uma(b, a[i - 1], bb[i], a[i]);
    uma(b, c0, bb[0], a[0]);
    b.release(c0);
  }
  if (sign)
    for (int q : bb) b.c.cx(*sign, q);
}

/// r += 1 (or -= 1) mod 2^w when all controls fire.
inline void increment(Builder& b, const Qubits& r, const std::vector<Control>& ctl, bool decrement = false) {
  for (std::size_t i = r.size(); i-- > 0;) {
    std::vector<Control> cs = ctl;
    for (std::size_t k = 0; k < i; ++k) cs.push_back({r[k], !decrement});
    b.c.mcx(cs, r[i]);
  }
}

/// r += #{k < P : j_k = 1}.
inline void rank(Builder& b, const Qubits& P, const Qubits& j, const Qubits& r) {
  const int f = b.scratch();
  b.c.x(f);
  for (std::size_t k = 0; k < j.size(); ++k) {
    b.c.mcx(pattern(P, k), f);
    increment(b, r, {on(f), on(j[k])});
  }
  b.release(f);
}

// ---------------------------------------------------------------------------
// Sparsity oracles

/// (-1)^{parity of j strictly between p and q}; `e` must hold [p == q].
inline void phase_oracle(Builder& b, const Qubits& p, const Qubits& q, const Qubits& j, int e) {
  ladder(b, j);
  swap_z(b, p, j);
  swap_z(b, q, j);
  ladder_dag(b, j);
  // The two prefix parities cover (min, max]; remove j_max.
  const int c = b.scratch();
  comp(b, p, q, c);
  swap_z(b, q, j, {on(c), off(e)});
  swap_z(b, p, j, {off(c), off(e)});
  comp(b, p, q, c);
  b.release(c);
}

enum class OsVariant { CreateAnnihilate, CreateCreate, AnnihAnnih, Number };

/// Validation qubit `v` (|1> on entry) goes to |0> exactly when the occupancy
/// pattern at (p, q) admits the term; the two bits are then flipped.
inline void os_one_body(Builder& b, OsVariant var, const Qubits& p, const Qubits& q, const Qubits& j, int v,
                        const std::vector<Control>& ctl = {}) {
  auto w = bit_words(j);
  const int x1 = b.scratch();
  auto read = [&](const Qubits& sel, int x) {
    swap_up(b, sel, w);
    b.c.cx(j[0], x);
    swap_up_dag(b, sel, w);
  };
  if (var == OsVariant::Number) {
    read(p, x1);
    b.c.mcx(join(ctl, {on(x1)}), v);
    read(p, x1);
    b.release(x1);
    return;
  }
  const int x2 = b.scratch();
  read(p, x1);
  read(q, x2);
  bool want_p = false, want_q = true;
  if (var == OsVariant::CreateCreate) want_q = false;
  if (var == OsVariant::AnnihAnnih) want_p = true;
  // Equal indices are valid only for the create-annihilate pair, which the
  // (0,1) pattern already excludes; the other variants need an explicit check.
  const bool guard = var != OsVariant::CreateAnnihilate;
  const int e = guard ? b.scratch() : -1;
  std::vector<Control> cs = join(ctl, {{x1, want_p}, {x2, want_q}});
  if (guard) {
    eq(b, p, q, e);
    cs.push_back(off(e));
  }
  b.c.mcx(cs, v);
  if (guard) {
    eq(b, p, q, e);
    b.release(e);
  }
  auto flip_and_clear = [&](const Qubits& sel, int x) {
    swap_up(b, sel, w);
    b.c.add({Op::X, {j[0]}, {off(v)}});
    b.c.cx(j[0], x);
    swap_up_dag(b, sel, w);
    b.c.add({Op::X, {x}, {off(v)}});
  };
  flip_and_clear(p, x1);
  flip_and_clear(q, x2);
  b.release(x2);
  b.release(x1);
}

/// a+_p a_q on valid inputs: |1>|p>|q>|j> -> (-1)^{d} |0>|p>|q>|FLIP(j;p,q)>.
inline void oc_one_body(Builder& b, const Qubits& p, const Qubits& q, const Qubits& j, int v) {
  const int e = b.scratch();
  eq(b, p, q, e);
  phase_oracle(b, p, q, j, e);
  os_one_body(b, OsVariant::CreateAnnihilate, p, q, j, v);
  os_one_body(b, OsVariant::Number, p, q, j, v, {on(e)});
  eq(b, p, q, e);
  b.release(e);
}

/// a+_p a+_q a_r a_s; valid when both v1 and v2 end in |0>.
inline void oc_two_body(Builder& b, const Qubits& p, const Qubits& q, const Qubits& r, const Qubits& s,
                        const Qubits& j, int v1, int v2) {
  const int e = b.scratch();
  eq(b, r, s, e);
  phase_oracle(b, r, s, j, e);
  eq(b, r, s, e);
  os_one_body(b, OsVariant::AnnihAnnih, r, s, j, v2);
  eq(b, p, q, e);
  phase_oracle(b, p, q, j, e);
  eq(b, p, q, e);
  os_one_body(b, OsVariant::CreateCreate, p, q, j, v1);
  b.release(e);
}

// ---------------------------------------------------------------------------
// Data lookup and sampling

/// Sign-magnitude fixed point: low m_b-1 bits hold b1, the top bit is b0.
inline std::uint64_t quantize(double x, int m_b) {
  const std::uint64_t scale = std::uint64_t{1} << (m_b - 1);
  double mag = std::nearbyint(std::abs(x) * static_cast<double>(scale));
  mag = std::min(mag, static_cast<double>(scale - 1));
  const std::uint64_t b1 = static_cast<std::uint64_t>(mag);
  const std::uint64_t b0 = (x < 0 && b1 != 0) ? 1 : 0;
  return b1 | (b0 << (m_b - 1));
}

inline double decode(std::uint64_t code, int m_b) {
  const std::uint64_t scale = std::uint64_t{1} << (m_b - 1);
  const double mag = static_cast<double>(code & (scale - 1)) / static_cast<double>(scale);
  return ((code >> (m_b - 1)) & 1U) ? -mag : mag;
}

struct LookupTable {
  std::uint64_t L = 1;
  std::uint64_t lambda = 1;
  int m_b = 2;
  std::vector<std::uint64_t> words;

  void check() const {
    if (!is_pow2(L) || !is_pow2(lambda) || lambda > L) throw std::invalid_argument("L and lambda must be powers of two with lambda <= L");
    if (words.size() != L) throw std::invalid_argument("table size must equal L");
    if (m_b < 1 || m_b > 63) throw std::invalid_argument("word width out of range");
    for (auto w : words)
      if (w >> m_b) throw std::invalid_argument("table word exceeds m_b bits");
  }
};

/// T-count formula of the SELECT-SWAP lookup at unit constants.
inline std::uint64_t select_swap_t_formula(std::uint64_t L, std::uint64_t lambda, int m_b) {
  return 4 * ((L + lambda - 1) / lambda) + 8 * lambda * static_cast<std::uint64_t>(m_b);
}

/// Power-of-two lambda minimising the formula T count. Exact ties sit at
/// lambda and lambda/2 with lambda^2 = L/m_b; the larger one is returned.
inline std::uint64_t select_swap_lambda(std::uint64_t L, int m_b) {
  std::uint64_t best = 1;
  for (std::uint64_t lam = 1; lam <= L; lam *= 2)
    if (select_swap_t_formula(L, lam, m_b) <= select_swap_t_formula(L, best, m_b)) best = lam;
  return best;
}

namespace detail {

inline void unary_iterate(Builder& b, const Qubits& hi, int level, Control ctl, std::uint64_t prefix,
                          const std::function<void(std::uint64_t, std::optional<Control>)>& leaf) {
  if (level == 0) return leaf(prefix, ctl);
  const int bq = hi[static_cast<std::size_t>(level - 1)];
  const std::uint64_t hb = std::uint64_t{1} << (level - 1);
  const int s = b.scratch();
  b.c.and_(ctl, off(bq), s);
  unary_iterate(b, hi, level - 1, on(s), prefix, leaf);
  b.c.add({Op::X, {s}, {ctl}});
  unary_iterate(b, hi, level - 1, on(s), prefix | hb, leaf);
  b.c.unand(ctl, on(bq), s);
  b.release(s);
}

}  // namespace detail

/// XORs every column's words into the row scratch words, one column at a time.
inline void select_columns(Builder& b, const LookupTable& t, const Qubits& hi, const std::vector<Qubits>& rows) {
  auto leaf = [&](std::uint64_t col, std::optional<Control> ctl) {
    for (std::uint64_t r = 0; r < t.lambda; ++r) {
      const std::uint64_t w = t.words[col * t.lambda + r];
      for (int k = 0; k < t.m_b; ++k) {
        if (!((w >> k) & 1U)) continue;
        const int tq = rows[r][static_cast<std::size_t>(k)];
        if (ctl)
          b.c.add({Op::X, {tq}, {*ctl}});
        else
          b.c.x(tq);
      }
    }
  };
  const int k = static_cast<int>(hi.size());
  if (k == 0) return leaf(0, std::nullopt);
  const int msb = hi[static_cast<std::size_t>(k - 1)];
  const std::uint64_t hb = std::uint64_t{1} << (k - 1);
  detail::unary_iterate(b, hi, k - 1, off(msb), 0, leaf);
  detail::unary_iterate(b, hi, k - 1, on(msb), hb, leaf);
}

/// |l>|x> -> |l>|x ^ b_l>. Low log(lambda) address bits pick the row, the rest the column.
inline void select_swap(Builder& b, const LookupTable& t, const Qubits& addr, const Qubits& out) {
  t.check();
  if (addr.size() != static_cast<std::size_t>(index_bits(t.L)) || out.size() != static_cast<std::size_t>(t.m_b))
    throw std::invalid_argument("select_swap register widths");
  const int lo_bits = index_bits(t.lambda);
  const Qubits lo(addr.begin(), addr.begin() + lo_bits), hi(addr.begin() + lo_bits, addr.end());
  std::vector<Qubits> rows;
  for (std::uint64_t r = 0; r < t.lambda; ++r) rows.push_back(b.scratch(t.m_b));
  select_columns(b, t, hi, rows);
  swap_up(b, lo, rows);
  xor_copy(b, rows[0], out);
  swap_up_dag(b, lo, rows);
  select_columns(b, t, hi, rows);
  for (auto it = rows.rbegin(); it != rows.rend(); ++it) b.release(*it);
}

/// Writes the fixed-point value of `word` into the amplitude of flag=|0>, samp=|0...0>.
inline void direct_sampling(Builder& b, const Qubits& word, const Qubits& samp, int flag) {
  if (word.size() < 2 || samp.size() + 1 != word.size()) throw std::invalid_argument("direct_sampling widths");
  const Qubits b1(word.begin(), word.end() - 1);
  for (int q : samp) b.c.h(q);
  comp(b, samp, b1, flag);
  b.c.x(flag);
  for (int q : samp) b.c.h(q);
  b.c.z(word.back());
}

// ---------------------------------------------------------------------------
// Occupation detection

/// addr ^= position of the i-th occupied mode of j (0 when i >= popcount).
/// cnt must be |0> on entry and is returned to |0> when popcount(j) = eta.
inline void occ(Builder& b, const Qubits& i, const Qubits& addr, const Qubits& j, int eta) {
  const int wc = index_bits(static_cast<std::uint64_t>(eta) + 1);
  const Qubits cnt = b.scratch(std::max(wc, static_cast<int>(i.size())));
  const int q1 = b.scratch(), q2 = b.scratch();
  for (std::size_t k = 0; k < j.size(); ++k) {
    eq(b, cnt, i, q1);
    b.c.and_(on(q1), on(j[k]), q2);
    for (std::size_t a = 0; a < addr.size(); ++a)
      if ((k >> a) & 1U) b.c.cx(q2, addr[a]);
    b.c.unand(on(q1), on(j[k]), q2);
    eq(b, cnt, i, q1);
    increment(b, cnt, {on(j[k])});
  }
  for (std::size_t a = 0; a < cnt.size(); ++a)
    if ((static_cast<std::uint64_t>(eta) >> a) & 1U) b.c.x(cnt[a]);
  b.release(q2);
  b.release(q1);
  b.release(cnt);
}

inline void occ_dag(Builder& b, const Qubits& i, const Qubits& addr, const Qubits& j, int eta) {
  auto m = b.mark();
  occ(b, i, addr, j, eta);
  std::vector<Gate> fwd(b.c.gates.begin() + static_cast<std::ptrdiff_t>(m), b.c.gates.end());
  b.c.gates.resize(m);
  for (auto it = fwd.rbegin(); it != fwd.rend(); ++it) b.c.gates.push_back(inverse(*it));
}

// ---------------------------------------------------------------------------
// Standalone handles

struct OracleHandle {
  Circuit circuit;
  std::map<std::string, Qubits> regs;
  Qubits declared_ancilla;
};

inline OracleHandle finish(Builder& b, std::map<std::string, Qubits> regs, Qubits extra_anc = {}) {
  OracleHandle h;
  h.declared_ancilla = b.c.qubits_with_role(Role::Scratch);
  h.declared_ancilla.insert(h.declared_ancilla.end(), extra_anc.begin(), extra_anc.end());
  h.circuit = std::move(b.c);
  h.regs = std::move(regs);
  return h;
}

inline void require_pow2_modes(int n) {
  if (n < 2 || !is_pow2(static_cast<std::uint64_t>(n))) throw std::invalid_argument("mode count must be a power of two >= 2");
}

inline OracleHandle build_swap_up(int n, int m_b) {
  require_pow2_modes(n);
  Builder b;
  auto p = b.reg("p", index_bits(static_cast<std::uint64_t>(n)), Role::Index);
  std::vector<Qubits> words;
  Qubits all;
  for (int k = 0; k < n; ++k) {
    words.push_back(b.reg("x" + std::to_string(k), m_b, Role::System));
    all.insert(all.end(), words.back().begin(), words.back().end());
  }
  swap_up(b, p, words);
  return finish(b, {{"p", p}, {"system", all}});
}

inline OracleHandle build_ladder(int n) {
  if (n < 2) throw std::invalid_argument("ladder needs n >= 2");
  Builder b;
  auto j = b.reg("j", n, Role::System);
  ladder(b, j);
  return finish(b, {{"system", j}});
}

inline OracleHandle build_phase_oracle(int n) {
  require_pow2_modes(n);
  Builder b;
  const int k = index_bits(static_cast<std::uint64_t>(n));
  auto p = b.reg("p", k, Role::Index), q = b.reg("q", k, Role::Index), j = b.reg("j", n, Role::System);
  const int e = b.scratch();
  eq(b, p, q, e);
  phase_oracle(b, p, q, j, e);
  eq(b, p, q, e);
  b.release(e);
  return finish(b, {{"p", p}, {"q", q}, {"system", j}});
}

inline OracleHandle build_comp(int width) {
  Builder b;
  auto a = b.reg("a", width, Role::Index), c = b.reg("b", width, Role::Index), r = b.reg("result", 1, Role::Validation);
  comp(b, a, c, r[0]);
  return finish(b, {{"p", a}, {"q", c}, {"result", r}});
}

inline OracleHandle build_eq(int width) {
  Builder b;
  auto a = b.reg("a", width, Role::Index), c = b.reg("b", width, Role::Index), r = b.reg("result", 1, Role::Validation);
  eq(b, a, c, r[0]);
  return finish(b, {{"p", a}, {"q", c}, {"result", r}});
}

inline OracleHandle build_adder(int width, bool signed_ctrl) {
  Builder b;
  auto a = b.reg("a", width, Role::Index), s = b.reg("sum", width, Role::Index);
  std::map<std::string, Qubits> regs{{"p", a}, {"sum", s}};
  std::optional<int> sign;
  if (signed_ctrl) {
    regs["sign"] = b.reg("sign", 1, Role::Index);
    sign = regs["sign"][0];
  }
  add(b, a, s, sign);
  return finish(b, regs);
}

inline OracleHandle build_os_one_body(int n, OsVariant var) {
  require_pow2_modes(n);
  Builder b;
  const int k = index_bits(static_cast<std::uint64_t>(n));
  auto p = b.reg("p", k, Role::Index), q = b.reg("q", k, Role::Index), j = b.reg("j", n, Role::System);
  auto v = b.reg("v", 1, Role::Validation);
  os_one_body(b, var, p, q, j, v[0]);
  return finish(b, {{"p", p}, {"q", q}, {"system", j}, {"validation", v}});
}

inline OracleHandle build_oc_one_body(int n) {
  require_pow2_modes(n);
  Builder b;
  const int k = index_bits(static_cast<std::uint64_t>(n));
  auto p = b.reg("p", k, Role::Index), q = b.reg("q", k, Role::Index), j = b.reg("j", n, Role::System);
  auto v = b.reg("v", 1, Role::Validation);
  oc_one_body(b, p, q, j, v[0]);
  return finish(b, {{"p", p}, {"q", q}, {"system", j}, {"validation", v}});
}

inline OracleHandle build_oc_two_body(int n) {
  require_pow2_modes(n);
  Builder b;
  const int k = index_bits(static_cast<std::uint64_t>(n));
  auto p = b.reg("p", k, Role::Index), q = b.reg("q", k, Role::Index);
  auto r = b.reg("r", k, Role::Index), s = b.reg("s", k, Role::Index);
  auto j = b.reg("j", n, Role::System);
  auto v = b.reg("v", 2, Role::Validation);
  oc_two_body(b, p, q, r, s, j, v[0], v[1]);
  return finish(b, {{"p", p}, {"q", q}, {"r", r}, {"s", s}, {"system", j}, {"validation", v}});
}

inline OracleHandle build_select_swap(const LookupTable& t) {
  t.check();
  Builder b;
  auto addr = b.reg("addr", index_bits(t.L), Role::Index);
  auto out = b.reg("lookup", t.m_b, Role::Lookup);
  select_swap(b, t, addr, out);
  return finish(b, {{"addr", addr}, {"lookup", out}});
}

inline OracleHandle build_direct_sampling(int m_b) {
  if (m_b < 2) throw std::invalid_argument("direct sampling needs m_b >= 2");
  Builder b;
  auto word = b.reg("lookup", m_b, Role::Lookup);
  auto samp = b.reg("sampling", m_b - 1, Role::Sampling);
  auto flag = b.reg("flag", 1, Role::Sampling);
  direct_sampling(b, word, samp, flag[0]);
  return finish(b, {{"lookup", word}, {"sampling", samp}, {"validation", flag}});
}

inline OracleHandle build_occ(int n, int eta) {
  require_pow2_modes(n);
  if (eta < 1 || eta > n) throw std::invalid_argument("eta out of range");
  Builder b;
  auto i = b.reg("i", index_bits(static_cast<std::uint64_t>(eta)), Role::Index);
  auto addr = b.reg("addr", index_bits(static_cast<std::uint64_t>(n)), Role::Index);
  auto j = b.reg("j", n, Role::System);
  occ(b, i, addr, j, eta);
  return finish(b, {{"i1", i}, {"addr", addr}, {"system", j}});
}

/// Inverse of the occupation oracle: XORs the located address out of `addr`,
/// returning it to |0> on contract inputs.
inline OracleHandle build_uocc(int n, int eta) {
  auto h = build_occ(n, eta);
  h.circuit = adjoint(h.circuit);
  return h;
}

inline OracleHandle build_idf(int n, int eta, int pairs = 1) {
  require_pow2_modes(n);
  if (eta < 1 || eta > n || pairs < 1 || pairs > 2) throw std::invalid_argument("idf arguments");
  Builder b;
  auto j = b.reg("j", n, Role::System);
  std::map<std::string, Qubits> regs{{"system", j}};
  for (int k = 1; k <= pairs; ++k) {
    auto i = b.reg("i" + std::to_string(k), index_bits(static_cast<std::uint64_t>(eta)), Role::Index);
    auto addr = b.reg("addr" + std::to_string(k), index_bits(static_cast<std::uint64_t>(n)), Role::Index);
    for (int q : i) b.c.h(q);
    occ(b, i, addr, j, eta);
    regs["i" + std::to_string(k)] = i;
    regs[k == 1 ? "addr" : "addr2"] = addr;
  }
  return finish(b, regs);
}

inline OracleHandle build_xor_copy(int n) {
  Builder b;
  auto j = b.reg("j", n, Role::System), c = b.reg("copy", n, Role::Index);
  xor_copy(b, j, c);
  return finish(b, {{"system", j}, {"copy", c}});
}

inline OracleHandle build_swx(int n) {
  require_pow2_modes(n);
  Builder b;
  auto p = b.reg("p", index_bits(static_cast<std::uint64_t>(n)), Role::Index);
  auto j = b.reg("j", n, Role::System);
  swx(b, p, j);
  return finish(b, {{"p", p}, {"system", j}});
}

}  // namespace febe
