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
#include <charconv>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace febe {

using cplx = std::complex<double>;
using Basis = unsigned __int128;

inline constexpr int kMaxQubits = 128;
inline constexpr int kUnitaryQubitCap = 14;

inline Basis bit(int q) { return Basis{1} << q; }

// ---------------------------------------------------------------------------
// Gate IR

enum class Op { H, X, Y, Z, S, Sdg, T, Tdg, SWAP, Rz, Ry, And, Unand };

struct Control {
  int q;
  bool on = true;
  friend bool operator==(const Control&, const Control&) = default;
};

/// Any gate may carry controls. And/Unand are Toffolis whose target is known
/// to be |0> before And and after Unand.
struct Gate {
  Op op;
  std::vector<int> t;
  std::vector<Control> c;
  double angle = 0;
  bool free = false;
  friend bool operator==(const Gate&, const Gate&) = default;
};

inline const char* op_name(Op op) {
  switch (op) {
    case Op::H: return "h";
    case Op::X: return "x";
    case Op::Y: return "y";
    case Op::Z: return "z";
    case Op::S: return "s";
    case Op::Sdg: return "sdg";
    case Op::T: return "t";
    case Op::Tdg: return "tdg";
    case Op::SWAP: return "swap";
    case Op::Rz: return "rz";
    case Op::Ry: return "ry";
    case Op::And: return "and";
    case Op::Unand: return "unand";
  }
  return "?";
}

/// Conventional name of a gate: CNOT, CZ, Toffoli, Fredkin, MCX, MCSWAP, ...
inline std::string gate_kind(const Gate& g) {
  const std::size_t k = g.c.size();
  switch (g.op) {
    case Op::X:
      if (k == 0) return "X";
      if (k == 1) return "CNOT";
      if (k == 2) return "Toffoli";
      return "MCX";
    case Op::Z:
      if (k == 0) return "Z";
      if (k == 1) return "CZ";
      return "MCZ";
    case Op::SWAP:
      if (k == 0) return "SWAP";
      if (k == 1) return "Fredkin";
      return "MCSWAP";
    case Op::And: return "And";
    case Op::Unand: return "Unand";
    default: break;
  }
  std::string s = op_name(g.op);
  s[0] = static_cast<char>(std::toupper(s[0]));
  return k ? "C" + s : s;
}

enum class Role { System, Index, Lookup, Sampling, Validation, Scratch };

inline const char* role_name(Role r) {
  switch (r) {
    case Role::System: return "system";
    case Role::Index: return "index";
    case Role::Lookup: return "lookup";
    case Role::Sampling: return "sampling";
    case Role::Validation: return "validation";
    case Role::Scratch: return "scratch";
  }
  return "?";
}

struct Register {
  std::string name;
  std::vector<int> qubits;
  Role role;
};

using Qubits = std::vector<int>;

class Circuit {
 public:
  int qubit_count = 0;
  std::vector<Register> registers;
  std::vector<Gate> gates;

  Qubits add_register(const std::string& name, int size, Role role) {
    Qubits q(size);
    for (int i = 0; i < size; ++i) q[i] = qubit_count++;
    if (qubit_count > kMaxQubits) throw std::length_error("circuit exceeds 128 qubits");
    registers.push_back({name, q, role});
    return q;
  }

  const Register* find(const std::string& name) const {
    for (auto& r : registers)
      if (r.name == name) return &r;
    return nullptr;
  }

  Qubits qubits_with_role(Role role) const {
    Qubits out;
    for (auto& r : registers)
      if (r.role == role) out.insert(out.end(), r.qubits.begin(), r.qubits.end());
    return out;
  }

  void add(Gate g) {
    auto check = [&](int q) {
      if (q < 0 || q >= qubit_count) throw std::out_of_range("gate operand out of range");
    };
    for (int q : g.t) check(q);
    for (auto& c : g.c) {
      check(c.q);
      if (std::find(g.t.begin(), g.t.end(), c.q) != g.t.end()) throw std::invalid_argument("control overlaps target");
    }
    gates.push_back(std::move(g));
  }

  void h(int q) { add({Op::H, {q}, {}}); }
  void x(int q) { add({Op::X, {q}, {}}); }
  void y(int q) { add({Op::Y, {q}, {}}); }
  void z(int q) { add({Op::Z, {q}, {}}); }
  void s(int q) { add({Op::S, {q}, {}}); }
  void sdg(int q) { add({Op::Sdg, {q}, {}}); }
  void t(int q) { add({Op::T, {q}, {}}); }
  void tdg(int q) { add({Op::Tdg, {q}, {}}); }
  void rz(int q, double th) { add({Op::Rz, {q}, {}, th}); }
  void ry(int q, double th) { add({Op::Ry, {q}, {}, th}); }
  void cx(int c, int t, bool on = true) { add({Op::X, {t}, {{c, on}}}); }
  void cz(int c, int t) { add({Op::Z, {t}, {{c, true}}}); }
  void ccx(int a, int b, int t) { add({Op::X, {t}, {{a, true}, {b, true}}}); }
  void mcx(std::vector<Control> cs, int t) { add({Op::X, {t}, std::move(cs)}); }
  void swap(int a, int b) { add({Op::SWAP, {a, b}, {}}); }
  void cswap(int c, int a, int b) { add({Op::SWAP, {a, b}, {{c, true}}}); }
  void and_(Control a, Control b, int t) { add({Op::And, {t}, {a, b}}); }
  void unand(Control a, Control b, int t) { add({Op::Unand, {t}, {a, b}}); }

  void append(const Circuit& other) {
    if (other.qubit_count > qubit_count) throw std::invalid_argument("appended circuit is wider");
    gates.insert(gates.end(), other.gates.begin(), other.gates.end());
  }
  /// Appends gates [from, to) of this circuit in reverse order, each inverted.
  void append_inverse_range(std::size_t from, std::size_t to);
};

inline Gate inverse(Gate g) {
  switch (g.op) {
    case Op::S: g.op = Op::Sdg; break;
    case Op::Sdg: g.op = Op::S; break;
    case Op::T: g.op = Op::Tdg; break;
    case Op::Tdg: g.op = Op::T; break;
    case Op::Rz:
    case Op::Ry: g.angle = -g.angle; break;
    case Op::And: g.op = Op::Unand; break;
    case Op::Unand: g.op = Op::And; break;
    default: break;
  }
  return g;
}

inline void Circuit::append_inverse_range(std::size_t from, std::size_t to) {
  std::vector<Gate> tail(gates.begin() + static_cast<std::ptrdiff_t>(from), gates.begin() + static_cast<std::ptrdiff_t>(to));
  for (auto it = tail.rbegin(); it != tail.rend(); ++it) gates.push_back(inverse(*it));
}

inline Circuit adjoint(const Circuit& c) {
  Circuit out = c;
  out.gates.clear();
  for (auto it = c.gates.rbegin(); it != c.gates.rend(); ++it) out.gates.push_back(inverse(*it));
  return out;
}

inline Circuit compose(const Circuit& a, const Circuit& b) {
  Circuit out = a.qubit_count >= b.qubit_count ? a : b;
  out.gates = a.gates;
  out.gates.insert(out.gates.end(), b.gates.begin(), b.gates.end());
  return out;
}

inline Circuit tensor(const Circuit& a, const Circuit& b) {
  Circuit out = a;
  const int off = a.qubit_count;
  out.qubit_count += b.qubit_count;
  for (auto r : b.registers) {
    for (int& q : r.qubits) q += off;
    out.registers.push_back(r);
  }
  for (auto g : b.gates) {
    for (int& q : g.t) q += off;
    for (auto& c : g.c) c.q += off;
    out.gates.push_back(g);
  }
  return out;
}

/// Adds `ctl` as an extra control to every gate; And/Unand become plain multi-controlled X.
inline Circuit controlled(const Circuit& c, Control ctl) {
  Circuit out = c;
  for (auto& g : out.gates) {
    if (g.op == Op::And || g.op == Op::Unand) g.op = Op::X;
    g.c.push_back(ctl);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Sparse simulation

struct SparseState {
  int qubits = 0;
  std::vector<std::pair<Basis, cplx>> amps;

  static SparseState basis(int n, Basis b) { return {n, {{b, cplx(1, 0)}}}; }

  void canonicalize() {
    std::sort(amps.begin(), amps.end(), [](auto& a, auto& b) { return a.first < b.first; });
    std::size_t w = 0;
    for (std::size_t r = 0; r < amps.size();) {
      Basis k = amps[r].first;
      cplx sum = 0;
      while (r < amps.size() && amps[r].first == k) sum += amps[r++].second;
      if (sum != cplx(0, 0)) amps[w++] = {k, sum};
    }
    amps.resize(w);
  }

  double norm() const {
    double s = 0;
    for (auto& [k, a] : amps) s += std::norm(a);
    return std::sqrt(s);
  }

  cplx amplitude(Basis b) const {
    for (auto& [k, a] : amps)
      if (k == b) return a;
    return 0;
  }
};

inline void apply_gate(const Gate& g, SparseState& st) {
  Basis cmask = 0, cval = 0;
  for (auto& c : g.c) {
    cmask |= bit(c.q);
    if (c.on) cval |= bit(c.q);
  }
  const Basis tm = bit(g.t[0]);
  auto active = [&](Basis b) { return (b & cmask) == cval; };
  const cplx I(0, 1);
  const cplx w = std::polar(1.0, std::numbers::pi / 4);
  auto phase = [&](cplx p) {
    for (auto& [b, a] : st.amps)
      if (active(b) && (b & tm)) a *= p;
  };
  switch (g.op) {
    case Op::X:
    case Op::And:
    case Op::Unand:
      for (auto& [b, a] : st.amps)
        if (active(b)) b ^= tm;
      return;
    case Op::Y:
      for (auto& [b, a] : st.amps)
        if (active(b)) {
          a *= (b & tm) ? -I : I;
          b ^= tm;
        }
      return;
    case Op::Z: phase(-1); return;
    case Op::S: phase(I); return;
    case Op::Sdg: phase(-I); return;
    case Op::T: phase(w); return;
    case Op::Tdg: phase(std::conj(w)); return;
    case Op::Rz: {
      const cplx lo = std::polar(1.0, -g.angle / 2), hi = std::polar(1.0, g.angle / 2);
      for (auto& [b, a] : st.amps)
        if (active(b)) a *= (b & tm) ? hi : lo;
      return;
    }
    case Op::SWAP: {
      const Basis m = tm | bit(g.t[1]);
      for (auto& [b, a] : st.amps)
        if (active(b) && ((b & m) == tm || (b & m) == bit(g.t[1]))) b ^= m;
      return;
    }
    case Op::H:
    case Op::Ry: {
      double c00, c01, c10, c11;  // out-bit, in-bit
      if (g.op == Op::H) {
        c00 = c01 = c10 = std::numbers::sqrt2 / 2;
        c11 = -c00;
      } else {
        c00 = c11 = std::cos(g.angle / 2);
        c10 = std::sin(g.angle / 2);
        c01 = -c10;
      }
      std::vector<std::pair<Basis, cplx>> out;
      out.reserve(st.amps.size() * 2);
      for (auto& [b, a] : st.amps) {
        if (!active(b)) {
          out.emplace_back(b, a);
          continue;
        }
        const bool one = b & tm;
        const Basis b0 = b & ~tm, b1 = b | tm;
        const double to0 = one ? c01 : c00, to1 = one ? c11 : c10;
        if (to0 != 0) out.emplace_back(b0, a * to0);
        if (to1 != 0) out.emplace_back(b1, a * to1);
      }
      st.amps = std::move(out);
      st.canonicalize();
      return;
    }
  }
}

inline SparseState apply(const Circuit& c, SparseState s) {
  if (s.qubits != c.qubit_count) throw std::invalid_argument("state width does not match circuit");
  for (auto& g : c.gates) apply_gate(g, s);
  s.canonicalize();
  return s;
}

inline Eigen::MatrixXcd unitary(const Circuit& c) {
  if (c.qubit_count > kUnitaryQubitCap) throw std::length_error("unitary extraction limited to 14 qubits");
  const int dim = 1 << c.qubit_count;
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(dim, dim);
  for (int k = 0; k < dim; ++k) {
    auto out = apply(c, SparseState::basis(c.qubit_count, static_cast<Basis>(k)));
    for (auto& [b, a] : out.amps) u(static_cast<int>(b), k) = a;
  }
  return u;
}

/// Qubits outside `anc` in increasing order; system word bit i is the i-th of these.
inline Qubits complement(int qubit_count, const std::vector<int>& anc) {
  std::vector<bool> in(qubit_count, false);
  for (int q : anc) in.at(q) = true;
  Qubits out;
  for (int q = 0; q < qubit_count; ++q)
    if (!in[q]) out.push_back(q);
  return out;
}

inline Basis scatter(std::uint64_t word, const Qubits& qs) {
  Basis b = 0;
  for (std::size_t i = 0; i < qs.size(); ++i)
    if ((word >> i) & 1U) b |= bit(qs[i]);
  return b;
}

inline std::uint64_t gather(Basis b, const Qubits& qs) {
  std::uint64_t w = 0;
  for (std::size_t i = 0; i < qs.size(); ++i)
    if (b & bit(qs[i])) w |= std::uint64_t{1} << i;
  return w;
}

/// Simulates one system column with every ancilla in |0> and returns the |0>-projected output column.
inline Eigen::VectorXcd project_column(const Circuit& c, const Qubits& sys, std::uint64_t col, Basis init = 0) {
  const Basis sys_mask = scatter((std::uint64_t{1} << sys.size()) - 1, sys);
  auto out = apply(c, SparseState::basis(c.qubit_count, scatter(col, sys) | init));
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(1) << sys.size());
  for (auto& [b, a] : out.amps)
    if ((b & ~sys_mask) == init) v(static_cast<Eigen::Index>(gather(b, sys))) += a;
  return v;
}

/// (<0_anc| x I) U (|0_anc> x I) restricted to the requested columns (all when empty).
inline Eigen::MatrixXcd projected_block(const Circuit& c, const std::vector<int>& anc_mask,
                                        std::vector<std::uint64_t> columns = {}, int jobs = 1) {
  const Qubits sys = complement(c.qubit_count, anc_mask);
  if (sys.size() > 20) throw std::length_error("system register too large for block extraction");
  const std::uint64_t dim = std::uint64_t{1} << sys.size();
  if (columns.empty())
    for (std::uint64_t k = 0; k < dim; ++k) columns.push_back(k);
  Eigen::MatrixXcd m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(columns.size()));
  jobs = std::max(1, std::min<int>(jobs, static_cast<int>(columns.size())));
  auto work = [&](int w) {
    for (std::size_t k = static_cast<std::size_t>(w); k < columns.size(); k += static_cast<std::size_t>(jobs))
      m.col(static_cast<Eigen::Index>(k)) = project_column(c, sys, columns[k]);
  };
  if (jobs == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < jobs; ++w) pool.emplace_back(work, w);
    for (auto& th : pool) th.join();
  }
  return m;
}

// ---------------------------------------------------------------------------
// Clifford+T lowering

enum class CostModel { Deterministic7T, AndGadget4T };

inline const char* cost_model_name(CostModel m) {
  return m == CostModel::Deterministic7T ? "Deterministic7T" : "AndGadget4T";
}

inline CostModel parse_cost_model(const std::string& s) {
  if (s == "Deterministic7T" || s == "deterministic7t" || s == "7t") return CostModel::Deterministic7T;
  if (s == "AndGadget4T" || s == "andgadget4t" || s == "4t") return CostModel::AndGadget4T;
  throw std::invalid_argument("unknown cost model '" + s + "'");
}

namespace detail {

class Lowerer {
 public:
  Lowerer(const Circuit& src, CostModel m) : model_(m), base_(src.qubit_count) {
    out_.qubit_count = src.qubit_count;
    out_.registers = src.registers;
  }

  Circuit finish() {
    out_.qubit_count = base_ + high_;
    if (high_ > 0) {
      Qubits q(high_);
      for (int i = 0; i < high_; ++i) q[i] = base_ + i;
      out_.registers.push_back({"lowering_scratch", q, Role::Scratch});
    }
    return std::move(out_);
  }

  int high_water() const { return high_; }

  void gate(const Gate& g) {
    std::vector<int> neg;
    for (auto& c : g.c)
      if (!c.on) neg.push_back(c.q);
    if (!neg.empty()) {
      for (int q : neg) emit(Op::X, q);
      Gate pos = g;
      for (auto& c : pos.c) c.on = true;
      gate(pos);
      for (int q : neg) emit(Op::X, q);
      return;
    }
    std::vector<int> cs;
    for (auto& c : g.c) cs.push_back(c.q);
    const int t = g.t[0];
    switch (g.op) {
      case Op::X: mcx(cs, t); return;
      case Op::And:
        if (cs.size() != 2) throw std::invalid_argument("And takes two controls");
        if (model_ == CostModel::AndGadget4T)
          and_gadget(cs[0], cs[1], t, false);
        else
          toffoli7(cs[0], cs[1], t);
        return;
      case Op::Unand:
        if (cs.size() != 2) throw std::invalid_argument("Unand takes two controls");
        if (model_ == CostModel::AndGadget4T)
          and_gadget(cs[0], cs[1], t, true);
        else
          toffoli7(cs[0], cs[1], t);
        return;
      case Op::Z:
        if (cs.empty()) return emit(Op::Z, t);
        emit(Op::H, t);
        mcx(cs, t);
        emit(Op::H, t);
        return;
      case Op::Y:
        if (cs.empty()) return emit(Op::Y, t);
        emit(Op::Sdg, t);
        mcx(cs, t);
        emit(Op::S, t);
        return;
      case Op::SWAP: {
        const int a = t, b = g.t[1];
        cnot(b, a);
        auto cs2 = cs;
        cs2.push_back(a);
        mcx(cs2, b);
        cnot(b, a);
        return;
      }
      default: break;
    }
    if (cs.empty()) {
      out_.gates.push_back({g.op, {t}, {}, g.angle, g.free});
      return;
    }
    // Reduce to a single control with an AND chain.
    std::vector<int> chain;
    int ctl = cs[0];
    for (std::size_t i = 1; i < cs.size(); ++i) {
      int s = alloc();
      and_into(ctl, cs[i], s);
      chain.push_back(s);
      ctl = s;
    }
    single_controlled(g, ctl, t);
    for (std::size_t i = cs.size() - 1; i >= 1; --i) {
      unand_from(i == 1 ? cs[0] : chain[i - 2], cs[i], chain[i - 1]);
      release();
    }
  }

 private:
  void emit(Op op, int q, bool fr = false) { out_.gates.push_back({op, {q}, {}, 0, fr}); }
  void cnot(int c, int t) { out_.gates.push_back({Op::X, {t}, {{c, true}}}); }
  void rot(Op op, int q, double th) { out_.gates.push_back({op, {q}, {}, th}); }

  int alloc() {
    int q = base_ + used_++;
    high_ = std::max(high_, used_);
    if (base_ + high_ > kMaxQubits) throw std::length_error("lowering exceeds 128 qubits");
    return q;
  }
  void release() { --used_; }

  void ccz_network(int a, int b, int c) {
    emit(Op::T, a);
    emit(Op::T, b);
    emit(Op::T, c);
    cnot(a, c);
    cnot(b, a);
    cnot(c, b);
    emit(Op::Tdg, a);
    emit(Op::T, b);
    emit(Op::Tdg, c);
    cnot(a, c);
    emit(Op::Tdg, c);
    cnot(a, c);
    cnot(c, b);
    cnot(b, a);
    cnot(a, c);
  }

  void toffoli7(int a, int b, int t) {
    emit(Op::H, t);
    ccz_network(a, b, t);
    emit(Op::H, t);
  }

  // Compute-AND into a clean target, and its adjoint. The adjoint stands in for a
  // measurement-based uncompute, so its T gates are flagged free.
  void and_gadget(int a, int b, int t, bool uncompute) {
    std::vector<Gate> seq;
    auto e = [&](Op op, int q) { seq.push_back({op, {q}, {}}); };
    auto cx = [&](int c, int q) { seq.push_back({Op::X, {q}, {{c, true}}}); };
    e(Op::H, t);
    e(Op::T, t);
    cx(a, t);
    cx(b, t);
    cx(t, a);
    cx(t, b);
    e(Op::Tdg, a);
    e(Op::Tdg, b);
    e(Op::T, t);
    cx(t, a);
    cx(t, b);
    e(Op::H, t);
    e(Op::S, t);
    if (!uncompute) {
      out_.gates.insert(out_.gates.end(), seq.begin(), seq.end());
      return;
    }
    for (auto it = seq.rbegin(); it != seq.rend(); ++it) {
      Gate g = inverse(*it);
      g.free = g.op == Op::T || g.op == Op::Tdg;
      out_.gates.push_back(g);
    }
  }

  void and_into(int a, int b, int s) {
    if (model_ == CostModel::AndGadget4T)
      and_gadget(a, b, s, false);
    else
      toffoli7(a, b, s);
  }
  void unand_from(int a, int b, int s) {
    if (model_ == CostModel::AndGadget4T)
      and_gadget(a, b, s, true);
    else
      toffoli7(a, b, s);
  }

  void mcx(const std::vector<int>& cs, int t) {
    const std::size_t k = cs.size();
    if (k == 0) return emit(Op::X, t);
    if (k == 1) return cnot(cs[0], t);
    if (model_ == CostModel::Deterministic7T) {
      if (k == 2) return toffoli7(cs[0], cs[1], t);
      std::vector<int> chain;
      int ctl = cs[0];
      for (std::size_t i = 1; i + 1 < k; ++i) {
        int s = alloc();
        toffoli7(ctl, cs[i], s);
        chain.push_back(s);
        ctl = s;
      }
      toffoli7(ctl, cs[k - 1], t);
      for (std::size_t i = k - 2; i >= 1; --i) {
        toffoli7(i == 1 ? cs[0] : chain[i - 2], cs[i], chain[i - 1]);
        release();
      }
      return;
    }
    std::vector<int> chain;
    int ctl = cs[0];
    for (std::size_t i = 1; i < k; ++i) {
      int s = alloc();
      and_gadget(ctl, cs[i], s, false);
      chain.push_back(s);
      ctl = s;
    }
    cnot(ctl, t);
    for (std::size_t i = k - 1; i >= 1; --i) {
      and_gadget(i == 1 ? cs[0] : chain[i - 2], cs[i], chain[i - 1], true);
      release();
    }
  }

  void single_controlled(const Gate& g, int c, int t) {
    switch (g.op) {
      case Op::S:
        emit(Op::T, c);
        emit(Op::T, t);
        cnot(c, t);
        emit(Op::Tdg, t);
        cnot(c, t);
        return;
      case Op::Sdg:
        emit(Op::Tdg, c);
        emit(Op::Tdg, t);
        cnot(c, t);
        emit(Op::T, t);
        cnot(c, t);
        return;
      case Op::H:
        emit(Op::S, t);
        emit(Op::H, t);
        emit(Op::T, t);
        cnot(c, t);
        emit(Op::Tdg, t);
        emit(Op::H, t);
        emit(Op::Sdg, t);
        return;
      case Op::Rz:
      case Op::Ry:
        rot(g.op, t, g.angle / 2);
        cnot(c, t);
        rot(g.op, t, -g.angle / 2);
        cnot(c, t);
        return;
      default: throw std::invalid_argument("no Clifford+T lowering for controlled " + std::string(op_name(g.op)));
    }
  }

  CostModel model_;
  int base_;
  int used_ = 0;
  int high_ = 0;
  Circuit out_;
};

}  // namespace detail

/// Rewrites every gate into uncontrolled single-qubit gates and CNOTs. Scratch
/// qubits for multi-control reductions are appended above the original qubits.
inline Circuit lower(const Circuit& c, CostModel m) {
  detail::Lowerer lw(c, m);
  for (auto& g : c.gates) lw.gate(g);
  return lw.finish();
}

struct ResourceReport {
  long long t_count = 0;
  long long t_depth = 0;
  long long clifford_count = 0;
  long long toffoli_count = 0;
  long long qubit_count = 0;
  long long ancilla_high_water = 0;
  CostModel model = CostModel::Deterministic7T;
};

inline long long toffoli_equivalents(const Gate& g) {
  const long long k = static_cast<long long>(g.c.size());
  switch (g.op) {
    case Op::And:
    case Op::Unand: return 1;
    case Op::X:
    case Op::Y:
    case Op::Z: return k >= 2 ? 2 * k - 3 : 0;
    case Op::SWAP: return k >= 1 ? 2 * k - 1 : 0;
    default: return k >= 2 ? 2 * (k - 1) : 0;
  }
}

inline bool is_t(const Gate& g) { return g.op == Op::T || g.op == Op::Tdg; }
inline bool is_rotation(const Gate& g) { return g.op == Op::Rz || g.op == Op::Ry; }

/// Counts over an already-lowered circuit.
inline ResourceReport count_lowered(const Circuit& low) {
  ResourceReport r;
  std::vector<long long> layer(static_cast<std::size_t>(low.qubit_count), 0);
  for (auto& g : low.gates) {
    long long l = 0;
    for (int q : g.t) l = std::max(l, layer[q]);
    for (auto& c : g.c) l = std::max(l, layer[c.q]);
    if (is_t(g) && !g.free) {
      ++r.t_count;
      ++l;
    } else if (!is_rotation(g)) {
      ++r.clifford_count;
    }
    for (int q : g.t) layer[q] = l;
    for (auto& c : g.c) layer[c.q] = l;
    r.t_depth = std::max(r.t_depth, l);
  }
  r.qubit_count = low.qubit_count;
  return r;
}

inline ResourceReport count_resources(const Circuit& c, CostModel m) {
  detail::Lowerer lw(c, m);
  for (auto& g : c.gates) lw.gate(g);
  const int hw = lw.high_water();
  ResourceReport r = count_lowered(lw.finish());
  for (auto& g : c.gates) r.toffoli_count += toffoli_equivalents(g);
  r.ancilla_high_water = hw;
  r.model = m;
  return r;
}

// ---------------------------------------------------------------------------
// Text export

inline std::string format_angle(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline std::string export_text(const Circuit& c) {
  std::ostringstream os;
  os << "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[" << c.qubit_count << "];\n";
  for (auto& g : c.gates) {
    for (auto& ctl : g.c)
      if (!ctl.on) throw std::invalid_argument("negative control must be lowered before export");
    const std::size_t k = g.c.size();
    std::string name;
    switch (g.op) {
      case Op::X: name = k == 0 ? "x" : k == 1 ? "cx" : k == 2 ? "ccx" : ""; break;
      case Op::Z: name = k == 0 ? "z" : k == 1 ? "cz" : ""; break;
      case Op::SWAP: name = k == 0 ? "swap" : k == 1 ? "cswap" : ""; break;
      case Op::And:
      case Op::Unand: name = ""; break;
      default: name = k == 0 ? op_name(g.op) : ""; break;
    }
    if (name.empty()) throw std::invalid_argument("gate " + gate_kind(g) + " must be lowered before export");
    os << name;
    if (is_rotation(g)) os << "(" << format_angle(g.angle) << ")";
    os << " ";
    bool first = true;
    auto arg = [&](int q) {
      os << (first ? "" : ",") << "q[" << q << "]";
      first = false;
    };
    for (auto& ctl : g.c) arg(ctl.q);
    for (int q : g.t) arg(q);
    os << ";";
    if (g.free) os << " // free";
    os << "\n";
  }
  return os.str();
}

inline Circuit parse_text(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  Circuit c;
  bool have_reg = false;
  while (std::getline(is, line)) {
    if (line.empty() || line.rfind("OPENQASM", 0) == 0 || line.rfind("include", 0) == 0) continue;
    if (line.rfind("qreg", 0) == 0) {
      auto lb = line.find('['), rb = line.find(']');
      c.add_register("q", std::stoi(line.substr(lb + 1, rb - lb - 1)), Role::System);
      have_reg = true;
      continue;
    }
    if (!have_reg) throw std::invalid_argument("gate before qreg");
    const bool fr = line.find("// free") != std::string::npos;
    auto semi = line.find(';');
    if (semi == std::string::npos) throw std::invalid_argument("missing ';' in '" + line + "'");
    std::string body = line.substr(0, semi);
    auto sp = body.find(' ');
    std::string head = body.substr(0, sp), args = body.substr(sp + 1);
    double angle = 0;
    if (auto lp = head.find('('); lp != std::string::npos) {
      angle = std::stod(head.substr(lp + 1, head.find(')') - lp - 1));
      head = head.substr(0, lp);
    }
    std::vector<int> qs;
    for (std::size_t pos = 0; (pos = args.find('[', pos)) != std::string::npos; ++pos)
      qs.push_back(std::stoi(args.substr(pos + 1)));
    struct Entry {
      const char* name;
      Op op;
      int controls;
    };
    static const Entry table[] = {
        {"h", Op::H, 0},     {"x", Op::X, 0},     {"y", Op::Y, 0},       {"z", Op::Z, 0},     {"s", Op::S, 0},
        {"sdg", Op::Sdg, 0}, {"t", Op::T, 0},     {"tdg", Op::Tdg, 0},   {"rz", Op::Rz, 0},   {"ry", Op::Ry, 0},
        {"cx", Op::X, 1},    {"cz", Op::Z, 1},    {"ccx", Op::X, 2},     {"swap", Op::SWAP, 0}, {"cswap", Op::SWAP, 1}};
    const Entry* e = nullptr;
    for (auto& cand : table)
      if (head == cand.name) e = &cand;
    if (!e) throw std::invalid_argument("unknown gate '" + head + "'");
    Gate g{e->op, {}, {}, angle, fr};
    for (int i = 0; i < e->controls; ++i) g.c.push_back({qs.at(static_cast<std::size_t>(i)), true});
    for (std::size_t i = static_cast<std::size_t>(e->controls); i < qs.size(); ++i) g.t.push_back(qs[i]);
    c.add(g);
  }
  return c;
}

}  // namespace febe
