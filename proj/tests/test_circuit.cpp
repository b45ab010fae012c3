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

#include <random>

#include <gtest/gtest.h>

#include "febe/circuit.hpp"

using namespace febe;

namespace {

Eigen::MatrixXcd restrict_to(const Eigen::MatrixXcd& u, int keep_qubits) {
  const int d = 1 << keep_qubits;
  return u.topLeftCorner(d, d);
}

// Floating-point cancellation leaves ~1e-16 residues on branches that should
// vanish; drop them before comparing basis supports.
SparseState significant(SparseState s) {
  std::erase_if(s.amps, [](auto& e) { return std::abs(e.second) < 1e-12; });
  return s;
}

double dist(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) { return (a - b).cwiseAbs().maxCoeff(); }

Circuit one_gate(int qubits, Gate g) {
  Circuit c;
  c.add_register("q", qubits, Role::System);
  c.add(g);
  return c;
}

// Lowered circuits carry extra scratch qubits above the original ones; with
// scratch starting in |0> the top-left block must reproduce the original.
void expect_lowering_exact(const Circuit& c, CostModel m) {
  Circuit low = lower(c, m);
  auto u = unitary(c);
  auto ul = unitary(low);
  EXPECT_LT(dist(restrict_to(ul, c.qubit_count), u), 1e-10) << cost_model_name(m);
}

}  // namespace

TEST(Simulation, HadamardOnZero) {
  Circuit c;
  c.add_register("q", 1, Role::System);
  c.h(0);
  auto s = apply(c, SparseState::basis(1, 0));
  ASSERT_EQ(s.amps.size(), 2u);
  EXPECT_NEAR(s.amps[0].second.real(), std::sqrt(0.5), 1e-15);
  EXPECT_NEAR(s.amps[1].second.real(), std::sqrt(0.5), 1e-15);
}

TEST(Simulation, FredkinSwapsWhenControlSet) {
  Circuit c;
  c.add_register("q", 3, Role::System);
  c.cswap(0, 1, 2);
  // control q0 = 1, (q1,q2) = (0,1)
  auto s = apply(c, SparseState::basis(3, 0b101));
  ASSERT_EQ(s.amps.size(), 1u);
  EXPECT_EQ(static_cast<int>(s.amps[0].first), 0b011);
}

TEST(Simulation, HadamardTwiceCancelsExactly) {
  Circuit c;
  c.add_register("q", 2, Role::System);
  c.h(0);
  c.h(1);
  c.h(0);
  c.h(1);
  auto s = apply(c, SparseState::basis(2, 0b10));
  ASSERT_EQ(s.amps.size(), 1u);
  EXPECT_EQ(static_cast<int>(s.amps[0].first), 0b10);
}

TEST(Unitary, EmptyAndX) {
  Circuit c;
  c.add_register("q", 2, Role::System);
  EXPECT_LT(dist(unitary(c), Eigen::MatrixXcd::Identity(4, 4)), 1e-15);
  Circuit x;
  x.add_register("q", 1, Role::System);
  x.x(0);
  Eigen::MatrixXcd ex(2, 2);
  ex << 0, 1, 1, 0;
  EXPECT_LT(dist(unitary(x), ex), 1e-15);
}

TEST(Unitary, GateMatricesMatchDefinitions) {
  const cplx I(0, 1);
  auto single = [&](Gate g) { return unitary(one_gate(1, g)); };
  Eigen::MatrixXcd m(2, 2);
  m << 0, -I, I, 0;
  EXPECT_LT(dist(single({Op::Y, {0}, {}}), m), 1e-15);
  m << 1, 0, 0, I;
  EXPECT_LT(dist(single({Op::S, {0}, {}}), m), 1e-15);
  m << std::polar(1.0, -0.15), 0, 0, std::polar(1.0, 0.15);
  EXPECT_LT(dist(single({Op::Rz, {0}, {}, 0.3}), m), 1e-15);
  m << std::cos(0.15), -std::sin(0.15), std::sin(0.15), std::cos(0.15);
  EXPECT_LT(dist(single({Op::Ry, {0}, {}, 0.3}), m), 1e-15);
}

TEST(ProjectedBlock, EmptyMaskEqualsUnitary) {
  Circuit c;
  c.add_register("q", 3, Role::System);
  c.h(0);
  c.ccx(0, 1, 2);
  c.t(2);
  c.cswap(2, 0, 1);
  EXPECT_LT(dist(projected_block(c, {}), unitary(c)), 1e-15);
}

TEST(ProjectedBlock, HadamardSandwichedCz) {
  // Ancilla q0, system q1: block = (I + Z)/2 = |0><0|.
  Circuit c;
  c.add_register("a", 1, Role::Index);
  c.add_register("s", 1, Role::System);
  c.h(0);
  c.cz(0, 1);
  c.h(0);
  auto b = projected_block(c, {0});
  Eigen::MatrixXcd ex(2, 2);
  ex << 1, 0, 0, 0;
  EXPECT_LT(dist(b, ex), 1e-15);
}

TEST(Adjoint, InvolutionAndIdentity) {
  Circuit c;
  c.add_register("q", 4, Role::System);
  c.h(0);
  c.t(1);
  c.s(2);
  c.rz(3, 0.7);
  c.ccx(0, 1, 3);
  c.and_({2, false}, {0, true}, 1);
  c.cswap(0, 2, 3);
  EXPECT_EQ(adjoint(adjoint(c)).gates, c.gates);

  Circuit id = compose(c, adjoint(c));
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int trial = 0; trial < 50; ++trial) {
    SparseState s{4, {}};
    for (int k = 0; k < 16; ++k)
      if (rng() % 3 == 0) s.amps.emplace_back(static_cast<Basis>(k), cplx(u(rng), u(rng)));
    if (s.amps.empty()) s.amps.emplace_back(0, 1);
    s.canonicalize();
    auto out = apply(id, s);
    ASSERT_EQ(out.amps.size(), s.amps.size());
    for (std::size_t i = 0; i < s.amps.size(); ++i) {
      EXPECT_EQ(out.amps[i].first, s.amps[i].first);
      EXPECT_LT(std::abs(out.amps[i].second - s.amps[i].second), 1e-12);
    }
  }
}

TEST(Tensor, QubitCountsAdd) {
  Circuit a, b;
  a.add_register("a", 2, Role::System);
  b.add_register("b", 3, Role::System);
  b.x(0);
  auto t = tensor(a, b);
  EXPECT_EQ(t.qubit_count, 5);
  EXPECT_EQ(t.gates[0].t[0], 2);
}

TEST(Lowering, ToffoliSevenT) {
  Circuit c;
  c.add_register("q", 3, Role::System);
  c.ccx(0, 1, 2);
  expect_lowering_exact(c, CostModel::Deterministic7T);
  auto r = count_resources(c, CostModel::Deterministic7T);
  EXPECT_EQ(r.t_count, 7);
  EXPECT_EQ(r.t_depth, 3);
  EXPECT_EQ(r.toffoli_count, 1);
  EXPECT_EQ(r.ancilla_high_water, 0);
}

TEST(Lowering, AndGadgetOnCleanTarget) {
  Circuit c;
  c.add_register("q", 3, Role::System);
  c.and_({0, true}, {1, true}, 2);
  Circuit low = lower(c, CostModel::AndGadget4T);
  for (int ab = 0; ab < 4; ++ab) {
    auto out = significant(apply(low, SparseState::basis(3, static_cast<Basis>(ab))));
    ASSERT_EQ(out.amps.size(), 1u);
    const int expect = ab | ((ab == 3) << 2);
    EXPECT_EQ(static_cast<int>(out.amps[0].first), expect);
    EXPECT_LT(std::abs(out.amps[0].second - cplx(1, 0)), 1e-12);
  }
  auto r = count_resources(c, CostModel::AndGadget4T);
  EXPECT_EQ(r.t_count, 4);

  Circuit pair;
  pair.add_register("q", 3, Role::System);
  pair.and_({0, true}, {1, true}, 2);
  pair.unand({0, true}, {1, true}, 2);
  auto rp = count_resources(pair, CostModel::AndGadget4T);
  EXPECT_EQ(rp.t_count, 4);
  Circuit lowp = lower(pair, CostModel::AndGadget4T);
  for (int ab = 0; ab < 4; ++ab) {
    auto out = significant(apply(lowp, SparseState::basis(3, static_cast<Basis>(ab))));
    ASSERT_EQ(out.amps.size(), 1u);
    EXPECT_EQ(static_cast<int>(out.amps[0].first), ab);
    EXPECT_LT(std::abs(out.amps[0].second - cplx(1, 0)), 1e-12);
  }
}

TEST(Lowering, MultiControlledGatesBothModels) {
  std::vector<Gate> gates = {
      {Op::X, {4}, {{0, true}, {1, false}, {2, true}}},
      {Op::X, {4}, {{0, true}, {1, true}, {2, true}, {3, true}}},
      {Op::Z, {3}, {{0, true}, {1, true}, {2, false}}},
      {Op::Y, {3}, {{0, true}, {1, true}}},
      {Op::SWAP, {3, 4}, {{0, true}, {1, false}}},
      {Op::H, {2}, {{0, true}}},
      {Op::H, {4}, {{0, true}, {1, true}, {2, true}}},
      {Op::S, {1}, {{0, true}, {2, true}}},
      {Op::Sdg, {1}, {{0, true}}},
      {Op::Rz, {1}, {{0, true}, {3, false}}, 0.37},
      {Op::Ry, {1}, {{0, true}}, -1.1},
      {Op::X, {2}, {{0, true}, {1, true}}},
  };
  for (auto& g : gates) {
    auto c = one_gate(5, g);
    expect_lowering_exact(c, CostModel::Deterministic7T);
    expect_lowering_exact(c, CostModel::AndGadget4T);
  }
}

TEST(Lowering, ToffoliUnderGadgetUsesScratch) {
  auto c = one_gate(3, {Op::X, {2}, {{0, true}, {1, true}}});
  expect_lowering_exact(c, CostModel::AndGadget4T);
  auto r = count_resources(c, CostModel::AndGadget4T);
  EXPECT_EQ(r.t_count, 4);
  EXPECT_EQ(r.ancilla_high_water, 1);
}

TEST(Lowering, McxThreeControls) {
  auto c = one_gate(4, {Op::X, {3}, {{0, true}, {1, true}, {2, true}}});
  expect_lowering_exact(c, CostModel::Deterministic7T);
  auto r = count_resources(c, CostModel::Deterministic7T);
  EXPECT_EQ(r.toffoli_count, 3);
  EXPECT_EQ(r.t_count, 21);
  EXPECT_EQ(r.ancilla_high_water, 1);
  auto g = count_resources(c, CostModel::AndGadget4T);
  EXPECT_EQ(g.t_count, 8);
  EXPECT_EQ(g.ancilla_high_water, 2);
}

TEST(Lowering, CnotHasNoT) {
  auto c = one_gate(2, {Op::X, {1}, {{0, true}}});
  auto r = count_resources(c, CostModel::Deterministic7T);
  EXPECT_EQ(r.t_count, 0);
  EXPECT_EQ(r.clifford_count, 1);
}

TEST(Resources, ParallelTLayer) {
  Circuit c;
  c.add_register("q", 3, Role::System);
  c.t(0);
  c.t(1);
  c.t(2);
  auto r = count_resources(c, CostModel::Deterministic7T);
  EXPECT_EQ(r.t_count, 3);
  EXPECT_EQ(r.t_depth, 1);
}

TEST(Resources, AdditiveUnderCompose) {
  Circuit a;
  a.add_register("q", 4, Role::System);
  a.ccx(0, 1, 2);
  a.t(3);
  Circuit b = a;
  b.gates.clear();
  b.cswap(0, 1, 3);
  b.h(2);
  for (auto m : {CostModel::Deterministic7T, CostModel::AndGadget4T}) {
    auto ra = count_resources(a, m), rb = count_resources(b, m), rc = count_resources(compose(a, b), m);
    EXPECT_EQ(rc.t_count, ra.t_count + rb.t_count);
    EXPECT_EQ(rc.clifford_count, ra.clifford_count + rb.clifford_count);
    EXPECT_EQ(rc.toffoli_count, ra.toffoli_count + rb.toffoli_count);
  }
}

TEST(Resources, InvariantUnderRegisterRenaming) {
  Circuit a;
  a.add_register("q", 3, Role::System);
  a.ccx(0, 1, 2);
  Circuit b = a;
  b.registers[0].name = "renamed";
  b.registers[0].role = Role::Index;
  auto ra = count_resources(a, CostModel::Deterministic7T), rb = count_resources(b, CostModel::Deterministic7T);
  EXPECT_EQ(ra.t_count, rb.t_count);
  EXPECT_EQ(ra.t_depth, rb.t_depth);
  EXPECT_EQ(ra.clifford_count, rb.clifford_count);
}

TEST(Export, HeaderAndX) {
  Circuit c;
  c.add_register("q", 1, Role::System);
  EXPECT_EQ(export_text(c), "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[1];\n");
  c.x(0);
  EXPECT_NE(export_text(c).find("x q[0];"), std::string::npos);
}

TEST(Export, RoundTripGateForGate) {
  Circuit c;
  c.add_register("q", 4, Role::System);
  c.h(0);
  c.cx(0, 1);
  c.ccx(0, 1, 2);
  c.cswap(3, 1, 2);
  c.rz(2, 0.1234567890123);
  c.ry(1, -2.5);
  c.tdg(3);
  c.swap(0, 3);
  c.cz(1, 2);
  auto low = lower(c, CostModel::AndGadget4T);
  for (const Circuit* x : {&c, &low}) {
    auto back = parse_text(export_text(*x));
    EXPECT_EQ(back.qubit_count, x->qubit_count);
    EXPECT_EQ(back.gates, x->gates);
  }
}

TEST(Export, RejectsExoticGates) {
  auto c = one_gate(4, {Op::X, {3}, {{0, true}, {1, true}, {2, true}}});
  EXPECT_THROW(export_text(c), std::invalid_argument);
  auto n = one_gate(2, {Op::X, {1}, {{0, false}}});
  EXPECT_THROW(export_text(n), std::invalid_argument);
}

TEST(Simulation, NormPreservedOnRandomProductStates) {
  Circuit c;
  c.add_register("q", 5, Role::System);
  c.h(0);
  c.ccx(0, 1, 2);
  c.ry(3, 0.4);
  c.cswap(3, 4, 0);
  c.mcx({{0, true}, {3, false}, {4, true}}, 1);
  c.add({Op::H, {2}, {{4, true}}});
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ang(0, std::numbers::pi);
  for (int trial = 0; trial < 100; ++trial) {
    Circuit prep;
    prep.add_register("q", 5, Role::System);
    for (int q = 0; q < 5; ++q) {
      prep.ry(q, ang(rng));
      prep.rz(q, ang(rng));
    }
    auto s = apply(compose(prep, c), SparseState::basis(5, 0));
    EXPECT_NEAR(s.norm(), 1.0, 1e-12);
  }
}
