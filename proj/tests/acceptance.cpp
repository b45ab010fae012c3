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

// One PASS/FAIL line per acceptance criterion; exit status is the failure count.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include <Eigen/Sparse>

#include "febe/febe.hpp"

using namespace febe;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream note;
  std::string failures;
  void require(bool ok, const std::string& what) {
    if (ok) return;
    failures += (pass ? "" : "; ") + what;
    pass = false;
  }
};

double dyadic(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> d(-15, 15);
  return d(rng) / 16.0;
}

HamiltonianSpec one_body_spec(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  HamiltonianSpec h;
  h.n = n;
  for (int p = 0; p < n; ++p)
    for (int q = p; q < n; ++q) h.one_body[{p, q}] = h.one_body[{q, p}] = dyadic(rng);
  return h;
}

HamiltonianSpec number_spec(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  HamiltonianSpec h;
  h.n = n;
  h.structure = {StructureKind::NumberOnly, 1};
  for (int p = 0; p < n; ++p) h.one_body[{p, p}] = dyadic(rng);
  return h;
}

double block_error(const BlockEncoding& be) {
  const Eigen::MatrixXcd ref = Eigen::MatrixXd(build_matrix_full(be.encoded)).cast<cplx>();
  return (be.alpha * projected_block(be.circuit, be.anc_mask) - ref).cwiseAbs().maxCoeff();
}

std::pair<Basis, cplx> single_term(const OracleHandle& h, Basis in) {
  auto out = apply(h.circuit, SparseState::basis(h.circuit.qubit_count, in));
  if (out.amps.size() != 1) return {~Basis{0}, 0};
  return out.amps[0];
}

cplx inner(const SparseState& a, const SparseState& b) {
  cplx s = 0;
  std::size_t i = 0, k = 0;
  while (i < a.amps.size() && k < b.amps.size()) {
    if (a.amps[i].first < b.amps[k].first) {
      ++i;
    } else if (b.amps[k].first < a.amps[i].first) {
      ++k;
    } else {
      s += std::conj(a.amps[i].second) * b.amps[k].second;
      ++i;
      ++k;
    }
  }
  return s;
}

// Exhaustive over all basis inputs up to 14 qubits; above that, a seeded
// sample of 48 inputs whose images must be orthonormal and must return
// through the adjoint.
double unitarity_defect(const Circuit& c, std::uint64_t seed) {
  std::vector<Basis> inputs;
  if (c.qubit_count <= kUnitaryQubitCap) {
    for (Basis b = 0; b < (Basis{1} << c.qubit_count); ++b) inputs.push_back(b);
  } else {
    std::mt19937_64 rng(seed);
    const Basis mask = c.qubit_count >= 128 ? ~Basis{0} : (Basis{1} << c.qubit_count) - 1;
    for (int k = 0; k < 48; ++k) inputs.push_back(((Basis{rng()} << 64) | rng()) & mask);
  }
  std::vector<SparseState> outs;
  for (Basis b : inputs) outs.push_back(apply(c, SparseState::basis(c.qubit_count, b)));
  double worst = 0;
  if (c.qubit_count <= kUnitaryQubitCap) {
    const int dim = 1 << c.qubit_count;
    std::vector<Eigen::Triplet<cplx>> trips;
    for (int k = 0; k < dim; ++k)
      for (auto& [b, a] : outs[static_cast<std::size_t>(k)].amps) trips.emplace_back(static_cast<int>(b), k, a);
    Eigen::SparseMatrix<cplx> u(dim, dim);
    u.setFromTriplets(trips.begin(), trips.end());
    Eigen::SparseMatrix<cplx> gram = u * u.adjoint();
    for (int k = 0; k < gram.outerSize(); ++k)
      for (Eigen::SparseMatrix<cplx>::InnerIterator it(gram, k); it; ++it)
        worst = std::max(worst, std::abs(it.value() - cplx(it.row() == it.col() ? 1.0 : 0.0)));
    for (int k = 0; k < dim; ++k) worst = std::max(worst, std::abs(1.0 - std::abs(gram.coeff(k, k))));
    return worst;
  }
  for (std::size_t a = 0; a < outs.size(); ++a)
    for (std::size_t b = a; b < outs.size(); ++b) {
      const cplx expect = (a == b || inputs[a] == inputs[b]) ? 1.0 : 0.0;
      worst = std::max(worst, std::abs(inner(outs[a], outs[b]) - expect));
    }
  const Circuit back = adjoint(c);
  for (std::size_t a = 0; a < outs.size(); ++a) {
    auto r = apply(back, outs[a]);
    worst = std::max(worst, std::abs(1.0 - r.amplitude(inputs[a])));
  }
  return worst;
}

// ---------------------------------------------------------------------------

void criterion1(Outcome& o) {
  EncodeOptions opt;
  opt.m_b = 5;
  double worst = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto g = encode_one_body_full(one_body_spec(4, seed), opt);
    auto d = encode_number_full(number_spec(4, seed), opt);
    o.require(g.alpha == 16.0, "general alpha " + format_real(g.alpha));
    o.require(d.alpha == 4.0, "number alpha " + format_real(d.alpha));
    worst = std::max({worst, block_error(g), block_error(d)});
  }
  o.require(worst <= 1e-10, "deviation " + format_real(worst));
  o.note << "max |alpha*block - H| = " << format_real(worst) << " over 5 seeds, alpha 16 and 4";
}

void criterion2(Outcome& o) {
  double worst = 0, alpha = 0;
  for (std::uint64_t seed = 11; seed <= 15; ++seed) {
    auto h = one_body_spec(4, seed);
    auto be = encode_eta_one_body(h, 2);
    auto r = verify(be);
    worst = std::max(worst, r.max_abs_dev);
    alpha = be.alpha;
    o.require(be.alpha == 8.0, "sector alpha " + format_real(be.alpha));
    o.require(be.alpha < encode_one_body_full(h).alpha, "sector alpha not below full alpha");
  }
  o.require(worst <= 1e-10, "deviation " + format_real(worst));
  o.note << "sector deviation " << format_real(worst) << ", alpha " << format_real(alpha) << " < 16";
}

void criterion3(Outcome& o) {
  HamiltonianSpec g;
  g.n = 4;
  g.two_body[{0, 1, 3, 2}] = 0.5;
  g.two_body[{2, 3, 1, 0}] = 0.5;
  auto be_g = encode_two_body_full(g);
  HamiltonianSpec d;
  d.n = 4;
  d.two_body[{1, 2, 2, 1}] = 0.75;
  auto be_d = encode_factorized(d);
  const double eg = block_error(be_g), ed = block_error(be_d);
  o.require(be_g.alpha == 256.0, "general alpha " + format_real(be_g.alpha));
  o.require(be_d.alpha == 16.0, "density alpha " + format_real(be_d.alpha));
  o.require(eg <= 1e-10 && ed <= 1e-10, "deviation " + format_real(std::max(eg, ed)));
  o.note << "general term alpha 256 dev " << format_real(eg) << ", n_p n_q alpha 16 dev " << format_real(ed);
}

void criterion4(Outcome& o) {
  double min_gain = 1e300;
  for (std::uint64_t seed = 21; seed <= 25; ++seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-0.95, 0.95);
    HamiltonianSpec h;
    h.n = 4;
    for (int p = 0; p < 4; ++p)
      for (int q = p; q < 4; ++q) h.one_body[{p, q}] = h.one_body[{q, p}] = u(rng);
    EncodeOptions lo, hi;
    lo.m_b = 5;
    hi.m_b = 10;
    auto r_lo = verify(encode_one_body_full(h, lo));
    auto r_hi = verify(encode_one_body_full(h, hi));
    o.require(r_lo.max_abs_dev <= r_lo.eps_bound && r_hi.max_abs_dev <= r_hi.eps_bound, "deviation above budget");
    o.require(r_lo.max_abs_dev > 0, "coarse encoding is exact");
    const double gain = r_hi.max_abs_dev > 0 ? r_lo.max_abs_dev / r_hi.max_abs_dev : 1e300;
    o.require(gain >= 2.0, "seed " + std::to_string(seed) + " gain " + format_real(gain));
    min_gain = std::min(min_gain, gain);
  }
  o.note << "deviation within budget on 5 seeds, smallest m_b 5 to 10 reduction " << format_real(min_gain) << "x";
}

void criterion5(Outcome& o) {
  long occ_cases = 0;
  for (int n : {2, 4})
    for (int eta = 1; eta <= n; ++eta) {
      auto h = build_occ(n, eta);
      auto u = build_uocc(n, eta);
      const auto &i = h.regs.at("i1"), &addr = h.regs.at("addr"), &j = h.regs.at("system");
      for (auto w : eta_basis(n, eta))
        for (std::uint64_t idx = 0; idx < static_cast<std::uint64_t>(eta); ++idx) {
          const Basis in = scatter(idx, i) | scatter(w, j);
          auto [out, amp] = single_term(h, in);
          std::uint64_t expect = 0;
          for (int k = 0, seen = 0; k < n; ++k)
            if ((w >> k) & 1U) {
              if (seen++ == static_cast<int>(idx)) expect = static_cast<std::uint64_t>(k);
            }
          o.require(gather(out, addr) == expect && gather(out, j) == w && std::abs(amp - 1.0) < 1e-12, "O_occ");
          o.require(single_term(u, out).first == in, "O_uocc");
          ++occ_cases;
        }
    }
  auto ph = build_phase_oracle(4);
  const auto &p = ph.regs.at("p"), &q = ph.regs.at("q"), &js = ph.regs.at("system");
  for (int a = 0; a < 4; ++a)
    for (int c = 0; c < 4; ++c)
      for (std::uint64_t w = 0; w < 16; ++w) {
        const Basis in = scatter(a, p) | scatter(c, q) | scatter(w, js);
        auto [out, amp] = single_term(ph, in);
        const double expect = phase_exponent({4, w}, a, c) ? -1.0 : 1.0;
        o.require(out == in && std::abs(amp - expect) < 1e-12, "O_phi");
      }
  long sign_cases = 0;
  for (int n = 4; n <= 6; ++n)
    for (Word w = 0; w < (Word{1} << n); ++w)
      for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
          for (int r = 0; r < n; ++r)
            for (int s = 0; s < r; ++s) {
              if (a == r || a == s || b == r || b == s) continue;
              FockState st{n, w};
              auto res = apply_monomial({{cr(a), cr(b), an(r), an(s)}, 1.0}, st);
              if (res.zero) continue;
              const FockState mid = flip(st, r, s);
              const int e = phase_exponent(mid, a, b) + phase_exponent(st, r, s);
              o.require(res.phase == ((e & 1) ? -1 : 1) && res.state == flip(mid, a, b), "two-body sign");
              ++sign_cases;
            }
  o.note << occ_cases << " occupation cases, 256 phase cases, " << sign_cases << " two-body sign cases";
}

void criterion6(Outcome& o) {
  const int m_b = 4;
  auto h = build_direct_sampling(m_b);
  const auto& word = h.regs.at("lookup");
  double worst = 0;
  for (std::uint64_t code = 0; code < 16; ++code) {
    auto out = apply(h.circuit, SparseState::basis(h.circuit.qubit_count, scatter(code, word)));
    // Sign in the top stored bit, magnitude in the low m_b - 1 bits.
    const double expect = ((code >> 3) & 1U ? -1.0 : 1.0) * static_cast<double>(code & 7U) / 8.0;
    worst = std::max(worst, std::abs(out.amplitude(scatter(code, word)) - expect));
  }
  o.require(worst <= 1e-12, "amplitude error " + format_real(worst));
  o.note << "16 codes, max amplitude error " << format_real(worst);
}

void criterion7(Outcome& o) {
  const auto f = formula_select_swap(16, 4, 1);
  o.require(f.t_count == 48, "formula " + std::to_string(f.t_count));
  SweepGrid g;
  g.classes = {"select-swap"};
  g.m_bs = {4};
  g.Ls = {16, 32, 64, 128, 256};
  g.model = CostModel::AndGadget4T;
  auto rows = sweep(g);
  std::vector<double> xs, ys;
  double lo = 1e300, hi = 0;
  for (auto& r : rows) {
    const double ratio = static_cast<double>(r.t_counted) / r.t_formula;
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
    o.require(ratio >= 0.5 && ratio <= 2.0, "L=" + std::to_string(r.L) + " ratio " + format_real(ratio));
    xs.push_back(static_cast<double>(r.L));
    ys.push_back(static_cast<double>(r.t_counted));
  }
  const double slope = loglog_slope(xs, ys);
  o.require(std::abs(slope - 0.5) <= 0.15, "slope " + format_real(slope));
  char buf[160];
  std::snprintf(buf, sizeof buf, "formula(16,4,1) = 48, counted/formula in [%.3f, %.3f], slope %.3f (m_b = 4)", lo, hi, slope);
  o.note << buf;
}

void criterion8(Outcome& o) {
  ModelParams mp;
  mp.T = 0.5;
  HamiltonianSpec hop;
  hop.n = 4;
  hop.one_body = gen_synthetic(mp, 4, 1).one_body;
  auto nn = encode_nn(hop, 1);
  auto rn = verify(nn);
  o.require(nn.alpha == 8.0 && rn.max_abs_dev <= 1e-10, "nn alpha " + format_real(nn.alpha) + " dev " + format_real(rn.max_abs_dev));

  HamiltonianSpec ti;
  ti.n = 4;
  ti.structure = {StructureKind::TranslationInvariant, 1};
  std::mt19937_64 rng(4);
  for (int d = -3; d <= 3; ++d) ti.ti.T[d] = dyadic(rng);
  auto bt = encode_ti(ti);
  auto rt = verify(bt);
  o.require(bt.table_entries == 7 && rt.max_abs_dev <= 1e-10, "ti entries " + std::to_string(bt.table_entries));

  HamiltonianSpec sym = ti;
  for (int d = 1; d <= 3; ++d) sym.ti.T[-d] = sym.ti.T[d];
  auto be = encode_ti_eta(sym, 2);
  auto re = verify(be);
  o.require(be.alpha == 8.0 && re.max_abs_dev <= 1e-10, "ti-eta alpha " + format_real(be.alpha));
  o.note << "nn alpha 8 dev " << format_real(rn.max_abs_dev) << ", ti " << bt.table_entries << " words dev " << format_real(rt.max_abs_dev)
         << ", ti-eta alpha 8 dev " << format_real(re.max_abs_dev);
}

void criterion9(Outcome& o) {
  double worst = 0;
  for (int d = 0; d <= 8; ++d) {
    const PhaseSequence zero(static_cast<std::size_t>(d) + 1, 0.0);
    for (int k = 0; k < 100; ++k) {
      const double t = -1.0 + 2.0 * k / 99.0;
      worst = std::max(worst, std::abs(qsp_poly(zero, t) - std::cos(d * std::acos(t))));
    }
  }
  o.require(worst <= 1e-12, "qsp error " + format_real(worst));
  HamiltonianSpec h;
  h.n = 2;
  h.one_body[{0, 0}] = 0.5;
  h.one_body[{1, 1}] = -0.25;
  h.one_body[{0, 1}] = h.one_body[{1, 0}] = 0.75;
  auto be = encode_one_body_full(h);
  auto q = qsvt_apply(be, {0.0, 0.0, 0.0});
  const Eigen::MatrixXcd a = Eigen::MatrixXd(build_matrix_full(h)).cast<cplx>() / be.alpha;
  const Eigen::MatrixXcd expect = 2.0 * a * a - Eigen::MatrixXcd::Identity(4, 4);
  const double e2 = (projected_block(q.circuit, q.anc_mask) - expect).cwiseAbs().maxCoeff();
  o.require(e2 <= 1e-8, "qsvt error " + format_real(e2));
  o.note << "Chebyshev error " << format_real(worst) << " for d <= 8, degree-2 QSVT error " << format_real(e2);
}

void criterion10(Outcome& o) {
  std::mt19937_64 rng(5);
  LookupTable t{4, 2, 1, {}};
  for (int l = 0; l < 4; ++l) t.words.push_back(rng() & 1U);
  std::vector<std::pair<std::string, Circuit>> circuits = {
      {"swap-up", build_swap_up(2, 1).circuit},
      {"ladder", build_ladder(2).circuit},
      {"phase", build_phase_oracle(2).circuit},
      {"comp", build_comp(1).circuit},
      {"eq", build_eq(1).circuit},
      {"adder", build_adder(2, true).circuit},
      {"os-hop", build_os_one_body(2, OsVariant::CreateAnnihilate).circuit},
      {"os-number", build_os_one_body(2, OsVariant::Number).circuit},
      {"oc-one", build_oc_one_body(2).circuit},
      {"oc-two", build_oc_two_body(2).circuit},
      {"select-swap", build_select_swap(t).circuit},
      {"sampling", build_direct_sampling(2).circuit},
      {"occ", build_occ(2, 1).circuit},
      {"uocc", build_uocc(2, 2).circuit},
      {"idf", build_idf(2, 2).circuit},
      {"xor-copy", build_xor_copy(2).circuit},
      {"swx", build_swx(2).circuit},
  };
  const std::vector<std::pair<std::string, int>> classes = {{"one-body", 0}, {"number", 0},       {"two-body", 0},       {"factorized", 0},
                                                            {"nn", 0},       {"ti", 0},           {"eta-one-body", 1},   {"eta-number", 1},
                                                            {"eta-factorized", 1}, {"nn-eta", 1}, {"ti-eta", 1},         {"auto", 0}};
  for (auto& [cls, eta] : classes) {
    EncodeOptions opt;
    if (eta) opt.eta = eta;
    circuits.emplace_back(cls, encode_class(cls, class_template(cls, 2, 7), opt).circuit);
  }
  circuits.emplace_back("qsvt", qsvt_apply(encode_one_body_full(one_body_spec(2, 3)), {0.1, -0.4, 0.7}).circuit);
  double worst = 0;
  std::uint64_t seed = 100;
  for (auto& [name, c] : circuits) {
    const double d = unitarity_defect(c, seed++);
    o.require(d <= 1e-10, name + " defect " + format_real(d));
    worst = std::max(worst, d);
  }

  bool same = true;
  for (const std::string cls : {"auto", "eta-one-body", "ti"}) {
    EncodeOptions opt;
    if (cls == "eta-one-body") opt.eta = 2;
    auto h = class_template(cls, 4, 17);
    same = same && manifest(encode_class(cls, h, opt), opt, CostModel::AndGadget4T).dump() ==
                       manifest(encode_class(cls, class_template(cls, 4, 17), opt), opt, CostModel::AndGadget4T).dump();
  }
  SweepGrid g;
  g.classes = {"one-body", "eta-number"};
  g.etas = {2};
  const auto csv1 = to_csv(sweep(g));
  g.jobs = 2;
  same = same && to_csv(sweep(g)) == csv1;
  o.require(same, "outputs differ between equal-seed runs");
  o.note << circuits.size() << " circuits, worst unitarity defect " << format_real(worst) << ", manifests and sweep byte-identical";
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria = {
      {"block encoding identity, full space", criterion1},
      {"block encoding identity, eta sector", criterion2},
      {"two-body desk check", criterion3},
      {"quantization bound", criterion4},
      {"oracle exhaustives", criterion5},
      {"direct sampling", criterion6},
      {"select-swap formula and scaling", criterion7},
      {"structured encoders", criterion8},
      {"QSP and QSVT", criterion9},
      {"determinism and unitarity", criterion10},
  };
  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      criteria[k].second(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass) ++failures;
    std::string note = o.note.str();
    if (!o.pass) note = "failed: " + o.failures + (note.empty() ? "" : " | " + note);
    std::printf("ACCEPTANCE %zu %s: %s (%s) [%.2fs]\n", k + 1, o.pass ? "PASS" : "FAIL", criteria[k].first.c_str(), note.c_str(), secs);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures;
}
