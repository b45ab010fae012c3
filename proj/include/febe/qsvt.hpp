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

#include <cmath>
#include <complex>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "febe/blockenc.hpp"

namespace febe {

using PhaseSequence = std::vector<double>;

/// Wx: signal W(t) = exp(i arccos(t) X), zero phases give Chebyshev T_d.
/// Reflection: signal [[t, s], [s, -t]] with the (-i)^d prefactor.
enum class QspConvention { Wx, Reflection };

inline void check_phases(const PhaseSequence& phis) {
  if (phis.empty()) throw std::invalid_argument("phase sequence needs at least one angle");
  for (double p : phis)
    if (!std::isfinite(p)) throw std::invalid_argument("phase sequence has a non-finite angle");
}

/// Reflection-convention phases producing the same p(t) as Wx phases `phis`.
inline PhaseSequence to_reflection(PhaseSequence phis) {
  check_phases(phis);
  const std::size_t d = phis.size() - 1;
  if (d == 0) return phis;
  phis[0] += std::numbers::pi / 4;
  phis[d] += std::numbers::pi / 4;
  for (std::size_t j = 1; j < d; ++j) phis[j] += std::numbers::pi / 2;
  return phis;
}

inline Eigen::Matrix2cd qsp_scalar(const PhaseSequence& phis, double t, QspConvention conv = QspConvention::Wx) {
  check_phases(phis);
  if (std::abs(t) > 1.0) throw std::invalid_argument("signal must lie in [-1, 1]");
  const double s = std::sqrt(1.0 - t * t);
  const cplx I(0, 1);
  auto ez = [&](double p) {
    Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
    m(0, 0) = std::exp(I * p);
    m(1, 1) = std::exp(-I * p);
    return m;
  };
  Eigen::Matrix2cd sig;
  if (conv == QspConvention::Wx)
    sig << t, I * s, I * s, t;
  else
    sig << t, s, s, -t;
  Eigen::Matrix2cd m = ez(phis[0]);
  for (std::size_t j = 1; j < phis.size(); ++j) m = m * sig * ez(phis[j]);
  if (conv == QspConvention::Reflection) m *= std::pow(-I, static_cast<double>(phis.size() - 1));
  return m;
}

inline cplx qsp_poly(const PhaseSequence& phis, double t) { return qsp_scalar(phis, t)(0, 0); }

/// Re p(A) for Hermitian A via its eigendecomposition.
inline Eigen::MatrixXcd poly_real_part(const PhaseSequence& phis, const Eigen::MatrixXcd& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a);
  Eigen::VectorXd ev = es.eigenvalues();
  for (Eigen::Index i = 0; i < ev.size(); ++i) ev(i) = qsp_poly(phis, std::clamp(ev(i), -1.0, 1.0)).real();
  return es.eigenvectors() * ev.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
}

inline bool hermitian_spec(const HamiltonianSpec& h) {
  auto close = [](double a, double b) { return std::abs(a - b) <= 1e-12; };
  for (auto& [k, v] : h.one_body) {
    auto it = h.one_body.find({k.second, k.first});
    if (!close(v, it == h.one_body.end() ? 0.0 : it->second)) return false;
  }
  for (auto& [k, v] : h.two_body) {
    auto it = h.two_body.find({k[3], k[2], k[1], k[0]});
    if (!close(v, it == h.two_body.end() ? 0.0 : it->second)) return false;
  }
  for (auto& [d, v] : h.ti.T) {
    auto it = h.ti.T.find(-d);
    if (!close(v, it == h.ti.T.end() ? 0.0 : it->second)) return false;
  }
  return true;
}

/// Block encoding of Re p(H / alpha) for Wx phases, with alpha = 1.
/// One extra qubit carries the projector-controlled rotations; its Hadamard
/// pair averages p and its conjugate.
inline BlockEncoding qsvt_apply(const BlockEncoding& be, const PhaseSequence& phis) {
  check_phases(phis);
  if (!hermitian_spec(be.encoded)) throw std::invalid_argument("QSVT needs a Hermitian block");
  const auto psi = to_reflection(phis);
  const std::size_t d = phis.size() - 1;

  Circuit c;
  c.qubit_count = be.circuit.qubit_count;
  c.registers = be.circuit.registers;
  const int a = c.add_register("qsvt", 1, Role::Validation)[0];
  std::vector<Control> zero;
  for (int q : be.anc_mask) zero.push_back(off(q));
  auto rotate = [&](double phi) {
    c.mcx(zero, a);
    c.rz(a, 2 * phi);
    c.mcx(zero, a);
  };
  const Circuit dag = adjoint(be.circuit);
  c.h(a);
  if (d > 0) c.rz(a, static_cast<double>(d) * std::numbers::pi);
  for (std::size_t k = d; k >= 1; --k) {
    rotate(psi[k]);
    c.append((d - k) % 2 == 0 ? be.circuit : dag);
  }
  rotate(psi[0]);
  c.h(a);

  BlockEncoding out;
  out.circuit = std::move(c);
  out.system_qubits = be.system_qubits;
  out.anc_mask = be.anc_mask;
  out.anc_mask.push_back(a);
  out.alpha = 1;
  out.cls = "qsvt";
  out.n = be.n;
  out.eta = be.eta;
  out.encoded = be.encoded;
  return out;
}

inline PhaseSequence read_phases(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open phase file " + path);
  PhaseSequence out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::size_t used = 0;
    const double v = std::stod(line, &used);
    if (line.find_first_not_of(" \t\r", used) != std::string::npos) throw std::invalid_argument("bad phase line: " + line);
    out.push_back(v);
  }
  check_phases(out);
  return out;
}

inline std::string format_phases(const PhaseSequence& phis) {
  std::ostringstream os;
  for (double p : phis) os << format_real(p) << '\n';
  return os.str();
}

}  // namespace febe
