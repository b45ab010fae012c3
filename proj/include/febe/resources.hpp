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
#include <cstdint>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "febe/blockenc.hpp"

namespace febe {

// ---------------------------------------------------------------------------
// Closed forms (unit constants, base-2 logs)

struct SelectSwapCost {
  std::uint64_t qubits = 0;
  std::uint64_t t_count = 0;
  std::uint64_t t_depth = 0;
};

inline std::uint64_t ceil_log2(std::uint64_t x) { return static_cast<std::uint64_t>(index_bits(x)); }

inline SelectSwapCost formula_select_swap(std::uint64_t L, std::uint64_t lambda, int m_b) {
  if (L < 1 || lambda < 1 || lambda > L || m_b < 1) throw std::invalid_argument("need 1 <= lambda <= L and m_b >= 1");
  SelectSwapCost c;
  const std::uint64_t groups = (L + lambda - 1) / lambda;
  c.qubits = lambda * static_cast<std::uint64_t>(m_b) + 2 * ceil_log2(L);
  c.t_count = select_swap_t_formula(L, lambda, m_b);
  c.t_depth = groups + ceil_log2(lambda);
  return c;
}

inline std::uint64_t optimal_lambda(std::uint64_t L, int m_b) {
  if (L < 1 || m_b < 1) throw std::invalid_argument("L and m_b must be positive");
  return select_swap_lambda(L, m_b);
}

struct CostFormulaInput {
  std::string cls;
  int n = 0;
  std::uint64_t L = 1;
  std::uint64_t lambda = 1;
  int m_b = 1;
  std::optional<int> eta;
  int M = 1;
};

struct FormulaTerm {
  double coeff = 1;
  std::string term;
  double value = 0;
};

struct FormulaResult {
  std::vector<FormulaTerm> t_terms;
  std::vector<FormulaTerm> depth_terms;
  double t_count = 0;
  double t_depth = 0;
  double qubits = 0;
  double alpha = 0;
  double clifford_leading = 0;
};

inline const std::vector<std::string>& formula_classes() {
  static const std::vector<std::string> names = {"select-swap", "one-body",     "number",     "two-body",      "factorized",
                                                 "eta-one-body", "eta-number",  "eta-factorized", "nn",        "nn-eta",
                                                 "ti",           "ti-eta"};
  return names;
}

/// Subnormalization of each class as the encoders build it (eta padded to a power of two).
inline double class_alpha(const std::string& cls, int n, std::optional<int> eta, int M) {
  const double nd = n, e = eta ? static_cast<double>(next_pow2(static_cast<std::uint64_t>(*eta))) : 0.0;
  auto need_eta = [&] {
    if (!eta) throw std::invalid_argument("class '" + cls + "' needs eta");
  };
  if (cls == "one-body" || cls == "factorized" || cls == "ti") return nd * nd;
  if (cls == "number") return nd;
  if (cls == "two-body") return nd * nd * nd * nd;
  if (cls == "nn") return 2 * nd * M;
  need_eta();
  if (cls == "eta-one-body" || cls == "ti-eta") return nd * e;
  if (cls == "eta-number") return e;
  if (cls == "eta-factorized") return e * e;
  if (cls == "nn-eta") return 2.0 * M * e;
  throw std::invalid_argument("unknown class '" + cls + "'");
}

inline FormulaResult formula_class(const CostFormulaInput& in) {
  const auto& names = formula_classes();
  if (std::find(names.begin(), names.end(), in.cls) == names.end()) throw std::invalid_argument("unknown class '" + in.cls + "'");
  if (in.lambda < 1 || in.lambda > in.L) throw std::invalid_argument("need 1 <= lambda <= L");
  FormulaResult r;
  const double L = static_cast<double>(in.L), lam = static_cast<double>(in.lambda), mb = in.m_b, n = in.n;
  const double groups = std::ceil(L / lam), loglam = std::log2(lam);
  r.clifford_leading = L * mb;
  auto sum = [](const std::vector<FormulaTerm>& ts) {
    double s = 0;
    for (auto& t : ts) s += t.coeff * t.value;
    return s;
  };
  if (in.cls == "select-swap") {
    const auto c = formula_select_swap(in.L, in.lambda, in.m_b);
    r.t_terms = {{4, "ceil(L/lambda)", groups}, {8, "lambda*m_b", lam * mb}};
    r.depth_terms = {{1, "ceil(L/lambda)", groups}, {1, "log(lambda)", loglam}};
    r.t_count = static_cast<double>(c.t_count);
    r.t_depth = sum(r.depth_terms);
    r.qubits = static_cast<double>(c.qubits);
    return r;
  }
  const bool sector = in.cls.find("eta") != std::string::npos;
  if (sector && !in.eta) throw std::invalid_argument("class '" + in.cls + "' needs eta");
  const double lead = sector ? n * std::log2(static_cast<double>(*in.eta)) : n;
  const std::string lead_name = sector ? "n*log(eta)" : "n";
  r.t_terms = {{1, lead_name, lead}, {1, "ceil(L/lambda)", groups}, {1, "lambda*m_b", lam * mb}};
  const double depth_log = in.cls == "eta-one-body" || in.cls == "eta-number" || in.cls == "eta-factorized" ? 1.0 : 2.0;
  r.depth_terms = {{1, lead_name, lead}, {1, "ceil(L/lambda)", groups}, {depth_log, "log(lambda)", loglam}};
  r.t_count = sum(r.t_terms);
  r.t_depth = sum(r.depth_terms);
  r.qubits = n + lam * mb + 2.0 * static_cast<double>(ceil_log2(in.L));
  r.alpha = class_alpha(in.cls, in.n, in.eta, in.M);
  return r;
}

// ---------------------------------------------------------------------------
// Reconciliation

struct Reconciliation {
  double ratio_t = 0;
  double ratio_depth = 0;
  double ratio_qubits = 0;
  bool scaling_ok = true;
};

inline Reconciliation reconcile(const ResourceReport& counted, const FormulaResult& f) {
  Reconciliation r;
  auto ratio = [](double a, double b) { return (a == 0 || b == 0) ? 0.0 : a / b; };
  r.ratio_t = ratio(static_cast<double>(counted.t_count), f.t_count);
  r.ratio_depth = ratio(static_cast<double>(counted.t_depth), f.t_depth);
  r.ratio_qubits = ratio(static_cast<double>(counted.qubit_count), f.qubits);
  return r;
}

/// Least-squares slope of log y against log x.
inline double loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2) throw std::invalid_argument("slope needs two or more points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double k = static_cast<double>(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double x = std::log(xs[i]), y = std::log(ys[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (k * sxy - sx * sy) / (k * sxx - sx * sx);
}

inline bool scaling_ok(const std::vector<double>& xs, const std::vector<double>& ys, double exponent, double tol = 0.15) {
  return std::abs(loglog_slope(xs, ys) - exponent) <= tol;
}

// ---------------------------------------------------------------------------
// Sweep

/// Seeded dyadic instance of the shape each class expects.
inline HamiltonianSpec class_template(const std::string& cls, int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> code(-15, 15);
  auto val = [&] { return code(rng) / 16.0; };
  HamiltonianSpec h;
  h.n = n;
  if (cls == "one-body" || cls == "eta-one-body") {
    for (int p = 0; p < n; ++p)
      for (int q = p; q < n; ++q) h.one_body[{p, q}] = h.one_body[{q, p}] = val();
  } else if (cls == "number" || cls == "eta-number") {
    h.structure = {StructureKind::NumberOnly, 1};
    for (int p = 0; p < n; ++p) h.one_body[{p, p}] = val();
  } else if (cls == "two-body") {
    std::uniform_int_distribution<int> mode(0, n - 1);
    for (int k = 0; k < 2; ++k) {
      const QuadKey key = {mode(rng), mode(rng), mode(rng), mode(rng)};
      const double v = val();
      h.two_body[key] = v;
      h.two_body[{key[3], key[2], key[1], key[0]}] = v;
    }
  } else if (cls == "factorized" || cls == "eta-factorized") {
    h.structure = {StructureKind::FactorizedNN, 1};
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) h.two_body[{p, q, q, p}] = val();
  } else if (cls == "nn" || cls == "nn-eta") {
    h.structure = {StructureKind::NearestNeighbor, 1};
    for (int p = 0; p < n; ++p) {
      const int q = (p + 1) % n;
      h.one_body[{p, q}] = h.one_body[{q, p}] = val();
    }
  } else if (cls == "ti" || cls == "ti-eta") {
    h.structure = {StructureKind::TranslationInvariant, 1};
    for (int d = 0; d < n; ++d) h.ti.T[d] = h.ti.T[-d] = val();
  } else if (cls == "auto") {
    ModelParams mp;
    mp.T = 0.5;
    mp.U = 0.75;
    h = gen_synthetic(mp, n, seed);
  } else {
    throw std::invalid_argument("no template for class '" + cls + "'");
  }
  return h;
}

struct SweepGrid {
  std::vector<std::string> classes = {"one-body"};
  std::vector<int> ns = {4};
  std::vector<int> etas;                    // used by sector classes only
  std::vector<std::uint64_t> lambdas = {0};  // 0 selects the optimal lambda
  std::vector<int> m_bs = {5};
  std::vector<std::uint64_t> Ls = {16};  // select-swap rows only
  CostModel model = CostModel::AndGadget4T;
  std::uint64_t seed = 1;
  int verify_max_n = 4;
  int jobs = 1;
};

struct SweepRow {
  std::string cls;
  int n = 0;
  std::optional<int> eta;
  std::uint64_t L = 0;
  std::uint64_t lambda = 0;
  int m_b = 0;
  double alpha = 0;
  double t_formula = 0;
  long long t_counted = 0;
  double tdepth_formula = 0;
  long long tdepth_counted = 0;
  long long qubits = 0;
  long long clifford_counted = 0;
  std::optional<bool> pass;
};

struct SweepPoint {
  std::string cls;
  int n = 0;
  std::optional<int> eta;
  std::uint64_t lambda = 0;
  int m_b = 0;
  std::uint64_t L = 0;
};

inline SweepRow evaluate_point(const SweepPoint& pt, const SweepGrid& g) {
  SweepRow row;
  row.cls = pt.cls;
  row.n = pt.n;
  row.eta = pt.eta;
  row.m_b = pt.m_b;
  if (pt.cls == "select-swap") {
    std::mt19937_64 rng(g.seed);
    LookupTable t{pt.L, pt.lambda ? pt.lambda : optimal_lambda(pt.L, pt.m_b), pt.m_b, {}};
    for (std::uint64_t l = 0; l < pt.L; ++l) t.words.push_back(rng() & ((std::uint64_t{1} << pt.m_b) - 1));
    t.check();
    auto h = build_select_swap(t);
    const auto counted = count_resources(h.circuit, g.model);
    const auto f = formula_class({"select-swap", 0, t.L, t.lambda, t.m_b, std::nullopt, 1});
    row.L = t.L;
    row.lambda = t.lambda;
    row.t_formula = f.t_count;
    row.tdepth_formula = f.t_depth;
    row.t_counted = counted.t_count;
    row.tdepth_counted = counted.t_depth;
    row.qubits = counted.qubit_count;
    row.clifford_counted = counted.clifford_count;
    const double ratio = f.t_count > 0 ? static_cast<double>(counted.t_count) / f.t_count : 0.0;
    row.pass = ratio >= 0.5 && ratio <= 2.0;
    return row;
  }
  EncodeOptions o;
  o.m_b = pt.m_b;
  if (pt.lambda) o.lambda = pt.lambda;
  o.eta = pt.eta;
  const auto spec = class_template(pt.cls, pt.n, g.seed);
  const auto be = encode_class(pt.cls, spec, o);
  const auto counted = count_resources(be.circuit, g.model);
  std::uint64_t L = be.table.L, lam = be.table.lambda;
  for (auto& p : be.parts) {
    L = std::max(L, p.be.table.L);
    lam = std::max(lam, p.be.table.lambda);
  }
  const std::string fcls = pt.cls == "auto" ? "one-body" : pt.cls;
  const auto f = formula_class({fcls, pt.n, L, lam, pt.m_b, pt.eta, std::max(1, be.M)});
  row.L = L;
  row.lambda = lam;
  row.alpha = be.alpha;
  row.t_formula = f.t_count;
  row.tdepth_formula = f.t_depth;
  row.t_counted = counted.t_count;
  row.tdepth_counted = counted.t_depth;
  row.qubits = counted.qubit_count;
  row.clifford_counted = counted.clifford_count;
  if (pt.n <= g.verify_max_n) row.pass = verify(be).pass;
  return row;
}

inline std::vector<SweepPoint> sweep_points(const SweepGrid& g) {
  std::vector<SweepPoint> pts;
  for (auto& cls : g.classes) {
    if (cls != "select-swap" && cls != "auto") {
      const auto& fc = formula_classes();
      if (std::find(fc.begin(), fc.end(), cls) == fc.end()) throw std::invalid_argument("unknown class '" + cls + "'");
    }
    for (auto lam : g.lambdas)
      if (lam != 0 && !is_pow2(lam)) throw std::invalid_argument("lambda must be a power of two");
    const bool sector = cls.find("eta") != std::string::npos;
    for (int m_b : g.m_bs) {
      if (cls == "select-swap") {
        for (auto L : g.Ls)
          for (auto lam : g.lambdas) {
            if (!is_pow2(L) || lam > L) throw std::invalid_argument("select-swap grid needs power-of-two L with lambda <= L");
            pts.push_back({cls, 0, std::nullopt, lam, m_b, L});
          }
        continue;
      }
      for (int n : g.ns)
        for (auto lam : g.lambdas) {
          if (!sector) {
            pts.push_back({cls, n, std::nullopt, lam, m_b, 0});
            continue;
          }
          if (g.etas.empty()) throw std::invalid_argument("class '" + cls + "' needs at least one eta");
          for (int e : g.etas)
            if (e >= 1 && e <= n) pts.push_back({cls, n, e, lam, m_b, 0});
        }
    }
  }
  return pts;
}

/// Rows come back in grid order whatever the worker count.
inline std::vector<SweepRow> sweep(const SweepGrid& g) {
  const auto pts = sweep_points(g);
  std::vector<SweepRow> rows(pts.size());
  std::vector<std::string> errors(pts.size());
  const int jobs = std::max(1, std::min<int>(g.jobs, static_cast<int>(pts.size())));
  auto work = [&](int w) {
    for (std::size_t i = static_cast<std::size_t>(w); i < pts.size(); i += static_cast<std::size_t>(jobs)) {
      try {
        rows[i] = evaluate_point(pts[i], g);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  if (jobs == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < jobs; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (!e.empty()) throw std::invalid_argument(e);
  return rows;
}

inline const char* sweep_csv_header() {
  return "class,n,eta,L,lambda,m_b,alpha,t_formula,t_counted,tdepth_formula,tdepth_counted,qubits,clifford_counted,pass";
}

inline std::string to_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os << sweep_csv_header() << '\n';
  for (auto& r : rows) {
    os << r.cls << ',' << r.n << ',' << (r.eta ? std::to_string(*r.eta) : "") << ',' << r.L << ',' << r.lambda << ',' << r.m_b << ','
       << format_real(r.alpha) << ',' << format_real(r.t_formula) << ',' << r.t_counted << ',' << format_real(r.tdepth_formula) << ','
       << r.tdepth_counted << ',' << r.qubits << ',' << r.clifford_counted << ',' << (r.pass ? (*r.pass ? "true" : "false") : "") << '\n';
  }
  return os.str();
}

inline json to_json(const std::vector<SweepRow>& rows) {
  json out = json::array();
  for (auto& r : rows) {
    json j;
    j["class"] = r.cls;
    j["n"] = r.n;
    j["eta"] = r.eta ? json(*r.eta) : json(nullptr);
    j["L"] = r.L;
    j["lambda"] = r.lambda;
    j["m_b"] = r.m_b;
    j["alpha"] = r.alpha;
    j["t_formula"] = r.t_formula;
    j["t_counted"] = r.t_counted;
    j["tdepth_formula"] = r.tdepth_formula;
    j["tdepth_counted"] = r.tdepth_counted;
    j["qubits"] = r.qubits;
    j["clifford_counted"] = r.clifford_counted;
    j["pass"] = r.pass ? json(*r.pass) : json(nullptr);
    out.push_back(j);
  }
  return out;
}

inline json to_json(const FormulaResult& f) {
  auto terms = [](const std::vector<FormulaTerm>& ts) {
    json a = json::array();
    for (auto& t : ts) a.push_back({{"coeff", t.coeff}, {"term", t.term}, {"value", t.value}});
    return a;
  };
  json j;
  j["t_terms"] = terms(f.t_terms);
  j["depth_terms"] = terms(f.depth_terms);
  j["t_count"] = f.t_count;
  j["t_depth"] = f.t_depth;
  j["qubits"] = f.qubits;
  j["alpha"] = f.alpha;
  j["clifford_leading"] = f.clifford_leading;
  return j;
}

}  // namespace febe
