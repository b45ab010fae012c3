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

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "febe/resources.hpp"
#include "febe/spec_io.hpp"

namespace febe::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitUsage = 2;

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct RunConfig {
  std::string command;
  std::string input;
  std::string manifest;
  std::string output;
  std::string circuit_out;
  std::string cls = "auto";
  std::string model = "hubbard";
  int n = 4;
  std::optional<int> eta;
  int m_b = 5;
  std::string lambda = "auto";
  std::string cost_model = "AndGadget4T";
  std::string boundary = "torus";
  std::uint64_t seed = 1;
  int jobs = 1;
  std::uint64_t L = 16;
  double T = 1.0, U = 2.0, V = 0.5;
  std::string format = "csv";
  int verify_max_n = 4;
  std::vector<std::string> sweep_classes = {"one-body"};
  std::vector<int> sweep_ns = {4};
  std::vector<int> sweep_etas;
  std::vector<std::string> sweep_lambdas = {"auto"};
  std::vector<int> sweep_m_bs = {5};
  std::vector<std::uint64_t> sweep_Ls = {16};
};

/// 0 stands for "auto".
inline std::uint64_t parse_lambda(const std::string& s) {
  if (s == "auto") return 0;
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(s, &used);
  } catch (const std::exception&) {
    throw UsageError("--lambda must be 'auto' or a power of two");
  }
  if (used != s.size() || !is_pow2(v)) throw UsageError("--lambda must be 'auto' or a power of two");
  return v;
}

inline int resolve_jobs(int flag) {
  if (const char* env = std::getenv("FEBE_JOBS"); env && *env) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < 1) throw UsageError("FEBE_JOBS must be a positive integer");
    return static_cast<int>(v);
  }
  if (flag < 1) throw UsageError("--jobs must be positive");
  return flag;
}

inline bool sector_class(const std::string& cls) { return cls.find("eta") != std::string::npos; }

inline ModelKind parse_model(const std::string& s) {
  if (s == "hubbard") return ModelKind::Hubbard;
  if (s == "extended-hubbard") return ModelKind::ExtendedHubbard;
  if (s == "ti-factorized") return ModelKind::TIFactorized;
  if (s == "localized") return ModelKind::Localized;
  throw UsageError("unknown model '" + s + "'");
}

/// The part of `h` a named encoder class acts on, plus a note of what was left out.
inline std::pair<HamiltonianSpec, std::vector<std::string>> restrict_to_class(const std::string& cls, const HamiltonianSpec& h) {
  if (cls == "auto") return {h, {}};
  HamiltonianSpec s;
  s.n = h.n;
  s.eta = h.eta;
  s.structure = h.structure;
  std::vector<std::string> dropped;
  const bool two = cls == "two-body" || cls == "factorized" || cls == "eta-factorized";
  const bool number = cls == "number" || cls == "eta-number";
  const bool ti = cls == "ti" || cls == "ti-eta";
  if (two) {
    s.two_body = h.two_body;
    s.ti.V = h.ti.V;
    if (!h.one_body.empty() || !h.ti.T.empty() || !h.ti.U.empty()) dropped.push_back("one-body");
  } else if (ti) {
    s.ti.T = h.ti.T;
    if (!h.one_body.empty() || !h.ti.U.empty()) dropped.push_back("non-translation-invariant one-body");
    if (h.has_two_body()) dropped.push_back("two-body");
  } else {
    for (auto& [k, v] : h.one_body)
      if (!number || k.first == k.second) s.one_body[k] = v;
    if (number && s.one_body.size() != h.one_body.size()) dropped.push_back("off-diagonal one-body");
    if (!number) s.ti.T = h.ti.T;
    s.ti.U = h.ti.U;
    if (h.has_two_body()) dropped.push_back("two-body");
  }
  return {s, dropped};
}

inline std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline json read_json_file(const std::string& path) {
  try {
    return json::parse(read_text(path));
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
}

inline void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << text;
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

struct Encoded {
  BlockEncoding be;
  EncodeOptions options;
  HamiltonianSpec spec;
  std::vector<std::string> dropped;
};

inline EncodeOptions options_from(const RunConfig& c) {
  EncodeOptions o;
  o.m_b = c.m_b;
  if (const auto lam = parse_lambda(c.lambda)) o.lambda = lam;
  o.eta = c.eta;
  o.torus = c.boundary == "torus";
  return o;
}

inline Encoded encode_from(const RunConfig& c, const HamiltonianSpec& input) {
  Encoded e;
  std::tie(e.spec, e.dropped) = restrict_to_class(c.cls, input);
  e.options = options_from(c);
  if (!e.options.eta && sector_class(c.cls)) e.options.eta = input.eta;
  e.be = encode_class(c.cls, e.spec, e.options);
  return e;
}

inline json encode_manifest(const Encoded& e, const RunConfig& c) {
  json m = manifest(e.be, e.options, parse_cost_model(c.cost_model));
  m["encoder"] = c.cls;
  m["lambda_request"] = c.lambda;
  m["boundary"] = c.boundary;
  json d = json::array();
  for (auto& s : e.dropped) d.push_back(s);
  m["dropped_terms"] = d;
  m["spec"] = to_json(e.spec);
  return m;
}

inline BlockEncoding rebuild(const json& m) {
  for (const char* k : {"encoder", "spec", "m_b", "eta", "params"})
    if (!m.contains(k)) throw std::invalid_argument(std::string("manifest lacks '") + k + "'");
  const auto spec = spec_from_json(m.at("spec"));
  const auto o = options_from_manifest(m);
  const auto tables = tables_from_manifest(m);
  return encode_class(m.at("encoder").get<std::string>(), spec, o, &tables);
}

// ---------------------------------------------------------------------------
// Commands

inline int cmd_gen(const RunConfig& c, std::ostream& out) {
  ModelParams mp;
  mp.kind = parse_model(c.model);
  mp.T = c.T;
  mp.U = c.U;
  mp.V = c.V;
  auto h = gen_synthetic(mp, c.n, c.seed);
  if (c.eta) {
    if (*c.eta < 1 || *c.eta > c.n) throw UsageError("--eta must lie in [1, n]");
    h.eta = c.eta;
  }
  emit(c.output, dump(to_json(h)), out);
  return kExitOk;
}

inline int cmd_encode(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const auto e = encode_from(c, read_spec(c.input));
  for (auto& d : e.dropped) err << "note: class " << c.cls << " leaves out the " << d << " terms\n";
  emit(c.output, dump(encode_manifest(e, c)), out);
  if (!c.circuit_out.empty()) emit(c.circuit_out, export_text(lower(e.be.circuit, parse_cost_model(c.cost_model))), out);
  return kExitOk;
}

inline int cmd_verify(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const json m = read_json_file(c.manifest);
  const auto be = rebuild(m);
  auto r = verify(be, std::nullopt, c.jobs);
  json j = to_json(r);
  const bool consistent = m.contains("alpha") && m.at("alpha").get<double>() == be.alpha && m.value("n", -1) == be.n;
  j["manifest_consistent"] = consistent;
  if (!consistent) j["pass"] = false;
  emit(c.output, dump(j), out);
  if (!r.pass || !consistent) {
    err << "verification failed: max deviation " << format_real(r.max_abs_dev) << " against budget " << format_real(r.eps_bound)
        << (consistent ? "" : ", manifest fields disagree with the rebuilt encoding") << "\n";
    return kExitVerifyFailed;
  }
  return kExitOk;
}

inline json reconcile_json(const Reconciliation& r) {
  json j;
  j["ratio_t"] = r.ratio_t;
  j["ratio_depth"] = r.ratio_depth;
  j["ratio_qubits"] = r.ratio_qubits;
  j["scaling_ok"] = r.scaling_ok;
  return j;
}

inline int cmd_estimate(const RunConfig& c, std::ostream& out) {
  const CostModel model = parse_cost_model(c.cost_model);
  json j;
  j["class"] = c.cls;
  j["cost_model"] = cost_model_name(model);
  if (c.cls == "select-swap") {
    if (!is_pow2(c.L)) throw UsageError("--L must be a power of two");
    std::uint64_t lam = parse_lambda(c.lambda);
    if (lam == 0) lam = optimal_lambda(c.L, c.m_b);
    if (lam > c.L) throw UsageError("--lambda must not exceed --L");
    std::mt19937_64 rng(c.seed);
    LookupTable t{c.L, lam, c.m_b, {}};
    for (std::uint64_t l = 0; l < c.L; ++l) t.words.push_back(rng() & ((std::uint64_t{1} << c.m_b) - 1));
    const auto counted = count_resources(build_select_swap(t).circuit, model);
    const auto f = formula_class({"select-swap", 0, c.L, lam, c.m_b, std::nullopt, 1});
    j["L"] = c.L;
    j["lambda"] = lam;
    j["m_b"] = c.m_b;
    j["formula"] = to_json(f);
    j["counted"] = to_json(counted);
    j["reconcile"] = reconcile_json(reconcile(counted, f));
  } else {
    const auto spec = c.input.empty() ? class_template(c.cls, c.n, c.seed) : read_spec(c.input);
    const auto e = encode_from(c, spec);
    std::uint64_t L = e.be.table.L, lam = e.be.table.lambda;
    for (auto& p : e.be.parts) {
      L = std::max(L, p.be.table.L);
      lam = std::max(lam, p.be.table.lambda);
    }
    const std::string fcls = c.cls == "auto" ? (e.be.eta ? "eta-one-body" : "one-body") : c.cls;
    const auto f = formula_class({fcls, e.be.n, L, lam, c.m_b, e.be.eta, std::max(1, e.be.M)});
    const auto counted = count_resources(e.be.circuit, model);
    j["n"] = e.be.n;
    j["eta"] = e.be.eta ? json(*e.be.eta) : json(nullptr);
    j["L"] = L;
    j["lambda"] = lam;
    j["m_b"] = c.m_b;
    j["alpha"] = e.be.alpha;
    j["formula"] = to_json(f);
    j["counted"] = to_json(counted);
    j["reconcile"] = reconcile_json(reconcile(counted, f));
  }
  emit(c.output, dump(j), out);
  return kExitOk;
}

inline int cmd_sweep(const RunConfig& c, std::ostream& out) {
  SweepGrid g;
  g.classes = c.sweep_classes;
  g.ns = c.sweep_ns;
  g.etas = c.sweep_etas;
  g.lambdas.clear();
  for (auto& s : c.sweep_lambdas) g.lambdas.push_back(parse_lambda(s));
  g.m_bs = c.sweep_m_bs;
  g.Ls = c.sweep_Ls;
  g.model = parse_cost_model(c.cost_model);
  g.seed = c.seed;
  g.verify_max_n = c.verify_max_n;
  g.jobs = c.jobs;
  const auto rows = sweep(g);
  emit(c.output, c.format == "json" ? dump(to_json(rows)) : to_csv(rows), out);
  return kExitOk;
}

inline int cmd_export(const RunConfig& c, std::ostream& out) {
  BlockEncoding be;
  if (!c.manifest.empty())
    be = rebuild(read_json_file(c.manifest));
  else
    be = encode_from(c, read_spec(c.input)).be;
  emit(c.output, export_text(lower(be.circuit, parse_cost_model(c.cost_model))), out);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// Entry point

inline void validate(RunConfig& c, const CLI::App& app) {
  auto given = [&](const char* sub, const char* opt) { return app.get_subcommand(sub)->count(opt) > 0; };
  const auto& cmd = c.command;
  parse_cost_model(c.cost_model);
  if (c.boundary != "torus" && c.boundary != "open") throw UsageError("--boundary must be torus or open");
  if (c.m_b < 1 || c.m_b > 32) throw UsageError("--m-b must lie in [1, 32]");
  if (c.n < 1) throw UsageError("--n must be positive");
  parse_lambda(c.lambda);
  c.jobs = resolve_jobs(c.jobs);
  if (cmd == "encode" || cmd == "estimate" || cmd == "export") {
    const auto& names = encoder_classes();
    const bool known = std::find(names.begin(), names.end(), c.cls) != names.end() || (cmd == "estimate" && c.cls == "select-swap");
    if (!known) throw UsageError("unknown class '" + c.cls + "'");
    if (c.eta && c.cls != "auto" && !sector_class(c.cls)) throw UsageError("--eta only applies to sector classes and auto");
  }
  if (cmd == "encode" && c.input.empty()) throw UsageError("encode needs --in");
  if (cmd == "export" && c.input.empty() == c.manifest.empty()) throw UsageError("export needs exactly one of --in and --manifest");
  if (cmd == "estimate" && c.cls == "select-swap" && !given("estimate", "--L")) throw UsageError("select-swap estimate needs --L");
  if (cmd == "sweep" && c.format != "csv" && c.format != "json") throw UsageError("--format must be csv or json");
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Fermionic block-encoding compiler"};
  app.name("febe");
  app.require_subcommand(1);
  auto common = [&](CLI::App* s) {
    s->add_option("--out,-o", c.output, "Output path (default stdout)");
    s->add_option("--seed", c.seed, "Random seed");
    s->add_option("--jobs", c.jobs, "Worker threads (FEBE_JOBS overrides)");
    s->add_option("--cost-model", c.cost_model, "Deterministic7T or AndGadget4T");
  };
  auto encoding = [&](CLI::App* s) {
    s->add_option("--class", c.cls, "Encoder class");
    s->add_option("--eta", c.eta, "Particle number");
    s->add_option("--m-b", c.m_b, "Word length in bits");
    s->add_option("--lambda", c.lambda, "Group size or 'auto'");
    s->add_option("--boundary", c.boundary, "torus or open");
  };

  auto* gen = app.add_subcommand("gen", "Write a synthetic Hamiltonian spec");
  common(gen);
  gen->add_option("--model", c.model, "hubbard, extended-hubbard, ti-factorized or localized");
  gen->add_option("--n", c.n, "Mode count");
  gen->add_option("--eta", c.eta, "Particle number stored in the spec");
  gen->add_option("--T", c.T, "Hopping");
  gen->add_option("--U", c.U, "On-site interaction");
  gen->add_option("--V", c.V, "Neighbour interaction");

  auto* enc = app.add_subcommand("encode", "Compile a spec into a block encoding manifest");
  common(enc);
  encoding(enc);
  enc->add_option("--in,-i", c.input, "Spec JSON");
  enc->add_option("--circuit", c.circuit_out, "Also write the lowered circuit text here");

  auto* ver = app.add_subcommand("verify", "Rebuild a manifest and check its block against the spec");
  common(ver);
  ver->add_option("manifest,--manifest", c.manifest, "Manifest JSON")->required();

  auto* est = app.add_subcommand("estimate", "Closed-form and counted costs");
  common(est);
  encoding(est);
  est->add_option("--in,-i", c.input, "Spec JSON (default: seeded template)");
  est->add_option("--n", c.n, "Mode count for the template");
  est->add_option("--L", c.L, "Table size for select-swap");

  auto* swp = app.add_subcommand("sweep", "Formula against counted costs over a grid");
  common(swp);
  swp->add_option("--class", c.sweep_classes, "Classes")->delimiter(',');
  swp->add_option("--n", c.sweep_ns, "Mode counts")->delimiter(',');
  swp->add_option("--eta", c.sweep_etas, "Particle numbers")->delimiter(',');
  swp->add_option("--lambda", c.sweep_lambdas, "Group sizes or 'auto'")->delimiter(',');
  swp->add_option("--m-b", c.sweep_m_bs, "Word lengths")->delimiter(',');
  swp->add_option("--L", c.sweep_Ls, "Table sizes for select-swap rows")->delimiter(',');
  swp->add_option("--format", c.format, "csv or json");
  swp->add_option("--verify-max-n", c.verify_max_n, "Verify rows up to this mode count");

  auto* exp = app.add_subcommand("export", "Write the lowered circuit text");
  common(exp);
  encoding(exp);
  exp->add_option("--in,-i", c.input, "Spec JSON");
  exp->add_option("--manifest", c.manifest, "Manifest JSON");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }
  c.command = app.get_subcommands().front()->get_name();
  try {
    validate(c, app);
    if (c.command == "gen") return cmd_gen(c, out);
    if (c.command == "encode") return cmd_encode(c, out, err);
    if (c.command == "verify") return cmd_verify(c, out, err);
    if (c.command == "estimate") return cmd_estimate(c, out);
    if (c.command == "sweep") return cmd_sweep(c, out);
    return cmd_export(c, out);
  } catch (const std::exception& e) {
    err << "febe " << c.command << ": " << e.what() << "\n";
    return kExitUsage;
  }
}

inline int run(int argc, char** argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, out, err);
}

}  // namespace febe::cli
