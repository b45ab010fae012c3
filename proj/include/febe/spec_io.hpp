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

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "febe/fock.hpp"

namespace febe {

using json = nlohmann::ordered_json;

inline std::string format_real(double v) {
  if (v == 0.0) v = 0.0;
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline double parse_real(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (!j.is_string()) throw std::invalid_argument("coefficient must be a decimal string");
  const std::string s = j.get<std::string>();
  double v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw std::invalid_argument("bad coefficient '" + s + "'");
  return v;
}

inline int parse_key(const std::string& s) {
  int v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) throw std::invalid_argument("bad integer key '" + s + "'");
  return v;
}

inline void reject_unknown(const json& j, std::initializer_list<const char*> allowed, const char* where) {
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!ok.count(it.key())) throw std::invalid_argument(std::string("unknown field '") + it.key() + "' in " + where);
}

inline const char* structure_name(StructureKind k) {
  switch (k) {
    case StructureKind::General: return "general";
    case StructureKind::NumberOnly: return "number-only";
    case StructureKind::NearestNeighbor: return "nearest-neighbor";
    case StructureKind::TranslationInvariant: return "translation-invariant";
    case StructureKind::FactorizedNN: return "factorized";
  }
  return "general";
}

inline StructureKind parse_structure_kind(const std::string& s) {
  for (auto k : {StructureKind::General, StructureKind::NumberOnly, StructureKind::NearestNeighbor,
                 StructureKind::TranslationInvariant, StructureKind::FactorizedNN})
    if (s == structure_name(k)) return k;
  throw std::invalid_argument("unknown structure '" + s + "'");
}

inline json to_json(const HamiltonianSpec& h) {
  json j;
  j["n"] = h.n;
  if (h.structure.kind == StructureKind::NearestNeighbor)
    j["structure"] = {{"kind", structure_name(h.structure.kind)}, {"M", h.structure.M}};
  else
    j["structure"] = structure_name(h.structure.kind);
  json ob = json::array();
  for (auto& [k, v] : h.one_body) ob.push_back({k.first, k.second, format_real(v)});
  j["one_body"] = ob;
  json tb = json::array();
  for (auto& [k, v] : h.two_body) tb.push_back({k[0], k[1], k[2], k[3], format_real(v)});
  j["two_body"] = tb;
  if (!h.ti.empty()) {
    json ti = json::object();
    auto dump = [](const std::map<int, double>& m) {
      json o = json::object();
      for (auto& [d, v] : m) o[std::to_string(d)] = format_real(v);
      return o;
    };
    ti["T"] = dump(h.ti.T);
    ti["U"] = dump(h.ti.U);
    ti["V"] = dump(h.ti.V);
    j["ti"] = ti;
  }
  if (h.eta) j["eta"] = *h.eta;
  return j;
}

inline HamiltonianSpec spec_from_json(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("spec must be a JSON object");
  reject_unknown(j, {"n", "structure", "one_body", "two_body", "ti", "eta"}, "spec");
  HamiltonianSpec h;
  h.n = j.at("n").get<int>();
  if (j.contains("structure")) {
    const auto& s = j["structure"];
    if (s.is_string()) {
      h.structure.kind = parse_structure_kind(s.get<std::string>());
    } else {
      reject_unknown(s, {"kind", "M"}, "structure");
      h.structure.kind = parse_structure_kind(s.at("kind").get<std::string>());
      if (s.contains("M")) h.structure.M = s["M"].get<int>();
    }
  }
  if (j.contains("one_body"))
    for (auto& e : j["one_body"]) {
      if (!e.is_array() || e.size() != 3) throw std::invalid_argument("one_body entries are [p,q,h]");
      h.one_body[{e[0].get<int>(), e[1].get<int>()}] += parse_real(e[2]);
    }
  if (j.contains("two_body"))
    for (auto& e : j["two_body"]) {
      if (!e.is_array() || e.size() != 5) throw std::invalid_argument("two_body entries are [p,q,r,s,h]");
      h.two_body[{e[0].get<int>(), e[1].get<int>(), e[2].get<int>(), e[3].get<int>()}] += parse_real(e[4]);
    }
  if (j.contains("ti")) {
    const auto& t = j["ti"];
    reject_unknown(t, {"T", "U", "V"}, "ti");
    auto load = [&](const char* key, std::map<int, double>& dst) {
      if (!t.contains(key)) return;
      for (auto it = t[key].begin(); it != t[key].end(); ++it) dst[parse_key(it.key())] = parse_real(it.value());
    };
    load("T", h.ti.T);
    load("U", h.ti.U);
    load("V", h.ti.V);
  }
  if (j.contains("eta") && !j["eta"].is_null()) h.eta = j["eta"].get<int>();
  validate(h);
  return h;
}

inline HamiltonianSpec read_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return spec_from_json(json::parse(in));
}

inline void write_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << "\n";
}

}  // namespace febe
