// Copyright 2026 The commexp Authors
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

// Scheme files: a JSON document
//
//   {
//     "name": "NCP6_3",
//     "target": {"name": "commutator",
//                "terms": [{"degree": 2, "index": 1, "value": 1}]},
//     "order": 3,
//     "family": "NCP",
//     "provenance": "optimized CP scheme",
//     "slots": [{"generator": "B", "coefficient": 0.3...}, ...]
//   }
//
// A coefficient or term value is a number or a [re, im] pair.  Reals are
// written with 17 significant digits.

#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <fmt/format.h>
#include <json.hpp>

#include "commexp/errors.hpp"
#include "commexp/scheme.hpp"
#include "commexp/target.hpp"

namespace commexp {

namespace detail {

inline std::string json_string(const std::string& s) { return nlohmann::json(s).dump(); }

inline std::string json_scalar(cplx c) {
  if (c.imag() == 0.0) return fmt::format("{:.17g}", c.real());
  return fmt::format("[{:.17g}, {:.17g}]", c.real(), c.imag());
}

inline cplx scalar_from_json(const nlohmann::json& j, const std::string& what) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  throw InvalidArgument("scheme file: " + what + " must be a number or [re, im]");
}

}  // namespace detail

inline std::string scheme_to_json(const Scheme& s) {
  std::ostringstream os;
  os << "{\n";
  os << "  \"name\": " << detail::json_string(s.name) << ",\n";
  os << "  \"target\": {\n    \"name\": " << detail::json_string(s.target.name)
     << ",\n    \"terms\": [";
  bool first = true;
  for (int j = 1; j <= kMaxDegree; ++j)
    for (int l = 1; l <= kLieDimension[j]; ++l) {
      const cplx v = s.target.at(j, l);
      if (v == cplx{}) continue;
      os << (first ? "\n" : ",\n") << "      {\"degree\": " << j << ", \"index\": " << l
         << ", \"value\": " << detail::json_scalar(v) << "}";
      first = false;
    }
  os << (first ? "]\n" : "\n    ]\n") << "  },\n";
  os << "  \"order\": " << s.order << ",\n";
  os << "  \"family\": " << detail::json_string(std::string(to_string(s.family))) << ",\n";
  os << "  \"provenance\": " << detail::json_string(s.provenance) << ",\n";
  os << "  \"slots\": [";
  for (std::size_t i = 0; i < s.slots.size(); ++i)
    os << (i ? ",\n" : "\n") << "    {\"generator\": \"" << to_char(s.slots[i].generator)
       << "\", \"coefficient\": " << detail::json_scalar(s.slots[i].coefficient) << "}";
  os << "\n  ]\n}\n";
  return os.str();
}

/// Parses a scheme document.  The half-pattern of a CP scheme is recovered
/// from its first half when the slots follow the pattern.
inline Scheme scheme_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("scheme file: ") + e.what());
  }
  try {
    Scheme s;
    s.name = j.at("name").get<std::string>();
    const auto& t = j.at("target");
    s.target.name = t.at("name").get<std::string>();
    for (const auto& term : t.at("terms")) {
      const int d = term.at("degree").get<int>();
      const int l = term.at("index").get<int>();
      if (d < 1 || d > kMaxDegree || l < 1 || l > kLieDimension[d])
        throw InvalidArgument(fmt::format("scheme file: no basis element E_{{{},{}}}", d, l));
      s.target.coefficients(d, l) = detail::scalar_from_json(term.at("value"), "term value");
    }
    s.order = j.at("order").get<int>();
    s.family = family_from_string(j.value("family", std::string("general")));
    s.provenance = j.value("provenance", std::string());
    for (const auto& slot : j.at("slots")) {
      const auto g = slot.at("generator").get<std::string>();
      if (g.size() != 1) throw InvalidArgument("scheme file: generator must be \"A\" or \"B\"");
      s.slots.push_back({generator_from_char(g[0]),
                         detail::scalar_from_json(slot.at("coefficient"), "coefficient")});
    }
    validate(s);
    if (s.is_cp() && is_cp_pattern(s.slots, s.cp_sign())) s.half = cp_half_from_slots(s.slots);
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("scheme file: ") + e.what());
  }
}

inline void save_scheme(const Scheme& s, const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write " + path.string());
  f << scheme_to_json(s);
  if (!f) throw Error("cannot write " + path.string());
}

inline Scheme load_scheme(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw InvalidArgument("cannot read " + path.string());
  std::ostringstream os;
  os << f.rdbuf();
  return scheme_from_json(os.str());
}

}  // namespace commexp
