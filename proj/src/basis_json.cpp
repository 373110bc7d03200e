// Copyright (C) 2026 chipfhe contributors
// SPDX-License-Identifier: Apache-2.0

#include <json.hpp>

#include "chipfhe/modarith.hpp"

namespace chipfhe {

using nlohmann::json;

std::string basis_to_json(const RnsBasis& b) {
  json j;
  j["n"] = b.n;
  j["L"] = b.l_max;
  j["dnum"] = b.dnum;
  j["K"] = b.k;
  j["w"] = b.word_bits;
  j["insecure"] = b.insecure;
  auto list = [](const std::vector<PrimeModulus>& v) {
    json a = json::array();
    for (const auto& m : v) a.push_back(std::to_string(m.q));
    return a;
  };
  j["q"] = list(b.q_list);
  j["p"] = list(b.p_list);
  return j.dump(2);
}

RnsBasis basis_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw FormatError(std::string("basis JSON: ") + e.what());
  }
  RnsBasis b;
  try {
    b.n = j.at("n").get<u64>();
    b.l_max = j.at("L").get<int>();
    b.dnum = j.at("dnum").get<int>();
    b.k = j.at("K").get<int>();
    b.word_bits = j.value("w", 0);
    b.insecure = j.value("insecure", true);
    for (const auto& s : j.at("q")) b.q_list.push_back(make_modulus(std::stoull(s.get<std::string>()), 2 * b.n));
    for (const auto& s : j.at("p")) b.p_list.push_back(make_modulus(std::stoull(s.get<std::string>()), 2 * b.n));
  } catch (const json::exception& e) {
    throw FormatError(std::string("basis JSON: ") + e.what());
  }
  if (static_cast<int>(b.q_list.size()) != b.l_max + 1 || static_cast<int>(b.p_list.size()) != b.k) {
    throw FormatError("basis JSON: prime list lengths disagree with L and K");
  }
  if (b.k * b.dnum < b.l_max + 1) throw FormatError("basis JSON: K*dnum < L+1");
  finalize_basis(b);
  return b;
}

}  // namespace chipfhe
