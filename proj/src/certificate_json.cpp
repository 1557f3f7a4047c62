#include "fqval/errors.hpp"
#include "fqval/json_io.hpp"

namespace fqval {

namespace {

constexpr const char* kParamFields[] = {"p", "alpha1", "alpha2", "m1", "m2", "g",  "K",  "L",
                                        "R1", "R2",    "S1",     "S2", "b1", "b2", "c1", "c2"};

}  // namespace

mpz_class json_integer(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) throw DomainError(std::string("missing field '") + key + "'");
  const auto& v = j.at(key);
  if (v.is_string()) return parse_integer(v.get<std::string>());
  if (v.is_number_integer()) return mpz_class(std::to_string(v.get<long long>()));
  if (v.is_number_unsigned()) return mpz_class(std::to_string(v.get<unsigned long long>()));
  throw DomainError(std::string("field '") + key + "' must be an integer or a decimal string");
}

ordered_json certificate_to_json(const CertificateParams& c, const std::optional<CertificateVerdict>& verdict) {
  const mpz_class* values[] = {&c.p,  &c.alpha1, &c.alpha2, &c.m1, &c.m2, &c.g,  &c.K,  &c.L,
                               &c.R1, &c.R2,     &c.S1,     &c.S2, &c.b1, &c.b2, &c.c1, &c.c2};
  ordered_json j = ordered_json::object();
  for (std::size_t i = 0; i < std::size(kParamFields); ++i) j[kParamFields[i]] = to_decimal(*values[i]);
  if (verdict) {
    j["verdict"] = verdict->certified ? "Certified" : "NotCertified";
    j["bound"] = verdict->certified ? ordered_json(to_decimal(verdict->bound)) : ordered_json(nullptr);
    for (const auto& o : verdict->outcomes) j[to_string(o.condition)] = to_string(o.outcome);
  }
  return j;
}

CertificateParams certificate_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw DomainError("certificate must be a JSON object");
  auto N = [&](const char* key) {
    mpz_class v = json_integer(j, key);
    if (v < 0) throw DomainError(std::string("field '") + key + "' must be nonnegative");
    return v;
  };
  auto Z = [&](const char* key) { return json_integer(j, key); };
  return {N("p"),  N("alpha1"), N("alpha2"), Z("m1"), Z("m2"), N("g"),  N("K"),  N("L"),
          N("R1"), N("R2"),     N("S1"),     N("S2"), N("b1"), N("b2"), Z("c1"), Z("c2")};
}

ordered_json lemma_to_json(const LemmaInstance& in) {
  ordered_json j;
  j["K"] = in.K;
  j["L"] = in.L;
  j["R"] = in.R;
  j["S"] = in.S;
  j["g"] = in.g;
  j["m1"] = in.m1;
  j["m2"] = in.m2;
  j["c"] = in.c;
  j["pairs"] = ordered_json::array();
  for (const auto& [r, s] : in.pairs) j["pairs"].push_back({r, s});
  return j;
}

LemmaInstance lemma_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw DomainError("lemma instance must be a JSON object");
  auto L = [&](const char* key) {
    mpz_class v = json_integer(j, key);
    if (!v.fits_slong_p()) throw CapExceeded(std::string("field '") + key + "' out of range");
    return v.get_si();
  };
  LemmaInstance in;
  in.K = L("K");
  in.L = L("L");
  in.R = L("R");
  in.S = L("S");
  in.g = L("g");
  in.m1 = L("m1");
  in.m2 = L("m2");
  in.c = L("c");
  if (!j.contains("pairs") || !j.at("pairs").is_array()) throw DomainError("lemma instance needs a 'pairs' array");
  for (const auto& pr : j.at("pairs")) {
    if (!pr.is_array() || pr.size() != 2 || !pr[0].is_number_integer() || !pr[1].is_number_integer())
      throw DomainError("each pair must be [r, s] with integer entries");
    in.pairs.emplace_back(pr[0].get<long>(), pr[1].get<long>());
  }
  return in;
}

}  // namespace fqval
