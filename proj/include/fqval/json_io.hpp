#pragma once

#include <optional>
#include <string>

#include "fqval/certificate.hpp"
#include "json.hpp"

namespace fqval {

using ordered_json = nlohmann::ordered_json;

/// Canonical certificate object. Field order is fixed: p, alpha1, alpha2,
/// m1, m2, g, K, L, R1, R2, S1, S2, b1, b2, c1, c2, then (when a verdict is
/// supplied) verdict, bound, alpha_products, linear_forms, main_inequality.
/// All integers are decimal strings.
ordered_json certificate_to_json(const CertificateParams& params,
                                 const std::optional<CertificateVerdict>& verdict = std::nullopt);

/// Accepts integers either as decimal strings or JSON numbers. Verdict
/// fields, if present, are ignored.
CertificateParams certificate_from_json(const nlohmann::json& j);

ordered_json lemma_to_json(const LemmaInstance& inst);
LemmaInstance lemma_from_json(const nlohmann::json& j);

/// Reads an integer field stored as a decimal string or a JSON integer.
mpz_class json_integer(const nlohmann::json& j, const char* key);

}  // namespace fqval
