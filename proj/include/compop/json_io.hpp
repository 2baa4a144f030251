#pragma once

#include <json.hpp>
#include <string>

#include "compop/dirichlet.hpp"
#include "compop/kernels.hpp"
#include "compop/spectral.hpp"
#include "compop/symbols.hpp"
#include "compop/truncated_operator.hpp"

namespace compop {

using nlohmann::json;

// Wire formats (stable):
//   DirichletPolynomial {"terms": [{"n": int, "re": float, "im": float}, ...]}
//   CharacterSample     {"seed": int, "values": [[re, im], ...]}
//   Symbol              {"c0": int, "psi": <DirichletPolynomial>}
//   DiscMap             {"family": str, "params": {...}}
//   PointSequence       {"domain": str, "points": [[re, im], ...]}
//   TruncatedOperator   {"rows": M, "cols": N, "entries": [[i, j, re, im], ...], ...}

json to_json(const DirichletPolynomial& f);
DirichletPolynomial polynomial_from_json(const json& j);

json to_json(const CharacterSample& cs);
CharacterSample character_from_json(const json& j);

json to_json(const Symbol& s);
Symbol symbol_from_json(const json& j);

json to_json(const DiscMap& m);
DiscMap discmap_from_json(const json& j);

json to_json(const PointSequence& s);
PointSequence points_from_json(const json& j, KernelDomain fallback_domain);

json to_json(const SingularSpectrum& s, const std::string& provenance);
json to_json(const EigenSpectrum& s, const std::string& provenance);
json to_json(const DecayFitReport& r);

json operator_to_json(const TruncatedOperator& op);
std::string operator_to_csv(const TruncatedOperator& op);

// Deterministic float formatting (%.17g) used by all CSV writers.
std::string format_double(double v);

} // namespace compop
