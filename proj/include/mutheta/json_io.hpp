#pragma once

// JSON persistence.  Canonical form: sorted keys, no whitespace, integers
// only, enabling byte-exact golden files.  F_{p^2} and W_s elements are
// [a, b] pairs; sparse matrices are {"col": {"row": [a,b]}} maps with
// stringified indices.

#include <string>

#include "json.hpp"
#include "mutheta/dieudonne.hpp"
#include "mutheta/fjexp.hpp"

namespace mutheta {

using json = nlohmann::json;

json fq2_to_json(const Fq2& x);
Fq2 fq2_from_json(const json& j, i64 p);

json witt_to_json(const WittElem& x);
WittElem witt_from_json(const json& j, i64 p, i64 s);

json sqz_to_json(const SqzElem& x);

json twisted_map_to_json(const TwistedMap<Fq2>& t);
TwistedMap<Fq2> twisted_map_from_json(const json& j, i64 p);

json space_to_json(const DieudonneSpace& d);
DieudonneSpace space_from_json(const json& j);

json fj_to_json(const FJExpansion& f);
FJExpansion fj_from_json(const json& j);

std::string canonical_dump(const json& j);
json parse_file(const std::string& path);
void write_file(const std::string& path, const json& j);

}  // namespace mutheta
