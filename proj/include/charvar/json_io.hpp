#pragma once

// JSON encoding of the library types. Complex numbers are [re, im] pairs,
// matrices [[re,im] x 4] in row order, polynomials [[re,im] x 3] from p0 up.

#include <string>

#include "json.hpp"

#include "charvar/cocycles.hpp"
#include "charvar/goldman.hpp"
#include "charvar/group_algebra.hpp"
#include "charvar/monodromy.hpp"
#include "charvar/schwarzian_lab.hpp"

namespace charvar {

using Json = nlohmann::json;

// Sorted keys, floats as %.17g, non-finite floats as null.
std::string dump_json(const Json& j, int indent = 2);
// Throws InputError with the parser diagnostic on malformed text.
Json parse_json_text(const std::string& text);
Json read_json_file(const std::string& path);

Json to_json(Complex z);
Json to_json(const QuadPoly& p);
Json to_json(const Mat2& m);
Json to_json(const Signature& s);
Json to_json(const GroupRingElement& x);
Json to_json(const IdentityReport& r);
Json to_json(const Representation& r);
Json to_json(const Cocycle& c);
Json to_json(const CocycleResidualReport& r);
Json to_json(const PairingReport& r);
Json to_json(const LambdaIdentityReport& r);
Json to_json(const SphereData& d);
Json to_json(const MonodromyResult& m);
Json to_json(const KawaiReport& r);

Complex complex_from_json(const Json& j);
std::vector<Complex> complex_list_from_json(const Json& j);
QuadPoly poly_from_json(const Json& j);
Mat2 matrix_from_json(const Json& j);
// {"g":2,"elliptic":[],"cusps":0}, or {"g":0,"orders":[0,0,3,0]} with 0 (or "inf") for cusps.
Signature signature_from_json(const Json& j);
Representation representation_from_json(const Json& j);
Cocycle cocycle_from_json(const Json& j, RepresentationPtr base);
// {"points", "orders", "order_infinity", "accessory", "base_point"?}
SphereData sphere_from_json(const Json& j);

}  // namespace charvar
