#include "charvar/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace charvar {

namespace {

void write_string(std::string& out, const std::string& s) { out += Json(s).dump(); }

void write(std::string& out, const Json& j, int indent, int depth) {
  const std::string pad = indent > 0 ? std::string(static_cast<std::size_t>(indent * (depth + 1)), ' ') : "";
  const std::string pad_close = indent > 0 ? std::string(static_cast<std::size_t>(indent * depth), ' ') : "";
  const char* nl = indent > 0 ? "\n" : "";
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{";
      out += nl;
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) {
          out += ",";
          out += nl;
        }
        first = false;
        out += pad;
        write_string(out, it.key());
        out += indent > 0 ? ": " : ":";
        write(out, it.value(), indent, depth + 1);
      }
      out += nl;
      out += pad_close;
      out += "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Short numeric arrays ([re, im] pairs and the like) stay on one line.
      bool flat = j.size() <= 4;
      for (const auto& v : j) flat = flat && (v.is_number() || v.is_null());
      out += "[";
      bool first = true;
      for (const auto& v : j) {
        if (!first) out += flat ? ", " : ",";
        first = false;
        if (!flat) {
          out += nl;
          out += pad;
        }
        write(out, v, indent, depth + 1);
      }
      if (!flat) {
        out += nl;
        out += pad_close;
      }
      out += "]";
      return;
    }
    case Json::value_t::number_float: {
      const double x = j.get<double>();
      if (!std::isfinite(x)) {
        out += "null";
        return;
      }
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", x);
      out += buf;
      return;
    }
    default:
      out += j.dump();
  }
}

const Json& member(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw InputError(std::string("missing field '") + key + "'");
  return j.at(key);
}

int order_from_json(const Json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf" || s == "cusp" || s == "infinity") return Signature::kCusp;
    throw InputError("order must be an integer >= 2, 0 or \"inf\", got \"" + s + "\"");
  }
  if (!j.is_number_integer()) throw InputError("order must be an integer");
  const int o = j.get<int>();
  if (o != Signature::kCusp && o < 2) throw InputError("order must be >= 2 or 0 for a cusp");
  return o;
}

Json order_to_json(int o) { return o == Signature::kCusp ? Json("inf") : Json(o); }

}  // namespace

std::string dump_json(const Json& j, int indent) {
  std::string out;
  write(out, j, indent, 0);
  out += "\n";
  return out;
}

Json parse_json_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InputError(std::string("malformed JSON: ") + e.what());
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json_text(ss.str());
}

Json to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Json to_json(const QuadPoly& p) { return Json::array({to_json(p.p0), to_json(p.p1), to_json(p.p2)}); }

Json to_json(const Mat2& m) { return Json::array({to_json(m.a), to_json(m.b), to_json(m.c), to_json(m.d)}); }

Json to_json(const Signature& s) {
  Json orders = Json::array();
  for (int o : s.marked_orders()) orders.push_back(o);
  return {{"g", s.genus()}, {"elliptic", s.elliptic_orders()}, {"cusps", s.cusps()}, {"orders", orders},
          {"dimension", s.dimension()}, {"hyperbolic", s.hyperbolic()}};
}

Json to_json(const GroupRingElement& x) {
  Json terms = Json::array();
  for (const auto& [w, n] : x.terms()) terms.push_back({{"word", w.str()}, {"coefficient", n}});
  return terms;
}

Json to_json(const IdentityReport& r) {
  Json checks = Json::array();
  for (const auto& c : r.checks)
    checks.push_back(
        {{"identity", c.identity}, {"status", c.pass ? "pass" : "fail"}, {"required", c.required}, {"witness", c.witness}});
  return {{"signature", to_json(r.signature)}, {"checks", checks}, {"all_required_pass", r.all_required_pass()}};
}

Json to_json(const Representation& r) {
  Json images = Json::object();
  for (const auto& [g, m] : r.images()) images[g.name()] = to_json(m.matrix());
  return {{"signature", to_json(r.signature())}, {"images", images}};
}

Json to_json(const Cocycle& c) {
  Json out = Json::object();
  for (const auto& [g, p] : c.values()) out[g.name()] = to_json(p);
  return out;
}

Json to_json(const CocycleResidualReport& r) {
  Json local = Json::array();
  for (const auto& l : r.local)
    local.push_back({{"generator", l.gen.name()},
                     {"residual", l.residual},
                     {"kernel_dim", l.kernel_dim},
                     {"solvable", l.solvable}});
  return {{"relator_residual", r.relator_residual}, {"relator_scale", r.relator_scale}, {"local", local},
          {"max_local_residual", r.max_local_residual()}};
}

Json to_json(const PairingReport& r) {
  Json p2 = Json::array();
  for (const auto& p : r.p2_list) p2.push_back(to_json(p));
  return {{"value", to_json(r.value)},
          {"scale", r.scale},
          {"terms", {{"handles", to_json(r.handle_terms)}, {"marked", to_json(r.marked_terms)},
                     {"corrections", to_json(r.correction_terms)}}},
          {"p2_list", p2},
          {"residuals",
           {{"cocycle1", to_json(r.chi1_residuals)},
            {"cocycle2", to_json(r.chi2_residuals)},
            {"p2_local", r.local_residuals},
            {"kernel_dims", r.kernel_dims}}},
          {"global_sign", r.global_sign}};
}

Json to_json(const LambdaIdentityReport& r) {
  Json res = Json::object();
  for (const auto& [k, v] : r.residuals) res[k] = v;
  return {{"residuals", res}, {"group_order", r.group_order}, {"samples", r.samples}};
}

Json to_json(const SphereData& d) {
  Json pts = Json::array(), orders = Json::array(), res = Json::array();
  for (std::size_t j = 0; j < d.size(); ++j) {
    pts.push_back(to_json(d.points[j]));
    orders.push_back(order_to_json(d.orders[j]));
    res.push_back(to_json(d.residues[j]));
  }
  Json out = {{"points", pts}, {"orders", orders}, {"order_infinity", order_to_json(d.order_infinity)},
              {"residues", res}};
  Json acc = Json::array();
  for (const Complex& c : d.accessory()) acc.push_back(to_json(c));
  out["accessory"] = acc;
  if (d.base_point) out["base_point"] = to_json(*d.base_point);
  return out;
}

Json to_json(const MonodromyResult& m) {
  Json order = Json::array(), traces = Json::array();
  for (const auto& l : m.lassos.loops)
    order.push_back(l.encircled == static_cast<int>(m.lassos.loops.size()) - 1 ? Json("inf") : Json(l.encircled));
  for (const auto& t : m.check.traces)
    traces.push_back({{"generator", t.gen.name()},
                      {"order", order_to_json(t.order)},
                      {"trace", to_json(m.rep.image(t.gen).trace())},
                      {"residual", t.residual}});
  return {{"representation", to_json(m.rep)},
          {"lasso_order", order},
          {"base_point", to_json(m.lassos.base)},
          {"relation_residual", m.relation_residual},
          {"wronskian_drift", m.max_wronskian_drift},
          {"traces", traces}};
}

Json to_json(const KawaiReport& r) {
  Json grid = Json::array();
  for (const auto& g : r.grid) {
    Json omega = Json::array();
    for (const auto& row : g.omega) {
      Json jr = Json::array();
      for (const Complex& v : row) jr.push_back(to_json(v));
      omega.push_back(jr);
    }
    Json dp = Json::array(), dc = Json::array();
    for (const Complex& v : g.offset.dp) dp.push_back(to_json(v));
    for (const Complex& v : g.offset.dc) dc.push_back(to_json(v));
    grid.push_back({{"dp", dp},
                    {"dc", dc},
                    {"omega", omega},
                    {"fiber_isotropy", g.fiber_isotropy},
                    {"antisymmetry", g.antisymmetry},
                    {"max_local_residual", g.max_local_residual},
                    {"max_relator_residual", g.max_relator_residual},
                    {"max_fd_agreement", g.max_fd_agreement},
                    {"relation_residual", g.relation_residual},
                    {"wronskian_drift", g.max_wronskian_drift}});
  }
  return {{"labels", r.labels},     {"num_c", r.num_c},
          {"num_t", r.num_t},       {"grid", grid},
          {"fiber_isotropy", r.fiber_isotropy}, {"c_spread", r.c_spread},
          {"antisymmetry", r.antisymmetry}};
}

// ---------------------------------------------------------------------------

Complex complex_from_json(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  throw InputError("expected a complex number [re, im], got " + j.dump());
}

std::vector<Complex> complex_list_from_json(const Json& j) {
  if (!j.is_array()) throw InputError("expected a list of complex numbers");
  std::vector<Complex> out;
  for (const auto& v : j) out.push_back(complex_from_json(v));
  return out;
}

QuadPoly poly_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 3) throw InputError("polynomial must be [[re,im] x 3]");
  return {complex_from_json(j[0]), complex_from_json(j[1]), complex_from_json(j[2])};
}

Mat2 matrix_from_json(const Json& j) {
  if (!j.is_array()) throw InputError("matrix must be [[re,im] x 4]");
  if (j.size() == 2 && j[0].is_array() && j[0].size() == 2 && j[0][0].is_array())
    return {complex_from_json(j[0][0]), complex_from_json(j[0][1]), complex_from_json(j[1][0]),
            complex_from_json(j[1][1])};
  if (j.size() != 4) throw InputError("matrix must be [[re,im] x 4]");
  return {complex_from_json(j[0]), complex_from_json(j[1]), complex_from_json(j[2]), complex_from_json(j[3])};
}

Signature signature_from_json(const Json& j) {
  if (!j.is_object()) throw InputError("signature must be a JSON object");
  const int g = j.value("g", 0);
  if (g < 0) throw InputError("genus must be non-negative");
  if (j.contains("orders")) {
    std::vector<int> orders;
    for (const auto& o : j.at("orders")) orders.push_back(order_from_json(o));
    return Signature::with_marked_orders(g, orders);
  }
  std::vector<int> elliptic;
  if (j.contains("elliptic"))
    for (const auto& o : j.at("elliptic")) {
      const int e = order_from_json(o);
      if (e == Signature::kCusp) throw InputError("elliptic orders must be >= 2");
      elliptic.push_back(e);
    }
  const int cusps = j.value("cusps", 0);
  if (cusps < 0) throw InputError("cusp count must be non-negative");
  return Signature(g, elliptic, cusps);
}

Representation representation_from_json(const Json& j) {
  const Signature sig = signature_from_json(member(j, "signature"));
  std::map<Generator, MoebiusMap> images;
  const Json& im = member(j, "images");
  if (!im.is_object()) throw InputError("images must be an object keyed by generator");
  for (auto it = im.begin(); it != im.end(); ++it) {
    try {
      images.emplace(Generator::from_name(it.key()), MoebiusMap(matrix_from_json(it.value())));
    } catch (const std::invalid_argument& e) {
      throw InputError("image of " + it.key() + ": " + e.what());
    }
  }
  return Representation(sig, std::move(images));
}

Cocycle cocycle_from_json(const Json& j, RepresentationPtr base) {
  if (!j.is_object()) throw InputError("cocycle must be an object keyed by generator");
  std::map<Generator, QuadPoly> values;
  for (auto it = j.begin(); it != j.end(); ++it) values.emplace(Generator::from_name(it.key()), poly_from_json(it.value()));
  return Cocycle(std::move(base), std::move(values));
}

SphereData sphere_from_json(const Json& j) {
  const auto points = complex_list_from_json(member(j, "points"));
  std::vector<int> orders;
  if (j.contains("orders")) {
    for (const auto& o : j.at("orders")) orders.push_back(order_from_json(o));
  } else {
    orders.assign(points.size(), Signature::kCusp);
  }
  const int oinf = j.contains("order_infinity") ? order_from_json(j.at("order_infinity")) : Signature::kCusp;
  std::vector<Complex> acc;
  if (j.contains("accessory")) acc = complex_list_from_json(j.at("accessory"));
  std::optional<Complex> base;
  if (j.contains("base_point") && !j.at("base_point").is_null()) base = complex_from_json(j.at("base_point"));
  return build_potential(points, orders, oinf, acc, base);
}

}  // namespace charvar
