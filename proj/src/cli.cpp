#include "charvar/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "charvar/json_io.hpp"

#ifndef CHARVAR_VERSION
#define CHARVAR_VERSION "0.0.0"
#endif

namespace charvar {

namespace {

using Tolerances = std::map<std::string, double>;

const std::map<std::string, Tolerances>& default_tolerances() {
  static const std::map<std::string, Tolerances> t{
      {"fox", {}},
      {"identities", {}},
      {"goldman", {{"relator", 1e-8}, {"local", 1e-6}}},
      {"lambda-check", {{"lambda", 1e-9}, {"b3", 1e-8}, {"lambda4", 1e-8}}},
      {"monodromy", {{"trace", 1e-6}, {"relation", 1e-6}, {"wronskian", 1e-9}}},
      {"kawai",
       {{"fiber_isotropy", 1e-4},
        {"c_spread", 1e-3},
        {"antisymmetry", 1e-8},
        {"local", 1e-6},
        {"fd_agreement", 1e-5},
        {"relation", 1e-6},
        {"wronskian", 1e-9}}},
  };
  return t;
}

struct RunConfig {
  std::string command;
  std::string sig;
  std::string word;
  std::string gen;
  std::string input;
  std::string json;
  std::string config;
  std::string output;
  std::vector<std::string> tol;
  bool verbose = false;
};

void apply_overrides(Tolerances& tol, const Json& obj, const std::string& command) {
  if (!obj.is_object()) throw InputError("tolerances must be an object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!tol.count(it.key())) throw InputError("unknown tolerance '" + it.key() + "' for " + command);
    if (!it.value().is_number()) throw InputError("tolerance '" + it.key() + "' must be a number");
    tol[it.key()] = it.value().get<double>();
  }
}

void apply_overrides(Tolerances& tol, const std::vector<std::string>& kv, const std::string& command) {
  for (const std::string& s : kv) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw InputError("--tol expects key=value, got '" + s + "'");
    const std::string key = s.substr(0, eq);
    if (!tol.count(key)) throw InputError("unknown tolerance '" + key + "' for " + command);
    try {
      std::size_t used = 0;
      tol[key] = std::stod(s.substr(eq + 1), &used);
      if (used != s.size() - eq - 1) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      throw InputError("bad tolerance value in '" + s + "'");
    }
  }
}

// Input bundle from --input (file) or --json (inline text).
Json load_input(const RunConfig& rc, bool required) {
  if (!rc.input.empty() && !rc.json.empty()) throw InputError("give either --input or --json, not both");
  if (!rc.input.empty()) return read_json_file(rc.input);
  if (!rc.json.empty()) return parse_json_text(rc.json);
  if (!rc.config.empty()) return read_json_file(rc.config);
  if (required) throw InputError(rc.command + " needs --input, --json or --config");
  return Json::object();
}

struct Check {
  std::vector<std::string> failures;
  void at_most(const std::string& what, double value, double tol) {
    if (!(value <= tol)) failures.push_back(what);
  }
};

Json cmd_fox(const RunConfig& rc) {
  if (rc.sig.empty() || rc.word.empty() || rc.gen.empty()) throw InputError("fox needs --sig, --word and --gen");
  const Signature sig = signature_from_json(parse_json_text(rc.sig));
  const FreeWord w = parse_word(rc.word, sig);
  const Generator x = Generator::from_name(rc.gen);
  if (!sig.contains(x)) throw InputError("generator " + rc.gen + " not in signature " + sig.str());
  const GroupRingElement d = fox_derivative(w, x);
  return {{"signature", to_json(sig)},
          {"word", w.str()},
          {"generator", x.name()},
          {"derivative", to_json(d)},
          {"derivative_text", d.str()},
          {"anti_involution", to_json(anti_involution(d))}};
}

Json cmd_identities(const RunConfig& rc, Check& chk) {
  if (rc.sig.empty()) throw InputError("identities needs --sig");
  const IdentityReport r = verify_presentation_identities(signature_from_json(parse_json_text(rc.sig)));
  for (const auto& c : r.checks)
    if (c.required && !c.pass) chk.failures.push_back(c.identity);
  return to_json(r);
}

Json cmd_goldman(const RunConfig& rc, const Tolerances& tol, Check& chk) {
  const Json in = load_input(rc, true);
  auto rho = std::make_shared<const Representation>(representation_from_json(in.at("representation")));
  const Cocycle c1 = cocycle_from_json(in.at("cocycle1"), rho);
  const Cocycle c2 = cocycle_from_json(in.at("cocycle2"), rho);
  const PairingReport p = goldman_pairing(*rho, c1, c2);
  chk.at_most("cocycle1.relator", p.chi1_residuals.relator_residual, tol.at("relator"));
  chk.at_most("cocycle2.relator", p.chi2_residuals.relator_residual, tol.at("relator"));
  chk.at_most("cocycle1.local", p.chi1_residuals.max_local_residual(), tol.at("local"));
  chk.at_most("cocycle2.local", p.chi2_residuals.max_local_residual(), tol.at("local"));
  Json out = to_json(p);
  out["form"] = rho->signature().closed() ? "closed" : "orbifold";
  return out;
}

JetProvider provider_from_json(const Json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "exp") return exp_provider();
    throw InputError("unknown function '" + j.get<std::string>() + "'");
  }
  return polynomial_provider(complex_list_from_json(j));
}

Json cmd_lambda(const RunConfig& rc, const Tolerances& tol, Check& chk) {
  const Json in = load_input(rc, false);
  const auto seed = in.value("seed", std::uint64_t{1});
  const int samples = in.value("samples", 20);
  IdentityInputs inputs = default_identity_inputs(seed, samples);
  inputs.order = in.value("order", Jet::kDefaultOrder);
  if (in.contains("f")) inputs.f = provider_from_json(in.at("f"));
  if (in.contains("P")) inputs.P = poly_from_json(in.at("P"));
  if (in.contains("gamma")) inputs.gamma = MoebiusMap(matrix_from_json(in.at("gamma")));
  if (in.contains("samples_at")) inputs.samples = complex_list_from_json(in.at("samples_at"));
  const LambdaIdentityReport r = check_identities(inputs);
  for (const auto& [k, v] : r.residuals) chk.at_most(k, v, k == "b3" ? tol.at("b3") : tol.at("lambda"));
  Json out = to_json(r);

  Json cases = in.contains("lambda4") ? in.at("lambda4")
                                      : Json::array({{{"f", Json::array({0.0, 1.0})},
                                                      {"Q", Json::array({6.0})},
                                                      {"z0", 0.0},
                                                      {"z1", Json::array({0.7, 0.3})}},
                                                     {{"f", "exp"},
                                                      {"Q", Json::array({1.0, 2.0, 0.5})},
                                                      {"z0", 0.0},
                                                      {"z1", Json::array({1.0, 1.0})},
                                                      {"abc", Json::array({0.5, -1.0, 0.25})}}});
  Json solved = Json::array();
  double worst = 0.0;
  for (const auto& c : cases) {
    std::array<Complex, 3> abc{};
    if (c.contains("abc")) {
      const auto v = complex_list_from_json(c.at("abc"));
      if (v.size() != 3) throw InputError("abc needs three constants");
      abc = {v[0], v[1], v[2]};
    }
    const LambdaSolution s = solve_lambda(provider_from_json(c.at("f")), provider_from_json(c.at("Q")),
                                          complex_from_json(c.value("z0", Json(0.0))), complex_from_json(c.at("z1")),
                                          abc, inputs.order);
    worst = std::max(worst, s.residual);
    solved.push_back({{"value", to_json(s.value)}, {"residual", s.residual}, {"levels", s.levels}});
  }
  chk.at_most("lambda4", worst, tol.at("lambda4"));
  out["lambda4"] = solved;
  return out;
}

Json cmd_monodromy(const RunConfig& rc, const Tolerances& tol, Check& chk) {
  const Json in = load_input(rc, true);
  const SphereData d = sphere_from_json(in.contains("sphere") ? in.at("sphere") : in);
  const MonodromyResult m = monodromy_representation(d);
  chk.at_most("relation", m.relation_residual, tol.at("relation"));
  chk.at_most("trace", m.check.max_trace_residual(), tol.at("trace"));
  chk.at_most("wronskian", m.max_wronskian_drift, tol.at("wronskian"));
  Json out = to_json(m);
  out["sphere"] = to_json(d);
  return out;
}

// Kawai configs carry the sphere either inline or under "sphere".
const Json& member_or_self(const Json& j) { return j.contains("sphere") ? j.at("sphere") : j; }

Json cmd_kawai(const RunConfig& rc, Tolerances& tol, Check& chk) {
  if (rc.config.empty() && rc.input.empty() && rc.json.empty()) throw InputError("kawai needs --config");
  const Json in = load_input(rc, true);
  if (in.contains("tolerances")) apply_overrides(tol, in.at("tolerances"), "kawai");
  apply_overrides(tol, rc.tol, "kawai");
  KawaiConfig cfg;
  cfg.base = sphere_from_json(member_or_self(in));
  if (in.contains("t_directions"))
    for (const auto& v : in.at("t_directions")) cfg.t_directions.push_back(complex_list_from_json(v));
  cfg.fd.h = in.value("h", cfg.fd.h);
  cfg.fd.richardson = in.value("richardson", cfg.fd.richardson);
  cfg.fd.agreement_tol = tol.at("fd_agreement");
  cfg.threads = in.value("threads", 0);
  if (in.contains("grid")) {
    cfg.grid.clear();
    for (const auto& g : in.at("grid")) {
      GridOffset off;
      if (g.contains("dp")) off.dp = complex_list_from_json(g.at("dp"));
      if (g.contains("dc")) off.dc = complex_list_from_json(g.at("dc"));
      cfg.grid.push_back(off);
    }
  }
  const KawaiReport r = kawai_experiment(cfg);
  chk.at_most("fiber_isotropy", r.fiber_isotropy, tol.at("fiber_isotropy"));
  chk.at_most("c_spread", r.c_spread, tol.at("c_spread"));
  chk.at_most("antisymmetry", r.antisymmetry, tol.at("antisymmetry"));
  double local = 0.0, agree = 0.0, rel = 0.0, wr = 0.0;
  for (const auto& g : r.grid) {
    local = std::max(local, g.max_local_residual);
    agree = std::max(agree, g.max_fd_agreement);
    rel = std::max(rel, g.relation_residual);
    wr = std::max(wr, g.max_wronskian_drift);
  }
  chk.at_most("local", local, tol.at("local"));
  chk.at_most("fd_agreement", agree, tol.at("fd_agreement"));
  chk.at_most("relation", rel, tol.at("relation"));
  chk.at_most("wronskian", wr, tol.at("wronskian"));
  Json out = to_json(r);
  out["h"] = cfg.fd.h;
  return out;
}

}  // namespace

CliOutcome run_cli(const std::vector<std::string>& args) {
  CliOutcome out;
  RunConfig rc;
  CLI::App app{"charvar: Goldman pairings and Schwarzian monodromy", "charvar"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(CHARVAR_VERSION));

  auto common = [&](CLI::App* sub) {
    sub->add_option("--output,-o", rc.output, "Write the JSON report to this file");
    sub->add_option("--tol", rc.tol, "Tolerance override key=value (repeatable)");
    sub->add_flag("--verbose,-v", rc.verbose, "Print diagnostics to stderr");
  };
  auto* fox = app.add_subcommand("fox", "Fox derivative of a word");
  fox->add_option("--sig", rc.sig, "Signature JSON")->required();
  fox->add_option("--word", rc.word, "Word, e.g. 'a1 b1 a1^-1' or R")->required();
  fox->add_option("--gen", rc.gen, "Generator, e.g. a1")->required();
  auto* ident = app.add_subcommand("identities", "Check the presentation word identities");
  ident->add_option("--sig", rc.sig, "Signature JSON")->required();
  auto* gold = app.add_subcommand("goldman", "Goldman pairing of two cocycles");
  auto* lam = app.add_subcommand("lambda-check", "Jet checks of the Lambda operator and B form");
  auto* mono = app.add_subcommand("monodromy", "Monodromy representation of a marked sphere");
  auto* kaw = app.add_subcommand("kawai", "Pairings of accessory and point-motion deformations");
  for (auto* sub : {gold, lam, mono, kaw}) {
    sub->add_option("--input,-i", rc.input, "JSON input file");
    sub->add_option("--json", rc.json, "Inline JSON input");
    sub->add_option("--config,-c", rc.config, "JSON config file");
  }
  for (auto* sub : {fox, ident, gold, lam, mono, kaw}) common(sub);

  std::ostringstream help_out, help_err;
  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, help_out, help_err);
    out.diagnostics = help_out.str() + help_err.str();
    out.exit_code = code == 0 ? 0 : 1;
    return out;
  }
  for (auto* sub : app.get_subcommands()) rc.command = sub->get_name();

  Tolerances tol = default_tolerances().at(rc.command);
  Check chk;
  Json payload;
  Json error = nullptr;
  try {
    if (rc.command != "kawai") apply_overrides(tol, rc.tol, rc.command);
    if (rc.command == "fox") payload = cmd_fox(rc);
    else if (rc.command == "identities") payload = cmd_identities(rc, chk);
    else if (rc.command == "goldman") payload = cmd_goldman(rc, tol, chk);
    else if (rc.command == "lambda-check") payload = cmd_lambda(rc, tol, chk);
    else if (rc.command == "monodromy") payload = cmd_monodromy(rc, tol, chk);
    else payload = cmd_kawai(rc, tol, chk);
  } catch (const InputError& e) {
    out.exit_code = 1;
    out.diagnostics = std::string("input error: ") + e.what() + "\n";
    return out;
  } catch (const Json::exception& e) {
    out.exit_code = 1;
    out.diagnostics = std::string("input error: ") + e.what() + "\n";
    return out;
  } catch (const std::invalid_argument& e) {
    out.exit_code = 1;
    out.diagnostics = std::string("input error: ") + e.what() + "\n";
    return out;
  } catch (const std::exception& e) {
    // Numerical failures (non-parabolic cocycles, integration, branch jumps) still produce a report.
    error = e.what();
    chk.failures.push_back("error");
  }

  Json report = payload.is_object() ? payload : Json::object();
  report["command"] = rc.command;
  report["version"] = CHARVAR_VERSION;
  Json jt = Json::object();
  for (const auto& [k, v] : tol) jt[k] = v;
  report["tolerances"] = jt;
  report["failures"] = chk.failures;
  report["status"] = chk.failures.empty() ? "ok" : "tolerance_failure";
  if (!error.is_null()) report["error"] = error;
  out.report = dump_json(report);
  out.exit_code = chk.failures.empty() ? 0 : 2;
  if (rc.verbose || !chk.failures.empty()) {
    std::ostringstream d;
    d << rc.command << ": " << (chk.failures.empty() ? "ok" : "tolerance failure");
    for (const auto& f : chk.failures) d << " [" << f << "]";
    if (!error.is_null()) d << " " << error.get<std::string>();
    d << "\n";
    out.diagnostics += d.str();
  }
  if (!rc.output.empty()) {
    std::ofstream f(rc.output);
    if (!f) {
      out.exit_code = 1;
      out.diagnostics += "cannot write " + rc.output + "\n";
      return out;
    }
    f << out.report;
  }
  return out;
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  const bool to_file = std::find(args.begin(), args.end(), "--output") != args.end() ||
                       std::find(args.begin(), args.end(), "-o") != args.end();
  const CliOutcome o = run_cli(args);
  if (!o.report.empty() && !to_file) std::cout << o.report;
  if (!o.diagnostics.empty()) (o.exit_code == 0 && o.report.empty() ? std::cout : std::cerr) << o.diagnostics;
  return o.exit_code;
}

}  // namespace charvar
