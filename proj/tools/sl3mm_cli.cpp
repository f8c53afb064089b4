#include "sl3mm/fusion32.hpp"
#include "sl3mm/topspace.hpp"
#include "sl3mm/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

using json = nlohmann::ordered_json;
using namespace sl3mm;

namespace {

constexpr int kSchemaVersion = 1;

enum Exit { kOk = 0, kUsage = 1, kDomain = 2, kInternal = 3 };

struct Globals {
  std::int64_t u{3};
  std::int64_t v{2};
  std::string format{"text"};
  bool json() const { return format == "json"; }
};

// Default for --order and --radius; SL3MM_TRUNCATION overrides it.
int truncationDefault(int fallback) {
  if (const char* env = std::getenv("SL3MM_TRUNCATION")) {
    try {
      return std::stoi(env);
    } catch (const std::exception&) {
      throw std::invalid_argument("SL3MM_TRUNCATION must be an integer, got '" + std::string(env) + "'");
    }
  }
  return fallback;
}

json toJson(const Weight& w) { return json::array({toString(w.d1), toString(w.d2)}); }
json toJson(const Coweight& c) { return json::array({c.c1, c.c2}); }
json toJson(const Triple& t) { return json::array({t[0], t[1], t[2]}); }

json toJson(const GrClass& g) {
  json terms = json::array();
  for (const auto& [m, n] : g.terms()) terms.push_back({{"label", toString(m)}, {"multiplicity", n}});
  return terms;
}

json toJson(const FourierPoly& p) {
  json terms = json::array();
  for (const auto& [x, c] : p.terms()) terms.push_back({{"frequency", toJson(x)}, {"coefficient", toString(c)}});
  return terms;
}

Weight parseWeight(const std::string& s) {
  auto comma = s.find(',');
  if (comma == std::string::npos) throw ParseError("expected a weight 'a,b', got '" + s + "'");
  return {parseRational(s.substr(0, comma)), parseRational(s.substr(comma + 1))};
}

Coweight parseCoweight(const std::string& s) {
  Weight w = parseWeight(s);
  if (w.d1.denominator() != 1 || w.d2.denominator() != 1) throw ParseError("expected an integral coweight, got '" + s + "'");
  return {w.d1.numerator(), w.d2.numerator()};
}

D6Element parseD6Word(const std::string& word) {
  // reuse the label grammar: a D6 word is a label prefix
  return parseLabel(word + " H(0,0)").twist;
}

void emit(const Globals& g, const json& j, const std::string& text) {
  if (g.json()) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << "\n";
  }
}

json envelope(const std::string& command) { return {{"schemaVersion", kSchemaVersion}, {"command", command}}; }

const char* typeName(AdmType t) { return t == AdmType::Planar ? "planar" : "reflected"; }

// ---------------------------------------------------------------------------

int cmdClassify(const Globals& g) {
  Level lvl = makeAdmissibleLevel(g.u, g.v);
  auto adm = enumerateAdmissible(lvl);
  AdmCounts k = counts(lvl);
  json j = envelope("classify");
  j["level"] = {{"u", lvl.u}, {"v", lvl.v}, {"k", toString(lvl.k())}};
  j["centralCharge"] = toString(centralCharge(lvl));
  std::string text = "level k = " + toString(lvl.k()) + ", c = " + toString(centralCharge(lvl)) + "\n";
  json hw = json::array(), semi = json::array(), rel = json::array();
  std::map<std::string, json> fractional;
  text += "highest weights:\n";
  for (const auto& a : adm) {
    ClassTag t = classify(a, lvl);
    Rational delta = conformalWeight(a.weight, lvl);
    json tags = json::array();
    if (t.fdimTop) tags.push_back("fdimTop");
    if (t.inSigma1) tags.push_back("Sigma1");
    if (t.inR1) tags.push_back("R1");
    if (t.inR2) tags.push_back("R2");
    if (t.inR3) tags.push_back("R3");
    hw.push_back({{"label", toString(canonicalize(makeHW(a.weight, lvl), lvl))},
                  {"weight", toJson(a.weight)},
                  {"conformalWeight", toString(delta)},
                  {"type", typeName(a.type)},
                  {"integralPart", toJson(a.integralPart)},
                  {"fractionalPart", toJson(a.fractionalPart)},
                  {"orbit", toString(t.orbit)},
                  {"tags", tags}});
    text += "  " + toString(a.weight) + "  Delta = " + toString(delta) + "  " + typeName(a.type) + "  " +
            toString(t.orbit);
    for (const auto& s : tags) text += " " + s.get<std::string>();
    text += "\n";
    if (t.inSigma1) semi.push_back({{"weight", toJson(a.weight)}, {"conformalWeight", toString(delta)}});
    if (t.inR2) rel.push_back({{"weight", toJson(a.weight)}, {"conformalWeight", toString(delta)}});
    auto key = toJson(a.fractionalPart).dump();
    fractional[key].push_back({{"type", typeName(a.type)}, {"integralPart", toJson(a.integralPart)}});
  }
  j["highestWeights"] = hw;
  j["semirelaxedFamilies"] = semi;
  j["relaxedFamilies"] = rel;
  j["counts"] = {{"adm", k.adm}, {"fdimTop", k.fdimTop}, {"sigma1", k.sigma1}, {"r2", k.r2}};
  json table = json::array();
  for (const auto& [key, entries] : fractional)
    table.push_back({{"fractionalPart", json::parse(key)}, {"weights", entries}});
  j["fractionalPartTable"] = table;
  text += "semirelaxed families: " + std::to_string(semi.size()) + ", relaxed families: " + std::to_string(rel.size()) +
          "\ncounts (adm, fdimTop, sigma1, r2) = (" + std::to_string(k.adm) + ", " + std::to_string(k.fdimTop) + ", " +
          std::to_string(k.sigma1) + ", " + std::to_string(k.r2) + ")\n";
  emit(g, j, text);
  return kOk;
}

int cmdLabelResult(const Globals& g, const std::string& command, const std::string& input, const ModuleLabel& result) {
  Level lvl = makeAdmissibleLevel(g.u, g.v);
  CanonicalLabel c = canonicalize(result, lvl);
  json j = envelope(command);
  j["input"] = input;
  j["canonical"] = toString(c);
  emit(g, j, toString(c));
  return kOk;
}

int cmdDegen(const Globals& g, const std::string& label) {
  Level lvl = makeAdmissibleLevel(g.u, g.v);
  // grammar-only parse: degenerate parameters are exactly what this command accepts
  ModuleLabel m = parseLabel(label);
  GrClass d = decomposeLabel(m, lvl);
  json j = envelope("degen");
  j["input"] = label;
  j["irreducible"] = d.terms().size() == 1 && d.terms().begin()->second == 1;
  j["atypicality"] = atypicalityDegree(m, lvl);
  j["terms"] = toJson(d);
  emit(g, j, toString(d));
  return kOk;
}

int cmdOrbit(const Globals& g, const std::string& label) {
  Level lvl = makeAdmissibleLevel(g.u, g.v);
  FlowOrbit o = positiveEnergyOrbit(parseLabel(label, lvl), lvl);
  json j = envelope("orbit");
  j["input"] = label;
  json nodes = json::array(), edges = json::array();
  std::string text;
  for (const auto& [flow, m] : o.nodes) {
    nodes.push_back({{"flow", toJson(flow)}, {"label", toString(m)}});
    text += toString(flow) + "  " + toString(m) + "\n";
  }
  for (const auto& [a, b] : o.edges) {
    edges.push_back({toJson(a), toJson(b)});
    text += "edge " + toString(a) + " -- " + toString(b) + "\n";
  }
  j["nodes"] = nodes;
  j["edges"] = edges;
  emit(g, j, text);
  return kOk;
}

int cmdFuse(const Globals& g, const std::string& a, const std::string& b) {
  Level lvl = makeAdmissibleLevel(g.u, g.v);
  requireModularLevel(lvl);
  ModuleLabel x = parseLabel(a, lvl), y = parseLabel(b, lvl);
  GrClass p = fuse(x, y);
  json j = envelope("fuse");
  j["left"] = toString(canonicalize(x, lvl));
  j["right"] = toString(canonicalize(y, lvl));
  j["terms"] = toJson(p);
  j["dimension"] = dimensionRep(p);
  emit(g, j, toString(p));
  return kOk;
}

struct SMatrixArgs {
  std::string kind;
  std::string xi{"0,0"};
  std::string xip{"0,0"};
  std::string mu{"0,0"};
  std::string twistWord{"e"};
  std::string hw{"0"};
  bool opposite{false};
  int order{-1};
};

HWWeight parseHWWeight(const std::string& s) {
  if (s == "0") return HWWeight::Zero;
  if (s == "w1") return HWWeight::MinusThreeHalvesOmega1;
  if (s == "w2") return HWWeight::MinusThreeHalvesOmega2;
  if (s == "rho") return HWWeight::MinusHalfRho;
  throw ParseError("unknown highest weight '" + s + "' (expected 0, w1, w2 or rho)");
}

int cmdSMatrix(const Globals& g, const SMatrixArgs& a) {
  Level lvl = makeAdmissibleLevel(g.u, g.v);
  requireModularLevel(lvl);
  Coweight xi = parseCoweight(a.xi), xip = parseCoweight(a.xip);
  SMatrixEntry e;
  if (a.kind == "standard") {
    e = standardSEntry(xi, parseWeight(a.mu), xip);
  } else if (a.kind == "semi") {
    D6Element tw = a.twistWord == "e" ? d6::e : parseD6Word(a.twistWord);
    e = semiRelaxedSEntry(xi, xip, parseWeight(a.mu), tw, a.opposite);
  } else {
    e = hwSEntry(xi, parseHWWeight(a.hw), xip);
  }
  json j = envelope("smatrix");
  j["kind"] = a.kind;
  j["numerator"] = toJson(e.value.numerator);
  j["denominator"] = toJson(e.value.denominator);
  j["cone"] = json::array({toJson(e.value.cone1), toJson(e.value.cone2)});
  std::string text = "numerator:   " + toString(e.value.numerator) + "\ndenominator: " + toString(e.value.denominator) +
                     "\ncone:        " + toString(e.value.cone1) + ", " + toString(e.value.cone2) + "\n";
  if (a.order >= 0) {
    FourierPoly x = coneExpand(e.value, a.order);
    j["expansion"] = {{"order", a.order}, {"terms", toJson(x)}};
    text += "expansion to order " + std::to_string(a.order) + ": " + toString(x) + "\n";
  }
  emit(g, j, text);
  return kOk;
}

int cmdChar(const Globals& g, const std::string& label, int order) {
  Level lvl = makeAdmissibleLevel(g.u, g.v);
  requireModularLevel(lvl);
  if (order < 0 || order > 10000) throw std::invalid_argument("--order must lie in [0, 10000]");
  CanonicalLabel m = canonicalize(parseLabel(label, lvl), lvl);
  if (m.core.kind != CoreKind::Rel || !(m.flow == Coweight{}))
    throw DomainError("q-expansions are tabulated for unflowed relaxed modules; " + toString(m) + " is not one");
  // every weight of the dense top space carries the same string of multiplicities
  std::int64_t top = m.core.lambda.d2.numerator() + 1;
  QSeries s = etaInvFourth(static_cast<std::size_t>(order));
  for (auto& c : s.coefficients) c *= top;
  s.leadingExponent = conformalWeight(m.core.lambda, lvl) - centralCharge(lvl) / 24;
  json j = envelope("char");
  j["label"] = toString(m);
  j["conformalWeight"] = toString(conformalWeight(m.core.lambda, lvl));
  j["leadingExponent"] = toString(s.leadingExponent);
  j["topMultiplicity"] = top;
  json coeffs = json::array();
  for (const auto& c : s.coefficients) coeffs.push_back(c.get_str());
  j["weightMultiplicities"] = coeffs;
  emit(g, j, toString(s, static_cast<std::size_t>(order) + 1));
  return kOk;
}

int cmdVerify(const Globals& g, const std::string& suite) {
  auto results = runVerifySuite(suite);
  json j = envelope("verify");
  j["suite"] = suite;
  json arr = json::array();
  std::string text;
  std::size_t failed = 0;
  for (const auto& r : results) {
    arr.push_back({{"suite", r.suite}, {"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
    text += std::string(r.passed ? "PASS " : "FAIL ") + r.suite + ": " + r.name + (r.detail.empty() ? "" : "  (" + r.detail + ")") + "\n";
    if (!r.passed) ++failed;
  }
  j["results"] = arr;
  j["failed"] = failed;
  text += std::to_string(results.size() - failed) + "/" + std::to_string(results.size()) + " checks passed\n";
  emit(g, j, text);
  return failed == 0 ? kOk : kInternal;
}

int cmdPlotWeights(const Globals& g, const std::string& label, const std::string& out, int radius) {
  Level lvl = makeAdmissibleLevel(g.u, g.v);
  ModuleLabel m = parseLabel(label, lvl);
  auto points = topSpaceSupport(m, lvl, radius);
  bool asJson = out.size() >= 5 && out.compare(out.size() - 5, 5, ".json") == 0;
  std::ofstream f(out);
  if (!f) throw std::invalid_argument("cannot open '" + out + "' for writing");
  if (asJson) {
    json pts = json::array();
    for (const auto& p : points) pts.push_back({{"d1", toString(p.weight.d1)}, {"d2", toString(p.weight.d2)}, {"multiplicity", p.multiplicity}});
    json doc = envelope("plot-weights");
    doc["label"] = toString(canonicalize(m, lvl));
    doc["radius"] = radius;
    doc["points"] = pts;
    f << doc.dump(2) << "\n";
  } else {
    f << "d1,d2,x,y,multiplicity\n";
    for (const auto& p : points) {
      // Cartesian position in the weight plane, omega1 = (1,0), omega2 = (1/2, sqrt(3)/2)
      double d1 = toDouble(p.weight.d1), d2 = toDouble(p.weight.d2);
      f << toString(p.weight.d1) << "," << toString(p.weight.d2) << "," << d1 + d2 / 2 << "," << d2 * 0.8660254037844386
        << "," << p.multiplicity << "\n";
    }
  }
  json j = envelope("plot-weights");
  j["label"] = toString(canonicalize(m, lvl));
  j["out"] = out;
  j["points"] = points.size();
  emit(g, j, "wrote " + std::to_string(points.size()) + " points to " + out);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact computations for the admissible-level sl3 minimal models"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--u", g.u, "level numerator u (k = -3 + u/v)")->capture_default_str();
  app.add_option("--v", g.v, "level denominator v")->capture_default_str();
  app.add_option("--format", g.format, "output format")->check(CLI::IsMember({"text", "json"}))->capture_default_str();

  std::function<int()> action;
  std::string label, label2, word, c1, c2, out;
  int order = -1, radius = -1;
  std::string suite = "all";
  SMatrixArgs sm;

  auto* classify = app.add_subcommand("classify", "admissible spectrum, counts, orbit tags and fractional-part table");
  classify->callback([&] { action = [&] { return cmdClassify(g); }; });

  auto* canon = app.add_subcommand("canon", "canonical form of a module label");
  canon->add_option("LABEL", label)->required();
  canon->callback([&] {
    action = [&] { return cmdLabelResult(g, "canon", label, parseLabel(label, makeAdmissibleLevel(g.u, g.v))); };
  });

  auto* tw = app.add_subcommand("twist", "apply a D6 word to a label");
  tw->add_option("G", word, "word over w1 w2 w3 d c")->required();
  tw->add_option("LABEL", label)->required();
  tw->callback([&] {
    action = [&] {
      return cmdLabelResult(g, "twist", label, twist(parseD6Word(word), parseLabel(label, makeAdmissibleLevel(g.u, g.v))));
    };
  });

  auto* fl = app.add_subcommand("flow", "apply spectral flow by the coweight (C1, C2)");
  fl->add_option("C1", c1)->required();
  fl->add_option("C2", c2)->required();
  fl->add_option("LABEL", label)->required();
  fl->callback([&] {
    action = [&] {
      Coweight x = parseCoweight(c1 + "," + c2);
      return cmdLabelResult(g, "flow", label, flowApply(x, parseLabel(label, makeAdmissibleLevel(g.u, g.v))));
    };
  });

  auto* degen = app.add_subcommand("degen", "decompose a module into irreducibles");
  degen->add_option("LABEL", label)->required();
  degen->callback([&] { action = [&] { return cmdDegen(g, label); }; });

  auto* orbit = app.add_subcommand("orbit", "positive-energy spectral-flow orbit with adjacency");
  orbit->add_option("LABEL", label)->required();
  orbit->callback([&] { action = [&] { return cmdOrbit(g, label); }; });

  auto* fuseCmd = app.add_subcommand("fuse", "Grothendieck fusion product (level (3,2) only)");
  fuseCmd->add_option("A", label)->required();
  fuseCmd->add_option("B", label2)->required();
  fuseCmd->callback([&] { action = [&] { return cmdFuse(g, label, label2); }; });

  auto* smatrix = app.add_subcommand("smatrix", "S-matrix entry as a cone series (level (3,2) only)");
  smatrix->add_option("KIND", sm.kind)->required()->check(CLI::IsMember({"standard", "semi", "hw"}));
  smatrix->add_option("--xi", sm.xi, "flow of the row module, 'c1,c2'")->capture_default_str();
  smatrix->add_option("--xip", sm.xip, "flow of the column standard module, 'c1,c2'")->capture_default_str();
  smatrix->add_option("--mu", sm.mu, "coset (standard) or top-space weight (semi), 'a,b'")->capture_default_str();
  smatrix->add_option("--twist", sm.twistWord, "D6 word for semi entries")->capture_default_str();
  smatrix->add_option("--hw", sm.hw, "highest weight: 0, w1, w2 or rho")->capture_default_str();
  smatrix->add_flag("--opposite", sm.opposite, "expand semi entries in the opposite cone");
  smatrix->add_option("--order", sm.order, "also expand the cone series to this degree");
  smatrix->callback([&] { action = [&] { return cmdSMatrix(g, sm); }; });

  auto* ch = app.add_subcommand("char", "q-expansion of a relaxed character (level (3,2) only)");
  ch->add_option("LABEL", label)->required();
  ch->add_option("--order", order, "number of grades (default from SL3MM_TRUNCATION or 10)");
  ch->callback([&] {
    action = [&] { return cmdChar(g, label, order >= 0 ? order : truncationDefault(10)); };
  });

  auto* verify = app.add_subcommand("verify", "run invariant suites");
  std::vector<std::string> suites = verifySuiteNames();
  suites.push_back("all");
  verify->add_option("--suite", suite)->check(CLI::IsMember(suites))->capture_default_str();
  verify->callback([&] { action = [&] { return cmdVerify(g, suite); }; });

  auto* plot = app.add_subcommand("plot-weights", "top-space weight support as CSV (or JSON for *.json)");
  plot->add_option("LABEL", label)->required();
  plot->add_option("--out", out)->required();
  plot->add_option("--radius", radius, "window half-width in root coordinates (at most 30; default from SL3MM_TRUNCATION or 6)");
  plot->callback([&] {
    action = [&] { return cmdPlotWeights(g, label, out, radius >= 0 ? radius : truncationDefault(6)); };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    return action();
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDomain;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDomain;
  } catch (const InternalError& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
}
