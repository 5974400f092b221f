#include <future>
#include <iostream>
#include <regex>

#include "CLI11.hpp"
#include "ruledfib/acceptance.hpp"
#include "ruledfib/classifier.hpp"
#include "ruledfib/config.hpp"
#include "ruledfib/cover_diagram.hpp"
#include "ruledfib/error.hpp"
#include "ruledfib/sym_cocycle.hpp"

using namespace ruledfib;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Output { Json, Text };

void emit(const Json& j, Output out) {
  if (out == Output::Json) {
    std::cout << j.dump(2) << "\n";
    return;
  }
  if (j.is_array()) {
    bool first = true;
    for (const auto& item : j) {
      if (!first) std::cout << "\n";
      first = false;
      emit(item, out);
    }
    return;
  }
  if (!j.is_object()) {
    std::cout << j.dump() << "\n";
    return;
  }
  for (const auto& [k, v] : j.items()) std::cout << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
}

Json fiber_json(const MultipleFiber& f) { return {{"a", f.a}, {"m", f.m}, {"nu", f.nu}, {"wild", f.wild}}; }

std::optional<Reduction> parse_reduction(const std::string& s) {
  if (s == "ordinary") return Reduction::Ordinary;
  if (s == "supersingular") return Reduction::Supersingular;
  if (s.empty() || s == "n/a") return std::nullopt;
  throw UsageError("reduction must be 'ordinary' or 'supersingular'");
}

// "O+O", "O+L(P)", "O+L(ord=N|inf)", "E20", "EQ(Q)", "EQ"
ClassificationInput parse_bundle(const std::string& text, const std::optional<CurveSpec>& spec) {
  static const std::regex re(R"(^\s*(O\+O|E20|EQ|O\+L)\s*(?:\(\s*([^)]*?)\s*\))?\s*$)");
  std::smatch m;
  if (!std::regex_match(text, m, re)) throw UsageError("cannot parse bundle '" + text + "'");
  const std::string head = m[1], arg = m[2];
  ClassificationInput in;
  auto named_point = [&](const std::string& name) {
    if (!spec) throw UsageError("named point '" + name + "' needs --curve");
    const auto it = spec->points.find(name);
    if (it == spec->points.end()) throw UsageError("curve file has no point named '" + name + "'");
    return it->second;
  };
  if (head == "O+O" || head == "E20") {
    if (!arg.empty()) throw UsageError(head + " takes no argument");
    in.shape = head == "E20" ? BundleShape::Atiyah : BundleShape::Decomposable;
  } else if (head == "EQ") {
    in.shape = BundleShape::ExtQ;
    if (!arg.empty()) in.point = named_point(arg);
    else if (spec) throw UsageError("EQ on a concrete curve needs a point: EQ(Q)");
  } else {
    in.shape = BundleShape::Decomposable;
    if (arg.empty()) throw UsageError("O+L needs a point or ord=N");
    if (arg.rfind("ord=", 0) == 0) {
      const auto v = arg.substr(4);
      if (v == "inf") {
        in.order = LineOrder::infinite();
      } else {
        try {
          std::size_t used = 0;
          const auto n = std::stoull(v, &used);
          if (used != v.size() || n < 1) throw std::invalid_argument(v);
          in.order = LineOrder::finite(n);
        } catch (const std::exception&) {
          throw UsageError("ord must be a positive integer or inf");
        }
      }
    } else {
      in.point = named_point(arg);
    }
  }
  return in;
}

Json classification_json(const ClassificationResult& r, bool explain) {
  Json j;
  j["has_fibration"] = r.has_fibration;
  j["row"] = r.row_id;
  j["e"] = r.e;
  Json fs = Json::array();
  for (const auto& f : r.fibers) fs.push_back(fiber_json(f));
  j["fibers"] = fs;
  j["strange_type"] = r.strange_type();
  j["mode"] = r.symbolic_mode ? "symbolic" : "concrete";
  if (r.status) j["status"] = std::string(error_name(*r.status));
  if (r.status == ErrorKind::UnreachableOverField) j["note"] = "unreachable at this field size";
  if (explain) {
    Json tr = Json::array();
    for (const auto& s : r.trace) tr.push_back({{"rule", s.rule}, {"detail", s.detail}});
    j["trace"] = tr;
  }
  return j;
}

Json stage_json(const CoverStage& s) {
  Json j;
  j["lower_surface"] = s.lower_surface;
  j["upper_surface"] = s.upper_surface;
  j["e_lower"] = s.e_lower;
  j["e_upper"] = s.e_upper;
  j["phi"] = s.phi;
  j["deg_phi"] = s.deg_phi;
  j["phi_separable"] = s.phi_separable;
  j["deg_q"] = s.deg_q;
  Json br = Json::array();
  for (const auto& b : s.psi.branch) br.push_back({{"label", b.label}, {"e", b.e}, {"contribution", b.contribution}});
  j["psi"] = {{"degree", s.psi.degree}, {"separable", s.psi.separable}, {"branch", br}};
  Json fs = Json::array();
  for (const auto& b : s.fibers) {
    Json above = Json::array();
    for (const auto& u : b.above)
      above.push_back({{"e", u.e},
                       {"m", u.m},
                       {"wild", u.wild},
                       {"restriction_degree", u.restriction_degree},
                       {"restriction_separable", u.restriction_separable}});
    fs.push_back({{"label", b.label}, {"m", b.m}, {"a", b.a}, {"wild", b.wild}, {"above", above}});
  }
  j["fibers"] = fs;
  j["pulled_back_bundle"] = s.pulled_back_bundle;
  j["notes"] = s.notes;
  return j;
}

std::pair<std::int64_t, std::int64_t> parse_pair(const std::string& tok) {
  const auto bar = tok.find('|');
  const auto m = std::stoll(tok.substr(0, bar));
  const auto nu = bar == std::string::npos ? m : std::stoll(tok.substr(bar + 1));
  return {m, nu};
}

std::vector<std::int64_t> parse_list(const std::string& s) {
  std::vector<std::int64_t> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stoll(tok));
  return out;
}

// "m1,m2,...|nu1,nu2,..." or "m1|nu1,m2|nu2,..." (nu defaults to m)
std::vector<std::pair<std::int64_t, std::int64_t>> parse_type(const std::string& s) {
  try {
    std::vector<std::pair<std::int64_t, std::int64_t>> out;
    if (std::count(s.begin(), s.end(), '|') == 1) {
      const auto bar = s.find('|');
      const auto ms = parse_list(s.substr(0, bar)), nus = parse_list(s.substr(bar + 1));
      if (ms.size() == nus.size()) {
        for (std::size_t i = 0; i < ms.size(); ++i) out.emplace_back(ms[i], nus[i]);
        return out;
      }
    }
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(parse_pair(tok));
    return out;
  } catch (const std::exception&) {
    throw UsageError("cannot parse --type '" + s + "'");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Elliptic fibrations on elliptic ruled surfaces"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string output = "json";
  app.add_option("--output", output, "json or text")->check(CLI::IsMember({"json", "text"}));

  std::string curve_path;
  int max_ext = kDefaultExtensionBound;

  auto* curve_cmd = app.add_subcommand("curve", "curve utilities");
  curve_cmd->require_subcommand(1);
  curve_cmd->fallthrough();
  auto* info = curve_cmd->add_subcommand("info", "count, trace, supersingularity and small torsion");
  info->add_option("--curve", curve_path, "curve file (JSON or TOML)")->required();
  info->add_option("--max-ext", max_ext, "extension search bound")->check(CLI::Range(1, 24));

  auto* cls = app.add_subcommand("classify", "decide the fibration and its multiple fibers");
  std::vector<std::string> bundles;
  bool explain = false, symbolic = false;
  std::uint32_t p = 0;
  std::string reduction;
  cls->add_option("--curve", curve_path, "curve file");
  cls->add_option("--bundle", bundles, "O+O, O+L(P), O+L(ord=N|inf), E20, EQ(Q), EQ")->required();
  cls->add_flag("--explain", explain, "include the derivation trace");
  cls->add_flag("--symbolic", symbolic, "no concrete curve: use --p and --reduction");
  cls->add_option("--p", p, "characteristic in symbolic mode");
  cls->add_option("--reduction", reduction, "ordinary or supersingular (symbolic, p > 0)");
  cls->add_option("--max-ext", max_ext, "extension search bound")->check(CLI::Range(1, 24));

  auto* en = app.add_subcommand("enumerate-fibers", "list valid multiple-fiber configurations");
  int d = 0;
  std::int64_t max_m = 60;
  en->add_option("--d", d, "0 or -1")->required();
  en->add_option("--p", p, "characteristic")->required();
  en->add_option("--max-m", max_m, "largest multiplicity")->check(CLI::Range(2, 1000));

  auto* ku = app.add_subcommand("ku-check", "Katsura-Ueno feasibility");
  std::string type;
  ku->add_option("--type", type, "\"m1,m2|nu1,nu2\" or \"m1|nu1,m2|nu2\"")->required();

  auto* sym = app.add_subcommand("sym-split", "verify the splitting of Sym^p E20");
  std::string mode;
  sym->add_option("--p", p, "prime")->required();
  sym->add_option("--mode", mode, "ordinary or supersingular")->required()->check(
      CLI::IsMember({"ordinary", "supersingular"}));

  auto* cover = app.add_subcommand("cover-check", "build and check a resolution diagram");
  std::string case_id, point_name;
  cover->add_option("--case", case_id, "i-2, i-5, ii-1, ii-2 or ii-3")->required();
  cover->add_option("--curve", curve_path, "curve file")->required();
  cover->add_option("--point", point_name, "named point (default P for i-2, Q for ii-*)");
  cover->add_option("--max-ext", max_ext, "extension search bound")->check(CLI::Range(1, 24));

  auto* self = app.add_subcommand("selftest", "run the acceptance suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  const Output out = output == "text" ? Output::Text : Output::Json;

  try {
    std::optional<CurveSpec> spec;
    if (!curve_path.empty()) spec = curve_from_json(load_config_file(curve_path));

    if (info->parsed()) {
      const auto& e = spec->curve;
      Json j;
      j["curve"] = curve_to_json(e);
      j["count"] = e.count();
      j["trace"] = e.trace();
      j["supersingular"] = e.supersingular();
      const auto gs = e.group_structure();
      j["group_structure"] = Json::array({gs.first, gs.second});
      // keep the search to extensions of at most 2^16 elements
      int bound = 0;
      for (std::uint64_t q = 1; bound < max_ext && q * e.field()->order <= (1u << 16); q *= e.field()->order) ++bound;
      Json tors = Json::object();
      for (std::uint64_t n = 2; n <= 6; ++n) {
        Json t;
        t["rational"] = torsion_points(e, n).size();
        t["geometric"] = geometric_torsion_size(e, n);
        const auto full = full_torsion_extension_degree(e, n, bound);
        t["full_torsion_extension"] = full ? Json(*full) : Json("unreachable at this field size");
        tors[std::to_string(n)] = t;
      }
      j["torsion"] = tors;
      Json pts = Json::object();
      for (const auto& [name, pt] : spec->points) pts[name] = {{"point", point_to_json(pt)}, {"order", point_order(pt)}};
      j["points"] = pts;
      emit(j, out);
      return 0;
    }

    if (cls->parsed()) {
      if (symbolic == spec.has_value()) throw UsageError("give exactly one of --curve or --symbolic");
      std::vector<ClassificationInput> inputs;
      for (const auto& b : bundles) {
        auto in = parse_bundle(b, spec);
        in.max_extension = max_ext;
        if (spec) {
          in.curve = spec->curve;
        } else {
          const auto r = parse_reduction(reduction);
          in.symbolic = {p, r.value_or(Reduction::NotApplicable), std::nullopt};
        }
        inputs.push_back(in);
      }
      std::vector<std::future<ClassificationResult>> jobs;
      for (const auto& in : inputs) jobs.push_back(std::async(std::launch::async, [in] { return classify(in); }));
      Json results = Json::array();
      for (auto& job : jobs) results.push_back(classification_json(job.get(), explain));
      emit(results.size() == 1 ? results[0] : results, out);
      return 0;
    }

    if (en->parsed()) {
      const auto e = enumerate_configs(d, p, max_m);
      Json j;
      j["d"] = e.d;
      j["p"] = e.p;
      j["max_m"] = e.max_m;
      Json fams = Json::array();
      for (const auto& f : e.families) {
        Json members = Json::array();
        for (const auto& c : f.members) {
          Json fs = Json::array();
          for (const auto& x : c.fibers) fs.push_back(fiber_json(x));
          members.push_back(fs);
        }
        fams.push_back({{"family", f.id}, {"count", f.members.size()}, {"members", members}});
      }
      j["families"] = fams;
      emit(j, out);
      return 0;
    }

    if (ku->parsed()) {
      const auto ty = parse_type(type);
      const auto r = ku_feasible(ty);
      Json per = Json::array();
      for (std::size_t i = 0; i < ty.size(); ++i)
        per.push_back({{"m", ty[i].first}, {"nu", ty[i].second}, {"feasible", r.per_index[i].feasible},
                       {"witness", r.per_index[i].witness}});
      emit(Json{{"feasible", r.feasible}, {"per_index", per}}, out);
      return 0;
    }

    if (sym->parsed()) {
      const Reduction m = mode == "ordinary" ? Reduction::Ordinary : Reduction::Supersingular;
      const bool block = verify_block_structure(p);
      const bool conj = verify_conjugation(p, m);
      bool cocycle = true;
      for (int k = 0; k <= static_cast<int>(p); ++k) cocycle &= verify_cocycle_condition(p, k);
      const bool pass = block && conj && cocycle;
      Json j{{"p", p}, {"mode", mode}, {"block_structure", block}, {"conjugation", conj}, {"cocycle", cocycle},
             {"result", pass ? "PASS" : "FAIL"}};
      if (!conj) j["difference"] = to_string(conjugation_difference(p, m));
      emit(j, out);
      return pass ? 0 : 1;
    }

    if (cover->parsed()) {
      CaseData data{spec->curve, std::nullopt};
      if (point_name.empty() && case_id != "i-5") point_name = case_id == "i-2" ? "P" : "Q";
      if (!point_name.empty()) {
        const auto it = spec->points.find(point_name);
        if (it == spec->points.end()) throw UsageError("curve file has no point named '" + point_name + "'");
        data.point = it->second;
      }
      const auto dgm = build_resolution(case_id, data, max_ext);
      Json j;
      j["case"] = dgm.case_id;
      j["p"] = dgm.p;
      j["reduction"] = std::string(reduction_name(dgm.reduction));
      j["extension_degree"] = dgm.extension_degree;
      Json stages = Json::array();
      for (const auto& s : dgm.stages) stages.push_back(stage_json(s));
      j["stages"] = stages;
      Json checks = Json::array();
      bool pass = true;
      for (const auto& c : verify_diagram(dgm)) {
        checks.push_back({{"name", c.name}, {"result", c.pass ? "PASS" : "FAIL"}, {"detail", c.detail}});
        pass &= c.pass;
      }
      j["checks"] = checks;
      j["result"] = pass ? "PASS" : "FAIL";
      emit(j, out);
      return pass ? 0 : 1;
    }

    if (self->parsed()) {
      bool ok = true;
      for (const auto& r : run_acceptance()) {
        std::cout << format_criterion(r) << std::endl;
        ok &= r.pass;
      }
      return ok ? 0 : 1;
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
  return 2;
}
