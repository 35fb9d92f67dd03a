#include <iostream>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qf/dickson.hpp"
#include "qf/io.hpp"
#include "qf/oracle.hpp"
#include "qf/witt.hpp"

namespace {

using qf::Json;

struct Options {
  std::string format = "text";
  unsigned long long bound = 0;
  bool seedless = false;  // accepted for interface stability; the tool
                          // never draws randomness, so it always holds
};

// ---------------------------------------------------------------------------
// report rendering

void render_text(std::ostream& os, const Json& j, int indent) {
  const std::string pad(indent, ' ');
  if (j.is_object()) {
    for (const auto& [key, value] : j.items()) {
      if (value.is_object() || (value.is_array() && !value.empty() &&
                                (value[0].is_object() || value[0].is_array()))) {
        os << pad << key << ":\n";
        render_text(os, value, indent + 2);
      } else {
        os << pad << key << ": " << value.dump() << "\n";
      }
    }
    return;
  }
  if (j.is_array()) {
    for (const Json& item : j) {
      if (item.is_object() || item.is_array()) {
        os << pad << "-\n";
        render_text(os, item, indent + 2);
      } else {
        os << pad << "- " << item.dump() << "\n";
      }
    }
    return;
  }
  os << pad << j.dump() << "\n";
}

void emit(const Options& opt, const Json& report) {
  if (opt.format == "json")
    std::cout << report.dump(2) << "\n";
  else
    render_text(std::cout, report, 0);
}

Json opt_index(const std::optional<unsigned long long>& v) {
  return v ? Json(*v) : Json();
}

Json profiles_json(const std::vector<qf::FactorProfile>& profiles) {
  Json out = Json::array();
  for (const qf::FactorProfile& p : profiles) {
    Json f;
    f["factor"] = p.index;
    f["exchange_pair"] = p.exchange_pair;
    f["sigma_fixes_center"] = p.sigma_fixes_center;
    f["orthogonal"] = p.orthogonal;
    f["split_orthogonal"] = p.split_orthogonal;
    f["n"] = p.n;
    f["parity"] = qf::parity_name(p.parity);
    f["corner"] = qf::corner_id_name(p.corner_id);
    f["center_size"] = p.center.size();
    f["lambda_dim"] =
        p.lambda_dim_over_center ? Json(*p.lambda_dim_over_center) : Json();
    out.push_back(std::move(f));
  }
  return out;
}

// ---------------------------------------------------------------------------
// commands

int cmd_validate(const Options& opt, const std::string& path) {
  // staged so that anti-structure and form-parameter failures become a
  // violation report rather than a hard error
  Json doc = qf::read_json_file(path);
  if (!doc.is_object()) throw qf::MalformedSpec("ring document must be an object");
  qf::RingPtr ring = qf::build_ring(qf::ring_spec_from_json(doc.at("ring")));
  std::vector<qf::Elem> sigma = qf::sigma_table_from_json(*ring, doc.at("sigma"));
  qf::Elem u = qf::elem_from_json(*ring, doc.at("u"));

  Json violations = Json::array();
  for (const qf::AntiAxiomViolation& v :
       qf::validate_anti_structure(*ring, sigma, u))
    violations.push_back(Json{{"axiom", v.axiom},
                              {"witness", qf::elem_to_json(*ring, v.witness)}});

  Json out;
  out["ring"] = ring->describe();
  out["size"] = ring->size();
  if (violations.empty()) {
    try {
      qf::UnitaryRing ur = qf::unitary_from_json(doc);
      out["lambda_size"] = ur.lambda().size();
    } catch (const qf::InvalidUnitaryRing& e) {
      violations.push_back(Json{{"axiom", e.what()}});
    }
  }
  out["violations"] = violations;
  out["valid"] = violations.empty();
  emit(opt, out);
  return violations.empty() ? 0 : 1;
}

int cmd_classify(const Options& opt, const std::string& ring_path,
                 const std::string& space_path) {
  Json out;
  if (!space_path.empty()) {
    qf::QuadraticSpace s = qf::load_space(space_path);
    out["ring"] = s.ur().describe();
    out["rank"] = s.rank();
    out["module_size"] = s.size();
    out["unimodular"] = qf::is_unimodular(s);
    std::vector<qf::FactorProfile> profiles = qf::classify_factors(s.ur());
    Json fj = profiles_json(profiles);
    for (std::size_t i = 0; i < profiles.size(); ++i) {
      qf::QuadraticSpace fs = qf::factor_space(s, i);
      fj[i]["populated"] = fs.module()->size() > 1;
    }
    out["factors"] = std::move(fj);
  } else {
    qf::UnitaryRing ur = qf::load_unitary_ring(ring_path);
    out["ring"] = ur.describe();
    out["factors"] = profiles_json(qf::classify_factors(ur));
  }
  emit(opt, out);
  return 0;
}

int cmd_extend(const Options& opt, const std::string& space_path,
               const std::string& q_path, const std::string& s_path,
               const std::string& iso_path, const std::string& v_path) {
  qf::QuadraticSpace s = qf::load_space(space_path);
  qf::ExtensionProblem prob{s, qf::load_matrix(q_path, s),
                            qf::load_matrix(s_path, s),
                            v_path.empty() ? s.presentation()
                                           : qf::load_matrix(v_path, s),
                            qf::load_matrix(iso_path, s)};
  qf::validate_problem(prob);
  qf::ExtensionResult res = qf::extend(prob);

  const qf::Ring& R = s.ur().ring();
  Json out;
  out["phi"] = qf::mat_to_json(R, res.phi);
  out["route"] = res.route;
  if (res.factors) {
    Json fj = Json::array();
    for (const qf::ReflectionDatum& d : *res.factors)
      fj.push_back(qf::reflection_to_json(R, d));
    out["factors"] = std::move(fj);
  } else {
    out["factors"] = Json();
  }
  out["verified"] = qf::check_isometry(s, s, res.phi);
  emit(opt, out);
  return 0;
}

int cmd_cancel(const Options& opt, const std::string& base_path,
               const std::string& s1_path, const std::string& s2_path,
               const std::string& iso_path) {
  qf::QuadraticSpace base = qf::load_space(base_path);
  qf::QuadraticSpace s1 = qf::load_space(s1_path);
  qf::QuadraticSpace s2 = qf::load_space(s2_path);
  qf::QuadraticSpace sum1 = qf::orthogonal_sum(base, s1);
  qf::Mat iso = qf::load_matrix(iso_path, sum1);

  qf::Mat result = qf::cancel(base, s1, s2, iso);
  Json out;
  out["matrix"] = qf::mat_to_json(base.ur().ring(), result);
  out["verified"] = qf::check_isometry(s1, s2, result);
  emit(opt, out);
  return 0;
}

int cmd_dickson(const Options& opt, const std::string& space_path,
                const std::string& iso_path, bool measure) {
  qf::QuadraticSpace s = qf::load_space(space_path);
  const qf::Ring& R = s.ur().ring();

  Json out;
  out["factors"] = profiles_json(qf::classify_factors(s.ur()));

  qf::IndexPrediction pred = qf::predict_reflection_index(s);
  out["populated_factors"] = pred.factors;
  out["xi"] = pred.xi;
  out["predicted_index"] = pred.index;

  qf::ReflectionExistence ex = qf::reflection_existence(s);
  Json ej;
  ej["exists"] = ex.exists;
  ej["empty_odd_factors"] = ex.empty_odd_factors;
  ej["witness"] = ex.witness ? qf::reflection_to_json(R, *ex.witness) : Json();
  out["existence"] = std::move(ej);

  std::vector<std::size_t> bad = qf::generation_hypothesis_violations(s);
  out["hypothesis_violations"] = bad;
  if (bad.empty()) {
    qf::ReflectionSubgroupReport rep = qf::reflection_subgroup(s, measure);
    out["case"] = qf::subgroup_case_name(rep.tag);
    out["claimed_index"] = opt_index(rep.claimed_index);
    out["measured_index"] = opt_index(rep.measured_index);
  } else {
    out["case"] = Json();
    out["claimed_index"] = Json();
    out["measured_index"] = Json();
  }

  if (!iso_path.empty()) {
    qf::DicksonVector dv = qf::delta_I(s, qf::load_matrix(iso_path, s));
    out["delta"] = Json{{"factors", dv.factors}, {"bits", dv.bits}};
  }
  emit(opt, out);
  return bad.empty() ? 0 : 1;
}

int cmd_group(const Options& opt, const std::string& space_path,
              bool elements) {
  qf::QuadraticSpace s = qf::load_space(space_path);
  const qf::Ring& R = s.ur().ring();
  std::vector<qf::Mat> group = qf::isometry_group(s);

  std::vector<qf::Mat> gens;
  for (const qf::ReflectionDatum& d : qf::all_reflections(s))
    gens.push_back(qf::reflection_matrix(s, d));
  std::vector<qf::Mat> sub = qf::group_closure(s, gens);

  Json out;
  out["order"] = group.size();
  out["reflection_generated_order"] = sub.size();
  if (elements) {
    Json ej = Json::array();
    for (const qf::Mat& g : group) ej.push_back(qf::mat_to_json(R, g));
    out["elements"] = std::move(ej);
  }
  emit(opt, out);
  return 0;
}

int cmd_oracle_verify(const Options& opt, const std::string& space_path,
                      const std::string& what) {
  qf::QuadraticSpace s = qf::load_space(space_path);
  bool ok = true;
  unsigned long long counterexamples = 0;
  Json checks;

  if (what == "extension" || what == "all") {
    qf::ExtensionSweep sweep = qf::verify_extension(s);
    checks["extension"] = Json{{"summand_pairs", sweep.summand_pairs},
                               {"isometries_checked", sweep.isometries_checked},
                               {"failures", sweep.failures},
                               {"notes", sweep.failure_notes}};
    ok = ok && sweep.failures == 0;
    counterexamples += sweep.failures;
  }

  if (what == "index" || what == "all") {
    qf::IndexMeasurement m = qf::verify_index(s);
    checks["index"] = Json{{"hypotheses_hold", m.hypotheses_hold},
                           {"violating_factors", m.violating_factors},
                           {"xi", m.xi},
                           {"formula_index", m.formula_index},
                           {"measured_index", m.measured_index},
                           {"matches_formula", m.matches_formula},
                           {"matches_kernel_classes", m.matches_kernel_classes},
                           {"group_order", m.group_order},
                           {"reflection_generated_order",
                            m.reflection_generated_order}};
    bool good = m.matches_formula && m.matches_kernel_classes;
    ok = ok && good;
    if (!good) ++counterexamples;
  }

  if (what == "dickson" || what == "all") {
    qf::IndexPrediction pred = qf::predict_reflection_index(s);
    std::vector<qf::Mat> group = qf::isometry_group(s);
    std::vector<std::vector<int>> bits;
    std::set<std::vector<int>> patterns;
    for (const qf::Mat& g : group) {
      bits.push_back(qf::delta_I(s, g).bits);
      patterns.insert(bits.back());
    }

    unsigned long long hom_failures = 0;
    std::size_t pairs = 0;
    const qf::Ring& R = s.ur().ring();
    for (std::size_t a = 0; a < group.size(); ++a)
      for (std::size_t b = 0; b < group.size(); ++b) {
        ++pairs;
        std::vector<int> prod =
            qf::delta_I(s, qf::mat_mul(R, group[a], group[b])).bits;
        for (std::size_t t = 0; t < prod.size(); ++t)
          if (prod[t] != (bits[a][t] + bits[b][t]) % 2) {
            ++hom_failures;
            break;
          }
      }

    unsigned long long law_failures = 0;
    std::size_t reflections = 0;
    for (const qf::ReflectionDatum& d : qf::all_reflections(s)) {
      ++reflections;
      if (qf::delta_I(s, qf::reflection_matrix(s, d)).bits != pred.xi)
        ++law_failures;
    }

    const bool surjective =
        patterns.size() == (std::size_t{1} << pred.factors.size());
    checks["dickson"] = Json{{"group_order", group.size()},
                             {"pairs_checked", pairs},
                             {"homomorphism_failures", hom_failures},
                             {"reflections_checked", reflections},
                             {"law_failures", law_failures},
                             {"patterns_seen", patterns.size()},
                             {"surjective", surjective}};
    ok = ok && hom_failures == 0 && law_failures == 0 && surjective;
    counterexamples += hom_failures + law_failures + (surjective ? 0 : 1);
  }

  Json out;
  out["what"] = what;
  out["checks"] = std::move(checks);
  out["counterexamples"] = counterexamples;
  out["ok"] = ok;
  emit(opt, out);
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact quadratic-form computations over finite unitary rings"};
  app.require_subcommand(1);
  app.fallthrough();

  Options opt;
  app.add_option("--format", opt.format, "report format")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();
  app.add_option("--bound", opt.bound,
                 "enumeration cap for oracle searches (0 keeps the default)");
  app.add_flag("--seedless", opt.seedless,
               "assert that no randomness is used (always true)");

  std::string ring_path, space_path, q_path, s_path, iso_path, v_path;
  std::string base_path, s1_path, s2_path, what = "all";
  bool measure = false, elements = false;

  CLI::App* validate =
      app.add_subcommand("validate", "check a unitary-ring document");
  validate->add_option("ring", ring_path, "ring JSON file")->required();

  CLI::App* classify = app.add_subcommand(
      "classify", "factor profiles of a unitary ring or of a space");
  classify->add_option("--ring", ring_path, "ring JSON file");
  classify->add_option("--space", space_path, "space JSON file");

  CLI::App* extend = app.add_subcommand(
      "extend", "extend an isometry between summands to the whole space");
  extend->add_option("--space", space_path)->required();
  extend->add_option("--q", q_path, "domain summand projection")->required();
  extend->add_option("--s", s_path, "codomain summand projection")->required();
  extend->add_option("--iso", iso_path, "isometry between the restrictions")
      ->required();
  extend->add_option("--v", v_path, "displacement summand (default: all)");

  CLI::App* cancel = app.add_subcommand(
      "cancel", "cancel a unimodular base from an isometry of sums");
  cancel->add_option("--base", base_path)->required();
  cancel->add_option("--s1", s1_path)->required();
  cancel->add_option("--s2", s2_path)->required();
  cancel->add_option("--iso", iso_path, "isometry base+s1 -> base+s2")
      ->required();

  CLI::App* dickson = app.add_subcommand(
      "dickson", "Dickson invariants and the reflection subgroup");
  dickson->add_option("--space", space_path)->required();
  dickson->add_option("--iso", iso_path, "isometry to evaluate");
  dickson->add_flag("--measure", measure, "measure the index by enumeration");

  CLI::App* group =
      app.add_subcommand("group", "enumerate the isometry group");
  group->add_option("--space", space_path)->required();
  group->add_flag("--elements", elements, "list the group elements");

  CLI::App* oracle = app.add_subcommand(
      "oracle-verify", "brute-force certification of the main theorems");
  oracle->add_option("--space", space_path)->required();
  oracle->add_option("--what", what, "extension | index | dickson | all")
      ->check(CLI::IsMember({"extension", "index", "dickson", "all"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (opt.bound > 0) qf::Bounds::candidate_cap = opt.bound;

  try {
    if (validate->parsed()) return cmd_validate(opt, ring_path);
    if (classify->parsed()) {
      if (ring_path.empty() && space_path.empty())
        throw qf::MalformedSpec("classify needs --ring or --space");
      return cmd_classify(opt, ring_path, space_path);
    }
    if (extend->parsed())
      return cmd_extend(opt, space_path, q_path, s_path, iso_path, v_path);
    if (cancel->parsed())
      return cmd_cancel(opt, base_path, s1_path, s2_path, iso_path);
    if (dickson->parsed())
      return cmd_dickson(opt, space_path, iso_path, measure);
    if (group->parsed()) return cmd_group(opt, space_path, elements);
    if (oracle->parsed()) return cmd_oracle_verify(opt, space_path, what);
    return 2;
  } catch (const qf::MalformedSpec& e) {
    emit(opt, Json{{"error", e.what()}});
    return 2;
  } catch (const qf::OversizeRing& e) {
    emit(opt, Json{{"error", e.what()}});
    return 2;
  } catch (const qf::HypothesisViolation& e) {
    emit(opt, Json{{"error", e.what()}, {"factor", e.factor_index}});
    return 1;
  } catch (const qf::Error& e) {
    emit(opt, Json{{"error", e.what()}});
    return 1;
  }
}
