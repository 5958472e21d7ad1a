#include "agof/json_io.hpp"

#include <charconv>
#include <string>
#include <vector>

#include "agof/errors.hpp"

namespace agof {

using nlohmann::json;

namespace {

std::vector<double> to_vector(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

Eigen::VectorXd array_field(const json& j, const char* key) {
  require(j.contains(key) && j.at(key).is_array(), ErrorCode::input,
          std::string("model JSON: missing array '") + key + "'");
  const auto v = j.at(key).get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

double number_field(const json& j, const char* key) {
  require(j.contains(key) && j.at(key).is_number(), ErrorCode::input,
          std::string("model JSON: missing number '") + key + "'");
  return j.at(key).get<double>();
}

json bootstrap_to_json(const BootstrapSummary& b, double alpha) {
  return {{"B_eff", b.norms.size()},
          {"n_skipped", b.n_skipped},
          {"seed", b.seed},
          {"sigma_boot", b.sigma_boot},
          {"quantile_alpha", b.quantile(alpha)},
          {"quantile_1m_alpha", b.quantile(1.0 - alpha)},
          {"norms", b.norms}};
}

}  // namespace

json model_to_json(const FittedModel& model) {
  const auto& t = model.params();
  json j{{"family", std::string(family_name(model.family().tag()))}};
  switch (model.family().tag()) {
    case Family::exponential: j["theta"] = t[0]; break;
    case Family::normal:
      j["mu"] = t[0];
      j["sigma"] = t[1];
      break;
    case Family::weibull:
      j["shape"] = t[0];
      j["scale"] = t[1];
      break;
    case Family::dirac: j["mu"] = t[0]; break;
    case Family::gaussian_mixture:
      j["k"] = model.family().k();
      j["weights"] = to_vector(model.weights());
      j["means"] = to_vector(model.means());
      j["sds"] = to_vector(model.sds());
      break;
  }
  return j;
}

FittedModel model_from_json(const json& j) {
  require(j.is_object() && j.contains("family") && j.at("family").is_string(), ErrorCode::input,
          "model JSON needs a string field 'family'");
  const auto name = j.at("family").get<std::string>();
  if (name == "exponential") return exponential_model(number_field(j, "theta"));
  if (name == "normal") return normal_model(number_field(j, "mu"), number_field(j, "sigma"));
  if (name == "weibull") return weibull_model(number_field(j, "shape"), number_field(j, "scale"));
  if (name == "dirac") return dirac_model(number_field(j, "mu"));
  if (name == "gaussian_mixture") {
    const auto w = array_field(j, "weights");
    if (j.contains("k"))
      require(j.at("k").is_number_integer() && j.at("k").get<long>() == w.size(), ErrorCode::input,
              "model JSON: 'k' does not match the number of weights");
    return mixture_model(w, array_field(j, "means"), array_field(j, "sds"));
  }
  fail(ErrorCode::input, "model JSON: unknown family '" + name + "'");
}

FittedModel parse_model_spec(std::string_view spec) {
  if (!spec.empty() && spec.front() == '{') {
    json j;
    try {
      j = json::parse(spec);
    } catch (const json::exception& e) {
      fail(ErrorCode::input, std::string("model JSON: ") + e.what());
    }
    return model_from_json(j);
  }
  const auto colon = spec.find(':');
  require(colon != std::string_view::npos, ErrorCode::input,
          "model spec must look like 'family:v1,v2,...', got '" + std::string(spec) + "'");
  const auto name = spec.substr(0, colon);
  std::vector<double> values;
  std::string_view rest = spec.substr(colon + 1);
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const auto token = rest.substr(0, comma);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    require(ec == std::errc() && ptr == token.data() + token.size(), ErrorCode::input,
            "model spec: bad number '" + std::string(token) + "'");
    values.push_back(v);
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  int k = 0;
  if (name == "gaussian_mixture" || name == "mixture") {
    require(!values.empty() && values.size() % 3 == 0, ErrorCode::input,
            "mixture spec needs 3k values (weights, means, sds)");
    k = static_cast<int>(values.size() / 3);
  }
  FamilyId family = FamilyId::normal();
  try {
    family = parse_family(name, k);
  } catch (const Error& e) {
    fail(ErrorCode::input, e.what());
  }
  require(static_cast<Eigen::Index>(values.size()) == family.param_count(), ErrorCode::input,
          "model spec: " + to_string(family) + " takes " + std::to_string(family.param_count()) +
              " values");
  return FittedModel(family, Eigen::Map<const Eigen::VectorXd>(
                                 values.data(), static_cast<Eigen::Index>(values.size())));
}

json report_to_json(const TestReport& r) {
  const auto& c = r.config;
  json j;
  j["engine"] = std::string(kEngineVersion);
  j["hypothesis"] = r.hypothesis == Hypothesis::agof ? "agof" : "dual";
  j["config"] = {{"family", to_string(r.family)},
                 {"p", c.distance.p},
                 {"epsilon", c.epsilon},
                 {"alpha", c.alpha},
                 {"method", std::string(method_name(c.method))},
                 {"B", c.bootstrap.B},
                 {"seed", c.bootstrap.seed},
                 {"failure_policy", c.bootstrap.failure_policy == FailurePolicy::abort
                                        ? "abort"
                                        : "retry_once_then_skip"},
                 {"max_skip_fraction", c.bootstrap.max_skip_fraction},
                 {"tail_u", c.distance.tail_u},
                 {"quad_rel_tol", c.distance.quad_rel_tol},
                 {"em", {{"restarts", c.em.restarts},
                         {"max_iter", c.em.max_iter},
                         {"rel_tol", c.em.rel_tol},
                         {"variance_floor_factor", c.em.variance_floor_factor},
                         {"seed", c.em.seed}}}};
  j["theta_hat"] = model_to_json(FittedModel(r.family, r.theta_hat));
  j["obs_norm"] = r.observed.value;
  j["obs_norm_error_bound"] = r.observed.abs_error_bound;
  j["boot"] = bootstrap_to_json(r.boot, c.alpha);
  j["reject_H0"] = r.reject_H0;
  j["min_margin"] = r.min_margin;
  if (r.dual_margin) j["dual_margin"] = *r.dual_margin;
  j["dirac_baseline"] = r.dirac_baseline;
  j["improvement"] = r.improvement.clamped;
  j["improvement_raw"] = r.improvement.raw;
  j["warnings"] = r.warnings;
  return j;
}

}  // namespace agof
