#include "agof/cli.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "agof/agof_test.hpp"
#include "agof/bootstrap.hpp"
#include "agof/distributions.hpp"
#include "agof/errors.hpp"
#include "agof/format.hpp"
#include "agof/json_io.hpp"
#include "agof/lp_metric.hpp"
#include "agof/mc_harness.hpp"

namespace agof::cli {

using nlohmann::json;

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::optional<double> parse_number(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

// Shared flag values; each subcommand binds the subset it uses.
struct Flags {
  std::string input;
  std::string out;
  std::string family;
  int k = 1;
  int kmax = 0;
  double p = 1.0;
  double epsilon = 0.0;
  double alpha = 0.05;
  std::string method = "bootstrap2";
  std::vector<std::string> methods{"bootstrap1", "bootstrap2"};
  std::size_t B = 2000;
  std::size_t runs = 500;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  bool drop_nonfinite = false;
  bool drop_nonpositive = false;
  bool dual = false;
  std::string failure_policy = "retry_once_then_skip";
  std::string norms_csv;
  std::string model;
  std::string f, g, truth;
  std::string eps_grid;
  int em_restarts = 10;
  int em_max_iter = 500;
  double em_rel_tol = 1e-8;
  std::uint64_t em_seed = 0;
};

// Output is rendered in memory first and then written to a temp file that is
// renamed into place, so a failing run never leaves a partial file.
void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    out.flush();
    return;
  }
  const std::filesystem::path target(path);
  std::filesystem::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    require(static_cast<bool>(f), ErrorCode::input, "cannot open output file '" + path + "'");
    f << text;
    f.close();
    if (!f) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      fail(ErrorCode::input, "failed writing output file '" + path + "'");
    }
  }
  std::filesystem::rename(tmp, target);
}

InputData load(const Flags& fl) {
  if (fl.input.empty() || fl.input == "-") {
    return read_input(std::cin, "<stdin>", fl.drop_nonfinite, fl.drop_nonpositive);
  }
  std::ifstream in(fl.input);
  require(static_cast<bool>(in), ErrorCode::input, "cannot open input file '" + fl.input + "'");
  return read_input(in, fl.input, fl.drop_nonfinite, fl.drop_nonpositive);
}

FamilyId family_of(const Flags& fl, int k) {
  require(!fl.family.empty(), ErrorCode::input, "--family is required");
  return parse_family(fl.family, k);
}

EmConfig em_config(const Flags& fl) {
  EmConfig em;
  em.restarts = fl.em_restarts;
  em.max_iter = fl.em_max_iter;
  em.rel_tol = fl.em_rel_tol;
  em.seed = fl.em_seed;
  em.validate();
  return em;
}

BootstrapConfig bootstrap_config(const Flags& fl) {
  BootstrapConfig b;
  b.B = fl.B;
  b.seed = fl.seed;
  b.workers = fl.threads;
  if (fl.failure_policy == "abort") {
    b.failure_policy = FailurePolicy::abort;
  } else {
    require(fl.failure_policy == "retry_once_then_skip", ErrorCode::input,
            "--failure-policy must be abort or retry_once_then_skip");
  }
  b.validate();
  return b;
}

DistanceConfig distance_config(const Flags& fl) {
  DistanceConfig d;
  d.p = fl.p;
  d.validate();
  return d;
}

json cleaning_json(const InputData& in) {
  return {{"n", in.sample.size()},
          {"dropped_nonfinite", in.dropped_nonfinite},
          {"dropped_nonpositive", in.dropped_nonpositive}};
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> grid;
  if (text.find(':') != std::string::npos) {
    // lo:hi:step
    std::vector<double> parts;
    std::string_view rest = text;
    while (true) {
      const auto c = rest.find(':');
      const auto v = parse_number(trim(rest.substr(0, c)));
      require(v.has_value(), ErrorCode::input, "--epsilon-grid: bad number in '" + text + "'");
      parts.push_back(*v);
      if (c == std::string_view::npos) break;
      rest.remove_prefix(c + 1);
    }
    require(parts.size() == 3 && parts[2] > 0.0 && parts[1] >= parts[0], ErrorCode::input,
            "--epsilon-grid range must be lo:hi:step with step > 0");
    const auto count = static_cast<std::size_t>(std::floor((parts[1] - parts[0]) / parts[2] + 1e-9));
    for (std::size_t i = 0; i <= count; ++i) grid.push_back(parts[0] + parts[2] * static_cast<double>(i));
    return grid;
  }
  std::string_view rest = text;
  while (!rest.empty()) {
    const auto c = rest.find(',');
    const auto v = parse_number(trim(rest.substr(0, c)));
    require(v.has_value(), ErrorCode::input, "--epsilon-grid: bad number in '" + text + "'");
    grid.push_back(*v);
    if (c == std::string_view::npos) break;
    rest.remove_prefix(c + 1);
  }
  return grid;
}

int cmd_fit(const Flags& fl, std::ostream& out) {
  const FamilyId family = family_of(fl, fl.k);
  const EmConfig em = em_config(fl);
  const InputData in = load(fl);
  const FittedModel model(family, fit_mle(family, in.sample, em));
  json j = model_to_json(model);
  if (family.continuous()) j["log_likelihood"] = log_likelihood(model, in.sample);
  j["data"] = cleaning_json(in);
  emit(dump(j), fl.out, out);
  return kExitOk;
}

int cmd_distance(const Flags& fl, std::ostream& out) {
  const DistanceConfig dc = distance_config(fl);
  const EmConfig em = em_config(fl);
  std::optional<FittedModel> model;
  if (!fl.model.empty()) model = parse_model_spec(fl.model);
  const InputData in = load(fl);
  if (!model) {
    const FamilyId family = family_of(fl, fl.k);
    model.emplace(family, fit_mle(family, in.sample, em));
  }
  std::ostringstream csv;
  csv << "quantity,family,p,value,abs_error_bound\n";
  if (model->family().continuous()) {
    const auto d = empirical_model_distance(in.sample, *model, dc);
    csv << "model_distance," << to_string(model->family()) << ',' << shortest(dc.p) << ','
        << shortest(d.value) << ',' << shortest(d.abs_error_bound) << '\n';
  } else {
    const auto d = dirac_distance(in.sample, model->params()[0], dc.p);
    csv << "model_distance,dirac," << shortest(dc.p) << ',' << shortest(d.value) << ','
        << shortest(d.abs_error_bound) << '\n';
  }
  const auto base = dirac_distance(in.sample, in.sample.mean(), dc.p);
  csv << "dirac_baseline,dirac," << shortest(dc.p) << ',' << shortest(base.value) << ','
      << shortest(base.abs_error_bound) << '\n';
  emit(csv.str(), fl.out, out);
  return kExitOk;
}

int cmd_test(const Flags& fl, std::ostream& out) {
  TestConfig cfg;
  cfg.epsilon = fl.epsilon;
  cfg.alpha = fl.alpha;
  cfg.method = parse_method(fl.method);
  cfg.distance = distance_config(fl);
  cfg.bootstrap = bootstrap_config(fl);
  cfg.em = em_config(fl);
  cfg.validate();
  const FamilyId family = family_of(fl, fl.k);
  const InputData in = load(fl);
  const TestReport report =
      fl.dual ? dual_test(in.sample, family, cfg) : agof_test(in.sample, family, cfg);
  json j = report_to_json(report);
  j["data"] = cleaning_json(in);
  if (!fl.norms_csv.empty()) {
    std::ostringstream csv;
    write_norms_csv(csv, report.boot);
    emit(csv.str(), fl.norms_csv, out);
  }
  emit(dump(j), fl.out, out);
  return kExitOk;
}

json margin_row(const MarginSummary& s, double alpha) {
  json row{{"family", std::string(family_name(s.family.tag()))},
           {"k", s.family.tag() == Family::gaussian_mixture ? s.family.k() : 0},
           {"theta_hat", model_to_json(FittedModel(s.family, s.theta_hat))},
           {"obs_norm", s.observed.value},
           {"obs_norm_error_bound", s.observed.abs_error_bound},
           {"sigma_boot", s.boot.sigma_boot},
           {"quantile_alpha", s.boot.quantile(alpha)},
           {"B_eff", s.boot.norms.size()},
           {"n_skipped", s.boot.n_skipped},
           {"warnings", s.warnings}};
  for (Method m : {Method::bootstrap1, Method::bootstrap2}) {
    const auto i = static_cast<std::size_t>(m);
    row[std::string(method_name(m))] = {{"min_margin", s.margin[i]},
                                        {"improvement", s.improvement[i].clamped},
                                        {"improvement_raw", s.improvement[i].raw}};
  }
  return row;
}

int cmd_mindist(const Flags& fl, std::ostream& out) {
  require(fl.alpha > 0.0 && fl.alpha < 0.5, ErrorCode::domain, "alpha must lie in (0, 0.5)");
  const DistanceConfig dc = distance_config(fl);
  const BootstrapConfig bc = bootstrap_config(fl);
  const EmConfig em = em_config(fl);
  std::vector<FamilyId> families;
  if (fl.kmax > 0) {
    require(fl.family == "gaussian_mixture", ErrorCode::input,
            "--kmax requires --family gaussian_mixture");
    for (int k = 1; k <= fl.kmax; ++k) families.push_back(FamilyId::gaussian_mixture(k));
  } else {
    families.push_back(family_of(fl, fl.k));
  }
  const InputData in = load(fl);
  json j{{"engine", std::string(kEngineVersion)},
         {"p", dc.p},
         {"alpha", fl.alpha},
         {"B", bc.B},
         {"seed", bc.seed},
         {"data", cleaning_json(in)},
         {"sample_mean", in.sample.mean()}};
  if (in.sample.has_distinct_points())
    j["dirac_baseline"] = dirac_distance(in.sample, in.sample.mean(), dc.p).value;
  json rows = json::array();
  for (const auto& family : families)
    rows.push_back(margin_row(minimum_margins(in.sample, family, fl.alpha, dc, bc, em), fl.alpha));
  j["rows"] = std::move(rows);
  emit(dump(j), fl.out, out);
  return kExitOk;
}

int cmd_power(const Flags& fl, std::ostream& out) {
  PowerStudyConfig cfg;
  cfg.true_dist = parse_model_spec(fl.truth);
  cfg.family = family_of(fl, fl.k);
  cfg.p = fl.p;
  cfg.n = fl.n;
  cfg.alpha = fl.alpha;
  cfg.methods.clear();
  for (const auto& m : fl.methods) cfg.methods.push_back(parse_method(m));
  cfg.epsilon_grid = parse_grid(fl.eps_grid);
  cfg.runs = fl.runs;
  cfg.B = fl.B;
  cfg.failure_policy = bootstrap_config(fl).failure_policy;
  cfg.seed = fl.seed;
  cfg.workers = fl.threads;
  cfg.em = em_config(fl);
  cfg.validate();
  distance_config(fl);
  std::ostringstream csv;
  write_power_csv(csv, power_curve(cfg));
  emit(csv.str(), fl.out, out);
  return kExitOk;
}

int cmd_oracle(const Flags& fl, std::ostream& out) {
  const DistanceConfig dc = distance_config(fl);
  const FittedModel f = parse_model_spec(fl.f);
  std::optional<FittedModel> g;
  if (!fl.g.empty()) {
    g = parse_model_spec(fl.g);
  } else {
    const FamilyId family = family_of(fl, fl.k);
    g.emplace(family, projection_params(f, family));
  }
  const DistanceResult d = analytic_distance(f, *g, dc);
  json j{{"f", model_to_json(f)},
         {"g", model_to_json(*g)},
         {"p", dc.p},
         {"value", d.value},
         {"abs_error_bound", d.abs_error_bound}};
  emit(dump(j), fl.out, out);
  return kExitOk;
}

void report_error(std::ostream& err, std::string_view code, std::string_view what) {
  std::string msg(what);
  std::replace(msg.begin(), msg.end(), '\n', ' ');
  err << "error code=" << code << " message=" << msg << '\n';
}

}  // namespace

InputData read_input(std::istream& in, const std::string& name, bool drop_nonfinite,
                     bool drop_nonpositive) {
  std::vector<double> values;
  InputData meta{Sample({0.0})};
  std::string line;
  std::size_t line_no = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    const auto text = trim(line);
    if (text.empty()) continue;
    const auto v = parse_number(text);
    if (!v) {
      if (first) {
        first = false;
        continue;  // header
      }
      fail(ErrorCode::input, name + ":" + std::to_string(line_no) + ": malformed datum '" +
                                 std::string(text) + "'");
    }
    first = false;
    if (!std::isfinite(*v)) {
      require(drop_nonfinite, ErrorCode::input,
              name + ":" + std::to_string(line_no) + ": non-finite datum (use --drop-nonfinite)");
      ++meta.dropped_nonfinite;
      continue;
    }
    if (drop_nonpositive && *v <= 0.0) {
      ++meta.dropped_nonpositive;
      continue;
    }
    values.push_back(*v);
  }
  require(!values.empty(), ErrorCode::input, name + ": no observations");
  meta.sample = Sample(std::move(values), name);
  return meta;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Almost goodness-of-fit testing with L^p distances and bootstrap", "agof"};
  app.require_subcommand(1);
  Flags fl;

  auto input = [&](CLI::App* s) {
    s->add_option("input", fl.input, "Data file, one value per line ('-' or omitted: stdin)");
    s->add_flag("--drop-nonfinite", fl.drop_nonfinite, "Drop NaN/Inf entries instead of failing");
    s->add_flag("--drop-nonpositive", fl.drop_nonpositive, "Drop entries <= 0");
  };
  auto output = [&](CLI::App* s) { s->add_option("--out", fl.out, "Output file (default stdout)"); };
  auto family = [&](CLI::App* s, bool required) {
    auto* o = s->add_option("--family", fl.family,
                            "exponential | normal | gaussian_mixture | dirac | weibull");
    if (required) o->required();
    s->add_option("--k", fl.k, "Mixture components")->check(CLI::PositiveNumber);
  };
  auto em = [&](CLI::App* s) {
    s->add_option("--em-restarts", fl.em_restarts, "EM restarts")->check(CLI::PositiveNumber);
    s->add_option("--em-max-iter", fl.em_max_iter, "EM iteration cap")->check(CLI::PositiveNumber);
    s->add_option("--em-rel-tol", fl.em_rel_tol, "EM relative log-likelihood tolerance");
    s->add_option("--em-seed", fl.em_seed, "EM initialization seed");
  };
  auto pflag = [&](CLI::App* s) { s->add_option("--p", fl.p, "Order of the L^p norm (>= 1)"); };
  auto boot = [&](CLI::App* s) {
    s->add_option("--B", fl.B, "Bootstrap replicates");
    s->add_option("--seed", fl.seed, "Master seed")->required();
    s->add_option("--threads", fl.threads, "Worker cap (0 = all cores); results do not depend on it");
    s->add_option("--failure-policy", fl.failure_policy, "retry_once_then_skip | abort");
    s->add_option("--alpha", fl.alpha, "Significance level in (0, 0.5)");
  };

  auto* fit = app.add_subcommand("fit", "Maximum-likelihood fit");
  input(fit); output(fit); family(fit, true); em(fit);

  auto* dist = app.add_subcommand("distance", "L^p distance of the sample to a fitted or given model");
  input(dist); output(dist); family(dist, false); em(dist); pflag(dist);
  dist->add_option("--model", fl.model, "Model spec 'family:v1,..' or JSON instead of fitting");

  auto* test = app.add_subcommand("test", "AGoF test (or the dual test with --dual)");
  input(test); output(test); family(test, true); em(test); pflag(test); boot(test);
  test->add_option("--epsilon", fl.epsilon, "Margin epsilon > 0")->required();
  test->add_option("--method", fl.method, "bootstrap1 | bootstrap2");
  test->add_flag("--dual", fl.dual, "Swap hypotheses (H1: distance > epsilon)");
  test->add_option("--norms-csv", fl.norms_csv, "Also write the replicate norms as CSV");

  auto* mind = app.add_subcommand("mindist", "Minimum margins and improvement coefficients");
  input(mind); output(mind); family(mind, true); em(mind); pflag(mind); boot(mind);
  mind->add_option("--kmax", fl.kmax, "Loop gaussian_mixture over k = 1..kmax")
      ->check(CLI::PositiveNumber);

  auto* power = app.add_subcommand("power", "Monte Carlo power curve (CSV)");
  output(power); family(power, true); em(power); pflag(power); boot(power);
  power->add_option("--truth", fl.truth, "Generating model spec, e.g. weibull:2,1")->required();
  power->add_option("--n", fl.n, "Sample size")->required();
  power->add_option("--runs", fl.runs, "Monte Carlo runs");
  power->add_option("--methods", fl.methods, "Subset of bootstrap1 bootstrap2")->delimiter(',');
  power->add_option("--epsilon-grid", fl.eps_grid, "lo:hi:step or comma list")->required();

  auto* oracle = app.add_subcommand("oracle", "Distance between two analytic models");
  output(oracle); pflag(oracle);
  oracle->add_option("--f", fl.f, "First model spec")->required();
  oracle->add_option("--g", fl.g, "Second model spec (default: projection of f onto --family)");
  family(oracle, false);

  std::vector<std::string> argv_store{"agof"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    report_error(err, "USAGE_ERROR", e.what());
    return kExitInput;
  }
  // Power studies default to the smaller desk-scale replicate count.
  if (power->parsed() && power->get_option("--B")->count() == 0) fl.B = 500;

  try {
    if (fit->parsed()) return cmd_fit(fl, out);
    if (dist->parsed()) return cmd_distance(fl, out);
    if (test->parsed()) return cmd_test(fl, out);
    if (mind->parsed()) return cmd_mindist(fl, out);
    if (power->parsed()) return cmd_power(fl, out);
    if (oracle->parsed()) return cmd_oracle(fl, out);
  } catch (const Error& e) {
    report_error(err, to_string(e.code()), e.what());
    return is_numerical(e.code()) ? kExitNumerical : kExitInput;
  } catch (const std::exception& e) {
    report_error(err, "INTERNAL_ERROR", e.what());
    return kExitNumerical;
  }
  return kExitInput;
}

}  // namespace agof::cli
