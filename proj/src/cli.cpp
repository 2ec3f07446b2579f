#include "zlab/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "CLI11.hpp"
#include "zlab/acceptance.hpp"
#include "zlab/text.hpp"

namespace zlab {

namespace {

constexpr int kDepthCap = 32;

std::uint64_t default_seed() {
  if (const char* s = std::getenv("ZLAB_SEED"); s != nullptr && *s != '\0') {
    try {
      std::size_t used = 0;
      const unsigned long long v = std::stoull(s, &used);
      if (used == std::string(s).size()) return v;
    } catch (const std::exception&) {
    }
    throw std::invalid_argument("ZLAB_SEED is not an unsigned integer");
  }
  return 42;
}

struct Common {
  std::string config;
  std::string model = "int-line";
  std::string out;
  std::string csv;
  std::uint64_t seed = 42;
  int jobs = 0;
  int depth = 6;

  SweepOptions sweep() const { return {seed, jobs}; }
};

struct Outcome {
  json body;
  bool pass = true;
  std::string summary;
};

using Handler = std::function<Outcome()>;

void add_common(CLI::App* app, Common& c) {
  app->add_option("--config", c.config, "JSON file of option values; flags given on the command line win");
  app->add_option("--model", c.model, "Model for both factors")->check(CLI::IsMember({"int-line"}));
  app->add_option("--seed", c.seed, "Random seed (default: ZLAB_SEED, else 42)");
  app->add_option("--jobs", c.jobs, "Worker threads; 1 runs the serial path, 0 the OpenMP default")
      ->check(CLI::NonNegativeNumber);
  app->add_option("--depth", c.depth, "Word depth")->check(CLI::Range(0, kDepthCap));
  app->add_option("--out", c.out, "Write the JSON report here instead of stdout");
  app->add_option("--csv", c.csv, "Write a CSV table here (commands that produce one)");
}

std::string config_value(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number()) return v.dump();
  throw std::invalid_argument("config values must be strings, numbers or booleans");
}

// Fills options that were not given on the command line from the JSON config.
void apply_config(CLI::App* leaf, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read config " + path);
  json cfg;
  try {
    in >> cfg;
  } catch (const json::exception& e) {
    throw std::invalid_argument("config " + path + " is not valid JSON: " + e.what());
  }
  if (!cfg.is_object()) throw std::invalid_argument("config must be a JSON object");
  for (const auto& [key, value] : cfg.items()) {
    if (key == "config") throw std::invalid_argument("config files cannot nest");
    CLI::Option* opt = leaf->get_option_no_throw("--" + key);
    if (opt == nullptr) throw std::invalid_argument("unknown config key '" + key + "'");
    if (opt->count() > 0) continue;
    opt->add_result(config_value(value));
    opt->run_callback();
  }
}

json config_echo(const CLI::App* leaf) {
  json echo = json::object();
  for (const CLI::Option* opt : leaf->get_options()) {
    const std::string name = opt->get_single_name();
    if (name.empty() || name == "help" || name == "config" || name == "out" || name == "csv") continue;
    if (opt->count() > 0) {
      const auto& res = opt->results();
      echo[name] = res.size() == 1 ? json(res.front()) : json(res);
    } else {
      echo[name] = opt->get_default_str();
    }
  }
  return echo;
}

void write_csv(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << text;
}

FreeProduct free_product_for(const Common& c) { return FreeProduct(make_model(c.model), make_model(c.model)); }

DirectProduct direct_product_for(const Common& c) {
  return DirectProduct(make_model(c.model), make_model(c.model), line_proper_map_config(), line_proper_map_config());
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Z-structures on free and direct products: constructions and property checks", "zlab"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();
  app.failure_message(CLI::FailureMessage::help);
  Common common;
  try {
    common.seed = default_seed();
  } catch (const std::exception& e) {
    err << "zlab: " << e.what() << "\n";
    return kExitUsage;
  }

  std::vector<std::pair<CLI::App*, Handler>> leaves;
  auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& help) {
    CLI::App* sub = parent->add_subcommand(name, help);
    add_common(sub, common);
    return sub;
  };

  // free ----------------------------------------------------------------------
  CLI::App* free_cmd = app.add_subcommand("free", "Free product G * H");
  free_cmd->require_subcommand(1);

  std::string point_a, point_b;
  CLI::App* dist_cmd = leaf(free_cmd, "dist", "Certified distance between two points of the completion");
  dist_cmd->add_option("--a", point_a, "First point, e.g. word=g:1|side=Y|local=0.2 or end=g:1,h:1,...|depth=12")
      ->required();
  dist_cmd->add_option("--b", point_b, "Second point")->required();
  leaves.emplace_back(dist_cmd, [&] {
    const FreeProduct fp = free_product_for(common);
    const WBarPoint a = parse_wbar(point_a, fp.groups());
    const WBarPoint b = parse_wbar(point_b, fp.groups());
    const Certified d = fp.dist(a, b);
    Outcome o;
    o.body = {{"a", to_string(a)}, {"b", to_string(b)}, {"distance", d.value}, {"halfwidth", d.halfwidth}};
    o.summary = "d = " + format_double(d.value) + (d.halfwidth > 0 ? " +- " + format_double(d.halfwidth) : "");
    return o;
  });

  double net_eps = 0.5;
  std::size_t net_samples = 10000;
  CLI::App* net_cmd = leaf(free_cmd, "net", "Epsilon-net of the completion, with a coverage check");
  net_cmd->add_option("--eps", net_eps, "Net radius")->check(CLI::PositiveNumber);
  net_cmd->add_option("--samples", net_samples, "Random points for the coverage check");
  leaves.emplace_back(net_cmd, [&] {
    const FreeProduct fp = free_product_for(common);
    const EpsilonNet net = fp.epsilon_net(net_eps, common.depth);
    const CoverageReport r = check_coverage(fp, net, common.depth, net_samples, common.sweep());
    if (!common.csv.empty()) {
      std::ostringstream os;
      os << "word,side,local\n";
      for (const WPoint& c : net.centers)
        os << '"' << to_string(c.word) << "\"," << side_tag(c.side) << ',' << format_double(c.local) << '\n';
      write_csv(common.csv, os.str());
    }
    Outcome o;
    o.body = {{"net_size", net.centers.size()}, {"certified_radius", net.certified_radius}, {"coverage", r}};
    o.pass = r.pass;
    o.summary = "net size " + std::to_string(net.centers.size()) + ", max gap " + format_double(r.max_gap);
    return o;
  });

  double null_eps = 0.25;
  std::size_t null_samples = 2000;
  CLI::App* fnull_cmd = leaf(free_cmd, "null", "Null condition for translates of the base compactum");
  fnull_cmd->add_option("--eps", null_eps, "Cover scale")->check(CLI::PositiveNumber);
  fnull_cmd->add_option("--samples", null_samples, "Sampled words and cover points");
  leaves.emplace_back(fnull_cmd, [&] {
    const FreeProduct fp = free_product_for(common);
    const NullFreeReport r = check_null_free(fp, BaseCompactum{}, null_eps, common.depth, null_samples, common.sweep());
    Outcome o;
    o.body = r;
    o.pass = r.pass;
    o.summary = "Gamma has " + std::to_string(r.gamma.size()) + " words, null failures " +
                std::to_string(r.null_failures) + ", cover defects " + std::to_string(r.cover_defects);
    return o;
  });

  std::string hom_point, hom_which = "K";
  double hom_t = 0.5, hom_eps = 0.5;
  std::size_t hom_samples = 10000, hom_steps = 50;
  CLI::App* hom_cmd = leaf(free_cmd, "homotopy", "Evaluate K or P at a point, or check K's track bound");
  hom_cmd->add_option("--which", hom_which, "K (core collapse) or P (Z-set homotopy)")->check(CLI::IsMember({"K", "P"}));
  hom_cmd->add_option("--point", hom_point, "Point to evaluate; without it the track check runs");
  hom_cmd->add_option("--t", hom_t, "Time")->check(CLI::Range(0.0, 1.0));
  hom_cmd->add_option("--eps", hom_eps, "Core scale for K")->check(CLI::PositiveNumber);
  hom_cmd->add_option("--samples", hom_samples, "Track-check samples");
  hom_cmd->add_option("--steps", hom_steps, "Track-check time steps")->check(CLI::PositiveNumber);
  leaves.emplace_back(hom_cmd, [&] {
    const FreeProduct fp = free_product_for(common);
    Outcome o;
    if (!hom_point.empty()) {
      const WBarPoint p = parse_wbar(hom_point, fp.groups());
      const Located r = hom_which == "K" ? fp.homotopy_K(p, hom_t, fp.build_z_epsilon(hom_eps, common.depth + 2))
                                         : fp.homotopy_P(p, hom_t);
      o.body = {{"which", hom_which}, {"point", to_string(p)}, {"t", hom_t}, {"image", to_string(r.point)},
                {"halfwidth", r.halfwidth}};
      o.summary = hom_which + "(" + to_string(p) + ", " + format_double(hom_t) + ") = " + to_string(r.point);
      return o;
    }
    if (hom_which == "P") {
      const ZSetReport r = check_homotopy_P(fp, common.depth, hom_samples, hom_steps, common.sweep());
      o.body = r;
      o.pass = r.pass;
      o.summary = "P: " + std::to_string(r.not_interior) + " non-interior outputs";
      return o;
    }
    const ZEpsilonIndex idx = fp.build_z_epsilon(hom_eps, common.depth + 2);
    const TrackReport r = check_homotopy_K(fp, idx, common.depth, hom_samples, hom_steps, common.sweep());
    o.body = r;
    o.pass = r.pass && r.max_track < 2.0 * hom_eps;
    o.summary = "K: max track " + format_double(r.max_track) + " against 2 eps = " + format_double(2.0 * hom_eps);
    return o;
  });

  // product -------------------------------------------------------------------
  CLI::App* prod_cmd = app.add_subcommand("product", "Direct product G x H with the join boundary");
  prod_cmd->require_subcommand(1);

  double slope_x = 0.5, slope_y = 0.5;
  CLI::App* slope_cmd = leaf(prod_cmd, "slope", "Slope mu = q(y) / p(x) at an interior point");
  slope_cmd->add_option("--x", slope_x, "Carrier coordinate in X")->required()->check(CLI::Range(0.0, 1.0));
  slope_cmd->add_option("--y", slope_y, "Carrier coordinate in Y")->required()->check(CLI::Range(0.0, 1.0));
  leaves.emplace_back(slope_cmd, [&] {
    const DirectProduct dp = direct_product_for(common);
    if (dp.model_x().is_boundary(slope_x) || dp.model_y().is_boundary(slope_y))
      throw std::invalid_argument("slope is defined on interior points");
    const double mu = dp.slope(slope_x, slope_y);
    Outcome o;
    o.body = {{"x", slope_x}, {"y", slope_y}, {"p", dp.p()(slope_x)}, {"q", dp.q()(slope_y)}, {"mu", num(mu)}};
    o.summary = "mu = " + format_double(mu);
    return o;
  });

  std::string nb_center, nb_point;
  double nb_eps = 0.1;
  CLI::App* nbhd_cmd = leaf(prod_cmd, "nbhd", "Membership of a point in a join neighborhood U(center, eps)");
  nbhd_cmd->add_option("--center", nb_center, "Join point xbar=..|ybar=..|mu=..")->required();
  nbhd_cmd->add_option("--point", nb_point, "Join point or product point x=..|y=..")->required();
  nbhd_cmd->add_option("--eps", nb_eps, "Neighborhood radius")->check(CLI::PositiveNumber);
  leaves.emplace_back(nbhd_cmd, [&] {
    const DirectProduct dp = direct_product_for(common);
    const JoinPoint c = parse_join_point(nb_center);
    const CompactPoint z = parse_compact_point(nb_point);
    const bool in = dp.nbhd_contains(c, nb_eps, z);
    Outcome o;
    o.body = {{"center", c}, {"eps", nb_eps}, {"point", nb_point}, {"contains", in}};
    o.summary = in ? "inside" : "outside";
    return o;
  });

  NullProductConfig np;
  CLI::App* pnull_cmd = leaf(prod_cmd, "null", "Null condition for g C x h D with C = D = e([-1,1])");
  pnull_cmd->add_option("--delta", np.delta, "Cover scale")->check(CLI::Range(0.0, 0.5));
  pnull_cmd->add_option("--grid", np.grid, "Grid half-width for the direct fit")->check(CLI::PositiveNumber);
  pnull_cmd->add_option("--samples", np.off_grid_samples, "Off-grid translates outside the certified set");
  leaves.emplace_back(pnull_cmd, [&] {
    if (!(np.delta > 0.0)) throw std::invalid_argument("delta must be positive");
    const DirectProduct dp = product_for_null(make_model(common.model), make_model(common.model), np, common.sweep());
    std::vector<int> fit;
    const NullProductReport r = check_null_product(dp, np, common.sweep(), common.csv.empty() ? nullptr : &fit);
    if (!common.csv.empty()) {
      std::ostringstream os;
      os << "g,h,fit\n";
      std::size_t k = 0;
      for (int g = -np.grid; g <= np.grid; ++g)
        for (int h = -np.grid; h <= np.grid; ++h) os << g << ',' << h << ',' << fit[k++] << '\n';
      write_csv(common.csv, os.str());
    }
    Outcome o;
    o.body = r;
    o.pass = r.pass;
    o.summary = "grid exceptional " + std::to_string(r.empirical_exceptional) + ", off-grid failures " +
                std::to_string(r.off_grid_failures) + ", max diam_mu " + format_double(r.case1_max_diam_mu);
    return o;
  });

  int ce_range = 100;
  double ce_delta = 0.1;
  CLI::App* ce_cmd = leaf(prod_cmd, "counterexample", "Product-topology cover versus the join neighborhoods");
  ce_cmd->add_option("--range", ce_range, "Check n in [-range, range]")->check(CLI::PositiveNumber);
  ce_cmd->add_option("--delta", ce_delta, "Join neighborhood radius")->check(CLI::PositiveNumber);
  leaves.emplace_back(ce_cmd, [&] {
    const DirectProduct dp = direct_product_for(common);
    const CounterexampleReport r = reproduce_counterexample(dp, ce_range, ce_delta);
    Outcome o;
    o.body = r;
    o.pass = r.pass;
    o.summary = std::string("product cover ") + (r.product_fails_everywhere ? "fails for every n" : "contains some n") +
                "; join n0 = " + (r.n0_found ? std::to_string(r.n0) : std::string("none"));
    return o;
  });

  // verify --------------------------------------------------------------------
  CLI::App* verify_cmd = app.add_subcommand("verify", "Property suites");
  verify_cmd->require_subcommand(1);

  std::size_t triples = 10000;
  double tolerance = 1e-9;
  CLI::App* metric_cmd = leaf(verify_cmd, "metric", "Metric axioms on the free product");
  metric_cmd->add_option("--triples", triples, "Random triples")->check(CLI::PositiveNumber);
  metric_cmd->add_option("--tolerance", tolerance, "Allowed triangle excess")->check(CLI::NonNegativeNumber);
  leaves.emplace_back(metric_cmd, [&] {
    const FreeProduct fp = free_product_for(common);
    const MetricReport r = check_metric_axioms(free_product_space(fp, common.depth), triples, tolerance, common.sweep());
    Outcome o;
    o.body = r;
    o.pass = r.pass;
    o.summary = "max triangle excess " + format_double(r.max_triangle_violation);
    return o;
  });

  std::vector<int> only;
  CLI::App* all_cmd = leaf(verify_cmd, "all", "The acceptance suite");
  all_cmd->add_option("--only", only, "Criterion ids to run")->check(CLI::Range(1, kCriteria));
  leaves.emplace_back(all_cmd, [&] {
    AcceptanceOptions opt;
    opt.sweep = common.sweep();
    opt.depth = common.depth;
    opt.only = only;
    const auto results = run_acceptance(opt);
    for (const auto& r : results) out << format_line(r) << "\n";
    Outcome o;
    o.body = to_json_results(results);
    o.pass = o.body["pass"].get<bool>();
    o.summary = o.pass ? "all criteria pass" : "some criteria fail";
    return o;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitUsage;
  }

  for (auto& [sub, handler] : leaves) {
    if (!sub->parsed()) continue;
    const std::string command = sub->get_parent()->get_name() + " " + sub->get_name();
    try {
      if (!common.config.empty()) apply_config(sub, common.config);
      if (common.depth < 0 || common.depth > kDepthCap) throw std::invalid_argument("depth outside [0, 32]");
      const Outcome o = handler();
      json body = {{"config", config_echo(sub)}, {"seed", common.seed}, {"pass", o.pass}, {"report", o.body}};
      const json report = envelope(command, std::move(body));
      if (common.out.empty()) {
        if (command == "verify all") out << o.summary << "\n";
        else write_report("-", report);
      } else {
        write_report(common.out, report);
        out << o.summary << "\n";
      }
      return o.pass ? kExitPass : kExitPropertyFailure;
    } catch (const std::invalid_argument& e) {
      err << "zlab " << command << ": " << e.what() << "\n";
      return kExitUsage;
    } catch (const std::domain_error& e) {
      err << "zlab " << command << ": " << e.what() << "\n";
      return kExitUsage;
    } catch (const std::exception& e) {
      err << "zlab " << command << ": " << e.what() << "\n";
      return kExitPropertyFailure;
    }
  }
  err << app.help();
  return kExitUsage;
}

}  // namespace zlab
