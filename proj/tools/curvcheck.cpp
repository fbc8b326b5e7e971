// curvcheck: verify curvature identities and classify structures on a metric.
//
//   curvcheck verify --metric sphere_s3 --points 10 --seed 42 --json out.json
//   curvcheck classify --metric ppwave_rec
//   curvcheck list-metrics
//   curvcheck parse-check my.metric
//
// Exit status: 0 pass, 1 asserted residual above tolerance, 2 load or usage error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "curv/curv.hpp"

namespace {

constexpr int kExitUsage = 2;

struct Options {
  std::string metric;
  int points = 10;
  std::uint64_t seed = 42;
  double tol = 1e-8;
  std::vector<std::string> k_tensors;
  std::vector<std::string> identities;
  std::string json_path;
  bool text = false;
};

void add_run_options(CLI::App* cmd, Options& o, bool identities) {
  cmd->add_option("--metric", o.metric, "builtin metric name or path to a metric file")->required();
  cmd->add_option("--points", o.points, "number of sampled points")->capture_default_str();
  cmd->add_option("--seed", o.seed, "sampling seed")->capture_default_str();
  cmd->add_option("--tol", o.tol, "relative tolerance for asserted residuals")->capture_default_str();
  cmd->add_option("--k-tensor", o.k_tensors,
                  "K tensor kind: projective, conformal, concircular, conharmonic, quasi[:a[:b]] (repeatable)");
  if (identities) cmd->add_option("--identity", o.identities, "restrict to these identities (repeatable)");
  auto* json = cmd->add_option("--json", o.json_path, "write the JSON report to PATH ('-' for stdout)");
  cmd->add_flag("--text", o.text, "print the text report (default)")->excludes(json);
}

curv::RunConfig make_config(const Options& o) {
  curv::RunConfig cfg;
  cfg.metric = o.metric;
  cfg.points = o.points;
  cfg.seed = o.seed;
  cfg.tol = o.tol;
  if (!o.k_tensors.empty()) {
    cfg.k_kinds.clear();
    for (const auto& k : o.k_tensors) cfg.k_kinds.push_back(curv::KKind::parse(k));
  }
  for (const auto& id : o.identities) cfg.identities.push_back(curv::IdentityId::parse(id));
  cfg.format = o.json_path.empty() ? curv::OutputFormat::Text : curv::OutputFormat::Json;
  cfg.output_path = o.json_path == "-" ? "" : o.json_path;
  return cfg;
}

int write_output(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return 0;
  }
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) {
    std::cerr << "error: cannot write '" << path << "'\n";
    return kExitUsage;
  }
  return 0;
}

int run(const Options& o, bool identities, bool structures) {
  curv::RunConfig cfg = make_config(o);
  cfg.run_identities = identities;
  cfg.run_structures = structures;
  const curv::Report report = curv::run_suite(cfg);
  const int w = write_output(curv::emit(report, cfg.format), cfg.output_path);
  return w != 0 ? w : report.exit_code();
}

int list_metrics() {
  for (const auto& name : curv::builtin_names()) {
    const curv::MetricSpec s = curv::builtin(name);
    std::cout << name << "  dim " << s.dim << "  coords";
    for (const auto& c : s.coords) std::cout << ' ' << c;
    std::cout << '\n';
  }
  return 0;
}

int parse_check(const std::string& path) {
  const curv::MetricSpec s = curv::load_metric_file(path);
  std::cout << "ok: " << s.name << " (dim " << s.dim << ")\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical verification of curvature identities"};
  app.require_subcommand(1);
  Options o;
  std::string parse_path;

  auto* verify = app.add_subcommand("verify", "run the identity suite and structure classification");
  add_run_options(verify, o, true);
  auto* classify = app.add_subcommand("classify", "structure classification only");
  add_run_options(classify, o, false);
  auto* list = app.add_subcommand("list-metrics", "list the builtin metrics");
  auto* check = app.add_subcommand("parse-check", "validate a metric file");
  check->add_option("path", parse_path, "metric file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (*verify) return run(o, true, true);
    if (*classify) return run(o, false, true);
    if (*list) return list_metrics();
    if (*check) return parse_check(parse_path);
  } catch (const curv::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
