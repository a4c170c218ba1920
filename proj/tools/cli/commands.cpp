#include "cli/commands.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>
#include <numbers>
#include <sstream>

#include "cli/angles.hpp"
#include "crot/entanglement.hpp"
#include "crot/protocol.hpp"

namespace crot::cli {
namespace {

using nlohmann::ordered_json;

struct Options {
  std::string theta;
  std::string alpha;
  std::string theta_grid;
  std::string alpha_grid;
  std::string input = "random";
  std::string out;
  std::string tol = "1e-4";
  std::string level = "quick";
  std::size_t trials = 100000;
  std::uint64_t seed = 1;
  bool deterministic = false;
  bool json = false;
};

// JSON numbers carry the same 12 significant digits as the text output.
ordered_json num(double v) {
  if (!std::isfinite(v)) return nullptr;
  return std::stod(format_number(v));
}

ProtocolParams params_from(const Options& o) {
  if (o.theta.empty() || o.alpha.empty()) throw UsageError("--theta and --alpha are required");
  return ProtocolParams(parse_angle(o.theta), parse_angle(o.alpha));
}

void print_table(std::ostream& os, const std::vector<std::pair<std::string, std::string>>& rows) {
  std::size_t width = 0;
  for (const auto& [k, v] : rows) width = std::max(width, k.size());
  for (const auto& [k, v] : rows) os << k << std::string(width + 2 - k.size(), ' ') << v << '\n';
}

int cmd_pmax(const Options& o, std::ostream& os) {
  const ProtocolParams p = params_from(o);
  const OptimumResult opt = optimum(p);
  const PovmWeights w{opt.x, opt.y};
  const double d = delta(p), tr = tr_e3(p, w), det = det_e3(p, w);
  if (o.json) {
    ordered_json j;
    j["params"] = {{"theta", num(p.theta())}, {"alpha", num(p.alpha())}};
    j["case"] = case_name(opt.case_label);
    j["x"] = num(opt.x);
    j["y"] = num(opt.y);
    j["p_max"] = num(opt.p_max);
    j["delta"] = num(d);
    j["tr_e3"] = num(tr);
    j["det_e3"] = num(det);
    os << j.dump(2) << '\n';
  } else {
    print_table(os, {{"theta", format_number(p.theta())},
                     {"alpha", format_number(p.alpha())},
                     {"case", std::string(case_name(opt.case_label))},
                     {"x", format_number(opt.x)},
                     {"y", format_number(opt.y)},
                     {"p_max", format_number(opt.p_max)},
                     {"delta", format_number(d)},
                     {"tr_e3", format_number(tr)},
                     {"det_e3", format_number(det)}});
  }
  return kOk;
}

int cmd_sweep(const Options& o, std::ostream& os) {
  if (o.theta_grid.empty() || o.alpha_grid.empty()) throw UsageError("--theta-grid and --alpha-grid are required");
  const GridSpec tg = parse_grid(o.theta_grid);
  const GridSpec ag = parse_grid(o.alpha_grid);
  ordered_json rows = ordered_json::array();
  std::ostringstream csv;
  csv << kSweepHeader << '\n';
  for (double theta : tg.values())
    for (double alpha : ag.values()) {
      const ProtocolParams p(theta, alpha);
      const OptimumResult opt = optimum(p);
      const EntanglementReport r = avg_cost(p);
      if (o.json) {
        rows.push_back({{"theta_rad", num(p.theta())},
                        {"alpha_rad", num(p.alpha())},
                        {"case", case_name(opt.case_label)},
                        {"x", num(opt.x)},
                        {"y", num(opt.y)},
                        {"p_max", num(opt.p_max)},
                        {"e_alpha", num(r.e_alpha)},
                        {"avg_cost", num(r.avg_cost)}});
      } else {
        csv << format_number(p.theta()) << ',' << format_number(p.alpha()) << ',' << case_name(opt.case_label) << ','
            << format_number(opt.x) << ',' << format_number(opt.y) << ',' << format_number(opt.p_max) << ','
            << format_number(r.e_alpha) << ',' << format_number(r.avg_cost) << '\n';
      }
    }
  if (o.json) {
    ordered_json j;
    j["theta_grid"] = {{"start", num(tg.start)}, {"stop", num(tg.stop)}, {"count", tg.count}};
    j["alpha_grid"] = {{"start", num(ag.start)}, {"stop", num(ag.stop)}, {"count", ag.count}};
    j["rows"] = std::move(rows);
    os << j.dump(2) << '\n';
  } else {
    os << csv.str();
  }
  return kOk;
}

InputSpec parse_input(const std::string& s) {
  if (s == "random") return InputSpec::random();
  if (s.size() == 2 && (s[0] == '0' || s[0] == '1') && (s[1] == '0' || s[1] == '1'))
    return InputSpec::basis(static_cast<std::size_t>((s[0] - '0') * 2 + (s[1] - '0')));
  throw UsageError("--input must be 'random' or a basis string 00, 01, 10, 11; got '" + s + "'");
}

int cmd_simulate(const Options& o, std::ostream& os, std::ostream& err) {
  const ProtocolParams p = params_from(o);
  if (o.trials < 1) throw UsageError("--trials must be >= 1");
  const MonteCarloSummary s = monte_carlo(p, o.trials, o.seed, o.deterministic, parse_input(o.input));
  const OptimumResult opt = optimum(p);
  if (o.json) {
    ordered_json j;
    j["params"] = {{"theta", num(p.theta())}, {"alpha", num(p.alpha())}, {"x", num(opt.x)}, {"y", num(opt.y)},
                   {"deterministic", o.deterministic}, {"input", o.input}};
    j["trials"] = s.trials;
    j["seed"] = s.seed;
    j["success_count"] = s.success_count;
    j["branch_counts"] = s.branch_counts;
    j["empirical_p"] = num(s.empirical_p);
    j["analytic_p"] = num(s.analytic_p);
    j["z_score"] = num(s.z_score);
    j["mean_fidelity"] = num(s.mean_fidelity);
    j["mean_ebits"] = o.deterministic ? num(s.mean_ebits) : ordered_json(nullptr);
    os << j.dump(2) << '\n';
  } else {
    std::vector<std::pair<std::string, std::string>> rows = {
        {"theta", format_number(p.theta())},
        {"alpha", format_number(p.alpha())},
        {"trials", std::to_string(s.trials)},
        {"seed", std::to_string(s.seed)},
        {"success_count", std::to_string(s.success_count)},
        {"branch_counts", std::to_string(s.branch_counts[0]) + " " + std::to_string(s.branch_counts[1]) + " " +
                              std::to_string(s.branch_counts[2])},
        {"empirical_p", format_number(s.empirical_p)},
        {"analytic_p", format_number(s.analytic_p)},
        {"z_score", format_number(s.z_score)},
        {"mean_fidelity", format_number(s.mean_fidelity)}};
    if (o.deterministic) rows.emplace_back("mean_ebits", format_number(s.mean_ebits));
    print_table(os, rows);
  }
  if (!(std::abs(s.z_score) <= 5.0)) {
    err << "self-check failed: |z_score| = " << format_number(std::abs(s.z_score)) << " > 5\n";
    return kVerifyFailed;
  }
  return kOk;
}

int cmd_threshold(const Options& o, std::ostream& os) {
  const double tol = parse_number(o.tol);
  const double t = threshold_theta(tol);
  if (o.json) {
    ordered_json j;
    j["tol"] = num(tol);
    j["theta_star_rad"] = num(t);
    j["theta_star_pi"] = num(t / std::numbers::pi);
    os << j.dump(2) << '\n';
  } else {
    print_table(os, {{"theta_star_rad", format_number(t)}, {"theta_star_pi", format_number(t / std::numbers::pi)}});
  }
  return kOk;
}

int cmd_verify(const Options& o, std::ostream& os, std::ostream& err, const VerifyHooks& hooks) {
  VerifyLevel level;
  if (o.level == "quick") level = VerifyLevel::Quick;
  else if (o.level == "full") level = VerifyLevel::Full;
  else throw UsageError("--level must be quick or full");
  const std::vector<CheckResult> checks = run_verify(level, hooks);
  const auto first_fail = std::find_if(checks.begin(), checks.end(), [](const CheckResult& c) { return !c.pass; });
  if (o.json) {
    ordered_json list = ordered_json::array();
    for (const CheckResult& c : checks) list.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    ordered_json j;
    j["level"] = o.level;
    j["checks"] = std::move(list);
    j["passed"] = first_fail == checks.end();
    os << j.dump(2) << '\n';
  } else {
    std::size_t width = 0;
    for (const CheckResult& c : checks) width = std::max(width, c.name.size());
    for (const CheckResult& c : checks)
      os << (c.pass ? "PASS  " : "FAIL  ") << c.name << std::string(width + 2 - c.name.size(), ' ') << c.detail << '\n';
  }
  if (first_fail != checks.end()) {
    err << "verification failed: " << first_fail->name << '\n';
    return kVerifyFailed;
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const VerifyHooks& hooks) {
  CLI::App app{"Nonlocal controlled-rotation analysis and simulation", "crot"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_flag("--json", o.json, "Machine-readable JSON output");
    sub->add_option("--out", o.out, "Write output to PATH");
  };
  auto add_angles = [&](CLI::App* sub) {
    sub->add_option("--theta", o.theta, "Rotation angle: radians or multiple of pi (0.25pi)")->required();
    sub->add_option("--alpha", o.alpha, "Resource angle: radians or multiple of pi")->required();
  };

  CLI::App* pmax = app.add_subcommand("pmax", "Optimal success probability and POVM weights");
  add_angles(pmax);
  add_common(pmax);

  CLI::App* sweep = app.add_subcommand("sweep", "Grid of optima and entanglement cost");
  sweep->add_option("--theta-grid", o.theta_grid, "start:stop:count")->required();
  sweep->add_option("--alpha-grid", o.alpha_grid, "start:stop:count")->required();
  add_common(sweep);

  CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo run of the protocol");
  add_angles(simulate);
  simulate->add_option("--trials", o.trials, "Number of trials")->capture_default_str();
  simulate->add_option("--seed", o.seed, "RNG seed")->capture_default_str();
  simulate->add_flag("--deterministic", o.deterministic, "Recover failures with a Bell pair");
  simulate->add_option("--input", o.input, "random or a basis string on (A, B): 00, 01, 10, 11")->capture_default_str();
  add_common(simulate);

  CLI::App* threshold = app.add_subcommand("threshold", "Angle below which partial resources beat one ebit");
  threshold->add_option("--tol", o.tol, "Bisection width in units of pi")->capture_default_str();
  add_common(threshold);

  CLI::App* verify = app.add_subcommand("verify", "Run the self-check suite");
  verify->add_option("--level", o.level, "quick or full")->capture_default_str();
  add_common(verify);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  }

  std::ostringstream buffer;
  int code = kOk;
  try {
    if (pmax->parsed()) code = cmd_pmax(o, buffer);
    else if (sweep->parsed()) code = cmd_sweep(o, buffer);
    else if (simulate->parsed()) code = cmd_simulate(o, buffer, err);
    else if (threshold->parsed()) code = cmd_threshold(o, buffer);
    else code = cmd_verify(o, buffer, err, hooks);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::domain_error& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  }

  if (o.out.empty()) {
    out << buffer.str();
  } else {
    std::ofstream file(o.out, std::ios::binary);
    if (!(file << buffer.str()) || !file.flush()) {
      err << "error: cannot write " << o.out << '\n';
      return kIoError;
    }
  }
  return code;
}

}  // namespace crot::cli
