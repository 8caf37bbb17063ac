#include "capfilm/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "capfilm/scenario.hpp"
#include "capfilm/solver.hpp"
#include "capfilm/spanning.hpp"
#include "capfilm/svg_render.hpp"
#include "capfilm/verify.hpp"

namespace capfilm::cli {

namespace fs = std::filesystem;

namespace {

constexpr const char* kCsvHeader =
    "energy,volume,lambda,classification,junction_residual,spanning_ok,"
    "iterations";

std::string csv_row(const film::SolveReport& r) {
  std::ostringstream out;
  out << std::setprecision(17);
  out << r.energy << "," << r.volume << "," << r.lambda << ","
      << film::to_string(r.classification) << "," << r.junction_residual << ","
      << (r.spanning_ok ? 1 : 0) << "," << r.iterations;
  return out.str();
}

int thread_budget(std::size_t jobs) {
  if (const char* env = std::getenv("CAPFILM_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return int(std::min<long>(v, long(jobs)));
  }
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  return int(std::min<std::size_t>(hw, jobs));
}

struct Overrides {
  double resolution = 0.0;
  std::uint64_t seed = 0;
  bool seed_set = false;

  void apply(solve::Scenario& s) const {
    if (resolution > 0.0) s.resolution = resolution;
    if (seed_set) s.seed = seed;
  }
};

int cmd_solve(const std::string& input, const std::string& out_dir,
              const Overrides& ov) {
  solve::Scenario s = io::load_scenario(input);
  ov.apply(s);
  const auto [result, report] = solve::minimize(s);

  fs::create_directories(out_dir);
  {
    std::ofstream csv(fs::path(out_dir) / "report.csv", std::ios::binary);
    csv << kCsvHeader << "\n" << csv_row(report) << "\n";
  }
  io::save_film(result, (fs::path(out_dir) / "film.capfilm").string());
  render::save_film_svg(result, (fs::path(out_dir) / "film.svg").string());

  std::cout << "energy " << report.energy << ", volume " << report.volume
            << ", lambda " << report.lambda << ", "
            << film::to_string(report.classification) << ", iterations "
            << report.iterations
            << (report.converged ? "" : " (iteration cap reached)") << "\n";
  return report.converged ? 0 : 2;
}

struct FitLine {
  double exponent = 0.0;
  double prefactor = 0.0;
  int points = 0;
};

FitLine loglog_fit(const std::vector<double>& xs,
                   const std::vector<double>& ys) {
  FitLine fit;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(xs[i] > 0.0) || !(std::abs(ys[i]) > 1e-300)) continue;
    const double x = std::log(xs[i]);
    const double y = std::log(std::abs(ys[i]));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  fit.points = n;
  if (n >= 2) {
    const double det = double(n) * sxx - sx * sx;
    if (std::abs(det) > 1e-300) {
      fit.exponent = (double(n) * sxy - sx * sy) / det;
      fit.prefactor = std::exp((sy - fit.exponent * sx) / double(n));
    }
  }
  return fit;
}

void write_scaling_svg(const std::string& path,
                       const std::vector<double>& eps,
                       const std::vector<double>& lambdas,
                       const FitLine& fit) {
  std::vector<std::pair<double, double>> pts;  // (log10 eps, log10 |lambda|)
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (eps[i] > 0.0 && std::abs(lambdas[i]) > 1e-300)
      pts.push_back({std::log10(eps[i]), std::log10(std::abs(lambdas[i]))});
  }
  std::ofstream out(path, std::ios::binary);
  out << std::setprecision(8);
  const double W = 640, H = 480, M = 60;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W
      << "\" height=\"" << H << "\" viewBox=\"0 0 " << W << " " << H
      << "\">\n";
  if (pts.size() < 2) {
    out << "  <text x=\"20\" y=\"40\">not enough points</text>\n</svg>\n";
    return;
  }
  double x0 = pts[0].first, x1 = x0, y0 = pts[0].second, y1 = y0;
  for (const auto& p : pts) {
    x0 = std::min(x0, p.first);
    x1 = std::max(x1, p.first);
    y0 = std::min(y0, p.second);
    y1 = std::max(y1, p.second);
  }
  if (x1 - x0 < 1e-12) x1 = x0 + 1.0;
  if (y1 - y0 < 1e-12) y1 = y0 + 1.0;
  const auto px = [&](double x) { return M + (x - x0) / (x1 - x0) * (W - 2 * M); };
  const auto py = [&](double y) { return H - M - (y - y0) / (y1 - y0) * (H - 2 * M); };

  out << "  <rect x=\"" << M << "\" y=\"" << M << "\" width=\"" << W - 2 * M
      << "\" height=\"" << H - 2 * M
      << "\" fill=\"none\" stroke=\"#999999\"/>\n";
  if (fit.points >= 2) {
    const double fy0 = std::log10(fit.prefactor) + fit.exponent * x0;
    const double fy1 = std::log10(fit.prefactor) + fit.exponent * x1;
    out << "  <line x1=\"" << px(x0) << "\" y1=\"" << py(fy0) << "\" x2=\""
        << px(x1) << "\" y2=\"" << py(fy1)
        << "\" stroke=\"#b03030\" stroke-width=\"1.5\"/>\n";
  }
  for (const auto& p : pts)
    out << "  <circle cx=\"" << px(p.first) << "\" cy=\"" << py(p.second)
        << "\" r=\"4\" fill=\"#275d8c\"/>\n";
  out << "  <text x=\"" << M << "\" y=\"" << H - M / 3.0
      << "\" font-size=\"14\">log10 epsilon from " << x0 << " to " << x1
      << "</text>\n";
  out << "  <text x=\"" << M << "\" y=\"" << M / 2.0
      << "\" font-size=\"14\">log10 |lambda|, fitted exponent "
      << fit.exponent << "</text>\n";
  out << "</svg>\n";
}

int cmd_sweep(const std::string& input, const std::string& out_dir,
              const std::vector<double>& eps_list, const Overrides& ov) {
  if (eps_list.size() < 4) {
    std::cerr << "need ≥4 points\n";
    return 1;
  }

  const std::size_t n = eps_list.size();
  std::vector<film::SolveReport> reports(n);
  std::vector<std::string> errors(n);
  std::atomic<std::size_t> next{0};

  const auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        solve::Scenario s = io::load_scenario(input, eps_list[i]);
        ov.apply(s);
        reports[i] = solve::minimize(s).second;
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  const int threads = thread_budget(n);
  for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();

  for (std::size_t i = 0; i < n; ++i) {
    if (!errors[i].empty()) {
      std::cerr << "epsilon " << eps_list[i] << ": " << errors[i] << "\n";
      return 1;
    }
  }

  fs::create_directories(out_dir);
  {
    std::ofstream csv(fs::path(out_dir) / "sweep.csv", std::ios::binary);
    csv << std::setprecision(17);
    csv << "epsilon," << kCsvHeader << "\n";
    for (std::size_t i = 0; i < n; ++i)
      csv << eps_list[i] << "," << csv_row(reports[i]) << "\n";
  }

  std::vector<double> lambdas(n), excesses(n);
  for (std::size_t i = 0; i < n; ++i) lambdas[i] = reports[i].lambda;
  {
    solve::Scenario s0 = io::load_scenario(input, eps_list[0]);
    const double baseline =
        2.0 * span::steiner_baseline(s0.wire, s0.spec).length;
    for (std::size_t i = 0; i < n; ++i)
      excesses[i] = reports[i].energy - baseline;
  }
  const FitLine lam_fit = loglog_fit(eps_list, lambdas);
  const FitLine exc_fit = loglog_fit(eps_list, excesses);
  {
    std::ofstream csv(fs::path(out_dir) / "fits.csv", std::ios::binary);
    csv << std::setprecision(17);
    csv << "quantity,exponent,prefactor,points\n";
    csv << "lambda," << lam_fit.exponent << "," << lam_fit.prefactor << ","
        << lam_fit.points << "\n";
    csv << "excess_energy," << exc_fit.exponent << "," << exc_fit.prefactor
        << "," << exc_fit.points << "\n";
  }
  write_scaling_svg((fs::path(out_dir) / "scaling.svg").string(), eps_list,
                    lambdas, lam_fit);

  bool all_converged = true;
  for (const film::SolveReport& r : reports)
    all_converged = all_converged && r.converged;
  std::cout << n << " solves, lambda exponent " << lam_fit.exponent
            << ", excess exponent " << exc_fit.exponent << "\n";
  return all_converged ? 0 : 2;
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

int cmd_verify(const std::string& input, const Overrides& ov) {
  film::FilmComplex f;
  std::uint64_t seed = 1;
  if (ends_with(input, ".capfilm")) {
    f = io::load_film(input);
  } else {
    solve::Scenario s = io::load_scenario(input);
    ov.apply(s);
    seed = s.seed;
    f = solve::minimize(s).first;
  }
  if (ov.seed_set) seed = ov.seed;

  struct Row {
    std::string name;
    int state = 0;  // 0 pass, 1 fail, 2 skip
    std::string text;
  };
  std::vector<Row> rows;
  const auto add_report = [&rows](const verify::VerificationReport& r) {
    std::ostringstream t;
    t << "margin " << r.margin;
    if (!r.details.empty()) t << "; " << r.details;
    rows.push_back({r.check, r.passed ? 0 : 1, t.str()});
  };

  {
    const auto bad = film::validate(f);
    if (bad.empty())
      rows.push_back({"structure", 0, ""});
    else
      rows.push_back(
          {"structure", 1, bad.front().code + " (" + bad.front().detail + ")"});
  }

  double lambda = 0.0;
  bool have_lambda = false;
  try {
    const auto [l, spread] = solve::lambda_estimate(f);
    lambda = l;
    have_lambda = true;
    std::ostringstream t;
    t << "lambda " << l << ", spread " << spread;
    rows.push_back({"lambda_estimate", 0, t.str()});
  } catch (const std::exception& e) {
    rows.push_back({"lambda_estimate", 2, e.what()});
  }

  {
    const double jr = solve::junction_residual(f);
    std::ostringstream t;
    t << "residual " << jr;
    rows.push_back({"junction_balance", jr <= 1e-2 ? 0 : 1, t.str()});
  }

  if (have_lambda) {
    add_report(verify::convex_hull_check(f, lambda));
    const double eta = 0.02 * film::frame_diameter(f.wire);
    for (const auto& rep : verify::hull_field_residual(f, lambda, eta))
      add_report(rep);

    double gap = 0.0;
    for (const film::Disk& d : f.wire.disks)
      gap = gap == 0.0 ? d.radius : std::min(gap, d.radius);
    gap *= 0.25;
    if (gap > 0.0) {
      const double res = verify::first_variation_residual(
          f, lambda, verify::make_random_field(f.wire, gap, seed), 2);
      std::ostringstream t;
      t << "residual " << res;
      rows.push_back(
          {"stationarity", res <= 0.05 * (1.0 + std::abs(lambda)) ? 0 : 1,
           t.str()});
    }
  } else {
    rows.push_back({"convex_hull", 2, "lambda unavailable"});
    rows.push_back({"hull_field", 2, "lambda unavailable"});
    rows.push_back({"stationarity", 2, "lambda unavailable"});
  }

  add_report(verify::density_check(f, 100, seed));

  bool any_fail = false;
  for (const Row& r : rows) {
    const char* tag = r.state == 0 ? "PASS" : (r.state == 1 ? "FAIL" : "SKIP");
    std::cout << r.name << ": " << tag;
    if (!r.text.empty()) std::cout << " (" << r.text << ")";
    std::cout << "\n";
    any_fail = any_fail || r.state == 1;
  }
  return any_fail ? 1 : 0;
}

int cmd_render(const std::string& input, const std::string& out_dir,
               const Overrides& ov) {
  film::FilmComplex f;
  if (ends_with(input, ".capfilm")) {
    f = io::load_film(input);
  } else {
    solve::Scenario s = io::load_scenario(input);
    ov.apply(s);
    f = s.initial;
  }
  fs::create_directories(out_dir);
  const std::string path = (fs::path(out_dir) / "film.svg").string();
  render::save_film_svg(f, path);
  std::cout << path << "\n";
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"planar soap film and capillarity toolkit"};
  app.require_subcommand(1);

  std::string input;
  std::string out_dir = ".";
  std::vector<double> eps_list;
  Overrides ov;
  std::uint64_t seed_value = 0;

  const auto add_common = [&](CLI::App* cmd, bool with_eps) {
    cmd->add_option("input", input, "scenario or .capfilm film file")
        ->required();
    cmd->add_option("--out", out_dir, "output directory");
    cmd->add_option("--resolution", ov.resolution,
                    "spanning test grid resolution");
    cmd->add_option("--seed", seed_value, "seed override");
    if (with_eps)
      cmd->add_option("--epsilon-list", eps_list, "liquid areas to solve")
          ->expected(-1);
  };

  CLI::App* c_solve = app.add_subcommand("solve", "minimize one scenario");
  add_common(c_solve, false);
  CLI::App* c_sweep =
      app.add_subcommand("sweep", "minimize over a list of liquid areas");
  add_common(c_sweep, true);
  CLI::App* c_verify =
      app.add_subcommand("verify", "run structural and variational checks");
  add_common(c_verify, false);
  CLI::App* c_render = app.add_subcommand("render", "write an SVG picture");
  add_common(c_render, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  for (CLI::App* cmd : {c_solve, c_sweep, c_verify, c_render})
    if (cmd->parsed() && cmd->count("--seed") > 0) {
      ov.seed = seed_value;
      ov.seed_set = true;
    }

  try {
    if (c_solve->parsed()) return cmd_solve(input, out_dir, ov);
    if (c_sweep->parsed()) return cmd_sweep(input, out_dir, eps_list, ov);
    if (c_verify->parsed()) return cmd_verify(input, ov);
    if (c_render->parsed()) return cmd_render(input, out_dir, ov);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace capfilm::cli
