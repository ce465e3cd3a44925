#include <fstream>
#include <iostream>

#include "CLI11.hpp"

#include "cubicfib/driver/driver.hpp"

using namespace cubicfib::driver;

int main(int argc, char** argv) {
  CLI::App app{"Fibration experiments on cubic forms"};
  app.require_subcommand(1);
  CommandOptions opt;
  std::string out_path, csv_path;

  auto common = [&](CLI::App* sub, bool needs_form) {
    auto* f = sub->add_option("--form", opt.form_path, "form document (JSON)");
    if (needs_form) f->required();
    sub->add_option("--mode", opt.mode, "pi or pi_prime; overrides the document split")
        ->check(CLI::IsMember({"pi", "pi_prime"}));
    sub->add_option("--seed", opt.seed, "random seed");
    sub->add_option("--budget", opt.budget, "enumeration budget");
    sub->add_option("--pmax", opt.pmax, "good-prime cutoff for reports");
    sub->add_option("--vmax", opt.v_max, "largest gradient valuation in witness searches");
    sub->add_option("--out", out_path, "write the JSON report here instead of standard output");
    sub->add_option("--csv", csv_path, "also write the CSV table here");
  };

  auto* analyze = app.add_subcommand("analyze", "fibration rank and shape classification");
  common(analyze, true);
  auto* local = app.add_subcommand("local", "bad primes and p-adic witnesses of the admissible set");
  common(local, true);
  auto* lat = app.add_subcommand("lattice-count", "integer points on a hyperplane inside a ball");
  common(lat, false);
  lat->add_option("--a", opt.normal, "primitive normal vector")->required()->delimiter(',');
  lat->add_option("--b", opt.shift, "constant term");
  lat->add_option("--B", opt.heights, "radii")->delimiter(',');
  auto* density = app.add_subcommand("density", "admissible-set density table");
  common(density, true);
  density->add_option("--Y", opt.heights, "box scales")->delimiter(',');
  auto* count = app.add_subcommand("count", "primitive point counts, brute force or fibration lower bound");
  common(count, true);
  count->add_option("--B", opt.heights, "heights")->required()->delimiter(',');
  count->add_option("--method", opt.method, "fibration or brute")->check(CLI::IsMember({"fibration", "brute"}));
  count->add_option("--fixed-Y", opt.fixed_Y, "parameter range instead of Y = floor(B^e)");
  auto* fit = app.add_subcommand("fit-exponent", "least-squares exponent of a count series");
  common(fit, false);
  fit->add_option("--series", opt.series_path, "count series or report JSON");
  fit->add_option("--B", opt.heights, "heights when counting from --form")->delimiter(',');
  fit->add_option("--fixed-Y", opt.fixed_Y, "parameter range instead of Y = floor(B^e)");
  fit->add_option("--predicted", opt.predicted, "predicted exponent");
  fit->add_option("--slack", opt.slack, "allowed shortfall of the fitted slope");

  CLI11_PARSE(app, argc, argv);
  opt.command = app.get_subcommands().front()->get_name();

  try {
    Report report = run_command(opt);
    std::string text = report.dump();
    if (out_path.empty()) {
      std::cout << text;
    } else {
      std::ofstream(out_path, std::ios::binary) << text;
    }
    if (!csv_path.empty()) std::ofstream(csv_path, std::ios::binary) << report_csv(report);
  } catch (const FormError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
