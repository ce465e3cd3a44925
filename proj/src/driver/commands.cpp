#include <fstream>
#include <sstream>

#include "cubicfib/driver/driver.hpp"
#include "cubicfib/lattice/lattice.hpp"

namespace cubicfib::driver {

namespace {

struct LoadedForm {
  FormDocument doc;
  IntPolynomial C;
  VariableSplit split;
};

LoadedForm load(const CommandOptions& opt, bool need_split) {
  if (!opt.form_path) throw std::invalid_argument(opt.command + " needs --form");
  LoadedForm f{parse_form(*opt.form_path), {}, {}};
  f.C = f.doc.polynomial();
  if (need_split) {
    if (!f.doc.split) throw std::invalid_argument("form document has no split");
    f.split = *f.doc.split;
    if (opt.mode) f.split.mode = forms::fibration_mode_from_string(*opt.mode);
    f.split.validate_for(f.C);
  }
  return f;
}

sieve::BoxSpec box_of(const LoadedForm& f) {
  if (f.doc.metadata.box) return sieve::BoxSpec{*f.doc.metadata.box, {}, {}};
  return sieve::BoxSpec::cube(f.split.y_indices.size(), -1, 1);
}

Json config_of(const CommandOptions& opt) {
  Json c;
  c["command"] = opt.command;
  if (opt.form_path) c["form_hash"] = std::to_string(fnv1a(serialize_form(parse_form(*opt.form_path))));
  if (opt.mode) c["mode"] = *opt.mode;
  c["seed"] = opt.seed;
  c["budget"] = opt.budget;
  c["pmax"] = opt.pmax;
  c["v_max"] = opt.v_max;
  c["heights"] = opt.heights;
  c["method"] = opt.method;
  if (opt.fixed_Y) c["fixed_Y"] = *opt.fixed_Y;
  if (!opt.normal.empty()) c["normal"] = opt.normal;
  c["shift"] = opt.shift;
  if (opt.series_path) c["series"] = *opt.series_path;
  if (opt.predicted) c["predicted"] = *opt.predicted;
  c["slack"] = opt.slack;
  return c;
}

FibrationCount run_fibration(const LoadedForm& f, const CommandOptions& opt, const std::vector<long>& Bs) {
  FibrationCountConfig cfg;
  cfg.box = box_of(f);
  if (f.doc.metadata.y_exponent) cfg.y_exponent = *f.doc.metadata.y_exponent;
  cfg.fixed_Y = opt.fixed_Y;
  cfg.v_max = opt.v_max;
  cfg.seed = opt.seed;
  cfg.budget = opt.budget;
  return fibration_count(f.C, f.split, Bs, cfg);
}

CountSeries read_series(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  Json j = Json::parse(in);
  if (j.contains("sections")) j = j["sections"];
  if (j.contains("count")) j = j["count"];
  if (j.contains("series")) j = j["series"];
  return count_series_from_json(j);
}

}  // namespace

Report run_command(const CommandOptions& opt) {
  Report report(config_of(opt));
  const std::string& cmd = opt.command;
  if (cmd == "analyze") {
    auto f = load(opt, true);
    report.add("form", {{"n", f.doc.n}, {"terms", f.doc.terms.size()}, {"name", f.doc.metadata.name.value_or("")}});
    auto fd = fibration::build_fibration(f.C, f.split, opt.seed);
    report.add("fibration", to_json(fd));
    try {
      report.add("shape", to_json(fibration::classify_shape(fd, opt.seed)));
    } catch (const std::exception& e) {
      report.add("shape", {{"error", e.what()}});
    }
    if (f.doc.metadata.expected_h) {
      auto p = fibration::predicted_exponents(long(f.doc.n), *f.doc.metadata.expected_h, long(fd.rank),
                                              Rational(1, 20), fibration::ShapeTag::Auto);
      report.add("prediction", {{"bound", p.bound}, {"exponent", p.exponent.get_str()}, {"warnings", p.warnings}});
    }
  } else if (cmd == "local") {
    auto f = load(opt, true);
    auto cond = sieve::build_conditions(f.C, f.split, opt.v_max, opt.budget);
    cond.prime_cutoff = opt.pmax;
    report.add("local_conditions", to_json(cond));
  } else if (cmd == "lattice-count") {
    if (opt.normal.empty()) throw std::invalid_argument("lattice-count needs --a");
    lattice::IntVector a;
    for (const auto& s : opt.normal) a.emplace_back(s);
    Integer b(opt.shift);
    Json rows = Json::array();
    for (long B : opt.heights.empty() ? std::vector<long>{10} : opt.heights) {
      Json row = {{"B", B}, {"count", lattice::hyperplane_count_exact(a, b, Rational(B) * B, opt.budget).get_str()}};
      try {
        auto as = lattice::hyperplane_count_asymptotic(a, b, B, 0.5, false);
        row["main_term"] = as.main;
        row["error_budget"] = as.err_eta + as.err_lambda;
      } catch (const std::domain_error& e) {
        row["main_term"] = nullptr;
        row["asymptotic_note"] = e.what();
      }
      rows.push_back(row);
    }
    report.add("lattice_count", {{"a", opt.normal}, {"b", opt.shift}, {"rows", rows}});
  } else if (cmd == "density") {
    auto f = load(opt, true);
    sieve::AdmissibleSetSpec spec;
    spec.box = box_of(f);
    spec.conditions = sieve::build_conditions(f.C, f.split, opt.v_max, opt.budget);
    spec.conditions.prime_cutoff = opt.pmax;
    std::vector<Rational> Ys;
    for (long Y : opt.heights.empty() ? std::vector<long>{20, 40, 80} : opt.heights) Ys.emplace_back(Y);
    report.add("local_conditions", to_json(spec.conditions));
    report.add("density", to_json(sieve::density_estimate(spec, Ys, opt.budget)));
  } else if (cmd == "count") {
    auto f = load(opt, opt.method == "fibration");
    if (opt.heights.empty()) throw std::invalid_argument("count needs --B");
    if (opt.method == "fibration") {
      auto fc = run_fibration(f, opt, opt.heights);
      fc.series.config_hash = report.config_hash();
      report.add("count", to_json(fc));
    } else if (opt.method == "brute") {
      auto s = brute_force_N(f.C, opt.heights, opt.budget);
      s.config_hash = report.config_hash();
      report.add("count", {{"series", to_json(s)}});
    } else {
      throw std::invalid_argument("unknown count method '" + opt.method + "'");
    }
  } else if (cmd == "fit-exponent") {
    CountSeries series;
    std::optional<double> predicted = opt.predicted;
    if (opt.series_path) {
      series = read_series(*opt.series_path);
    } else {
      auto f = load(opt, true);
      if (opt.heights.empty()) throw std::invalid_argument("fit-exponent needs --series or --form with --B");
      auto fc = run_fibration(f, opt, opt.heights);
      fc.series.config_hash = report.config_hash();
      series = fc.series;
      report.add("count", to_json(fc));
      if (!predicted && f.split.mode == FibrationMode::PiPrime) predicted = double(f.doc.n) - 3;
    }
    auto fit = fit_exponent(series);
    Json j = to_json(fit);
    if (predicted) {
      auto v = compare(fit, *predicted, opt.slack);
      j["predicted"] = *predicted;
      j["slack"] = v.slack;
      j["verdict"] = v.pass ? "PASS" : "FAIL";
    }
    report.add("fit", j);
  } else {
    throw std::invalid_argument("unknown command '" + cmd + "'");
  }
  return report;
}

std::string report_csv(const Report& r) {
  const auto& s = r.sections();
  if (s.contains("count")) {
    const auto& c = s["count"];
    return count_csv(count_series_from_json(c.contains("series") ? c["series"] : c));
  }
  if (s.contains("density")) {
    std::string out = "Y,count,density,delta\n";
    for (const auto& row : s["density"]["rows"])
      out += row["Y"].get<std::string>() + "," + row["count"].get<std::string>() + "," +
             row["density_decimal"].get<std::string>() + "," +
             (row["delta"].is_null() ? std::string() : row["delta"].get<std::string>()) + "\n";
    return out;
  }
  return "";
}

}  // namespace cubicfib::driver
