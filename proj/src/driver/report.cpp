#include <cmath>
#include <cstdio>
#include <sstream>

#include "cubicfib/driver/driver.hpp"

namespace cubicfib::driver {

namespace {

Json ints(const std::vector<Integer>& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(x.get_str());
  return a;
}

template <class T>
Json plain(const std::vector<T>& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(x);
  return a;
}

Json inertia(const forms::Inertia& i) { return {{"rank", i.rank}, {"positive", i.positive}, {"negative", i.negative}}; }

Json split_json(const VariableSplit& s) {
  return {{"x_vars", plain(s.x_indices)}, {"y_vars", plain(s.y_indices)}, {"mode", forms::to_string(s.mode)}};
}

std::string hex64(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// Fixed-precision decimal so that reports compare byte for byte.
std::string fixed(double v, int digits = 6) {
  if (!std::isfinite(v)) return v > 0 ? "inf" : (v < 0 ? "-inf" : "nan");
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

Report::Report(const Json& config) : config_(config), hash_(fnv1a(config.dump())) {}

Json Report::to_json() const {
  Json j;
  j["schema"] = "cubicfib-report";
  j["schema_version"] = kReportSchemaVersion;
  j["config_hash"] = hex64(hash_);
  j["config"] = config_;
  j["sections"] = sections_;
  return j;
}

Json to_json(const CountSeries& s) {
  Json pts = Json::array();
  for (const auto& p : s.points) pts.push_back({{"B", p.B}, {"count", p.count.get_str()}});
  return {{"predicate", s.predicate}, {"method", s.method}, {"config_hash", hex64(s.config_hash)}, {"points", pts}};
}

CountSeries count_series_from_json(const Json& j) {
  CountSeries s;
  s.predicate = j.value("predicate", std::string("primitive"));
  s.method = j.value("method", std::string());
  if (j.contains("config_hash")) s.config_hash = std::stoull(j["config_hash"].get<std::string>(), nullptr, 16);
  for (const auto& p : j.at("points")) s.points.push_back({p.at("B").get<long>(), Integer(p.at("count").get<std::string>())});
  return s;
}

Json to_json(const ExponentFit& f) {
  Json r = Json::array();
  for (double v : f.residuals) r.push_back(fixed(v));
  return {{"slope", fixed(f.slope)}, {"intercept", fixed(f.intercept)}, {"points", f.points}, {"residuals", r}};
}

Json to_json(const FibrationCount& f) {
  Json samples = Json::array();
  for (const auto& s : f.samples) samples.push_back({{"B", s.B}, {"point", ints(s.point)}, {"verified", s.verified}});
  Json j = {{"series", to_json(f.series)},
            {"Y", plain(f.Y)},
            {"fibres", plain(f.fibres)},
            {"label", f.sampled ? "sampled lower bound (bounded search over a subset of quadric fibres)"
                                : "certified lower bound (exact lattice counts on linear fibres)"},
            {"samples", samples}};
  if (!f.conditions_failure.empty()) j["conditions_failure"] = f.conditions_failure;
  return j;
}

Json to_json(const CoprimeRepresentation& r) {
  Json d = Json::array();
  for (const auto& [div, m] : r.by_divisor) d.push_back({{"d", div.get_str()}, {"M_d", m.get_str()}});
  return {{"count", r.count.get_str()},
          {"delta", r.delta.get_str()},
          {"precondition_holds", r.precondition_holds},
          {"by_divisor", d},
          {"mobius_sum", r.mobius_sum.get_str()},
          {"consistent", r.consistent()}};
}

Json to_json(const fibration::FibrationData& fd) {
  return {{"n", fd.n},
          {"split", split_json(fd.split)},
          {"rank", fd.rank},
          {"witness_rows", plain(fd.witness_rows)},
          {"witness_cols", plain(fd.witness_cols)},
          {"witness_minor", fd.witness_minor.to_string()},
          {"randomized", {{"seed", fd.record.seed}, {"trials", fd.record.trials}, {"estimate", fd.record.estimate}}},
          {"all_larger_minors_vanish", fd.all_larger_minors_vanish},
          {"larger_minors_expanded", fd.larger_minors_expanded}};
}

Json to_json(const fibration::ShapeClassification& s) {
  Json j;
  j["semidefinite_factor"] = {{"holds", s.product.holds},
                              {"l", s.product.l.to_string()},
                              {"F", s.product.F.to_string()},
                              {"inertia", inertia(s.product.inertia)},
                              {"definite_on_support", s.product.definite_on_support},
                              {"certificate_verified", s.product.certificate_verified},
                              {"reason", s.product.reason}};
  if (s.common_factor_Qi) {
    Json cof = Json::array();
    for (const auto& c : s.common_factor_Qi->cofactors) cof.push_back(c.to_string());
    j["common_linear_factor"] = {{"l", s.common_factor_Qi->l.to_string()}, {"cofactors", cof}};
  } else {
    j["common_linear_factor"] = nullptr;
  }
  if (s.minor_factor) {
    j["minor_common_factor"] = {{"status", fibration::to_string(s.minor_factor->status)},
                                {"nonzero_minors", s.minor_factor->nonzero_minors},
                                {"factor", s.minor_factor->factor.to_string()},
                                {"slice_rank_verified", s.minor_factor->slice_rank_verified}};
  } else {
    j["minor_common_factor"] = nullptr;
  }
  if (s.rank2) {
    j["rank2"] = {{"rank_over_K", s.rank2->rank_over_K},
                  {"shape", fibration::to_string(s.rank2->shape)},
                  {"kappa", s.rank2->kappa.get_str()},
                  {"identity_verified", s.rank2->identity_verified},
                  {"alarm", s.rank2->alarm}};
  } else {
    j["rank2"] = nullptr;
  }
  j["linear_block_size"] = s.linear_block_size;
  return j;
}

Json to_json(const sieve::LocalConditionSet& c) {
  Json bad = Json::array();
  for (const auto& b : c.bad)
    bad.push_back({{"p", b.p},
                   {"v", b.v},
                   {"modulus", b.modulus},
                   {"residue", plain(b.residue)},
                   {"witness", plain(b.witness.residue)},
                   {"reverified", b.reverified}});
  Json j = {{"mode", forms::to_string(c.mode)},
            {"M", c.M.get_str()},
            {"bad_primes", bad},
            {"locus_polynomials", c.locus.size()},
            {"exact_good_primes", c.exact_good_primes},
            {"failed", c.failed}};
  if (c.failed) j["failure"] = c.failure;
  return j;
}

Json to_json(const sieve::DensityEstimate& d) {
  Json rows = Json::array();
  for (const auto& r : d.rows) {
    Json row = {{"Y", r.Y.get_str()}, {"count", r.count.get_str()}, {"density", r.density.get_str()},
                {"density_decimal", fixed(r.density.get_d())}};
    row["delta"] = r.delta ? Json(r.delta->get_str()) : Json(nullptr);
    rows.push_back(row);
  }
  return {{"rows", rows}, {"tail_loss", fixed(d.tail_loss, 9)}, {"fitted_locus_dim", fixed(d.fitted_locus_dim, 3)}};
}

std::string count_csv(const CountSeries& s) {
  std::ostringstream out;
  out << "B,count,logB,logN\n";
  for (const auto& p : s.points) {
    out << p.B << "," << p.count.get_str() << "," << (p.B > 0 ? fixed(std::log(double(p.B))) : "") << ",";
    if (p.count > 0) out << fixed(std::log(p.count.get_d()));
    out << "\n";
  }
  return out.str();
}

}  // namespace cubicfib::driver
