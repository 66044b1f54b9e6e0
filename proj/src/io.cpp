#include "kgnf/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace kgnf {

namespace {

// JSON has no infinity; such values are written as null.
json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json poly_list(const std::vector<Poly>& v, int first) {
  json a = json::array();
  for (std::size_t i = first; i < v.size(); ++i) a.push_back(poly_to_json(v[i]));
  return a;
}

json parts_to_json(const std::map<int, Poly>& parts) {
  json a = json::array();
  for (const auto& [m, p] : parts) a.push_back({{"m", m}, {"norm", poly_norm(p, 1.0)}});
  return a;
}

}  // namespace

json poly_to_json(const Poly& f) {
  json j;
  j["kind"] = kind_name(f.kind());
  j["n"] = f.is_free() ? json(nullptr) : json(f.n());
  json terms = json::array();
  for (const auto& [m, c] : f.sorted()) {
    json t;
    json sites = json::array(), xe = json::array(), ye = json::array();
    for (const Factor& x : m) {
      sites.push_back(x.site);
      xe.push_back(x.a);
      ye.push_back(x.b);
    }
    t["sites"] = sites;
    t["xexp"] = xe;
    t["yexp"] = ye;
    t["re"] = c.real();
    t["im"] = c.imag();
    terms.push_back(t);
  }
  j["terms"] = terms;
  return j;
}

Poly poly_from_json(const json& j) {
  try {
    const std::string kind = j.at("kind").get<std::string>();
    Kind k;
    if (kind == "real")
      k = Kind::Real;
    else if (kind == "birkhoff")
      k = Kind::Birkhoff;
    else
      throw InvalidInput("unknown polynomial kind '" + kind + "'");
    const int n = j.at("n").is_null() ? 0 : j.at("n").get<int>();
    Poly f(k, n);
    for (const auto& t : j.at("terms")) {
      const auto sites = t.at("sites").get<std::vector<int>>();
      const auto xe = t.at("xexp").get<std::vector<int>>();
      const auto ye = t.at("yexp").get<std::vector<int>>();
      if (sites.size() != xe.size() || sites.size() != ye.size())
        throw InvalidInput("term arrays sites/xexp/yexp differ in length");
      std::vector<Factor> fs;
      for (std::size_t i = 0; i < sites.size(); ++i) {
        if (xe[i] < 0 || ye[i] < 0 || xe[i] > 255 || ye[i] > 255) throw InvalidInput("exponent out of range");
        fs.push_back({static_cast<int16_t>(sites[i]), static_cast<uint8_t>(xe[i]), static_cast<uint8_t>(ye[i])});
      }
      const double im = t.value("im", 0.0);
      if (k == Kind::Real && im != 0.0) throw InvalidInput("real polynomial with an imaginary coefficient");
      f.add(Monomial::from_factors(fs), cplx(t.at("re").get<double>(), im));
    }
    f.prune(0.0);
    return f;
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("malformed polynomial JSON: ") + e.what());
  }
}

json cyclic_to_json(const CyclicFn& F) {
  json j = poly_to_json(F.seed);
  j["n"] = F.n;
  j["alignment"] = alignment_name(F.alignment);
  return j;
}

CyclicFn cyclic_from_json(const json& j) {
  CyclicFn F;
  json seed = j;
  F.n = j.at("n").is_null() ? 0 : j.at("n").get<int>();
  seed["n"] = nullptr;
  F.seed = poly_from_json(seed);
  const std::string al = j.value("alignment", "left");
  if (al == "left")
    F.alignment = Alignment::Left;
  else if (al == "symmetric")
    F.alignment = Alignment::Symmetric;
  else
    throw InvalidInput("unknown alignment '" + al + "'");
  return F;
}

json decay_to_json(const DecayProfile& p) {
  json norms = json::array();
  for (const auto& [m, v] : p.norms) norms.push_back({{"m", m}, {"norm", v}});
  return {{"method", p.method}, {"C", num(p.C)}, {"sigma", num(p.sigma)}, {"norms", norms}};
}

json linear_to_json(const LinearNF& nf) {
  json j;
  j["a"] = nf.a;
  j["mu"] = nf.mu;
  j["omega"] = nf.omega;
  j["sigma0"] = num(nf.sigma0);
  j["sigma1"] = num(nf.sigma1);
  j["n"] = nf.n;
  j["quartic_sign"] = nf.quartic_sign;
  j["A_quarter_row"] = nf.quarter.row;
  j["A_minus_quarter_row"] = nf.mquarter.row;
  j["h_omega"] = poly_to_json(nf.h_omega);
  j["zeta0"] = poly_to_json(nf.zeta0);
  j["h1"] = poly_to_json(nf.h1);
  return j;
}

json normalform_to_json(const NormalFormResult& res) {
  json j;
  j["linear"] = linear_to_json(res.lnf);
  j["order"] = res.r;
  j["ring"] = res.ring == 0 ? json(nullptr) : json(res.ring);
  j["coordinates"] = "birkhoff";
  j["h_omega"] = poly_to_json(res.h_omega);
  j["zeta0"] = poly_to_json(res.zeta0);
  j["chi"] = poly_list(res.chi, 1);
  j["zeta"] = poly_list(res.zeta, 1);
  j["remainder_head"] = poly_list(res.head, 0);
  j["remainder_first_grade"] = res.r + 1;
  json steps = json::array();
  for (int s = 1; s <= res.r; ++s) {
    steps.push_back({{"s", s},
                     {"neumann_iterations", res.neumann_iterations[s]},
                     {"chi_norm", poly_norm(res.chi[s])},
                     {"zeta_norm", poly_norm(res.zeta[s])},
                     {"chi_terms", res.chi[s].size()},
                     {"zeta_terms", res.zeta[s].size()},
                     {"chi_decay", decay_to_json(fit_decay(res.chi[s]))},
                     {"zeta_decay", decay_to_json(fit_decay(res.zeta[s]))}});
  }
  j["steps"] = steps;
  return j;
}

json gdnls_to_json(const GdnlsModel& g, const StandardDnls& ref) {
  json j;
  j["a"] = g.a;
  j["mu"] = g.mu;
  j["omega"] = g.omega;
  j["n"] = g.n;
  j["quartic_sign"] = g.quartic_sign;
  json b = json::array();
  for (std::size_t m = 0; m < g.b.size(); ++m) {
    if (g.b[m] == 0.0) continue;
    b.push_back({{"m", m + 1}, {"b", g.b[m]}});
  }
  j["b"] = b;
  j["zeta1_symmetric_parts"] = parts_to_json(g.zeta1_parts);
  j["zeta1_decay"] = decay_to_json(g.zeta1_decay);
  j["zeta1_leading"] = g.zeta1_leading;
  j["reference"] = {{"leading_kernel_average", g.leading_average},
                    {"leading_real_dnls", g.leading_display},
                    {"dnls_coupling", g.dnls_coupling},
                    {"gdnls_coupling", g.b.empty() ? 0.0 : 2.0 * g.b[0]},
                    {"standard_linear", ref.linear_coefficient},
                    {"standard_quartic", ref.quartic_coefficient},
                    {"standard_a", ref.a},
                    {"standard_E", ref.E}};
  j["zeta0"] = poly_to_json(g.zeta0);
  j["zeta1"] = poly_to_json(g.zeta1);
  return j;
}

json constants_to_json(const ConstantsRecord& c) {
  json j;
  j["a"] = c.a;
  j["mu"] = c.mu;
  j["omega"] = c.omega;
  j["r"] = c.r;
  j["sigma0"] = num(c.sigma0);
  j["sigma1"] = num(c.sigma1);
  j["sigma_star"] = num(c.sigma_star);
  j["window"] = {num(c.window_lo), num(c.window_hi)};
  j["window_empty"] = c.window_empty;
  j["sigma_star_admissible"] = c.sigma_star_admissible;
  json ss = json::array();
  for (double s : c.sigma_s) ss.push_back(num(s));
  j["sigma_s"] = ss;
  j["C_zeta0"] = num(c.C_zeta0);
  j["C_h1"] = num(c.C_h1);
  j["E0_star"] = num(c.E0_star);
  j["mu_star"] = num(c.mu_star);
  j["gamma"] = num(c.gamma);
  j["C_star"] = num(c.C_star);
  j["C_r"] = num(c.C_r);
  j["C_tilde"] = num(c.C_tilde);
  j["C_tilde_2Cr"] = num(c.C_tilde_alt);
  j["C_K"] = num(c.C_K);
  j["R_star"] = num(c.R_star);
  j["r_max"] = c.r_max;
  j["order_admissible"] = c.order_admissible;
  j["hypotheses"] = c.hypotheses();
  return j;
}

json bound_report_to_json(const BoundReport& rep) {
  json a = json::array();
  for (const auto& b : rep.checks)
    a.push_back({{"name", b.name},
                 {"s", b.s},
                 {"sigma", num(b.sigma)},
                 {"measured", num(b.measured)},
                 {"bound", num(b.bound)},
                 {"status", status_name(b.status)}});
  return {{"all_pass", rep.all_pass()}, {"checks", a}};
}

json deformation_to_json(const DeformationReport& rep) {
  json steps = json::array();
  for (const auto& s : rep.steps)
    steps.push_back({{"s", s.s},
                     {"radius", s.radius},
                     {"field_norm", s.field_norm},
                     {"bound", s.bound},
                     {"sampled_max", s.sampled_max}});
  return {{"R", rep.R},
          {"radius_admissible", rep.radius_admissible},
          {"total_bound", num(rep.total_bound)},
          {"sampled_total", rep.sampled_total},
          {"samples", rep.samples},
          {"pass", rep.pass()},
          {"steps", steps}};
}

json drift_to_json(const DriftReport& rep) {
  json pts = json::array();
  for (const auto& p : rep.points)
    pts.push_back({{"R", p.R},
                   {"max_dH_omega", p.max_dH_omega},
                   {"max_dZ", p.max_dZ},
                   {"max_dPhi", p.max_dPhi},
                   {"energy_drift", p.energy_drift},
                   {"bound_omega_R4", p.bound_omega},
                   {"bound_z", p.bound_z}});
  return {{"slope", num(rep.slope)}, {"monotone", rep.monotone}, {"points", pts}};
}

void write_file_atomic(const std::string& path, const std::string& text) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp);
    out << text;
    if (!out) throw std::runtime_error("write failed for " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) throw std::runtime_error("cannot rename " + tmp + " to " + path);
}

}  // namespace kgnf
