#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "isohydra/error.hpp"
#include "isohydra/factorization.hpp"
#include "isohydra/families.hpp"
#include "isohydra/hydrogen.hpp"
#include "isohydra/numerics/bump.hpp"
#include "isohydra/run.hpp"
#include "isohydra/spectralcheck.hpp"
#include "run_internal.hpp"

namespace isohydra::run {

namespace {

namespace sc = spectralcheck;
using detail::format_double;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Checks of one parameter set, prefixed with its tag.
class Suite {
 public:
  explicit Suite(std::string tag) : tag_(std::move(tag)) {}

  void below(const std::string& name, double value, double threshold) {
    add(name, value, threshold, std::isfinite(value) && value <= threshold);
  }
  void above(const std::string& name, double value, double threshold) {
    add(name, value, threshold, std::isfinite(value) && value > threshold);
  }
  // Runs f; a library error becomes a failed check called `name`.
  template <class F>
  void guard(const std::string& name, F&& f) {
    try {
      f();
    } catch (const std::exception& e) {
      add(name, kNaN, kNaN, false);
      part.notes.push_back(tag_ + "." + name + ": " + e.what());
    }
  }
  const std::string& tag() const noexcept { return tag_; }

  Report part;

 private:
  void add(const std::string& name, double value, double threshold, bool pass) {
    part.checks.push_back({tag_ + "." + name, value, threshold, pass});
  }
  std::string tag_;
};

GridInfo info(const std::string& role, const Grid& g) {
  return {role, g.scheme() == GridScheme::uniform ? "uniform" : "log_then_uniform", g.r_min(), g.r_max(), g.size()};
}

// Operator identities on [1e-6, 30 l + 30]; norms and Gram matrices on a
// grid wide enough for psi_{l+3} to decay below rounding. s-wave residuals
// need r_min = 1e-3: the stencil rounding of psi ~ r grows like eps / r there.
Grid operator_grid(int l) { return Grid(1e-6, 30.0 * l + 30.0, 40000); }

Grid state_grid(int l, double r_min = 1e-6) {
  const double n = l + 3.0;
  return Grid(r_min, 4.0 * n * n + 40.0 * n, 40000);
}

Grid eigen_grid(const RunConfig& c, int n_deep, double scale = 1.0) {
  RunConfig d = c;
  if (scale != 1.0) {
    const Grid g = detail::eigen_grid(c, n_deep);
    d.r_max = g.r_max() * scale;
    d.points = static_cast<std::size_t>((g.size() - 1) * scale) + 1;
  }
  return detail::eigen_grid(d, n_deep);
}

// max |a - b| / (l(l+1)/r^2 + 2/r + |b - V_base|) over the nodes.
double potential_difference(const FunctionTable& a, const FunctionTable& b, int base_l) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double r = a.r(i);
    const double vb = hydrogen::potential_v(base_l, r);
    const double scale = base_l * (base_l + 1.0) / (r * r) + 2.0 / r + std::fabs(b.values[i] - vb);
    worst = std::max(worst, std::fabs(a.values[i] - b.values[i]) / scale);
  }
  return worst;
}

std::vector<TestFunction> bumps(const Grid& g) {
  std::vector<TestFunction> out;
  for (double a : {2.0, 6.0, 12.0}) out.push_back(make_bump(g, a));
  return out;
}

struct Pair {
  sc::SolveResult fd, sh;
};

// Both solvers on `pot`; levels compared with `expected` by sorted order
// within each method's certified tolerance, and across methods within 1e-5.
Pair solve_pair(Suite& s, const std::string& name, const FunctionTable& pot, const std::vector<double>& expected,
                bool vectors = false) {
  const int n = static_cast<int>(expected.size());
  Pair p{sc::eigensolve({pot, n, sc::Method::fd_tridiagonal, vectors}),
         sc::eigensolve({pot, n, sc::Method::numerov_shooting, false})};
  for (const auto* res : {&p.fd, &p.sh}) {
    const std::string m = res == &p.fd ? "fd" : "shooting";
    SpectrumRecord rec{s.tag() + "." + name, m, expected, res->spectrum.energies(), res->tolerance, {}};
    for (int k = 0; k < n; ++k) {
      rec.error.push_back(std::fabs(rec.numeric[k] - expected[k]));
      s.below(name + ".analytic_" + m + "_level" + std::to_string(k), rec.error[k], res->tolerance[k]);
    }
    s.part.spectra.push_back(std::move(rec));
    for (const auto& w : res->warnings) s.part.notes.push_back(s.tag() + "." + name + " " + m + ": " + w);
  }
  for (int k = 0; k < n; ++k)
    s.below(name + ".cross_method_level" + std::to_string(k), std::fabs(p.fd.spectrum[k] - p.sh.spectrum[k]), 1e-5);
  return p;
}

std::vector<double> hydrogen_levels(int l, int count) {
  std::vector<double> e;
  for (int k = 1; k <= count; ++k) e.push_back(hydrogen::energy(l, k));
  return e;
}

void certificate_checks(Suite& s, const seeds::SeedPair& sp, const ToleranceConfig& tol) {
  s.guard("factorization_certificate", [&] {
    const auto cert = factorization::evaluate_certificate(sp, tol);
    const int l = sp.params.l;
    s.below("riccati_residual", cert.riccati_residual, tol.residual_tol);
    s.below("factorization_product_residual", cert.product_residual, tol.residual_tol);
    static const char* names[4] = {"H_l=b1+b1+delta1", "H*=b1b1++delta1", "H*=b2+b2+delta2", "H~=b2b2++delta2"};
    for (int k = 0; k < 4; ++k) s.below(std::string("factorization ") + names[k], cert.hamiltonian_residuals[k], tol.residual_tol);
    s.below("delta2_measured", std::fabs(cert.delta2 + 1.0 / (double(l) * l)), 1e-8);
    s.below("delta2_spread", cert.delta2_spread, tol.residual_tol);
    s.above("delta2_minus_delta1", cert.delta2 - cert.delta1, 0.0);
  });
}

void product_invariance_check(Suite& s, const seeds::SeedPair& sp, const FunctionTable& chi) {
  // the first two combinations without a zero on the grid
  const std::array<std::array<double, 2>, 5> candidates{{{1.0, 0.0}, {0.0, 1.0}, {1.0, 1.0}, {1.0, -1.0}, {2.0, 1.0}}};
  std::vector<std::array<double, 2>> good;
  for (const auto& c : candidates)
    if (factorization::singular_radii(sp, c[0], c[1]).size() == sp.wronskian_zeros().size()) good.push_back(c);
  if (good.size() < 2) {
    s.part.notes.push_back(s.tag() + ": fewer than two regular (c1, c2) combinations, product invariance skipped");
    return;
  }
  s.guard("product_invariance", [&] { s.below("product_invariance", factorization::product_invariance(sp, chi, good[0], good[1]), 1e-7); });
}

struct TwoParamOptions {
  bool box_check = false;
  bool overlaps = true;
};

Report verify_two_param(const RunConfig& c, TwoParamOptions opt) {
  const int l = c.l;
  std::ostringstream tag;
  tag << "two-param[l=" << l << ",nu1=" << c.nu1 << ",nu2=" << c.nu2 << "]";
  Suite s(tag.str());
  const auto params = seeds::FamilyParams::two_param(l, c.nu1, c.nu2);
  const ToleranceConfig& tol = c.tol;

  const Grid og = operator_grid(l);
  s.guard("operator_checks", [&] {
    const auto sp = seeds::make_seed_pair(params, og, tol);
    const auto [r1, r2] = seeds::seed_residuals(sp);
    s.below("seed_residual_phi1", r1.pointwise, tol.residual_tol);
    s.below("seed_residual_phi2", r2.pointwise, tol.residual_tol);
    if (params.nu2 != 0.0) s.below("g2_dual_path", sp.overlap_mismatch, 1e-8);

    const auto vt = families::v_tilde_two_param(sp).table;
    const auto vl = hydrogen::potential_table(l, og);
    const auto op = families::make_operator_A(sp, c.variant);
    const auto tests = bumps(og);
    s.below("intertwining_residual",
            sc::intertwining_residual(vt, vl, [&](const FunctionTable& x) { return families::apply_A(op, x); }, tests),
            tol.residual_tol);

    certificate_checks(s, sp, tol);
    product_invariance_check(s, sp, tests[0].f);
    s.guard("chain_state_equivalence", [&] {
      const std::array<double, 2> basis = sp.g1_zeros().empty() ? std::array<double, 2>{1.0, 0.0}
                                                                 : std::array<double, 2>{0.0, 1.0};
      s.below("chain_state_equivalence", factorization::chain_state_equivalence(sp, basis, l + 3).worst(), 1e-6);
    });

    // Second-order Darboux oracle
    s.guard("crum_potential", [&] {
      const auto crum = families::crum_potential(sp);
      double worst = 0.0;
      for (std::size_t i = 0; i < og.size(); ++i) {
        const double r = og[i];
        const double V = hydrogen::potential_v(l, r), cent = 2.0 * (2.0 * l - 1.0) / (r * r);
        const double scale = std::fabs(V) + cent + std::fabs(V - cent - crum.values[i]);
        worst = std::max(worst, std::fabs(crum.values[i] - vt.values[i]) / scale);
      }
      s.below("crum_potential", worst, 1e-6);
    });

  });

  const Grid stg = state_grid(l);
  s.guard("state_checks", [&] {
    const auto sp = seeds::make_seed_pair(params, stg, tol);
    const auto op = families::make_operator_A(sp, c.variant);
    // Verbatim normalization constants and the complete set
    std::vector<FunctionTable> set;
    const auto k1 = families::psi_kernel_m1(sp), k0 = families::psi_kernel_0(sp);
    s.below("norm_kernel_m1", std::fabs(k1.measured_norm - 1.0), 1e-6);
    s.below("norm_kernel_0", std::fabs(k0.measured_norm - 1.0), 1e-6);
    set.push_back(k1.state);
    set.push_back(k0.state);
    for (int n = l + 1; n <= l + 3; ++n) {
      const auto m = families::psi_tilde_mapped(n, sp, op);
      s.below("norm_mapped_n" + std::to_string(n), std::fabs(m.measured_norm - 1.0), 1e-6);
      set.push_back(m.state);
      s.guard("crum_state_n" + std::to_string(n), [&] {
        const auto psi = hydrogen::radial_eigenfunction(n, l, stg);
        const auto crum = families::crum_state(sp, psi, -1.0 / (double(n) * n));
        s.below("crum_state_n" + std::to_string(n), sc::proportionality_residual(crum, m.state), 1e-6);
      });
    }
    s.below("gram_identity", sc::max_identity_deviation(sc::gram_matrix(set)), 1e-6);
  });

  s.guard("spectral_checks", [&] {
    RunConfig cc = c;
    cc.family = Family::two_param;
    const auto tower = detail::tower(cc);
    std::vector<double> expected;
    for (const auto& lv : tower) expected.push_back(lv.energy);
    const Grid eg = eigen_grid(c, detail::deepest(tower));
    s.part.grids.push_back(info("eigen l=" + std::to_string(l), eg));
    const auto sp = seeds::make_seed_pair(params, eg, tol);
    const auto vt = families::v_tilde_two_param(sp).table;
    const auto base = hydrogen::potential_table(l - 2, eg);
    const auto pt = solve_pair(s, "V~", vt, expected, opt.overlaps);
    const auto pb = solve_pair(s, "V_base", base, expected);
    for (int k = 0; k < static_cast<int>(expected.size()); ++k) {
      s.below("isospectral_fd_level" + std::to_string(k), std::fabs(pt.fd.spectrum[k] - pb.fd.spectrum[k]),
              2.0 * std::max(pt.fd.tolerance[k], pb.fd.tolerance[k]));
      s.below("isospectral_shooting_level" + std::to_string(k), std::fabs(pt.sh.spectrum[k] - pb.sh.spectrum[k]),
              2.0 * std::max(pt.sh.tolerance[k], pb.sh.tolerance[k]));
    }
    if (opt.overlaps) {
      std::vector<FunctionTable> analytic{families::psi_kernel_m1(sp).state, families::psi_kernel_0(sp).state};
      const auto op = families::make_operator_A(sp, c.variant);
      for (int n = l + 1; analytic.size() < expected.size(); ++n) analytic.push_back(families::psi_tilde_mapped(n, sp, op).state);
      for (std::size_t k = 0; k < expected.size(); ++k) {
        const auto ref = sc::resample_uniform(analytic[k]);
        const auto g = sc::gram_matrix({pt.fd.vectors[k], ref}, true);
        s.below("eigenvector_overlap_level" + std::to_string(k), 1.0 - std::fabs(g[0][1]), 1e-5);
      }
    }
    if (opt.box_check) {
      const Grid wide = eigen_grid(c, detail::deepest(tower), 2.0);
      const auto vw = families::v_tilde_two_param(params, wide, tol).table;
      const auto rw = sc::eigensolve({vw, static_cast<int>(expected.size()), sc::Method::fd_tridiagonal, false});
      for (std::size_t k = 0; k < expected.size(); ++k)
        s.below("box_truncation_level" + std::to_string(k), std::fabs(rw.spectrum[k] - pt.fd.spectrum[k]),
                pt.fd.tolerance[k]);
    }
  });
  s.part.grids.insert(s.part.grids.begin(), info("state l=" + std::to_string(l), stg));
  s.part.grids.insert(s.part.grids.begin(), info("operator l=" + std::to_string(l), og));
  return std::move(s.part);
}

Report verify_intermediate(const RunConfig& c) {
  const int l = c.l;
  std::ostringstream tag;
  tag << "intermediate[l=" << l << ",nu2=" << c.nu2 << "]";
  Suite s(tag.str());
  const auto params = seeds::FamilyParams::intermediate(l, c.nu2);
  const ToleranceConfig& tol = c.tol;
  const Grid og = operator_grid(l);

  s.guard("operator_checks", [&] {
    const auto sp = seeds::make_seed_pair(params, og, tol);
    const auto vs = factorization::v_star(sp).table;
    s.below("g2_dual_path", sp.overlap_mismatch, 1e-8);
    s.below("v_star_dual_formula", potential_difference(factorization::v_star_susy(sp), vs, l - 1), 1e-8);
    const double r0 = og[0];
    s.below("v_star_centrifugal_index", std::fabs(r0 * r0 * vs.values[0] - l * (l - 1.0)) / (l * (l - 1.0)), 1e-3);

    const auto b1 = factorization::w1_eval(sp, 0.0, 1.0);
    s.below("intertwining_b1",
            sc::intertwining_residual(vs, hydrogen::potential_table(l, og),
                                      [&](const FunctionTable& x) { return factorization::apply_b(b1, x); }, bumps(og)),
            tol.residual_tol);
    certificate_checks(s, sp, tol);
    product_invariance_check(s, sp, bumps(og)[0].f);
  });

  const Grid stg = state_grid(l);
  s.guard("state_checks", [&] {
    const auto sp = seeds::make_seed_pair(params, stg, tol);
    const auto vs = factorization::v_star(sp).table;
    const auto st = factorization::psi_star_states(sp, l + 3);
    std::vector<FunctionTable> set;
    for (const auto& x : st) {
      s.below("eigen_residual_" + x.label, sc::eigen_residual(vs, x.state, x.energy, 1e-6), tol.residual_tol);
      set.push_back(x.state);
    }
    s.below("psi_star_gram_identity", sc::max_identity_deviation(sc::gram_matrix(set)), 1e-6);
  });

  s.guard("spectral_checks", [&] {
    RunConfig cc = c;
    cc.family = Family::intermediate;
    const auto tower = detail::tower(cc);
    std::vector<double> expected;
    double missing = 0.0;
    for (const auto& lv : tower) {
      if (lv.present) expected.push_back(lv.energy);
      else missing = lv.energy;
    }
    const Grid eg = eigen_grid(c, detail::deepest(tower));
    s.part.grids.push_back(info("eigen l=" + std::to_string(l), eg));
    const auto vs = factorization::v_star(l, c.nu2, eg, tol).table;
    const auto p = solve_pair(s, "V*", vs, expected);
    double nearest = std::numeric_limits<double>::infinity();
    for (const auto* res : {&p.fd, &p.sh})
      for (double e : res->spectrum.energies()) nearest = std::min(nearest, std::fabs(e - missing));
    s.above("missing_level_distance", nearest, 1e-3);
  });
  s.part.grids.insert(s.part.grids.begin(), info("state l=" + std::to_string(l), stg));
  s.part.grids.insert(s.part.grids.begin(), info("operator l=" + std::to_string(l), og));
  return std::move(s.part);
}

Report verify_fernandez(const RunConfig& c) {
  const int l = c.l;
  std::ostringstream tag;
  tag << "fernandez[l=" << l << ",gamma=" << (c.gamma_sup ? std::string("sup") : format_double(*c.gamma)) << "]";
  Suite s(tag.str());
  const double gamma = c.gamma_value();
  if (c.gamma_sup) {
    s.part.notes.push_back(tag.str() +
                           ".nu2_gamma_identity: not evaluated at the supremum, where the two-parameter side "
                           "(nu2 = 1) has W(g1, g2) -> 0 as r -> infinity");
  } else {
    s.guard("nu2_gamma_identity", [&] {
      const Grid og = operator_grid(l + 1);
      const auto params = seeds::FamilyParams::two_param(l + 1, 0.0, families::nu2_from_gamma(l, gamma));
      const auto vt = families::v_tilde_two_param(seeds::make_seed_pair(params, og, c.tol)).table;
      const auto vf = families::fernandez_potential(l, gamma, og).table;
      s.below("nu2_gamma_identity", potential_difference(vf, vt, l - 1), 1e-8);
    });
  }
  s.guard("state_checks", [&] {
    // the comparison potential V_{l-1} is an s-wave for l = 1
    const Grid stg = state_grid(l, l == 1 ? 1e-3 : 1e-6);
    s.part.grids.push_back(info("state", stg));
    const auto vf = families::fernandez_potential(l, gamma, stg).table;
    RunConfig cc = c;
    cc.levels = 4;
    std::vector<FunctionTable> set;
    for (const auto& x : detail::states(cc, stg)) {
      s.below("norm_" + x.label, std::fabs(x.norm - 1.0), 1e-6);
      s.below("eigen_residual_" + x.label, sc::eigen_residual(vf, x.state, x.energy, 1e-6), c.tol.residual_tol);
      set.push_back(x.state);
    }
    s.below("gram_identity", sc::max_identity_deviation(sc::gram_matrix(set)), 1e-6);
  });
  s.guard("spectral_checks", [&] {
    const auto tower = detail::tower(c);
    std::vector<double> expected;
    for (const auto& lv : tower)
      if (lv.present) expected.push_back(lv.energy);
    const Grid eg = eigen_grid(c, detail::deepest(tower));
    s.part.grids.push_back(info("eigen", eg));
    solve_pair(s, "V_fernandez", families::fernandez_potential(l, gamma, eg).table, expected);
  });
  return std::move(s.part);
}

Report verify_hydrogen(const RunConfig& c) {
  Suite s("hydrogen[l=" + std::to_string(c.l) + "]");
  s.guard("spectral_checks", [&] {
    const auto expected = hydrogen_levels(c.l, c.levels);
    const Grid eg = eigen_grid(c, c.l + c.levels);
    s.part.grids.push_back(info("eigen", eg));
    solve_pair(s, "V", hydrogen::potential_table(c.l, eg), expected);
  });
  return std::move(s.part);
}

// nu = 0 and gamma -> infinity limits.
Report verify_limits(const RunConfig& c, int l) {
  Suite s("limits[l=" + std::to_string(l) + "]");
  const Grid og = operator_grid(l);
  s.guard("nu_zero_limit", [&] {
    const auto vt = families::v_tilde_two_param(seeds::FamilyParams::two_param(l, 0.0, 0.0), og, c.tol).table;
    s.below("nu_zero_limit", potential_difference(vt, hydrogen::potential_table(l - 2, og), l - 2), 1e-12);
  });
  s.guard("fernandez_large_gamma", [&] {
    const auto vf = families::fernandez_potential(l, 1e8, og).table;
    const auto base = hydrogen::potential_table(l - 1, og);
    double worst = 0.0;
    for (std::size_t i = 0; i < og.size(); ++i) worst = std::max(worst, std::fabs(vf.values[i] - base.values[i]));
    s.below("fernandez_large_gamma", worst, 1e-4);
  });
  return std::move(s.part);
}

void merge(Report& into, Report&& part) {
  for (auto& g : part.grids) {
    const bool seen = std::any_of(into.grids.begin(), into.grids.end(), [&](const GridInfo& x) {
      return x.role == g.role && x.points == g.points && x.r_max == g.r_max;
    });
    if (!seen) into.grids.push_back(std::move(g));
  }
  std::move(part.checks.begin(), part.checks.end(), std::back_inserter(into.checks));
  std::move(part.spectra.begin(), part.spectra.end(), std::back_inserter(into.spectra));
  std::move(part.notes.begin(), part.notes.end(), std::back_inserter(into.notes));
}

nlohmann::json number(double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr); }

nlohmann::json numbers(const std::vector<double>& v) {
  auto a = nlohmann::json::array();
  for (double x : v) a.push_back(number(x));
  return a;
}

}  // namespace

bool Report::passed() const noexcept {
  return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

std::vector<std::string> Report::failures() const {
  std::vector<std::string> out;
  for (const auto& c : checks)
    if (!c.pass) out.push_back(c.name);
  return out;
}

Report verify(const RunConfig& config) {
  config.validate();
  Report rep;
  rep.tol = config.tol;
  rep.notes.push_back("H* in H* = b2+ b2 + delta2 is taken as H*_{l-1}");
  rep.notes.push_back("delta2 is measured from V* - w2^2 + w2' and compared with -1/l^2");

  // Singular parameter sets fail here with their radius, not as checks.
  if (config.family == Family::fernandez) families::fernandez_potential(config.l, config.gamma_value(), Grid(1e-4, 60.0, 2000));
  if (config.family == Family::intermediate) factorization::v_star(config.l, config.nu2, operator_grid(config.l), config.tol);

  std::vector<std::future<Report>> jobs;
  const auto launch = [&](auto f) { jobs.push_back(std::async(std::launch::async, f)); };

  if (config.family == Family::unset) {
    rep.params = {{"family", "sweep"},
                  {"l", "2,3"},
                  {"nu1", "-10,-1,-0.1"},
                  {"nu2", "-10,-1,-0.1"},
                  {"intermediate_nu2", "2"},
                  {"gamma_variant", to_string(config.variant)},
                  {"levels", std::to_string(config.levels)}};
    for (int l : {2, 3}) {
      bool first = true;
      for (double n1 : {-10.0, -1.0, -0.1})
        for (double n2 : {-10.0, -1.0, -0.1}) {
          RunConfig c = config;
          c.family = Family::two_param;
          c.l = l;
          c.nu1 = n1;
          c.nu2 = n2;
          const TwoParamOptions opt{first, true};
          first = false;
          launch([c, opt] { return verify_two_param(c, opt); });
        }
      RunConfig ci = config;
      ci.family = Family::intermediate;
      ci.l = l;
      ci.nu2 = 2.0;
      launch([ci] { return verify_intermediate(ci); });
      launch([config, l] { return verify_limits(config, l); });
    }
  } else {
    rep.params = detail::metadata(config, Grid(1.0, 2.0, 16));
    rep.params.erase(std::remove_if(rep.params.begin(), rep.params.end(),
                                    [](const auto& kv) {
                                      return kv.first == "grid_scheme" || kv.first == "r_min" || kv.first == "r_max" ||
                                             kv.first == "points" || kv.first == "version" ||
                                             kv.first.find("tol") != std::string::npos || kv.first == "fd_step_scale";
                                    }),
                     rep.params.end());
    rep.params.emplace_back("levels", std::to_string(config.levels));
    switch (config.family) {
      case Family::two_param: launch([config] { return verify_two_param(config, {true, true}); }); break;
      case Family::intermediate: launch([config] { return verify_intermediate(config); }); break;
      case Family::fernandez: launch([config] { return verify_fernandez(config); }); break;
      case Family::hydrogen: launch([config] { return verify_hydrogen(config); }); break;
      case Family::unset: break;
    }
  }
  for (auto& j : jobs) merge(rep, j.get());
  return rep;
}

std::string report_json(const Report& report) {
  using nlohmann::json;
  json j;
  j["version"] = ISOHYDRA_VERSION;
  json params = json::object();
  for (const auto& [k, v] : report.params) params[k] = v;
  j["params"] = params;
  json grids = json::array();
  for (const auto& g : report.grids)
    grids.push_back({{"role", g.role}, {"scheme", g.scheme}, {"r_min", g.r_min}, {"r_max", g.r_max}, {"points", g.points}});
  j["grid"] = grids;
  j["tolerances"] = {{"quad_tol", report.tol.quad_tol},
                     {"ode_tol", report.tol.ode_tol},
                     {"residual_tol", report.tol.residual_tol},
                     {"fd_step_scale", report.tol.fd_step_scale}};
  json checks = json::array();
  for (const auto& c : report.checks)
    checks.push_back({{"name", c.name}, {"value", number(c.value)}, {"threshold", number(c.threshold)}, {"pass", c.pass}});
  j["checks"] = checks;
  json spectra = json::object();
  for (const auto& s : report.spectra)
    spectra[s.potential][s.method] = {{"analytic", numbers(s.analytic)},
                                      {"numeric", numbers(s.numeric)},
                                      {"tolerance", numbers(s.tolerance)},
                                      {"error", numbers(s.error)}};
  j["spectra"] = spectra;
  j["notes"] = report.notes;
  j["passed"] = report.passed();
  j["failures"] = report.failures();
  return j.dump(2);
}

}  // namespace isohydra::run
