#include "pmelab/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "pmelab/calculus.hpp"
#include "pmelab/equivalence.hpp"

namespace pmelab {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

std::vector<std::string> split_char(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

double parse_num(const std::string& s, const std::string& where) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0')
    throw std::invalid_argument("config: bad number '" + s + "' for " + where);
  return v;
}

int parse_int(const std::string& s, const std::string& where) {
  const double v = parse_num(s, where);
  const int i = static_cast<int>(v);
  if (i != v) throw std::invalid_argument("config: expected integer for " + where);
  return i;
}

std::vector<double> parse_seq(const std::string& s, const std::string& where) {
  std::vector<double> out;
  for (const std::string& tok : split_ws(s)) out.push_back(parse_num(tok, where));
  return out;
}

FieldSpec parse_field(const std::string& value, int dim, const std::string& where) {
  const std::vector<std::string> tok = split_ws(value);
  if (tok.empty()) throw std::invalid_argument("config: empty field for " + where);
  FieldSpec fs;
  const std::string& kind = tok[0];
  auto need = [&](size_t n) {
    if (tok.size() != n)
      throw std::invalid_argument("config: wrong argument count for " + where +
                                  " = " + kind);
  };
  if (kind == "constant") {
    need(2);
    fs.kind = FieldSpec::Kind::Constant;
    fs.c = parse_num(tok[1], where);
  } else if (kind == "bump") {
    need(dim == 2 ? 5 : 4);
    fs.kind = FieldSpec::Kind::Bump;
    int i = 1;
    fs.cx = parse_num(tok[i++], where);
    if (dim == 2) fs.cy = parse_num(tok[i++], where);
    fs.radius = parse_num(tok[i++], where);
    fs.height = parse_num(tok[i++], where);
    if (!(fs.radius > 0.0))
      throw std::invalid_argument("config: bump radius must be > 0 for " + where);
  } else if (kind == "barenblatt") {
    need(3);
    fs.kind = FieldSpec::Kind::Barenblatt;
    fs.C = parse_num(tok[1], where);
    fs.t0 = parse_num(tok[2], where);
  } else if (kind == "file") {
    need(2);
    fs.kind = FieldSpec::Kind::File;
    fs.path = tok[1];
  } else if (kind == "from_g") {
    need(1);
    fs.kind = FieldSpec::Kind::FromG;
  } else if (kind == "solve") {
    need(1);
    fs.kind = FieldSpec::Kind::Solve;
  } else {
    throw std::invalid_argument("config: unknown field kind '" + kind + "' for " +
                                where);
  }
  return fs;
}

double bump_value(const FieldSpec& fs, int dim, double x, double y) {
  const double dx = x - fs.cx;
  const double dy = dim == 2 ? y - fs.cy : 0.0;
  const double q = 1.0 - (dx * dx + dy * dy) / (fs.radius * fs.radius);
  return q > 0.0 ? fs.height * q * q : 0.0;
}

}  // namespace

ScenarioConfig parse_scenario(const std::string& text, const std::string& origin) {
  ScenarioConfig cfg;
  // raw grid inputs; dim defaults to 1
  int dim = 1, nx = 0, ny = 0, nt = 0;
  double xlo = 0.0, xhi = 1.0, ylo = 0.0, yhi = 1.0, T = 1.0;
  bool have_g = false;
  std::vector<std::pair<std::string, std::string>> field_lines;  // deferred

  std::string block;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw std::invalid_argument(origin + ": malformed block header at line " +
                                    std::to_string(lineno));
      block = trim(line.substr(1, line.size() - 2));
      if (block != "grid" && block != "data" && block != "params" &&
          block != "checks" && block != "output")
        throw std::invalid_argument(origin + ": unknown block [" + block + "]");
      continue;
    }
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument(origin + ": expected 'key = value' at line " +
                                  std::to_string(lineno));
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const std::string where = "[" + block + "] " + key;
    if (block.empty())
      throw std::invalid_argument(origin + ": key '" + key + "' outside any block");

    if (block == "grid") {
      if (key == "dim") dim = parse_int(value, where);
      else if (key == "xlo") xlo = parse_num(value, where);
      else if (key == "xhi") xhi = parse_num(value, where);
      else if (key == "ylo") ylo = parse_num(value, where);
      else if (key == "yhi") yhi = parse_num(value, where);
      else if (key == "nx") nx = parse_int(value, where);
      else if (key == "ny") ny = parse_int(value, where);
      else if (key == "nt") nt = parse_int(value, where);
      else if (key == "T") T = parse_num(value, where);
      else throw std::invalid_argument(origin + ": unknown key '" + key + "' in [grid]");
    } else if (block == "data") {
      if (key != "psi" && key != "g" && key != "u0" && key != "target" &&
          key != "exact")
        throw std::invalid_argument(origin + ": unknown key '" + key + "' in [data]");
      field_lines.emplace_back(key, value);
      if (key == "g") have_g = true;
    } else if (block == "params") {
      if (key == "m") cfg.m = parse_num(value, where);
      else if (key == "delta_seq") cfg.chain.delta_seq = parse_seq(value, where);
      else if (key == "eps_seq") cfg.chain.eps_seq = parse_seq(value, where);
      else if (key == "gamma_seq") cfg.chain.gamma_seq = parse_seq(value, where);
      else if (key == "h") cfg.h = parse_num(value, where);
      else if (key == "i_max") cfg.chain.i_max = parse_int(value, where);
      else if (key == "basis_seed")
        cfg.basis_seed = static_cast<uint64_t>(parse_num(value, where));
      else if (key == "basis_count") cfg.basis_count = parse_int(value, where);
      else if (key == "refine_levels") cfg.refine_levels = parse_int(value, where);
      else if (key == "comparison_scale")
        cfg.comparison_scale = parse_num(value, where);
      else throw std::invalid_argument(origin + ": unknown key '" + key + "' in [params]");
    } else if (block == "checks") {
      if (key != "run")
        throw std::invalid_argument(origin + ": unknown key '" + key + "' in [checks]");
      cfg.checks.clear();
      for (const std::string& tok : split_ws(value))
        if (tok != "none") cfg.checks.push_back(tok);
    } else {  // output
      if (key == "dir") cfg.out_dir = value;
      else if (key == "name") cfg.name = value;
      else if (key == "formats") {
        cfg.write_csv = cfg.write_dump = false;
        for (const std::string& tok : split_ws(value)) {
          if (tok == "csv") cfg.write_csv = true;
          else if (tok == "dump") cfg.write_dump = true;
          else if (tok != "none")
            throw std::invalid_argument(origin + ": unknown output format '" + tok + "'");
        }
      } else {
        throw std::invalid_argument(origin + ": unknown key '" + key + "' in [output]");
      }
    }
  }

  if (dim != 1 && dim != 2)
    throw std::invalid_argument(origin + ": [grid] dim must be 1 or 2");
  if (nx < 3 || nt < 2) throw std::invalid_argument(origin + ": [grid] needs nx >= 3, nt >= 2");
  if (dim == 2 && ny < 3) throw std::invalid_argument(origin + ": [grid] needs ny >= 3");
  cfg.grid = dim == 1 ? SpaceTimeGrid::make1d(xlo, xhi, nx, nt, T)
                      : SpaceTimeGrid::make2d(xlo, xhi, ylo, yhi, nx, ny, nt, T);
  for (const auto& [key, value] : field_lines) {
    FieldSpec fs = parse_field(value, dim, "[data] " + key);
    if (key == "psi") cfg.psi = fs;
    else if (key == "g") cfg.g = fs;
    else if (key == "u0") cfg.u0 = fs;
    else if (key == "target") cfg.target = fs;
    else cfg.exact = fs;
  }
  if (!have_g) throw std::invalid_argument(origin + ": [data] g is required");
  if (cfg.exact.kind != FieldSpec::Kind::None &&
      cfg.exact.kind != FieldSpec::Kind::Barenblatt)
    throw std::invalid_argument(origin + ": [data] exact must be a barenblatt field");
  cfg.chain.validate();
  return cfg;
}

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::invalid_argument("config: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << is.rdbuf();
  return parse_scenario(buf.str(), path);
}

ScalarField sample_field(const FieldSpec& fs, const SpaceTimeGrid& grid, double m,
                         const ScalarField* g, const std::vector<double>* u0) {
  switch (fs.kind) {
    case FieldSpec::Kind::Constant:
      return ScalarField::constant(grid, fs.c);
    case FieldSpec::Kind::Bump:
      return ScalarField::sample(
          grid, [&](double x, double y, double) { return bump_value(fs, grid.dim, x, y); },
          fs.height >= 0.0);
    case FieldSpec::Kind::Barenblatt: {
      BarenblattParams bp{m, grid.dim, fs.C, fs.t0};
      bp.validate();
      return ScalarField::sample(
          grid, [&](double x, double y, double t) { return barenblatt(x, y, t, bp); },
          true);
    }
    case FieldSpec::Kind::File: {
      ScalarField f = read_field_dump(fs.path);
      if (!f.grid().same_layout(grid))
        throw std::invalid_argument("field file '" + fs.path +
                                    "' does not match the requested grid");
      return f;
    }
    case FieldSpec::Kind::Solve: {
      if (!g || !u0)
        throw std::invalid_argument("solve-type field needs boundary/initial data");
      PMEParams p;
      p.m = m;
      p.eps = 0.0;
      return solve_pme(*u0, *g, p, grid).u;
    }
    case FieldSpec::Kind::FromG:
      throw std::invalid_argument("from_g is only meaningful for u0");
    case FieldSpec::Kind::None:
      throw std::invalid_argument("field not specified");
  }
  throw std::logic_error("unreachable");
}

ObstacleProblemSpec build_problem(const ScenarioConfig& cfg,
                                  const SpaceTimeGrid& grid) {
  ObstacleProblemSpec spec;
  spec.m = cfg.m;
  spec.g = sample_field(cfg.g, grid, cfg.m);
  spec.psi = sample_field(cfg.psi, grid, cfg.m);
  if (cfg.u0.kind == FieldSpec::Kind::FromG)
    spec.u0 = spec.g.slice(0);
  else
    spec.u0 = sample_field(cfg.u0, grid, cfg.m).slice(0);
  return spec;
}

bool RunResult::all_pass() const {
  for (const CheckResult& c : checks)
    if (!c.pass) return false;
  return true;
}

std::string RunResult::summary() const {
  std::ostringstream os;
  for (const CheckResult& c : checks)
    os << (c.pass ? "pass" : "FAIL") << "  " << c.name
       << (c.detail.empty() ? "" : ": " + c.detail) << "\n";
  os << (all_pass() ? "result: pass" : "result: fail") << "\n";
  return os.str();
}

namespace {

Region interior_region(const SpaceTimeGrid& g) {
  Region r;
  const double mx = 0.1 * (g.hi[0] - g.lo[0]);
  const double my = g.dim == 2 ? 0.1 * (g.hi[1] - g.lo[1]) : 0.0;
  r.xlo = {g.lo[0] + mx, g.lo[1] + my};
  r.xhi = {g.hi[0] - mx, g.hi[1] - my};
  r.t1 = 0.05 * g.T;
  r.t2 = 0.95 * g.T;
  return r;
}

SpaceTimeGrid refined(const SpaceTimeGrid& base, int level) {
  const int scale = 1 << level;
  if (base.dim == 1)
    return SpaceTimeGrid::make1d(base.lo[0], base.hi[0],
                                 (base.nx[0] - 1) * scale + 1,
                                 (base.nt - 1) * scale + 1, base.T);
  return SpaceTimeGrid::make2d(base.lo[0], base.hi[0], base.lo[1], base.hi[1],
                               (base.nx[0] - 1) * scale + 1,
                               (base.nx[1] - 1) * scale + 1,
                               (base.nt - 1) * scale + 1, base.T);
}

std::string fmt_seq(const std::vector<double>& v) {
  std::string s;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) s += " ";
    s += format_double(v[i]);
  }
  return s;
}

}  // namespace

RunResult run_scenario(const ScenarioConfig& cfg) {
  RunResult out;
  std::filesystem::create_directories(cfg.out_dir);
  auto emit = [&](const std::string& file, const std::string& content) {
    const std::string path = cfg.out_dir + "/" + file;
    write_file_atomic(path, content);
    out.artifacts.push_back(path);
  };

  const SpaceTimeGrid& grid = cfg.grid;
  const ObstacleProblemSpec problem = build_problem(cfg, grid);
  const Diagnostics diag = validate_spec(problem);
  out.checks.push_back({"data-validation", diag.all_pass(),
                        diag.all_pass() ? "" : "\n" + diag.summary()});
  if (!diag.all_pass()) {
    emit(cfg.name + "-summary.txt", out.summary());
    return out;
  }

  const StrongSolveResult strong = solve_strong(problem, cfg.chain);
  for (size_t k = 0; k < strong.deltas.size(); ++k)
    out.metrics.emplace_back("feasibility_" + std::to_string(k),
                             strong.feasibility_seq[k]);
  for (size_t k = 0; k < strong.cauchy_increments.size(); ++k)
    out.metrics.emplace_back("cauchy_increment_" + std::to_string(k),
                             strong.cauchy_increments[k]);

  if (cfg.write_dump) {
    const std::string path = cfg.out_dir + "/" + cfg.name + "-solution.pmef";
    write_field_dump(strong.u, path);
    out.artifacts.push_back(path);
  }
  if (cfg.write_csv) {
    std::ostringstream os;
    write_field_csv(strong.u, os);
    emit(cfg.name + "-solution.csv", os.str());
    emit(cfg.name + "-newton.csv", newton_stats_csv(strong.newton));
  }

  const double dmin = cfg.chain.delta_seq.back();
  for (const std::string& check : cfg.checks) {
    CheckResult cr{check, false, ""};
    if (check == "feasibility") {
      bool mono = true;
      for (size_t k = 1; k < strong.feasibility_seq.size(); ++k)
        if (strong.feasibility_seq[k] > strong.feasibility_seq[k - 1] + 1e-12)
          mono = false;
      const double bound = 2.0 * std::pow(dmin, 1.0 / cfg.m);
      const double last = strong.feasibility_seq.back();
      cr.pass = mono && last <= bound;
      cr.detail = "values [" + fmt_seq(strong.feasibility_seq) + "], bound " +
                  format_double(bound);
    } else if (check == "energy-uniformity") {
      const Region interior = interior_region(grid);
      std::vector<double> re, rg;
      std::ostringstream csv;
      csv << "index,delta,sup_Lm1,grad_um_sq,grad_umid_sq,A,A_tilde,"
             "ratio_energy,ratio_grad\n";
      for (size_t k = 0; k < cfg.chain.delta_seq.size(); ++k) {
        RegularizationParams reg{cfg.chain.eps_seq.back(),
                                 cfg.chain.gamma_seq.back(),
                                 cfg.chain.delta_seq[k], cfg.h};
        const PenalizedResult run = solve_penalized(problem, reg);
        const EnergyReport er = energy_report(run.u, cfg.m, interior, &problem);
        re.push_back(er.ratio_energy);
        rg.push_back(er.ratio_grad);
        csv << k << ',' << format_double(cfg.chain.delta_seq[k]) << ','
            << format_double(er.sup_Lm1) << ',' << format_double(er.grad_um_sq)
            << ',' << format_double(er.grad_umid_sq) << ','
            << format_double(er.A) << ',' << format_double(er.A_tilde) << ','
            << format_double(er.ratio_energy) << ','
            << format_double(er.ratio_grad) << '\n';
      }
      emit(cfg.name + "-energy.csv", csv.str());
      auto band_ok = [](const std::vector<double>& v) {
        const double lo = *std::min_element(v.begin(), v.end());
        const double hi = *std::max_element(v.begin(), v.end());
        return hi <= 2.0 * std::max(lo, 1e-300) || hi <= 1e-12;
      };
      cr.pass = band_ok(re) && band_ok(rg);
      cr.detail = "ratio_energy [" + fmt_seq(re) + "], ratio_grad [" + fmt_seq(rg) + "]";
    } else if (check == "supercaloric") {
      if (cfg.target.kind == FieldSpec::Kind::None) {
        cr.detail = "no target field configured";
      } else {
        const ScalarField target =
            sample_field(cfg.target, grid, cfg.m, &problem.g, &problem.u0);
        try {
          const SupercaloricResult res = approximate_supercaloric(
              target, cfg.m, interior_region(grid), cfg.chain.i_max);
          bool dec = true;
          for (size_t i = 1; i < res.l2_errors.size(); ++i)
            if (!(res.l2_errors[i] < res.l2_errors[i - 1])) dec = false;
          cr.pass = dec;
          cr.detail = "sandwich violation " +
                      format_double(res.max_sandwich_violation) + ", L2 errors [" +
                      fmt_seq(res.l2_errors) + "]";
          for (size_t i = 0; i < res.l2_errors.size(); ++i)
            out.metrics.emplace_back("supercaloric_l2_" + std::to_string(i),
                                     res.l2_errors[i]);
        } catch (const std::runtime_error& e) {
          cr.detail = e.what();
        }
      }
    } else if (check == "equivalence") {
      FieldSampler sampler;
      if (cfg.exact.kind == FieldSpec::Kind::Barenblatt) {
        sampler = [&](const SpaceTimeGrid& g) {
          return sample_field(cfg.exact, g, cfg.m);
        };
      } else {
        sampler = [&](const SpaceTimeGrid& g) {
          const ScalarField gb = sample_field(cfg.g, g, cfg.m);
          std::vector<double> u0 = cfg.u0.kind == FieldSpec::Kind::FromG
                                       ? gb.slice(0)
                                       : sample_field(cfg.u0, g, cfg.m).slice(0);
          PMEParams p;
          p.m = cfg.m;
          p.eps = 0.0;
          return solve_pme(u0, gb, p, g).u;
        };
      }
      const EquivalenceReport rep =
          check_equivalence(sampler, cfg.m, grid, cfg.refine_levels,
                            cfg.basis_count, cfg.basis_seed);
      emit(cfg.name + "-equivalence.csv", equivalence_report_csv(rep));
      double min_order = 0.0;
      if (!rep.refinement_orders_i.empty())
        min_order = std::min(
            *std::min_element(rep.refinement_orders_i.begin(),
                              rep.refinement_orders_i.end()),
            *std::min_element(rep.refinement_orders_ii.begin(),
                              rep.refinement_orders_ii.end()));
      cr.pass = rep.forms_agree && min_order >= std::log2(1.5);
      cr.detail = "forms " + std::string(rep.forms_agree ? "agree" : "DIFFER") +
                  ", min refinement order " + format_double(min_order);
    } else if (check == "comparison") {
      const double s = cfg.comparison_scale;
      ObstacleProblemSpec lower = problem;
      lower.psi = problem.psi.map([s](double v) { return s * v; });
      lower.g = problem.g.map([s](double v) { return s * v; });
      for (double& v : lower.u0) v *= s;
      const StrongSolveResult low = solve_strong(lower, cfg.chain);
      const ComparisonReport rep =
          comparison_check(strong.u, low.u, Region::full(grid));
      cr.pass = rep.precondition_ok && rep.max_violation <= 1e-10;
      cr.detail = rep.precondition_ok
                      ? "max violation " + format_double(rep.max_violation)
                      : rep.message;
      out.metrics.emplace_back("comparison_violation", rep.max_violation);
    } else if (check == "coincidence-pme") {
      PMEParams p;
      p.m = cfg.m;
      p.eps = 0.0;
      const ScalarField plain = solve_pme(problem.u0, problem.g, p, grid).u;
      const double tol = default_coincidence_tol(dmin, cfg.m);
      const auto masks = coincidence_set(strong.u, problem.psi, tol);
      // place test bumps in the widest spatial strip clear of the
      // near-contact set, so their supports can avoid it entirely
      bool any_mask = false;
      double mlo = grid.hi[0], mhi = grid.lo[0];
      for (int k = 0; k < grid.nt; ++k)
        for (int n = 0; n < grid.num_nodes(); ++n)
          if (masks[k][n]) {
            any_mask = true;
            mlo = std::min(mlo, grid.coord(n, 0));
            mhi = std::max(mhi, grid.coord(n, 0));
          }
      Region strip = Region::full(grid);
      const double margin = 0.02 * (grid.hi[0] - grid.lo[0]);
      strip.xlo[0] += margin;
      strip.xhi[0] -= margin;
      strip.t1 = 0.02 * grid.T;
      strip.t2 = 0.98 * grid.T;
      if (any_mask) {
        const double pad = 2.0 * grid.dx[0];
        const double left = (mlo - pad) - strip.xlo[0];
        const double right = strip.xhi[0] - (mhi + pad);
        if (left >= right)
          strip.xhi[0] = mlo - pad;
        else
          strip.xlo[0] = mhi + pad;
      }
      const bool strip_ok = strip.xhi[0] - strip.xlo[0] >
                            0.05 * (grid.hi[0] - grid.lo[0]);
      const TestFunctionBasis basis = TestFunctionBasis::make(
          grid, cfg.basis_count, cfg.basis_seed, strip_ok ? &strip : nullptr);
      std::vector<int> kept;
      for (int i = 0; i < basis.size(); ++i) {
        bool clear = true;
        const Region& sup = basis.bump(i).support();
        for (int k = 0; k < grid.nt && clear; ++k)
          for (int n = 0; n < grid.num_nodes(); ++n)
            if (masks[k][n] &&
                sup.contains(grid.coord(n, 0), grid.coord(n, 1), grid.t(k))) {
              clear = false;
              break;
            }
        if (clear) kept.push_back(i);
      }
      const std::vector<double> res_obs =
          weak_residual(strong.u, cfg.m, basis, WeakForm::GradUm);
      const std::vector<double> res_pme =
          weak_residual(plain, cfg.m, basis, WeakForm::GradUm);
      double mo = 0.0, mp = 0.0;
      for (int i : kept) {
        mo = std::max(mo, std::fabs(res_obs[i]));
        mp = std::max(mp, std::fabs(res_pme[i]));
      }
      cr.pass = !kept.empty() && mo <= 3.0 * std::max(mp, 1e-8);
      cr.detail = std::to_string(kept.size()) + "/" +
                  std::to_string(basis.size()) + " bumps off the contact set, " +
                  "obstacle residual " + format_double(mo) + ", pme residual " +
                  format_double(mp);
      out.metrics.emplace_back("coincidence_residual_obstacle", mo);
      out.metrics.emplace_back("coincidence_residual_pme", mp);
    } else if (check == "convergence") {
      if (cfg.exact.kind != FieldSpec::Kind::Barenblatt) {
        cr.detail = "convergence check needs an exact barenblatt field";
      } else {
        std::vector<double> errors, orders;
        std::ostringstream csv;
        csv << "level,nx,nt,l1_error,order\n";
        for (int l = 0; l < cfg.refine_levels; ++l) {
          const SpaceTimeGrid g = refined(grid, l);
          const ScalarField exact = sample_field(cfg.exact, g, cfg.m);
          PMEParams p;
          p.m = cfg.m;
          p.eps = 0.0;
          const ScalarField u = solve_pme(exact.slice(0), exact, p, g).u;
          std::vector<double> diff(g.num_nodes());
          for (int n = 0; n < g.num_nodes(); ++n)
            diff[n] = std::fabs(u.at(g.nt - 1, n) - exact.at(g.nt - 1, n));
          errors.push_back(integrate_slice(g, diff));
          csv << l << ',' << g.nx[0] << ',' << g.nt << ','
              << format_double(errors.back()) << ',';
          if (l > 0) {
            orders.push_back(std::log2(errors[l - 1] / errors[l]));
            csv << format_double(orders.back());
          }
          csv << '\n';
        }
        emit(cfg.name + "-convergence.csv", csv.str());
        const double min_order =
            orders.empty() ? 0.0
                           : *std::min_element(orders.begin(), orders.end());
        cr.pass = !orders.empty() && min_order >= 0.8;
        cr.detail = "L1 errors [" + fmt_seq(errors) + "], orders [" +
                    fmt_seq(orders) + "]";
        for (size_t i = 0; i < errors.size(); ++i)
          out.metrics.emplace_back("convergence_error_" + std::to_string(i),
                                   errors[i]);
      }
    } else {
      cr.detail = "unknown check";
    }
    out.checks.push_back(cr);
  }

  if (cfg.write_csv) {
    std::ostringstream os;
    os << "metric,value\n";
    for (const auto& [k, v] : out.metrics) os << k << ',' << format_double(v) << '\n';
    emit(cfg.name + "-report.csv", os.str());
  }
  emit(cfg.name + "-summary.txt", out.summary());
  return out;
}

GoldenDiff compare_golden(const std::string& report_path,
                          const std::string& golden_path, double rel_tol) {
  auto read_rows = [](const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::invalid_argument("compare_golden: cannot open '" + path + "'");
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(is, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      rows.push_back(split_char(line, ','));
    }
    return rows;
  };
  const auto a = read_rows(report_path);
  const auto b = read_rows(golden_path);
  if (a.size() != b.size())
    throw std::runtime_error("compare_golden: schema mismatch (row counts " +
                             std::to_string(a.size()) + " vs " +
                             std::to_string(b.size()) + ")");
  GoldenDiff diff;
  for (size_t r = 0; r < a.size(); ++r) {
    if (a[r].size() != b[r].size())
      throw std::runtime_error("compare_golden: schema mismatch at row " +
                               std::to_string(r));
    for (size_t c = 0; c < a[r].size(); ++c) {
      const std::string& x = a[r][c];
      const std::string& y = b[r][c];
      if (x == y) continue;
      char *ex = nullptr, *ey = nullptr;
      const double vx = std::strtod(x.c_str(), &ex);
      const double vy = std::strtod(y.c_str(), &ey);
      const bool numx = !x.empty() && ex == x.c_str() + x.size();
      const bool numy = !y.empty() && ey == y.c_str() + y.size();
      bool ok = false;
      if (numx && numy) {
        const double scale = std::max({std::fabs(vx), std::fabs(vy), 1e-300});
        ok = std::fabs(vx - vy) <= rel_tol * scale;
      }
      if (!ok) {
        diff.pass = false;
        const std::string label =
            (c > 0 && !a[r].empty()) ? " (" + a[r][0] + ")" : "";
        diff.mismatches.push_back("row " + std::to_string(r) + label + " col " +
                                  std::to_string(c) + ": '" + x + "' vs '" + y + "'");
      }
    }
  }
  return diff;
}

}  // namespace pmelab
