#include "interp_lab_cli/app.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <ostream>
#include <regex>
#include <thread>

#include "interp_lab/condexp.hpp"
#include "interp_lab/interp.hpp"
#include "interp_lab/kernelop.hpp"
#include "interp_lab/kfun.hpp"
#include "interp_lab/lorentz.hpp"
#include "interp_lab/rectangle.hpp"
#include "interp_lab_cli/generate.hpp"
#include "interp_lab_cli/instance.hpp"
#include "interp_lab_cli/suites.hpp"

namespace interp_lab::cli {

using nlohmann::json;

namespace {

constexpr const char* kCsvHelp =
    "ksweep CSV columns: t,k_t,K_t,ratio where k_t is the rectangle lower bound,\n"
    "K_t the exact K-functional (or the certified upper value when q != 1) and\n"
    "ratio = K_t / k_t. Lines starting with '# ' carry the instance hash and config.";

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string in;
  std::size_t jobs = 1;
};

json masks_json(const std::vector<SubsetMask>& masks) {
  json out = json::array();
  for (const auto& m : masks) out.push_back(mask_to_json(m));
  return out;
}

json kernel_json(const KernelMatrix& f) {
  Instance inst;
  inst.f = f;
  return to_json(inst)["f"];
}

void require_rank(const Instance& inst, std::size_t rank, const char* what) {
  if (inst.f.rank() != rank) {
    throw UsageError(std::string(what) + " needs a " + std::to_string(rank) + "-axis instance");
  }
}

Exponent exponent_at(const Instance& inst, std::size_t axis) {
  if (axis >= inst.p.size()) throw UsageError("instance needs \"p\" with an exponent for axis " + std::to_string(axis));
  return inst.p[axis];
}

std::vector<double> parse_pow2_grid(const std::string& spec) {
  static const std::regex pattern(R"(pow2:(-?\d+)\.\.(-?\d+))");
  std::smatch m;
  if (!std::regex_match(spec, m, pattern)) throw UsageError("t-grid must look like pow2:-5..5");
  const int lo = std::stoi(m[1]);
  const int hi = std::stoi(m[2]);
  if (lo > hi || hi - lo > 200) throw UsageError("t-grid range is empty or too long");
  std::vector<double> out;
  for (int k = lo; k <= hi; ++k) out.push_back(std::ldexp(1.0, k));
  return out;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = std::min(text.find(',', start), text.size());
    const std::string item = text.substr(start, end - start);
    double v = 0.0;
    const auto res = std::from_chars(item.data(), item.data() + item.size(), v);
    if (res.ec != std::errc() || res.ptr != item.data() + item.size()) throw UsageError("bad number '" + item + "'");
    out.push_back(v);
    start = end + 1;
  }
  return out;
}

std::vector<std::size_t> parse_shape(const std::string& text) {
  std::vector<std::size_t> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = std::min(text.find('x', start), text.size());
    const std::string item = text.substr(start, end - start);
    std::size_t v = 0;
    const auto res = std::from_chars(item.data(), item.data() + item.size(), v);
    if (res.ec != std::errc() || res.ptr != item.data() + item.size()) throw UsageError("bad shape '" + text + "'");
    out.push_back(v);
    start = end + 1;
  }
  return out;
}

Exponent parse_exponent(const std::string& text) {
  if (text == "inf") return Exponent::infinity();
  const auto v = parse_list(text);
  if (v.size() != 1) throw UsageError("bad exponent '" + text + "'");
  return Exponent(v[0]);
}

json envelope(const Instance& inst, const std::string& command) {
  json out;
  out["command"] = command;
  out["instance_hash"] = instance_hash(inst);
  out["config"] = to_json(inst);
  return out;
}

void write_json(std::ostream& out, const json& j) { out << j.dump(2) << '\n'; }

// K value at weights (1, t) for q = 1, or the certified bracket otherwise.
struct KPoint {
  double t;
  double k_lower;
  double k_value;
  std::optional<DecompositionResult> decomposition;
  std::optional<KBracket> bracket;
};

KPoint k_point(const Instance& inst, double t) {
  require_rank(inst, 2, "K-functionals");
  const Exponent p1 = exponent_at(inst, 0);
  const Exponent p2 = exponent_at(inst, 1);
  KPoint out{t, 0.0, 0.0, std::nullopt, std::nullopt};
  if (inst.q == 1.0) {
    out.k_lower = k_lower_certificate(inst.f, ExponentConfig(1.0, {p1, p2}), t).value;
    out.decomposition = k_exact(inst.f, t, p1, p2);
    out.k_value = out.decomposition->total;
  } else {
    out.bracket = k_bracket_general_q(inst.f, t, inst.q, p1, p2);
    out.k_lower = out.bracket->lower;
    out.k_value = out.bracket->upper;
  }
  return out;
}

json decomposition_json(const DecompositionResult& d) {
  json out;
  json summands = json::array();
  for (const auto& s : d.summands) summands.push_back(kernel_json(s));
  out["summands"] = summands;
  out["norms"] = d.norms;
  out["weights"] = d.weights;
  out["total"] = d.total;
  out["lp_objective"] = d.lp_objective;
  out["certificate"] = d.certificate ? json(*d.certificate) : json(nullptr);
  out["rounds"] = d.rounds;
  out["constraints"] = d.constraints;
  return out;
}

double ratio(double num, double den) { return den > 0.0 ? num / den : (num > 0.0 ? INFINITY : 1.0); }

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"interp_lab: rectangle functionals, K-functionals and interpolation norms on finite measure spaces"};
  app.require_subcommand(1);
  app.footer(kCsvHelp);
  app.set_version_flag("--version", "interp_lab 0.1.0");

  Common common;
  auto add_in = [&](CLI::App* sub) { sub->add_option("--in", common.in, "instance JSON file")->required(); };

  // norm
  std::string functional = "rect";
  std::size_t axis = 0;
  std::string scales_text;
  auto* norm = app.add_subcommand("norm", "evaluate a norm or rectangle functional");
  add_in(norm);
  norm->add_option("--functional", functional, "rect|bracket|weak|lorentz|mixed|closed-form")
      ->check(CLI::IsMember({"rect", "bracket", "weak", "lorentz", "mixed", "closed-form"}));
  norm->add_option("--axis", axis, "axis for the mixed norm");
  norm->add_option("--scales", scales_text, "comma-separated rectangle scales (default all 1)");

  // kfunc / decompose
  double t = 1.0;
  auto* kfunc = app.add_subcommand("kfunc", "K-functional at one t");
  add_in(kfunc);
  kfunc->add_option("--t", t, "t > 0")->required()->check(CLI::PositiveNumber);
  auto* decompose = app.add_subcommand("decompose", "optimal decomposition f = f_1 + ... + f_n");
  add_in(decompose);
  std::string t_list;
  decompose->add_option("--t", t_list, "t for two axes, or comma-separated t_1..t_n");

  // ksweep
  std::string grid = "pow2:-10..10";
  std::string format = "csv";
  auto* ksweep = app.add_subcommand("ksweep", "K-functional over a t-grid");
  add_in(ksweep);
  ksweep->add_option("--t-grid", grid, "pow2:a..b");
  ksweep->add_option("--out", format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
  ksweep->add_option("--jobs", common.jobs, "worker threads")->check(CLI::PositiveNumber);

  // interp-norm
  std::optional<double> theta;
  int min_exp = -20;
  int max_exp = 20;
  auto* interp = app.add_subcommand("interp-norm", "theta,inf interpolation norm and its closed form");
  add_in(interp);
  interp->add_option("--theta", theta, "theta in (0,1); defaults to the instance value");
  interp->add_option("--min-exp", min_exp, "smallest t-grid exponent");
  interp->add_option("--max-exp", max_exp, "largest t-grid exponent");

  // opnorm
  std::string r_text;
  std::string s_text;
  bool quasi = false;
  auto* opnorm = app.add_subcommand("opnorm", "norm of the kernel operator L_{r,1} -> L_{s,inf}");
  add_in(opnorm);
  opnorm->add_option("--r", r_text, "source exponent (number or inf)")->required();
  opnorm->add_option("--s", s_text, "target exponent (number or inf)")->required();
  opnorm->add_flag("--quasi", quasi, "use the weak quasinorm on the target");

  // condexp
  std::string partitions_file;
  auto* condexp = app.add_subcommand("condexp", "conditional-expectation condition and decomposition");
  add_in(condexp);
  condexp->add_option("--partitions", partitions_file, "JSON file: array of partitions (default: the instance's)");

  // gen
  GenSpec gen_spec;
  std::string shape_text = "3x3";
  std::string dist = "uniform01";
  std::string weights = "counting";
  std::string gen_p = "inf";
  double gen_q = 1.0;
  std::optional<double> gen_theta;
  auto* gen = app.add_subcommand("gen", "write a seeded random instance");
  gen->add_option("--seed", gen_spec.seed, "seed");
  gen->add_option("--shape", shape_text, "atoms per axis, e.g. 4x5");
  gen->add_option("--dist", dist, "uniform01|exp-tail|sparse")->check(CLI::IsMember({"uniform01", "exp-tail", "sparse"}));
  gen->add_option("--density", gen_spec.density, "nonzero fraction for sparse")->check(CLI::Range(0.0, 1.0));
  gen->add_option("--weights", weights, "counting|dirichlet")->check(CLI::IsMember({"counting", "dirichlet"}));
  gen->add_option("--mass", gen_spec.total_mass, "dirichlet total mass per axis (default: atom count)");
  gen->add_flag("--signed", gen_spec.signed_entries, "random signs");
  gen->add_option("--q", gen_q, "inner exponent q");
  gen->add_option("--p", gen_p, "comma-separated exponents, 'inf' allowed; one value is repeated");
  gen->add_option("--theta", gen_theta, "theta to record in the instance");

  // verify
  std::string suite;
  SuiteOptions suite_options;
  auto* verify = app.add_subcommand("verify", "run a randomized verification suite");
  verify->add_option("suite", suite, "suite name")->required()->check(CLI::IsMember(suite_names()));
  verify->add_option("--trials", suite_options.trials, "number of trials");
  verify->add_option("--seed", suite_options.seed, "suite seed");
  verify->add_option("--jobs", suite_options.jobs, "worker threads")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  try {
    if (*gen) {
      gen_spec.shape = parse_shape(shape_text);
      gen_spec.distribution = parse_distribution(dist);
      gen_spec.weights = parse_weight_kind(weights);
      Instance inst;
      inst.f = gen_random(gen_spec);
      inst.q = gen_q;
      std::vector<Exponent> ps;
      std::size_t start = 0;
      while (start <= gen_p.size()) {
        const std::size_t end = std::min(gen_p.find(',', start), gen_p.size());
        ps.push_back(parse_exponent(gen_p.substr(start, end - start)));
        start = end + 1;
      }
      if (ps.size() == 1) ps.assign(inst.f.rank(), ps[0]);
      if (ps.size() != inst.f.rank()) throw UsageError("--p needs one exponent or one per axis");
      inst.p = ps;
      inst.theta = gen_theta;
      write_json(out, to_json(inst));
      return 0;
    }

    if (*verify) {
      const json report = run_suite(suite, suite_options);
      write_json(out, report);
      return report["pass"].get<bool>() ? 0 : 1;
    }

    const Instance inst = load_instance(common.in);

    if (*norm) {
      json report = envelope(inst, "norm");
      report["functional"] = functional;
      if (functional == "rect") {
        std::vector<double> scales(inst.f.rank(), 1.0);
        if (!scales_text.empty()) scales = parse_list(scales_text);
        RectangleSup r;
        if (!inst.gauges.empty()) {
          r = gauge_rect_sup(inst.f, inst.q, inst.gauges, scales);
        } else {
          std::vector<Exponent> ps;
          for (std::size_t j = 0; j < inst.f.rank(); ++j) ps.push_back(exponent_at(inst, j));
          r = rect_sup(inst.f, inst.q, ExponentConfig(inst.q, ps).alphas(), scales);
        }
        report["value"] = r.value;
        report["argmax"] = masks_json(r.argmax);
        report["scales"] = scales;
      } else if (functional == "closed-form") {
        require_rank(inst, 2, "closed-form");
        if (!inst.theta) throw UsageError("closed-form needs \"theta\" in the instance");
        const auto r = closed_form_norm(inst.f, inst.q, *inst.theta, exponent_at(inst, 0), exponent_at(inst, 1));
        report["value"] = r.value;
        report["argmax"] = masks_json(r.argmax);
      } else if (functional == "mixed") {
        if (axis >= inst.f.rank()) throw UsageError("--axis out of range");
        report["axis"] = axis;
        report["value"] = mixed_weak_norm(inst.f, axis, exponent_at(inst, axis), inst.q);
      } else {
        require_rank(inst, 1, "scalar norms");
        const auto& mu = inst.f.product().factor(0);
        const Exponent p = exponent_at(inst, 0);
        double value = 0.0;
        if (functional == "bracket") value = bracket_norm(mu, inst.f.entries(), p);
        if (functional == "weak") value = weak_quasinorm(mu, inst.f.entries(), p);
        if (functional == "lorentz") value = lorentz_p1_norm(mu, inst.f.entries(), p);
        report["value"] = value;
      }
      write_json(out, report);
      return 0;
    }

    if (*kfunc) {
      const KPoint k = k_point(inst, t);
      json report = envelope(inst, "kfunc");
      report["t"] = t;
      report["k_t"] = k.k_lower;
      report["K_t"] = k.k_value;
      report["ratio"] = finite_or_null(ratio(k.k_value, k.k_lower));
      if (k.bracket) {
        report["bracket"] = {{"lower", k.bracket->lower}, {"upper", k.bracket->upper},
                             {"lower_factor", k.bracket->lower_factor}};
      }
      write_json(out, report);
      return 0;
    }

    if (*decompose) {
      std::vector<double> ts = t_list.empty() ? std::vector<double>{} : parse_list(t_list);
      if (ts.size() == 1 && inst.f.rank() == 2) ts = {1.0, ts[0]};
      if (ts.empty()) ts.assign(inst.f.rank(), 1.0);
      if (ts.size() != inst.f.rank()) throw UsageError("--t needs one weight per axis");
      DecompositionResult d;
      if (!inst.gauges.empty()) {
        d = k_gauge(inst.f, ts, inst.gauges);
      } else {
        if (inst.q != 1.0) throw UsageError("decompose needs q = 1 (use kfunc for certified brackets)");
        std::vector<Exponent> ps;
        for (std::size_t j = 0; j < inst.f.rank(); ++j) ps.push_back(exponent_at(inst, j));
        d = k_multi(inst.f, ts, ps);
      }
      json report = envelope(inst, "decompose");
      report["decomposition"] = decomposition_json(d);
      write_json(out, report);
      return 0;
    }

    if (*ksweep) {
      const auto ts = parse_pow2_grid(grid);
      std::vector<KPoint> points(ts.size(), KPoint{0, 0, 0, std::nullopt, std::nullopt});
      std::vector<std::string> errors(ts.size());
      std::atomic<std::size_t> next{0};
      auto worker = [&] {
        for (std::size_t i = next++; i < ts.size(); i = next++) {
          try {
            points[i] = k_point(inst, ts[i]);
          } catch (const std::exception& e) {
            errors[i] = e.what();
          }
        }
      };
      std::vector<std::thread> pool;
      for (std::size_t j = 1; j < std::min(common.jobs, ts.size()); ++j) pool.emplace_back(worker);
      worker();
      for (auto& th : pool) th.join();
      for (const auto& e : errors) {
        if (!e.empty()) throw std::runtime_error(e);
      }
      if (format == "csv") {
        out << "# instance_hash=" << instance_hash(inst) << '\n';
        out << "# config=" << to_json(inst).dump() << '\n';
        out << "# t_grid=" << grid << '\n';
        out << "t,k_t,K_t,ratio\n";
        for (const auto& p : points) {
          out << format_double(p.t) << ',' << format_double(p.k_lower) << ',' << format_double(p.k_value) << ','
              << format_double(ratio(p.k_value, p.k_lower)) << '\n';
        }
      } else {
        json report = envelope(inst, "ksweep");
        report["t_grid"] = grid;
        json rows = json::array();
        for (const auto& p : points) {
          json row = {{"t", p.t}, {"k_t", p.k_lower}, {"K_t", p.k_value},
                      {"ratio", finite_or_null(ratio(p.k_value, p.k_lower))}};
          if (p.decomposition) row["decomposition"] = decomposition_json(*p.decomposition);
          rows.push_back(row);
        }
        report["points"] = rows;
        write_json(out, report);
      }
      return 0;
    }

    if (*interp) {
      require_rank(inst, 2, "interp-norm");
      ThetaConfig config;
      if (theta) {
        config.theta = *theta;
      } else if (inst.theta) {
        config.theta = *inst.theta;
      } else {
        throw UsageError("interp-norm needs --theta or \"theta\" in the instance");
      }
      config.min_exponent = min_exp;
      config.max_exponent = max_exp;
      if (inst.q != 1.0) throw UsageError("interp-norm needs q = 1");
      const Exponent p1 = exponent_at(inst, 0);
      const Exponent p2 = exponent_at(inst, 1);
      const auto grid_value = theta_norm_via_grid(inst.f, config, p1, p2);
      const auto closed = closed_form_norm(inst.f, 1.0, config.theta, p1, p2);
      const double th = config.theta;
      const double env = std::pow(th, th) * std::pow(1.0 - th, 1.0 - th) * closed.value;
      json report = envelope(inst, "interp-norm");
      report["theta"] = th;
      report["grid_value"] = grid_value.value;
      report["grid_argmax_t"] = grid_value.argmax_t;
      report["closed_form"] = closed.value;
      report["closed_form_argmax"] = masks_json(closed.argmax);
      report["k_envelope"] = env;
      report["ratio"] = finite_or_null(ratio(grid_value.value, env));
      report["certified_interval"] = {env * std::pow(2.0, -std::max(th, 1.0 - th)), 2.0 * env};
      write_json(out, report);
      return 0;
    }

    if (*opnorm) {
      require_rank(inst, 2, "opnorm");
      const Exponent r = parse_exponent(r_text);
      const Exponent s = parse_exponent(s_text);
      json report = envelope(inst, "opnorm");
      report["r"] = exponent_to_json(r);
      report["s"] = exponent_to_json(s);
      report["target"] = quasi ? "weak-quasinorm" : "bracket";
      report["value"] = quasi ? kernel_opnorm_quasi(inst.f, r, s) : kernel_opnorm(inst.f, r, s);
      write_json(out, report);
      return 0;
    }

    if (*condexp) {
      require_rank(inst, 1, "condexp");
      std::vector<Partition> parts = inst.partitions;
      if (!partitions_file.empty()) {
        std::ifstream in(partitions_file);
        if (!in) throw InstanceError("cannot open '" + partitions_file + "'");
        json j;
        try {
          j = json::parse(in);
        } catch (const json::parse_error& e) {
          throw InstanceError(std::string("malformed JSON: ") + e.what());
        }
        if (j.is_object() && j.contains("partitions")) j = j["partitions"];
        if (!j.is_array()) throw InstanceError("partitions file must hold an array of partitions");
        parts.clear();
        try {
          for (const auto& p : j) parts.push_back(partition_from_json(p, inst.f.cells()));
        } catch (const InstanceError&) {
          throw;
        } catch (const std::exception& e) {
          throw InstanceError(e.what());
        }
      }
      if (parts.size() < 2) throw UsageError("condexp needs at least two partitions");
      const CondExpConfig config(inst.f.product().factor(0), parts);
      const auto sup = condexp_condition_sup(config, inst.f.entries(), inst.gauges);
      const auto dec = condexp_decompose(config, inst.f.entries(), inst.gauges);
      json report = envelope(inst, "condexp");
      json ps = json::array();
      for (const auto& p : parts) ps.push_back(partition_to_json(p));
      report["partitions"] = ps;
      report["condition_sup"] = sup.value;
      report["condition_argmax"] = masks_json(sup.atom_sets);
      report["decomposition_value"] = dec.value;
      report["summands"] = dec.summands;
      report["norms"] = dec.norms;
      report["ratio"] = finite_or_null(ratio(dec.value, sup.value));
      report["constant"] = parts.size();
      write_json(out, report);
      return 0;
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n' << app.help();
    return 2;
  } catch (const InstanceError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace interp_lab::cli
