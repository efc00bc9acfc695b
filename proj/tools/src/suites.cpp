#include "interp_lab_cli/suites.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <map>
#include <stdexcept>
#include <thread>

#include "interp_lab/condexp.hpp"
#include "interp_lab/interp.hpp"
#include "interp_lab/kernelop.hpp"
#include "interp_lab/kfun.hpp"
#include "interp_lab/rectangle.hpp"
#include "interp_lab_cli/generate.hpp"
#include "interp_lab_cli/instance.hpp"

namespace interp_lab::cli {

using nlohmann::json;

namespace {

constexpr double kTol = 1e-9;

struct Trial {
  bool pass = true;
  double ratio = 1.0;
  json witness;
};

using TrialFn = std::function<Trial(Rng&)>;

struct Suite {
  double bound;  // NaN when the suite has no fixed constant
  TrialFn run;
};

bool leq(double a, double b) { return a <= b + kTol * std::max(1.0, std::abs(b)); }

Exponent random_exponent(Rng& rng) {
  static const double choices[] = {1.5, 2.0, 4.0, INFINITY};
  return Exponent(choices[rng.index(4)]);
}

double random_pow2(Rng& rng, int lo, int hi) {
  return std::ldexp(1.0, lo + static_cast<int>(rng.index(static_cast<std::size_t>(hi - lo + 1))));
}

GenSpec random_spec(Rng& rng, std::vector<std::size_t> max_shape) {
  GenSpec spec;
  spec.shape.clear();
  for (std::size_t n : max_shape) spec.shape.push_back(1 + rng.index(n));
  spec.distribution = static_cast<Distribution>(rng.index(3));
  spec.density = rng.uniform();
  spec.weights = rng.coin() ? WeightKind::kCounting : WeightKind::kDirichlet;
  return spec;
}

json kernel_witness(const KernelMatrix& f) {
  Instance inst;
  inst.f = f;
  return to_json(inst);
}

// rect <= K <= bound * rect, reported as K / rect.
Trial sandwich(double rect, double k, double bound, json witness) {
  Trial out;
  out.pass = leq(rect, k) && leq(k, bound * rect);
  out.ratio = rect > 0.0 ? k / rect : (k > 0.0 ? INFINITY : 1.0);
  witness["lower"] = rect;
  witness["value"] = k;
  out.witness = std::move(witness);
  return out;
}

Trial lemma_trial(Rng& rng, bool infinite) {
  const KernelMatrix f = gen_random(rng, random_spec(rng, {6, 6}));
  const Exponent p1 = infinite ? Exponent::infinity() : random_exponent(rng);
  const Exponent p2 = infinite ? Exponent::infinity() : random_exponent(rng);
  const double t = infinite ? 1.0 : random_pow2(rng, -5, 5);
  const double rect = k_lower_certificate(f, ExponentConfig(1.0, {p1, p2}), t).value;
  const double k = k_exact(f, t, p1, p2).total;
  json w = kernel_witness(f);
  w["p"] = {exponent_to_json(p1), exponent_to_json(p2)};
  w["t"] = t;
  return sandwich(rect, k, 2.0, std::move(w));
}

Trial theorem8_trial(Rng& rng) {
  const double q = rng.coin() ? 0.5 : 2.0;
  const KernelMatrix f = gen_random(rng, random_spec(rng, {4, 4}));
  auto pick = [&] {
    Exponent p = random_exponent(rng);
    while (!(p.value() > q)) p = random_exponent(rng);
    return p;
  };
  const Exponent p1 = pick();
  const Exponent p2 = pick();
  const double t = random_pow2(rng, -3, 3);
  const KBracket b = k_bracket_general_q(f, t, q, p1, p2);
  Trial out;
  out.pass = leq(b.lower, b.upper);
  out.ratio = b.lower > 0.0 ? b.upper / b.lower : 1.0;
  out.witness = kernel_witness(f);
  out.witness["q"] = q;
  out.witness["p"] = {exponent_to_json(p1), exponent_to_json(p2)};
  out.witness["t"] = t;
  out.witness["lower"] = b.lower;
  out.witness["upper"] = b.upper;
  return out;
}

Trial cor9_trial(Rng& rng) {
  static const double thetas[] = {0.25, 0.5, 0.75};
  GenSpec spec = random_spec(rng, {5, 5});
  spec.shape = {5, 5};
  const KernelMatrix f = gen_random(rng, spec);
  const double theta = thetas[rng.index(3)];
  const Exponent p1 = random_exponent(rng);
  const Exponent p2 = random_exponent(rng);
  const double envelope = k_envelope(f, 1.0, theta, p1, p2);
  const double closed = closed_form_norm(f, 1.0, theta, p1, p2).value;
  const double scaled = std::pow(theta, theta) * std::pow(1.0 - theta, 1.0 - theta) * closed;
  Trial out;
  const double err = std::abs(envelope - scaled);
  out.pass = err <= kTol * std::max(1.0, scaled);
  out.ratio = scaled > 0.0 ? envelope / scaled : 1.0;
  out.witness = kernel_witness(f);
  out.witness["theta"] = theta;
  out.witness["p"] = {exponent_to_json(p1), exponent_to_json(p2)};
  out.witness["envelope"] = envelope;
  out.witness["closed_form_scaled"] = scaled;
  return out;
}

Trial rem19_trial(Rng& rng) {
  const KernelMatrix f = gen_random(rng, random_spec(rng, {5, 5}));
  const Exponent p1 = random_exponent(rng);
  const Exponent p2 = random_exponent(rng);
  const auto report = rem19_identity_check(f, p1, p2);
  const double theta = rng.uniform(0.05, 0.95);
  const auto rs = interpolated_operator_exponents(theta, p1, p2);
  const double op = kernel_opnorm(f, rs.r, rs.s);
  const double closed = closed_form_norm(f, 1.0, theta, p1, p2).value;
  const double discrepancy = std::max({std::abs(report.a_operator - report.a_mixed),
                                       std::abs(report.b_operator - report.b_mixed), std::abs(op - closed)});
  Trial out;
  out.pass = discrepancy <= kTol;
  out.ratio = discrepancy;
  out.witness = kernel_witness(f);
  out.witness["p"] = {exponent_to_json(p1), exponent_to_json(p2)};
  out.witness["theta"] = theta;
  out.witness["discrepancy"] = discrepancy;
  out.witness["literal_b_holds"] = report.literal_b_holds;
  return out;
}

Trial multivar_trial(Rng& rng) {
  const KernelMatrix f = gen_random(rng, random_spec(rng, {4, 4, 4}));
  std::vector<Exponent> p{random_exponent(rng), random_exponent(rng), random_exponent(rng)};
  std::vector<double> t{1.0, random_pow2(rng, -2, 2), random_pow2(rng, -2, 2)};
  const auto alphas = ExponentConfig(1.0, p).alphas();
  const double rect = rect_sup(f, 1.0, alphas, t).value;
  const double k = k_multi(f, t, p).total;
  json w = kernel_witness(f);
  json pj = json::array();
  for (auto e : p) pj.push_back(exponent_to_json(e));
  w["p"] = pj;
  w["t"] = t;
  return sandwich(rect, k, 3.0, std::move(w));
}

Trial condexp_trial(Rng& rng) {
  const std::size_t atoms = 2 + rng.index(11);
  const std::size_t n = rng.coin() ? 2 : 3;
  const auto space = random_space(rng, atoms, rng.coin() ? WeightKind::kCounting : WeightKind::kDirichlet);
  std::vector<Partition> parts;
  for (std::size_t j = 0; j < n; ++j) parts.push_back(random_partition(rng, atoms, 6));
  std::vector<double> x(atoms);
  for (auto& v : x) v = rng.coin(0.8) ? rng.uniform(-1.0, 1.0) : 0.0;
  const CondExpConfig config(space, parts);
  const double sup = condexp_condition_sup(config, x).value;
  const double value = condexp_decompose(config, x).value;
  Instance inst;
  inst.f = KernelMatrix(ProductSpace({config.space()}), x);
  inst.partitions = parts;
  return sandwich(sup, value, static_cast<double>(n), to_json(inst));
}

Trial gauge_trial(Rng& rng) {
  const KernelMatrix f = gen_random(rng, random_spec(rng, {5, 5}));
  std::vector<GaugeFunction> gauges;
  for (std::size_t j = 0; j < 2; ++j) {
    const double mass = f.product().factor(j).total_mass();
    gauges.push_back(random_concave_gauge(rng, 1 + rng.index(3), mass / 2.0));
  }
  std::vector<double> t{1.0, random_pow2(rng, -3, 3)};
  const double rect = gauge_rect_sup(f, 1.0, gauges, t).value;
  const double k = k_gauge(f, t, gauges).total;
  json w = kernel_witness(f);
  w["gauges"] = {gauge_to_json(gauges[0]), gauge_to_json(gauges[1])};
  w["t"] = t;
  return sandwich(rect, k, 2.0, std::move(w));
}

Trial duality_trial(Rng& rng) {
  GenSpec spec = random_spec(rng, {5, 5});
  spec.signed_entries = true;
  const KernelMatrix f = gen_random(rng, spec);
  spec.distribution = static_cast<Distribution>(rng.index(3));
  KernelMatrix g = gen_random(rng, spec).with_product(f.product());
  const Exponent p1 = random_exponent(rng);
  const Exponent p2 = random_exponent(rng);
  const auto report = duality_certificate(f, g, p1, p2);
  Trial out;
  out.pass = report.pass;
  out.ratio = report.final_bound > 0.0 ? report.pairing / report.final_bound : 0.0;
  out.witness = kernel_witness(f);
  out.witness["p"] = {exponent_to_json(p1), exponent_to_json(p2)};
  out.witness["pairing"] = report.pairing;
  out.witness["final_bound"] = report.final_bound;
  return out;
}

const std::map<std::string, Suite>& registry() {
  static const std::map<std::string, Suite> suites{
      {"varopoulos", {2.0, [](Rng& r) { return lemma_trial(r, true); }}},
      {"lemma2", {2.0, [](Rng& r) { return lemma_trial(r, false); }}},
      {"theorem8", {NAN, theorem8_trial}},
      {"cor9", {1.0, cor9_trial}},
      {"rem19", {kTol, rem19_trial}},
      {"multivar", {3.0, multivar_trial}},
      {"condexp", {3.0, condexp_trial}},
      {"gauge", {2.0, gauge_trial}},
      {"duality", {1.0, duality_trial}},
  };
  return suites;
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, suite] : registry()) out.push_back(name);
    return out;
  }();
  return names;
}

std::uint64_t trial_seed(std::uint64_t seed, std::size_t trial) {
  // splitmix64 finalizer
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(trial) + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

json run_suite(const std::string& name, const SuiteOptions& options) {
  const auto it = registry().find(name);
  if (it == registry().end()) throw std::invalid_argument("unknown suite '" + name + "'");
  const Suite& suite = it->second;

  std::vector<Trial> trials(options.trials);
  std::vector<std::string> errors(options.trials);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < trials.size(); i = next++) {
      Rng rng(trial_seed(options.seed, i));
      try {
        trials[i] = suite.run(rng);
      } catch (const std::exception& e) {
        trials[i].pass = false;
        trials[i].ratio = NAN;
        errors[i] = e.what();
      }
    }
  };
  const std::size_t jobs = std::max<std::size_t>(1, std::min(options.jobs, trials.size()));
  std::vector<std::thread> pool;
  for (std::size_t j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  json report;
  report["suite"] = name;
  report["trials"] = options.trials;
  report["seed"] = options.seed;
  report["bound"] = number_or_null(suite.bound);
  report["vacuous"] = trials.empty();
  bool pass = true;
  double worst = -INFINITY;
  std::size_t worst_trial = 0;
  json ratios = json::array();
  json failures = json::array();
  for (std::size_t i = 0; i < trials.size(); ++i) {
    const Trial& tr = trials[i];
    ratios.push_back(number_or_null(tr.ratio));
    if (!tr.pass) {
      pass = false;
      json f = {{"trial", i}, {"witness", tr.witness}};
      if (!errors[i].empty()) f["error"] = errors[i];
      failures.push_back(f);
    }
    if (tr.ratio > worst) {
      worst = tr.ratio;
      worst_trial = i;
    }
  }
  report["pass"] = pass;
  report["worst_ratio"] = trials.empty() ? json(nullptr) : number_or_null(worst);
  report["worst_trial"] = trials.empty() ? json(nullptr) : json(worst_trial);
  report["witness"] = trials.empty() ? json(nullptr) : trials[worst_trial].witness;
  report["failures"] = failures;
  report["ratios"] = ratios;
  return report;
}

}  // namespace interp_lab::cli
