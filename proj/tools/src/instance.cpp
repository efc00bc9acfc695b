#include "interp_lab_cli/instance.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace interp_lab::cli {

using nlohmann::json;

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw InstanceError(what);
}

double number(const json& j, const std::string& what) {
  require(j.is_number(), what + " must be a number");
  return j.get<double>();
}

void read_entries(const json& j, std::size_t depth, const std::vector<std::size_t>& shape, std::vector<double>& out) {
  require(j.is_array() && j.size() == shape[depth],
          "f: expected an array of length " + std::to_string(shape[depth]) + " at depth " + std::to_string(depth));
  for (const auto& item : j) {
    if (depth + 1 == shape.size()) {
      out.push_back(number(item, "f entry"));
    } else {
      read_entries(item, depth + 1, shape, out);
    }
  }
}

json write_entries(const KernelMatrix& f, std::size_t depth, std::size_t& cursor) {
  json out = json::array();
  for (std::size_t i = 0; i < f.extent(depth); ++i) {
    if (depth + 1 == f.rank()) {
      out.push_back(f.entries()[cursor++]);
    } else {
      out.push_back(write_entries(f, depth + 1, cursor));
    }
  }
  return out;
}

}  // namespace

json exponent_to_json(Exponent p) { return p.is_infinite() ? json("inf") : json(p.value()); }

Exponent exponent_from_json(const json& j) {
  if (j.is_string()) {
    require(j.get<std::string>() == "inf", "exponent strings must be \"inf\"");
    return Exponent::infinity();
  }
  return Exponent(number(j, "exponent"));
}

json gauge_to_json(const GaugeFunction& g) {
  if (g.is_power()) return {{"power", g.gamma()}};
  const auto& pwl = std::get<GaugeFunction::PiecewiseLinear>(g.kind());
  json points = json::array();
  for (const auto& [x, y] : pwl.breakpoints) points.push_back({x, y});
  return {{"breakpoints", points}, {"tail_slope", pwl.tail_slope}};
}

GaugeFunction gauge_from_json(const json& j) {
  require(j.is_object(), "gauge must be an object");
  if (j.contains("power")) return GaugeFunction::power(number(j["power"], "gauge power"));
  require(j.contains("breakpoints") && j["breakpoints"].is_array(), "gauge needs \"power\" or \"breakpoints\"");
  std::vector<std::pair<double, double>> points;
  for (const auto& pt : j["breakpoints"]) {
    require(pt.is_array() && pt.size() == 2, "gauge breakpoints are [x, y] pairs");
    points.emplace_back(number(pt[0], "breakpoint x"), number(pt[1], "breakpoint y"));
  }
  const double tail = j.contains("tail_slope") ? number(j["tail_slope"], "tail_slope") : 0.0;
  return GaugeFunction::piecewise_linear(std::move(points), tail);
}

json partition_to_json(const Partition& p) { return p.blocks(); }

Partition partition_from_json(const json& j, std::size_t atoms) {
  require(j.is_array(), "partition must be an array of blocks");
  std::vector<std::vector<std::size_t>> blocks;
  for (const auto& block : j) {
    require(block.is_array(), "partition block must be an array of atom indices");
    auto& b = blocks.emplace_back();
    for (const auto& atom : block) {
      require(atom.is_number_unsigned() || (atom.is_number_integer() && atom.get<long long>() >= 0),
              "atom indices must be nonnegative integers");
      b.push_back(atom.get<std::size_t>());
    }
  }
  return Partition(std::move(blocks), atoms);
}

json mask_to_json(const SubsetMask& m) { return m.indices(); }

Instance instance_from_json(const json& j) {
  try {
    require(j.is_object(), "instance must be a JSON object");
    require(j.contains("mu") && j["mu"].is_array() && !j["mu"].empty(), "instance needs a nonempty \"mu\" array");
    std::vector<FiniteMeasureSpace> spaces;
    for (const auto& space : j["mu"]) {
      require(space.is_object() && space.contains("weights") && space["weights"].is_array(),
              "each mu entry needs a \"weights\" array");
      std::vector<double> w;
      for (const auto& v : space["weights"]) w.push_back(number(v, "weight"));
      spaces.emplace_back(std::move(w));
    }
    ProductSpace product(std::move(spaces));
    const auto shape = product.shape();
    Instance out;
    if (j.contains("f")) {
      std::vector<double> entries;
      read_entries(j["f"], 0, shape, entries);
      out.f = KernelMatrix(product, std::move(entries));
    } else {
      out.f = KernelMatrix(product);
    }
    if (j.contains("q")) out.q = number(j["q"], "q");
    if (j.contains("p")) {
      require(j["p"].is_array(), "p must be an array");
      for (const auto& p : j["p"]) out.p.push_back(exponent_from_json(p));
    }
    if (j.contains("theta") && !j["theta"].is_null()) out.theta = number(j["theta"], "theta");
    if (j.contains("partitions")) {
      require(j["partitions"].is_array(), "partitions must be an array");
      for (const auto& p : j["partitions"]) out.partitions.push_back(partition_from_json(p, out.f.cells()));
    }
    if (j.contains("gauges")) {
      require(j["gauges"].is_array(), "gauges must be an array");
      for (const auto& g : j["gauges"]) out.gauges.push_back(gauge_from_json(g));
    }
    return out;
  } catch (const InstanceError&) {
    throw;
  } catch (const std::exception& e) {
    throw InstanceError(e.what());
  }
}

json to_json(const Instance& instance) {
  json out;
  json mu = json::array();
  for (const auto& space : instance.f.product().factors()) {
    mu.push_back({{"weights", std::vector<double>(space.weights().begin(), space.weights().end())}});
  }
  out["mu"] = mu;
  std::size_t cursor = 0;
  out["f"] = write_entries(instance.f, 0, cursor);
  out["q"] = instance.q;
  json p = json::array();
  for (auto e : instance.p) p.push_back(exponent_to_json(e));
  out["p"] = p;
  if (instance.theta) out["theta"] = *instance.theta;
  if (!instance.partitions.empty()) {
    json parts = json::array();
    for (const auto& part : instance.partitions) parts.push_back(partition_to_json(part));
    out["partitions"] = parts;
  }
  if (!instance.gauges.empty()) {
    json gauges = json::array();
    for (const auto& g : instance.gauges) gauges.push_back(gauge_to_json(g));
    out["gauges"] = gauges;
  }
  return out;
}

Instance parse_instance(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InstanceError(std::string("malformed JSON: ") + e.what());
  }
  return instance_from_json(j);
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InstanceError("cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_instance(buffer.str());
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string instance_hash(const Instance& instance) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(to_json(instance).dump())));
  return buf;
}

}  // namespace interp_lab::cli
