#pragma once

// JSON instance files:
//   {"mu":[{"weights":[...]},...], "f":nested arrays, "q":1, "p":[2,"inf"],
//    "theta":0.5, "partitions":[[[0,1],[2,3]],...], "gauges":[...]}
// A gauge is {"power":g} or {"breakpoints":[[x,y],...],"tail_slope":s}.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "interp_lab/condexp.hpp"
#include "interp_lab/exponent.hpp"
#include "interp_lab/gauge.hpp"
#include "interp_lab/kernel_matrix.hpp"

namespace interp_lab::cli {

class InstanceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Instance {
  KernelMatrix f;
  double q = 1.0;
  std::vector<Exponent> p;
  std::optional<double> theta;
  std::vector<Partition> partitions;
  std::vector<GaugeFunction> gauges;
};

Instance instance_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Instance& instance);
Instance load_instance(const std::string& path);
Instance parse_instance(const std::string& text);

nlohmann::json exponent_to_json(Exponent p);
Exponent exponent_from_json(const nlohmann::json& j);
nlohmann::json gauge_to_json(const GaugeFunction& g);
GaugeFunction gauge_from_json(const nlohmann::json& j);
nlohmann::json partition_to_json(const Partition& p);
Partition partition_from_json(const nlohmann::json& j, std::size_t atoms);
nlohmann::json mask_to_json(const SubsetMask& m);

/// FNV-1a 64 of the canonical JSON dump, as 16 hex digits.
std::string instance_hash(const Instance& instance);
std::uint64_t fnv1a64(const std::string& bytes);

}  // namespace interp_lab::cli
