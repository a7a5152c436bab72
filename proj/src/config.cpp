#include "hdpmean/config.hpp"

#include <cmath>
#include <limits>

#include <json.hpp>

namespace hdpmean {

namespace {

using nlohmann::json;

// JSON has no infinity literal; levels may be public (+inf), so doubles go
// through a string form when non-finite.
json put_double(double v) {
  if (std::isinf(v)) return json(v > 0 ? "inf" : "-inf");
  if (std::isnan(v)) return json("nan");
  return json(v);
}

double get_double(const json& j) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    throw std::invalid_argument("bad numeric string in config: " + s);
  }
  return j.get<double>();
}

}  // namespace

std::string ExperimentConfig::to_json() const {
  json j;
  j["command"] = command;
  j["mechanisms"] = mechanisms;
  if (eps1) j["eps1"] = put_double(*eps1);
  if (eps2) j["eps2"] = put_double(*eps2);
  if (n) j["n"] = *n;
  if (f) j["f"] = put_double(*f);
  if (eps_file) j["eps_file"] = *eps_file;
  j["dist"] = dist;
  j["trials"] = trials;
  j["seed"] = seed;
  j["output"] = output;
  j["format"] = format;
  j["threads"] = threads;
  j["clamp"] = clamp;
  return j.dump(2);
}

ExperimentConfig ExperimentConfig::from_json(const std::string& text) {
  const json j = json::parse(text);
  ExperimentConfig c;
  c.command = j.value("command", "");
  if (j.contains("mechanisms"))
    c.mechanisms = j.at("mechanisms").get<std::vector<std::string>>();
  if (j.contains("eps1")) c.eps1 = get_double(j.at("eps1"));
  if (j.contains("eps2")) c.eps2 = get_double(j.at("eps2"));
  if (j.contains("n")) c.n = j.at("n").get<long>();
  if (j.contains("f")) c.f = get_double(j.at("f"));
  if (j.contains("eps_file")) c.eps_file = j.at("eps_file").get<std::string>();
  c.dist = j.value("dist", "uniform");
  c.trials = j.value("trials", 200000L);
  c.seed = j.value("seed", static_cast<std::uint64_t>(0));
  c.output = j.value("output", "");
  c.format = j.value("format", "csv");
  c.threads = j.value("threads", 1);
  c.clamp = j.value("clamp", false);
  return c;
}

}  // namespace hdpmean
