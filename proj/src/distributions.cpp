#include "hdpmean/distributions.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace hdpmean {

DistributionSpec DistributionSpec::uniform() {
  return {DistributionKind::kUniform};
}

DistributionSpec DistributionSpec::rademacher_half() {
  return {DistributionKind::kRademacherHalf};
}

DistributionSpec DistributionSpec::beta23_shifted() {
  return {DistributionKind::kBeta23Shifted};
}

DistributionSpec DistributionSpec::point_mass(double value) {
  if (!(value >= -0.5 && value <= 0.5))
    throw std::invalid_argument("point mass must lie in [-0.5, 0.5]");
  DistributionSpec d{DistributionKind::kPointMass};
  d.point_value = value;
  return d;
}

DistributionSpec DistributionSpec::lecam(double delta, int sign) {
  if (!(delta >= 0.0 && delta <= 0.5))
    throw std::invalid_argument("lecam delta must lie in [0, 0.5]");
  DistributionSpec d{DistributionKind::kLeCam};
  d.lecam_delta = delta;
  d.lecam_sign = sign >= 0 ? +1 : -1;
  return d;
}

double DistributionSpec::true_mean() const {
  switch (kind) {
    case DistributionKind::kUniform: return 0.0;
    case DistributionKind::kRademacherHalf: return 0.0;
    case DistributionKind::kBeta23Shifted: return 2.0 / 5.0 - 0.5;
    case DistributionKind::kPointMass: return point_value;
    case DistributionKind::kLeCam: return lecam_sign * lecam_delta / 2.0;
  }
  return 0.0;
}

double DistributionSpec::true_variance() const {
  switch (kind) {
    case DistributionKind::kUniform: return 1.0 / 12.0;
    case DistributionKind::kRademacherHalf: return 0.25;
    case DistributionKind::kBeta23Shifted: return 0.04;
    case DistributionKind::kPointMass: return 0.0;
    case DistributionKind::kLeCam: return 0.25 - lecam_delta * lecam_delta / 4.0;
  }
  return 0.0;
}

std::string DistributionSpec::name() const {
  switch (kind) {
    case DistributionKind::kUniform: return "uniform";
    case DistributionKind::kRademacherHalf: return "rademacher";
    case DistributionKind::kBeta23Shifted: return "beta23";
    case DistributionKind::kPointMass:
      return "point:" + std::to_string(point_value);
    case DistributionKind::kLeCam:
      return "lecam:" + std::to_string(lecam_delta) +
             (lecam_sign > 0 ? ":+" : ":-");
  }
  return "?";
}

std::optional<DistributionSpec> distribution_from_name(std::string_view token) {
  if (token == "uniform") return DistributionSpec::uniform();
  if (token == "rademacher") return DistributionSpec::rademacher_half();
  if (token == "beta23") return DistributionSpec::beta23_shifted();
  const auto parse_tail = [](std::string_view s) -> std::optional<double> {
    try {
      return std::stod(std::string(s));
    } catch (const std::exception&) {
      return std::nullopt;
    }
  };
  if (token.starts_with("point:")) {
    if (const auto v = parse_tail(token.substr(6)); v && *v >= -0.5 && *v <= 0.5)
      return DistributionSpec::point_mass(*v);
    return std::nullopt;
  }
  if (token.starts_with("lecam:")) {
    std::string_view rest = token.substr(6);
    int sign = +1;
    if (rest.ends_with(":+")) {
      rest.remove_suffix(2);
    } else if (rest.ends_with(":-")) {
      rest.remove_suffix(2);
      sign = -1;
    }
    if (const auto v = parse_tail(rest); v && *v >= 0.0 && *v <= 0.5)
      return DistributionSpec::lecam(*v, sign);
    return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace hdpmean
