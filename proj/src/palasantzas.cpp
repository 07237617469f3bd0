#include "lwrkit/palasantzas.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace lwr {

PsdModel psd_model_from_int(int value) {
  if (value == 1) return PsdModel::palasantzas1;
  if (value == 2) return PsdModel::palasantzas2;
  throw std::invalid_argument("PSD model must be 1 or 2, got " + std::to_string(value));
}

double palasantzas_power(double hurst, PsdModel model, std::optional<double> exponent_free) {
  if (model == PsdModel::palasantzas1) return hurst + 0.5;
  if (!exponent_free) throw std::invalid_argument("palasantzas2 requires a free exponent");
  return *exponent_free / 2.0;
}

double palasantzas_model(double f, double psd0, double xi, double hurst, PsdModel model,
                         std::optional<double> exponent_free) {
  const double power = palasantzas_power(hurst, model, exponent_free);
  const double u = 2.0 * std::numbers::pi * f * xi;
  return psd0 / std::pow(1.0 + u * u, power);
}

double palasantzas_unit_area(double xi, double power) {
  if (!(xi > 0.0) || !(power > 0.5)) throw std::invalid_argument("palasantzas_unit_area: need xi > 0, power > 1/2");
  // Substituting u = tan(t) maps [0, inf) onto [0, pi/2) with integrand
  // cos(t)^(2a - 2); the endpoint singularity for a < 1 is integrable and
  // tanh-sinh handles it.
  boost::math::quadrature::tanh_sinh<double> integrator;
  const double exponent = 2.0 * power - 2.0;
  const auto integrand = [exponent](double t, double distance_to_right) {
    // Near pi/2, cos(t) == sin(pi/2 - t) is computed from the complement to keep precision.
    const double c = t > 1.0 ? std::sin(distance_to_right) : std::cos(t);
    return std::pow(c, exponent);
  };
  const double area_u = integrator.integrate(integrand, 0.0, std::numbers::pi / 2.0);
  return area_u / (2.0 * std::numbers::pi * xi);
}

}  // namespace lwr
