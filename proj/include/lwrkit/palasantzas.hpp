#pragma once

#include <optional>

namespace lwr {

/// The two roughness-spectrum families. Model 1 ties the high-frequency
/// decay to the roughness exponent; model 2 frees it.
enum class PsdModel { palasantzas1 = 1, palasantzas2 = 2 };

PsdModel psd_model_from_int(int value);

/// Power `a` in PSD(f) = psd0 / (1 + (2 pi f xi)^2)^a.
/// Model 1: a = hurst + 1/2. Model 2: a = exponent_free / 2.
double palasantzas_power(double hurst, PsdModel model, std::optional<double> exponent_free);

/// One-sided roughness spectrum in nm^3 at spatial frequency f (1/nm).
double palasantzas_model(double f, double psd0, double xi, double hurst, PsdModel model,
                         std::optional<double> exponent_free = std::nullopt);

/// Integral of the normalized spectrum over f in [0, inf): int (1 + (2 pi f xi)^2)^-a df.
/// Evaluated by tanh-sinh quadrature; requires a > 1/2.
double palasantzas_unit_area(double xi, double power);

}  // namespace lwr
