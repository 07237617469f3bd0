#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "lwrkit/pipeline.hpp"
#include "lwrkit/psd.hpp"
#include "lwrkit/snr.hpp"
#include "lwrkit/truth.hpp"

namespace lwr {

nlohmann::json to_json(const PalasantzasParams& params);
nlohmann::json to_json(const PatternSpec& pattern);
nlohmann::json to_json(const NoiseSpec& noise);
nlohmann::json to_json(const GroundTruth& truth);
GroundTruth truth_from_json(const nlohmann::json& j);

nlohmann::json to_json(const HistogramFit& fit);
nlohmann::json to_json(const SnrReport& report);
nlohmann::json to_json(const CdReport& report);
nlohmann::json to_json(const PalasantzasFit& fit);
nlohmann::json to_json(const RoughnessResult& result);
nlohmann::json to_json(const ImageAnalysis& analysis);
nlohmann::json to_json(const DenoiserComparison& comparison);

/// CSV with frequency_per_nm, density_nm3 and, when given, unbiased_density_nm3.
std::string psd_csv(const PsdCurve& biased, const PsdCurve* unbiased = nullptr);

/// Writes text to a file, throwing on any I/O failure.
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace lwr
