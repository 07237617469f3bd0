#pragma once

#include <optional>

#include "lwrkit/edges.hpp"
#include "lwrkit/image.hpp"
#include "lwrkit/psd.hpp"
#include "lwrkit/snr.hpp"
#include "lwrkit/truth.hpp"

namespace lwr {

struct AnalysisConfig {
  HistogramOptions histogram;
  EdgeDetectParams edges;
  PsdConfig psd;
  bool per_line = true;  ///< also fit each line's LER/LWR on its own
};

struct ImageAnalysis {
  SnrReport snr;
  EdgeSet edges;
  CdReport cd;
  RoughnessReport roughness;
};

/// SNR, edges, mean CD and LER/LWR spectra of one image.
ImageAnalysis analyze_image(const GrayImage& image, const AnalysisConfig& config = {});

struct SigmaPair {
  double biased = 0.0;    ///< nm
  double unbiased = 0.0;  ///< nm
};

struct DenoiserComparison {
  double snr_noisy = 0.0;
  double snr_denoised = 0.0;
  double dsnr_pct = 0.0;  ///< |denoised - noisy| / noisy * 100
  double cd_noisy = 0.0;
  double cd_denoised = 0.0;
  double dcd_pct = 0.0;  ///< (noisy - denoised) / noisy * 100
  SigmaPair ler_noisy, ler_denoised;
  SigmaPair lwr_noisy, lwr_denoised;
  std::optional<double> sigma_true_ler;  ///< realized injected sigma, nm
  std::optional<double> sigma_true_lwr;
  std::optional<double> lwr_error_noisy;  ///< unbiased minus true, nm
  std::optional<double> lwr_error_denoised;
  std::optional<double> ler_error_noisy;
  std::optional<double> ler_error_denoised;

  /// Signed (denoised - noisy) / noisy * 100.
  double snr_gain_pct() const { return (snr_denoised - snr_noisy) / snr_noisy * 100.0; }
};

/// Comparison record from two finished analyses.
DenoiserComparison compare_analyses(const ImageAnalysis& noisy, const ImageAnalysis& denoised,
                                    const GroundTruth* truth = nullptr);

}  // namespace lwr
