#include "lwrkit/pipeline.hpp"

namespace lwr {

ImageAnalysis analyze_image(const GrayImage& image, const AnalysisConfig& config) {
  SnrReport snr = estimate_snr(image, config.histogram);
  EdgeSet edges = detect_edges(image, config.edges);
  CdReport cd = mean_cd(edges);
  RoughnessReport roughness = roughness_report(edges, config.psd, config.per_line);
  return ImageAnalysis{std::move(snr), std::move(edges), std::move(cd), std::move(roughness)};
}

DenoiserComparison compare_analyses(const ImageAnalysis& noisy, const ImageAnalysis& denoised,
                                    const GroundTruth* truth) {
  DenoiserComparison c;
  c.snr_noisy = noisy.snr.linescan_snr;
  c.snr_denoised = denoised.snr.linescan_snr;
  c.dsnr_pct = snr_delta(c.snr_noisy, c.snr_denoised);
  c.cd_noisy = noisy.cd.mean_cd;
  c.cd_denoised = denoised.cd.mean_cd;
  c.dcd_pct = cd_delta(c.cd_noisy, c.cd_denoised);
  c.ler_noisy = {noisy.roughness.ler.sigma_biased(), noisy.roughness.ler.sigma_unbiased()};
  c.ler_denoised = {denoised.roughness.ler.sigma_biased(), denoised.roughness.ler.sigma_unbiased()};
  c.lwr_noisy = {noisy.roughness.lwr.sigma_biased(), noisy.roughness.lwr.sigma_unbiased()};
  c.lwr_denoised = {denoised.roughness.lwr.sigma_biased(), denoised.roughness.lwr.sigma_unbiased()};
  if (truth) {
    c.sigma_true_ler = truth->realized_ler_sigma();
    c.sigma_true_lwr = truth->realized_lwr_sigma();
    c.ler_error_noisy = c.ler_noisy.unbiased - *c.sigma_true_ler;
    c.ler_error_denoised = c.ler_denoised.unbiased - *c.sigma_true_ler;
    c.lwr_error_noisy = c.lwr_noisy.unbiased - *c.sigma_true_lwr;
    c.lwr_error_denoised = c.lwr_denoised.unbiased - *c.sigma_true_lwr;
  }
  return c;
}

}  // namespace lwr
