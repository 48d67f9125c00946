#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "igabeam/studies.hpp"

namespace igabeam {

/// Header "t,ux,uy,uz,newton_iterations,corrector_passes"; numbers in %.17g.
void write_timeseries_csv(std::ostream& out, const std::vector<Sample>& samples);
std::string timeseries_csv(const std::vector<Sample>& samples);

/// Run summary: config echo plus step statistics. No wall time, so the text
/// depends only on the inputs.
std::string run_summary_json(const ScenarioConfig& config, const RunResult& result);

std::string convergence_json(const ConvergenceStudyConfig& config, const ConvergenceResult& result);
std::string convergence_csv(const ConvergenceResult& result);
std::string spectral_json(const std::vector<SpectralRow>& rows);
std::string spectral_csv(const std::vector<SpectralRow>& rows);
std::string bench_json(const BenchConfig& config, const std::vector<BenchRow>& rows);
std::string bench_csv(const std::vector<BenchRow>& rows);

/// Writes `content` to `path`, creating parent directories. Throws std::runtime_error.
void write_text_file(const std::string& path, const std::string& content);

}  // namespace igabeam
