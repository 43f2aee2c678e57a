#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "addbasis/cli/config.hpp"
#include "addbasis/report.hpp"

namespace addbasis::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitFailed = 1;
inline constexpr int kExitInvalid = 2;

struct RunOptions {
  unsigned threads = 0;  // 0: ADDBASIS_THREADS or hardware concurrency
};

struct RunResult {
  int status = kExitPass;
  // One line: verdict and witness, or the diagnostic for status 2.
  std::string message;
  // File names relative to the output directory, manifest last.
  std::vector<std::string> artifacts;
};

// Executes the experiment and writes its artifacts plus manifest.json into
// config.output. Library errors become status 2; nothing is thrown.
RunResult run(const ExperimentConfig& config, const RunOptions& options = {});

// One whitespace-separated "x y" file per report column: <stem>_<column>.dat.
std::vector<std::string> emit_plotdata(const VerificationReport& report,
                                       const std::filesystem::path& dir, const std::string& stem);

// Columns side by side, '#' header line naming them.
void write_plot_file(const std::filesystem::path& path, const std::vector<std::string>& names,
                     const std::vector<std::vector<double>>& columns);

}  // namespace addbasis::cli
