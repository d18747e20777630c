#pragma once

#include <functional>
#include <map>
#include <string>

#include "stripspec/config.hpp"

namespace stripspec {

// Exit codes: 0 pass, 1 acceptance failure, 2 usage/config error, 3 numerical
// failure.
enum ExitCode { kExitOk = 0, kExitCheckFailed = 1, kExitConfig = 2, kExitNumeric = 3 };

// Run a command; every produced file is also returned as name -> contents so
// callers (tests, determinism checks) can compare outputs byte for byte.
// Files are written atomically under cfg.output_dir.
using OutputMap = std::map<std::string, std::string>;

int run_command(const RunConfig& cfg, OutputMap* outputs = nullptr);

// Effective worker count: STRIP_SPECTRA_JOBS env overrides cfg.jobs; 0 means
// hardware concurrency.
int effective_jobs(int cfg_jobs);

// Run fn(i) for i in [0, n) on up to `jobs` workers (shared-nothing; the
// first exception, by index, is rethrown).
void parallel_for_jobs(int n, int jobs, const std::function<void(int)>& fn);

// printf-style %.17g formatting used by every CSV writer.
std::string fmt_real(Real v);

}  // namespace stripspec
