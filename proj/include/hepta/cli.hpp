#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "hepta/spec.hpp"

namespace hepta::cli {

enum class Command { Spectrum, Det, Inverse, Solve, Verify };
enum class Format { Json, Csv };

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitInapplicable = 3;

struct JobConfig {
    Command command = Command::Spectrum;
    HeptaSpec spec;
    std::vector<double> rhs; // solve only
    Format format = Format::Json;
    std::string out_path; // empty: write to the provided stream
    std::uint64_t seed = 0;
    int trials = 100;
};

/// Dispatch a job. Reports go to `out` (or to cfg.out_path when set),
/// human-readable diagnostics to `err`. Returns the process exit code:
/// 0 success, 1 verification failure, 2 usage or spec error,
/// 3 mathematical inapplicability (singular matrix).
int run(const JobConfig& cfg, std::ostream& out, std::ostream& err);

int run_spectrum(const JobConfig& cfg, std::ostream& out, std::ostream& err);
int run_det(const JobConfig& cfg, std::ostream& out, std::ostream& err);
int run_inverse(const JobConfig& cfg, std::ostream& out, std::ostream& err);
int run_solve(const JobConfig& cfg, std::ostream& out, std::ostream& err);
int run_verify(const JobConfig& cfg, std::ostream& out, std::ostream& err);

} // namespace hepta::cli
