#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace torusinv::cli {

enum Exit : int { kOk = 0, kInternal = 1, kInvalid = 2, kUnavailable = 3, kMismatch = 4 };

struct Outputs {
    std::string json, svg, csv;
};

struct RkpArgs {
    int k = 0, l = 0;
    double ecc = 0.5;
    double phase = 0.0;
    std::string sense = "positive";
    std::size_t samples = 0;
    Outputs out;
};

struct EulerArgs {
    double mu = 0.25;
    int k = 0, l = 0;
    std::optional<double> energy;
    std::string kind = "generic";
    std::optional<double> phase;
    std::uint64_t seed = 1;
    std::size_t samples = 0;
    Outputs out;
};

struct CompareArgs {
    int k = 0, l = 0;
    std::optional<double> mu;
    double ecc = 0.5;
    std::uint64_t seed = 1;
    std::string json;
};

struct SweepArgs {
    std::string config;
    std::string grid;  // rkp, euler or all, instead of a config file
    std::string output_dir;
    int threads = 0;
    std::uint64_t seed = 1;
};

struct InvariantsArgs {
    std::string curve;
    double cx = 0.0, cy = 0.0;
    double min_angle = 1e-3;
    std::string json;
};

int cmd_rkp(const RkpArgs& a);
int cmd_euler(const EulerArgs& a);
int cmd_compare(const CompareArgs& a);
int cmd_sweep(const SweepArgs& a);
int cmd_invariants(const InvariantsArgs& a);

// Runs f, mapping library errors to exit codes and printing error JSON.
int guarded(const std::string& json_path, int (*f)(const void*), const void* args);

}  // namespace torusinv::cli
