#pragma once

#include <optional>
#include <set>
#include <string>

#include "mcc/certificates.hpp"
#include "mcc/config.hpp"
#include "mcc/obbt.hpp"
#include "mcc/oracle.hpp"
#include "mcc/profiles.hpp"
#include "mcc/upper_bounds.hpp"

namespace mcc {

struct ExperimentConfig {
    int fem_n = 2048;
    double w_lo = -4.0, w_hi = 4.0;
    double alpha = 2.5e-4;
    PiecewiseProfile f_profile;
    PiecewiseProfile ud_profile;
    std::vector<int> coarse_levels;
    std::set<std::string> modes;
    ObbtSettings obbt;
    std::string out_dir = "out";
    // oracle-mode parameters
    int oracle_cells = 4;
    int oracle_fem_n = 64;
    int oracle_value_lo = -4, oracle_value_hi = 4;
    int oracle_instances = 10;
    unsigned oracle_seed = 1;

    static ExperimentConfig from_config(const ConfigFile& cfg); // schema-validated, unknown keys rejected
};

// Full pipeline: constants -> relaxations -> OBBT -> certificates -> upper
// bounds -> tables/plots. Returns 0 on success; throws ConfigError for
// validation problems and solver errors for numerical failures.
int run_experiment(const ExperimentConfig& config, bool long_running, std::ostream& log);

double table_gap(double upper, double lower);

} // namespace mcc
