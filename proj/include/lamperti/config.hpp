#ifndef LAMPERTI_CONFIG_HPP
#define LAMPERTI_CONFIG_HPP

#include <cstdint>
#include <string>

#include <json.hpp>

#include "lamperti/duality.hpp"
#include "lamperti/lambda.hpp"
#include "lamperti/measure.hpp"
#include "lamperti/population.hpp"

namespace lamperti {

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct RunConfig {
    std::uint64_t seed = 1;
    std::size_t replicas = 1000;
    unsigned threads = 0;  // 0: hardware default, overridable by env/flag
    std::string out_dir = "out";
    nlohmann::json raw;
};

RunConfig load_config(const std::string& path);

// lambda = {kingman: float, beta_family: {beta, c} | atoms: [[zeta, mass]...]
//           | table: [[zeta, density]...]}
LambdaSpec parse_lambda(const nlohmann::json& j);
SMHParams parse_params(const nlohmann::json& j);      // kappa, sigma, lambda
DiscreteMeasure parse_measure(const nlohmann::json& j);  // [[label, mass]...]
PopulationScenario parse_scenario(const nlohmann::json& j, std::uint64_t seed);

Phi parse_phi(const std::string& kind, std::size_t p);
DualityExperiment parse_duality_experiment(const nlohmann::json& j,
                                           std::uint64_t fallback_seed);
FvDualityExperiment parse_fv_experiment(const nlohmann::json& j,
                                        std::uint64_t fallback_seed);

// FNV-1a over the canonical (sorted-key) dump; used in the run manifest
std::string config_hash(const nlohmann::json& j);

} // namespace lamperti

#endif
