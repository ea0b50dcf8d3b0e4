#include "lamperti/config.hpp"

#include <cmath>
#include <fstream>

namespace lamperti {

using nlohmann::json;

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    RunConfig cfg;
    try {
        cfg.raw = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    if (!cfg.raw.contains("seed"))
        throw ConfigError("config: seed is mandatory for reproducibility");
    cfg.seed = cfg.raw.at("seed").get<std::uint64_t>();
    cfg.replicas = cfg.raw.value("replicas", std::size_t(1000));
    cfg.threads = cfg.raw.value("threads", 0u);
    cfg.out_dir = cfg.raw.value("out", std::string("out"));
    return cfg;
}

LambdaSpec parse_lambda(const json& j) {
    double kingman = j.value("kingman", 0.0);
    LambdaSpec spec;
    if (j.contains("beta_family")) {
        const auto& b = j.at("beta_family");
        spec = LambdaSpec::beta_family(b.at("beta").get<double>(), b.at("c").get<double>(),
                                       kingman);
    } else if (j.contains("atoms")) {
        std::vector<LambdaAtom> atoms;
        for (const auto& a : j.at("atoms"))
            atoms.push_back(LambdaAtom{ a.at(0).get<double>(), a.at(1).get<double>() });
        spec = LambdaSpec::from_atoms(std::move(atoms), kingman);
    } else if (j.contains("table")) {
        std::vector<std::pair<double, double>> nodes;
        for (const auto& n : j.at("table"))
            nodes.emplace_back(n.at(0).get<double>(), n.at(1).get<double>());
        spec = LambdaSpec::from_table(std::move(nodes), kingman);
    } else {
        spec = LambdaSpec::kingman_only(kingman);
    }
    if (j.contains("window"))
        spec = spec.restricted(j.at("window").at(0).get<double>(),
                               j.at("window").at(1).get<double>());
    return spec;
}

SMHParams parse_params(const json& j) {
    SMHParams p;
    p.kappa = j.value("kappa", 0.0);
    p.sigma = j.value("sigma", 0.0);
    if (p.sigma < 0.0) throw ConfigError("params: sigma must be >= 0");
    if (j.contains("lambda")) p.lambda = parse_lambda(j.at("lambda"));
    return p;
}

DiscreteMeasure parse_measure(const json& j) {
    std::vector<Atom> atoms;
    for (const auto& a : j)
        atoms.push_back(Atom{ TypePoint{ a.at(0).get<std::uint32_t>() },
                              a.at(1).get<double>() });
    return DiscreteMeasure(std::move(atoms));
}

PopulationScenario parse_scenario(const json& j, std::uint64_t seed) {
    PopulationScenario scn;
    scn.params = parse_params(j);
    scn.alpha = j.value("alpha", 0.0);
    scn.nu0 = j.contains("nu0") ? parse_measure(j.at("nu0"))
                                : DiscreteMeasure::single(0, 1.0);
    scn.T = j.value("T", 1.0);
    scn.dt = j.value("dt", 1e-3);
    scn.eps_trunc = j.value("eps_trunc", 0.01);
    scn.n_particles = j.value("n_particles", std::size_t(1000));
    scn.seed = seed;
    return scn;
}

Phi parse_phi(const std::string& kind, std::size_t p) {
    if (kind == "one") return Phi::constant(p);
    if (kind == "all_equal") return Phi::all_equal(p);
    if (kind == "pair_first_two") {
        if (p < 2) throw ConfigError("phi pair_first_two needs p >= 2");
        return Phi(p,
                   [](const std::vector<TypePoint>& a) {
                       return a[0] == a[1] ? 1.0 : 0.0;
                   },
                   1.0);
    }
    if (kind == "inv_label_product") {
        std::vector<std::function<double(TypePoint)>> fs(
            p, [](TypePoint a) { return 1.0 / (1.0 + static_cast<double>(a.label)); });
        return Phi::product(std::move(fs), 1.0);
    }
    throw ConfigError("unknown phi kind: " + kind);
}

DualityExperiment parse_duality_experiment(const json& j, std::uint64_t fallback_seed) {
    DualityExperiment exp;
    exp.id = j.value("id", std::string("experiment"));
    std::size_t p = j.at("p").get<std::size_t>();
    Phi phi = parse_phi(j.value("phi", std::string("all_equal")), p);
    double center = j.value("h_center", 2.0);
    double width = j.value("h_width", 1.5);
    exp.tf = TestFunction{ p, phi, BumpFunction(center, width) };
    exp.nu0 = j.contains("nu0") ? parse_measure(j.at("nu0"))
                                : DiscreteMeasure::single(0, 1.0);
    if (j.contains("pi0")) {
        std::vector<std::vector<std::uint32_t>> blocks;
        for (const auto& b : j.at("pi0")) blocks.push_back(b.get<std::vector<std::uint32_t>>());
        exp.pi0 = Partition::from_blocks(p, blocks);
    } else {
        exp.pi0 = Partition(p);
    }
    exp.z0 = j.value("z0", 1.0);
    exp.params = parse_params(j);
    exp.T = j.value("T", 0.5);
    exp.replicas = j.value("replicas", std::size_t(100000));
    exp.seed = j.value("seed", fallback_seed);
    exp.eps_trunc = j.value("eps_trunc", 0.01);
    exp.n_particles = j.value("n_particles", std::size_t(1000));
    return exp;
}

FvDualityExperiment parse_fv_experiment(const json& j, std::uint64_t fallback_seed) {
    FvDualityExperiment exp{ .rho0 = normalize(DiscreteMeasure::single(0, 1.0)) };
    exp.id = j.value("id", std::string("fv-experiment"));
    exp.p = j.at("p").get<std::size_t>();
    exp.phi = parse_phi(j.value("phi", std::string("all_equal")), exp.p);
    exp.rho0 = normalize(j.contains("rho0") ? parse_measure(j.at("rho0"))
                                            : DiscreteMeasure::single(0, 1.0));
    exp.params = parse_params(j);
    exp.T = j.value("T", 1.0);
    exp.replicas = j.value("replicas", std::size_t(100000));
    exp.rhs_replicas = j.value("rhs_replicas", 2 * exp.replicas);
    exp.seed = j.value("seed", fallback_seed);
    exp.eps_trunc = j.value("eps_trunc", 0.01);
    exp.n_particles = j.value("n_particles", std::size_t(1000));
    return exp;
}

std::string config_hash(const json& j) {
    std::string dump = j.dump();  // nlohmann object keys are already sorted
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : dump) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace lamperti
