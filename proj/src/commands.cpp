#include "calcert/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "calcert/criteria.hpp"
#include "calcert/io.hpp"
#include "calcert/qmodel.hpp"
#include "calcert/scan.hpp"
#include "calcert/selftest.hpp"

namespace calcert {

namespace {

// Configuration or usage problem detected after parsing; maps to kExitUsage.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct RunConfig {
    std::string input_path;
    std::string scenario;
    int dimension = 0;
    double epsilon = 1e-9;
    std::string format = "json";
    std::uint64_t seed = SelftestOptions{}.seed;
    std::string witness_file;
    bool no_witness = false;

    std::string state;
    double p = 0.0;
    std::string settings;
    std::string family;
    std::string criterion = "det";
    int steps = 20;
    int resolution = 64;
    bool quick = false;
};

double default_epsilon() {
    const char *env = std::getenv("CALCERT_EPSILON");
    if (env == nullptr || *env == '\0') {
        return CriteriaOptions{}.epsilon;
    }
    char *end = nullptr;
    const double v = std::strtod(env, &end);
    if (end == env || *end != '\0') {
        throw ConfigError(std::string("CALCERT_EPSILON is not a number: \"") + env + "\"");
    }
    return v;
}

CriteriaOptions criteria_options(const RunConfig &cfg) {
    if (!(cfg.epsilon > 0.0) || !std::isfinite(cfg.epsilon)) {
        throw ConfigError("tolerance epsilon must be a positive finite number");
    }
    CriteriaOptions opts;
    opts.epsilon = cfg.epsilon;
    return opts;
}

ScenarioAssumption scenario_from(const RunConfig &cfg) {
    const std::string &s = cfg.scenario;
    const bool has_d = cfg.dimension != 0;
    if (s == "dim") {
        if (!has_d) {
            throw ConfigError("--scenario dim requires --d");
        }
        if (cfg.dimension < 2) {
            throw ConfigError("--d must be at least 2");
        }
        return ScenarioAssumption::dimension_bounded(cfg.dimension);
    }
    if (has_d && cfg.dimension != 2) {
        throw ConfigError("scenario " + s + " describes qubit measurements; --d must be 2");
    }
    if (s == "sharp-orthogonal") {
        return ScenarioAssumption::sharp_orthogonal();
    }
    if (s == "sharp" || s == "sharp-nonorthogonal") {
        return ScenarioAssumption::sharp_non_orthogonal();
    }
    if (s == "unsharp-orthogonal") {
        return ScenarioAssumption::unsharp_orthogonal();
    }
    if (s == "qubit") {
        return ScenarioAssumption::qubit_uncharacterized();
    }
    throw ConfigError("unknown scenario \"" + s + "\"");
}

int exit_code(Status s) {
    switch (s) {
        case Status::Entangled: return kExitEntangled;
        case Status::Inconclusive: return kExitInconclusive;
        case Status::SeparableModelExists: return kExitSeparableModel;
    }
    return kExitFailure;
}

int cmd_certify(const RunConfig &cfg, std::ostream &out, std::ostream &err) {
    const CriteriaOptions opts = criteria_options(cfg);
    const ScenarioAssumption scenario = scenario_from(cfg);
    DataMatrix d = [&] {
        if (cfg.input_path == "-") {
            std::ostringstream buf;
            buf << std::cin.rdbuf();
            return parse_data_matrix(buf.str(), "<stdin>");
        }
        return load_data_matrix(cfg.input_path);
    }();
    const Verdict v = certify(d, scenario, opts);

    std::optional<std::string> witness_path;
    if (v.status == Status::SeparableModelExists && v.witness && !cfg.no_witness) {
        std::string path = cfg.witness_file;
        if (path.empty() && cfg.input_path != "-") {
            path = cfg.input_path + ".witness.json";
        }
        if (path.empty()) {
            err << "note: input read from stdin; pass --witness-file to store the separable model\n";
        } else {
            std::ofstream f(path, std::ios::binary);
            f << to_json(*v.witness).dump(2) << '\n';
            if (!f) {
                throw ConfigError("cannot write witness file " + path);
            }
            witness_path = path;
        }
    }
    out << to_json(v, witness_path).dump(2) << '\n';
    return exit_code(v.status);
}

int cmd_simulate(const RunConfig &cfg, std::ostream &out) {
    std::optional<DataMatrix> d;
    if (cfg.state == "werner") {
        const MeasurementFamily fam = pauli_family(cfg.settings.empty() ? "xyz" : cfg.settings);
        d = from_state(werner_state(cfg.p), fam, fam);
    } else if (cfg.state == "bfp") {
        const MeasurementFamily fam = product_pauli_family();
        d = from_state(bfp_state(cfg.p), fam, fam);
    } else if (cfg.state == "example-sep") {
        const MeasurementFamily fam = example_unsharp_family();
        d = from_state(example_states().separable, fam, fam);
    } else if (cfg.state == "example-ent") {
        const MeasurementFamily fam = pauli_family("xz");
        d = from_state(example_states().entangled, fam, fam);
    } else {
        throw ConfigError("unknown state \"" + cfg.state + "\"");
    }
    if (cfg.format == "csv") {
        const RealMatrix &m = d->matrix();
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            for (Eigen::Index j = 0; j < m.cols(); ++j) {
                out << (j ? "," : "") << format_number(m(i, j));
            }
            out << '\n';
        }
    } else {
        out << to_json(*d).dump(2) << '\n';
    }
    return kExitOk;
}

int cmd_sweep(const RunConfig &cfg, std::ostream &out) {
    SweepConfig sc;
    if (cfg.family == "werner") {
        sc.family = SweepFamily::Werner;
    } else if (cfg.family == "bfp") {
        sc.family = SweepFamily::Bfp;
    } else {
        throw ConfigError("unknown family \"" + cfg.family + "\" (expected werner or bfp)");
    }
    if (cfg.criterion == "det") {
        sc.criterion = SweepCriterion::Det;
    } else if (cfg.criterion == "ccnr") {
        sc.criterion = SweepCriterion::Ccnr;
    } else {
        throw ConfigError("unknown criterion \"" + cfg.criterion + "\" (expected det or ccnr)");
    }
    sc.settings = !cfg.settings.empty() ? cfg.settings : (sc.criterion == SweepCriterion::Ccnr ? "xz" : "xyz");
    sc.dimension = cfg.dimension != 0 ? cfg.dimension : (sc.family == SweepFamily::Bfp ? 4 : 2);
    sc.steps = cfg.steps;
    write_sweep_csv(out, run_sweep(sc, criteria_options(cfg)));
    return kExitOk;
}

int cmd_region(const RunConfig &cfg, std::ostream &out) {
    write_region_csv(out, detection_region(cfg.resolution, criteria_options(cfg)));
    return kExitOk;
}

int cmd_selftest(const RunConfig &cfg, std::ostream &err) {
    SelftestOptions opts;
    opts.quick = cfg.quick;
    opts.seed = cfg.seed;
    opts.criteria = criteria_options(cfg);
    std::vector<std::string> failed;
    for (const auto &check : acceptance_checks()) {
        const CheckResult r = run_check(check, opts);
        err << format_check_line(r) << '\n' << std::flush;
        if (!r.passed) {
            failed.push_back(r.id);
        }
    }
    const std::size_t total = acceptance_checks().size();
    err << (total - failed.size()) << '/' << total << " checks passed";
    if (!failed.empty()) {
        err << "; failed:";
        for (const auto &id : failed) {
            err << ' ' << id;
        }
    }
    err << '\n';
    return failed.empty() ? kExitOk : kExitFailure;
}

void add_epsilon(CLI::App *cmd, RunConfig &cfg) {
    cmd->add_option("--epsilon", cfg.epsilon, "Strictness tolerance (default 1e-9 or $CALCERT_EPSILON)");
}

}  // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    RunConfig cfg;
    try {
        cfg.epsilon = default_epsilon();
    } catch (const ConfigError &e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }

    CLI::App app{"Certify bipartite entanglement from correlation data under measurement assumptions", "calcert"};
    app.require_subcommand(1);

    auto *certify_cmd = app.add_subcommand("certify", "Certify a data-matrix or probability JSON file");
    certify_cmd->add_option("input", cfg.input_path, "Input JSON file ('-' for stdin)")->required();
    certify_cmd
        ->add_option("--scenario", cfg.scenario,
                     "sharp-orthogonal | sharp | sharp-nonorthogonal | unsharp-orthogonal | qubit | dim")
        ->required();
    certify_cmd->add_option("-d,--d,--dim", cfg.dimension, "Local dimension (dim scenario)");
    certify_cmd->add_option("--witness-file", cfg.witness_file, "Where to write a separable model");
    certify_cmd->add_flag("--no-witness", cfg.no_witness, "Do not write a witness file");
    add_epsilon(certify_cmd, cfg);

    auto *simulate_cmd = app.add_subcommand("simulate", "Emit the data matrix of a named state");
    simulate_cmd->add_option("--state", cfg.state, "werner | bfp | example-sep | example-ent")->required();
    simulate_cmd->add_option("--p", cfg.p, "Noise parameter in [0, 1]")->capture_default_str();
    simulate_cmd->add_option("--settings", cfg.settings, "Pauli axes per side for werner (default xyz)");
    simulate_cmd->add_option("--format", cfg.format, "json | csv")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();

    auto *sweep_cmd = app.add_subcommand("sweep", "Sweep the noise parameter of a state family");
    sweep_cmd->add_option("--family", cfg.family, "werner | bfp")->required();
    sweep_cmd->add_option("--criterion", cfg.criterion, "det | ccnr")->capture_default_str();
    sweep_cmd->add_option("--settings", cfg.settings, "Pauli axes per side (werner)");
    sweep_cmd->add_option("-d,--d,--dim", cfg.dimension, "Local dimension for det (default 2, bfp 4)");
    sweep_cmd->add_option("--steps", cfg.steps, "Grid intervals on [0, 1]")->capture_default_str();
    add_epsilon(sweep_cmd, cfg);

    auto *region_cmd = app.add_subcommand("region", "Detection regions over the singular values");
    region_cmd->add_option("--resolution", cfg.resolution, "Grid points per axis")->capture_default_str();
    add_epsilon(region_cmd, cfg);

    auto *selftest_cmd = app.add_subcommand("selftest", "Run the acceptance checks");
    selftest_cmd->add_flag("--quick", cfg.quick, "Subsampled run");
    selftest_cmd->add_option("--seed", cfg.seed, "Base random seed")->capture_default_str();
    add_epsilon(selftest_cmd, cfg);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*certify_cmd) {
            return cmd_certify(cfg, out, err);
        }
        if (*simulate_cmd) {
            return cmd_simulate(cfg, out);
        }
        if (*sweep_cmd) {
            return cmd_sweep(cfg, out);
        }
        if (*region_cmd) {
            return cmd_region(cfg, out);
        }
        if (*selftest_cmd) {
            return cmd_selftest(cfg, err);
        }
    } catch (const InputError &e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument &e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::domain_error &e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception &e) {
        err << "internal error: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitUsage;
}

}  // namespace calcert
