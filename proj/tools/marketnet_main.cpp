// marketnet: correlation-network analysis, GBM ensemble calibration, and
// walk-forward backtesting over a daily price panel.
//
// Subcommands map 1:1 onto the cmd_* entry points; this file only layers
// flag and environment overrides on top of an optional JSON config file.

#include <cstdint>
#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "marketnet/commands.hpp"
#include "marketnet/run_config.hpp"

namespace {

// Flag values land here. Only flags actually given (or their MARKETNET_*
// environment variables) override the config file, so CLI defaults never
// clobber file values.
struct Overrides {
    std::string config_path;
    std::string prices;
    std::string sectors;
    std::string out_dir;
    std::uint64_t seed = 0;
    double rho_c = 0.0;
    std::vector<int> dt;
    int runs = 0;
};

void add_common_flags(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--config", o.config_path, "JSON run config file")
        ->envname("MARKETNET_CONFIG")
        ->check(CLI::ExistingFile);
    cmd->add_option("--prices", o.prices, "price panel CSV (date column + one column per ticker)")
        ->envname("MARKETNET_PRICES");
    cmd->add_option("--sectors", o.sectors, "optional ticker,sector CSV")
        ->envname("MARKETNET_SECTORS");
    cmd->add_option("--out-dir", o.out_dir, "artifact output directory")
        ->envname("MARKETNET_OUT_DIR");
    cmd->add_option("--seed", o.seed, "master seed for ensembles and backtest runs")
        ->envname("MARKETNET_SEED");
    cmd->add_option("--rho-c", o.rho_c, "correlation threshold in [0,1]")
        ->envname("MARKETNET_RHO_C");
    cmd->add_option("--dt", o.dt, "rebalance interval(s) in trading days")
        ->envname("MARKETNET_DT")
        ->delimiter(',');
    cmd->add_option("--runs", o.runs, "simulated-strategy runs per dt")
        ->envname("MARKETNET_RUNS");
}

marketnet::RunConfig make_config(const CLI::App* cmd, const Overrides& o) {
    marketnet::RunConfig config;
    if (cmd->count("--config") > 0) config = marketnet::load_run_config(o.config_path);
    if (cmd->count("--prices") > 0) config.price_csv = o.prices;
    if (cmd->count("--sectors") > 0) config.sector_csv = o.sectors;
    if (cmd->count("--out-dir") > 0) config.out_dir = o.out_dir;
    if (cmd->count("--seed") > 0) config.master_seed = o.seed;
    if (cmd->count("--rho-c") > 0) config.rho_c = o.rho_c;
    if (cmd->count("--dt") > 0) config.dt_values = o.dt;
    if (cmd->count("--runs") > 0) config.n_runs = o.runs;
    marketnet::validate(config);
    return config;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"stock correlation networks, calibrated GBM ensembles, walk-forward backtests"};
    app.require_subcommand(1);

    struct Cmd {
        const char* name;
        const char* help;
        void (*fn)(const marketnet::RunConfig&);
    };
    const Cmd cmds[] = {
        {"network", "threshold graph, node statistics and histogram exports", marketnet::cmd_network},
        {"spectral", "eigenvalue spectrum, Marchenko-Pastur overlay, market/noise split", marketnet::cmd_spectral},
        {"fit", "blend-weight fits against market, noise and total targets", marketnet::cmd_fit},
        {"backtest", "historical vs simulated-market strategy comparison", marketnet::cmd_backtest},
        {"all", "full pipeline; the backtest reuses the fitted market weights", marketnet::cmd_all},
    };

    Overrides o;
    for (const Cmd& c : cmds) {
        CLI::App* sub = app.add_subcommand(c.name, c.help);
        add_common_flags(sub, o);
        sub->callback([sub, &o, fn = c.fn] { fn(make_config(sub, o)); });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
