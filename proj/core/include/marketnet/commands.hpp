#ifndef MARKETNET_COMMANDS_HPP
#define MARKETNET_COMMANDS_HPP

#include "marketnet/run_config.hpp"

namespace marketnet {

/// CLI entry points. Each loads the configured panel, writes its artifact
/// set under config.out_dir, and prints a one-screen summary to stdout.
/// Errors surface as exceptions for the frontend to turn into exit codes.
/// All outputs are deterministic functions of the config (seeds included).

/// Edge list, node attributes, degree/centrality/clustering histograms.
/// An empty threshold graph still writes (empty) artifacts and succeeds.
void cmd_network(const RunConfig& config);

/// Spectrum, Marchenko-Pastur overlay, market/noise matrices and their
/// entry-distribution histograms and summary stats.
void cmd_spectral(const RunConfig& config);

/// The three blend-weight fits (market, noise, total) with overlay
/// histograms of target vs simulated correlation entries.
void cmd_fit(const RunConfig& config);

/// Historical vs simulated-market walk-forward comparison across dt_values.
void cmd_backtest(const RunConfig& config);

/// Full pipeline with one shared analysis pass. The backtest stage uses the
/// market-fit weights instead of config.backtest_weights.
void cmd_all(const RunConfig& config);

}  // namespace marketnet

#endif  // MARKETNET_COMMANDS_HPP
