#pragma once

#include <iosfwd>
#include <string>
#include <variant>

#include "lsr/cli/run_config.hpp"
#include "lsr/landscape.hpp"
#include "lsr/reduction.hpp"

namespace lsr::cli {

enum class PlotKind { residual_decay, ladder, interaction };

const char* to_string(PlotKind k);
PlotKind plot_kind_from_string(const std::string& name);

using PlotSource = std::variant<ResidualDecayReport, LadderReport, InteractionReport>;

/// Two- or three-column CSV of a report:
///   residual-decay  mu,log_star_norm
///   ladder          m,R_m,gap
///   interaction     d,ratio_to_gamma1
/// Throws DomainError when `kind` does not match the report.
void emit_plot_data(const PlotSource& report, PlotKind kind, std::ostream& out);

struct RunOptions {
  bool verbose = false;
};

/// Executes one command and writes manifest.json, log.jsonl and the command's
/// CSV files into `config.output_dir`. Library errors propagate.
void run(const RunConfig& config, const RunOptions& options = {});

/// 2 for config errors, 3 for solver failures, 4 for validation failures.
int exit_code(const std::exception& e);

/// Machine-readable description of a failure.
nlohmann::json error_json(const std::exception& e);

}  // namespace lsr::cli
