#include <iomanip>
#include <ostream>

#include "lsr/cli/run.hpp"
#include "lsr/error.hpp"

namespace lsr::cli {

namespace {

template <class... Fs>
struct overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

PlotKind kind_of(const PlotSource& s) {
  return std::visit(overloaded{[](const ResidualDecayReport&) { return PlotKind::residual_decay; },
                               [](const LadderReport&) { return PlotKind::ladder; },
                               [](const InteractionReport&) { return PlotKind::interaction; }},
                    s);
}

}  // namespace

const char* to_string(PlotKind k) {
  switch (k) {
    case PlotKind::residual_decay: return "residual-decay";
    case PlotKind::ladder: return "ladder";
    case PlotKind::interaction: return "interaction";
  }
  return "?";
}

PlotKind plot_kind_from_string(const std::string& name) {
  for (PlotKind k : {PlotKind::residual_decay, PlotKind::ladder, PlotKind::interaction})
    if (name == to_string(k)) return k;
  throw ConfigError("unknown plot kind '" + name + "'");
}

void emit_plot_data(const PlotSource& report, PlotKind kind, std::ostream& out) {
  if (kind_of(report) != kind)
    throw DomainError(std::string("plot kind ") + to_string(kind) + " does not match a " +
                      to_string(kind_of(report)) + " report");
  out << std::setprecision(17);
  std::visit(overloaded{[&](const ResidualDecayReport& r) {
                          out << "mu,log_star_norm\n";
                          for (const auto& p : r.points) out << p.mu << ',' << p.log_star_norm << '\n';
                        },
                        [&](const LadderReport& r) {
                          out << "m,R_m,gap\n";
                          for (const auto& l : r.levels) out << l.m << ',' << l.R << ',' << l.gap << '\n';
                        },
                        [&](const InteractionReport& r) {
                          out << "d,ratio_to_gamma1\n";
                          for (const auto& p : r.points) out << p.d << ',' << p.ratio_to_gamma1 << '\n';
                        }},
             report);
}

}  // namespace lsr::cli
