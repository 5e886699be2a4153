#include "spdc_cli/commands.hpp"

#include <fmt/format.h>

#include <chrono>
#include <cmath>
#include <exception>
#include <limits>

#include "spdc/errors.hpp"
#include "spdc/parallel.hpp"
#include "spdc/units.hpp"
#include "spdc_cli/output.hpp"

namespace spdc::cli {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct SweepPoint {
  ModelKind kind = ModelKind::General;
  SpdcType type = SpdcType::TypeI;
  CollectionSpec collection;
  double length = 0.0, w_p = 0.0, tau = 0.0;
  double x = 0.0;  ///< swept value, config units
  double purity = kNaN, trace_check = kNaN;
  bool converged = false;
  double wall_ms = 0.0;
  std::string error;
};

double to_config_units(SweepAxis axis, double v) { return axis == SweepAxis::Length ? v / units::um_per_mm : v; }

PuritySetting row_setting(const RunConfig& c, const PuritySetting& base, double value) {
  PuritySetting s = sweep_setting(base, c.sweep_axis, value);
  if (c.ws_over_wp && c.sweep_axis != SweepAxis::WsOverWp) s.collection.w0 = *c.ws_over_wp * s.model.pump().w_p;
  return s;
}

std::vector<SweepPoint> sweep(const RunConfig& c, ModelKind kind, std::ostream& err) {
  RunConfig rc = c;
  rc.kind = kind;
  const PuritySetting base = rc.purity_setting();
  const std::size_t n = c.sweep_values.size();
  const int threads = c.threads > 0 ? c.threads : default_thread_count();
  const bool row_parallel = threads > 1 && n > 1;

  std::vector<SweepPoint> rows(n);
  parallel_for(n, row_parallel ? threads : 1, [&](std::size_t i) {
    SweepPoint& r = rows[i];
    const double v = c.sweep_values[i];
    r.kind = kind;
    r.type = base.model.type();
    r.collection = base.collection;
    r.length = base.model.crystal().length;
    r.w_p = base.model.pump().w_p;
    r.tau = base.model.pump().tau;
    r.x = to_config_units(c.sweep_axis, v);
    switch (c.sweep_axis) {
      case SweepAxis::WsOverWp: r.collection.w0 = v * r.w_p; break;
      case SweepAxis::Ell: break;
      case SweepAxis::Length: r.length = v; break;
      case SweepAxis::Tau: r.tau = v; break;
      case SweepAxis::Wp: r.w_p = v; break;
    }
    try {
      PuritySetting s = row_setting(c, base, v);
      s.quad.threads = row_parallel ? 1 : threads;
      r.collection = s.collection;
      const auto t0 = std::chrono::steady_clock::now();
      const PurityResult p = purity(s);
      const auto t1 = std::chrono::steady_clock::now();
      r.purity = p.purity;
      r.trace_check = p.trace_check;
      r.converged = p.converged;
      if (c.timing) r.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    } catch (const Error& e) {
      r.error = e.what();
    }
  });
  for (const SweepPoint& r : rows)
    if (!r.error.empty())
      err << fmt::format("row {}={} ({}): {}\n", to_string(c.sweep_axis), num(r.x), to_string(kind), r.error);
  return rows;
}

std::filesystem::path output_path(const RunConfig& c, std::string_view model, std::string_view ext,
                                  std::string_view suffix = {}) {
  return c.out_dir / fmt::format("{}_{}_{}{}.{}", to_string(c.command), model, c.hash_hex(), suffix, ext);
}

void emit(RunOutcome& o, const std::filesystem::path& path, std::string_view text, std::size_t rows,
          std::string_view what, std::ostream& out) {
  write_file(path, text);
  o.artifacts.push_back({path, rows});
  out << fmt::format("wrote {} ({} {})\n", path.string(), rows, what);
}

RunOutcome run_sweep(const RunConfig& c, std::ostream& out, std::ostream& err) {
  std::vector<ModelKind> kinds{c.kind};
  if (c.command == Command::CompareModels) kinds = {ModelKind::General, ModelKind::DoubleSinc, ModelKind::FourGaussian};

  CsvWriter csv(c.hash_hex(), {"model", "spdc_type", "ell", "p", "L_mm", "w_p_um", "w0_um", "tau_fs", "ws_over_wp",
                               "purity", "trace_check", "converged", "wall_time_ms"});
  std::vector<Series> series;
  std::size_t results = 0, converged = 0;
  for (ModelKind kind : kinds) {
    Series s{std::string(to_string(kind)), {}, {}};
    for (const SweepPoint& r : sweep(c, kind, err)) {
      const std::string ell = c.sweep_axis == SweepAxis::Ell ? num(r.x) : std::to_string(r.collection.ell);
      csv.row({std::string(to_string(r.kind)), r.type == SpdcType::TypeI ? "I" : "II", ell,
               std::to_string(r.collection.p_rad), num(r.length / units::um_per_mm), num(r.w_p), num(r.collection.w0),
               num(r.tau), num(r.collection.w0 / r.w_p), num(r.purity), num(r.trace_check),
               r.converged ? "true" : "false", num(r.wall_ms)});
      s.x.push_back(r.x);
      s.y.push_back(r.purity);
      if (r.error.empty()) ++results;
      if (r.converged) ++converged;
    }
    series.push_back(std::move(s));
  }

  RunOutcome o;
  const std::string model = c.command == Command::CompareModels ? "all" : std::string(to_string(c.kind));
  emit(o, output_path(c, model, "csv"), csv.text(), csv.rows(), "rows", out);
  if (c.figures) {
    const std::string x_label = c.sweep_axis == SweepAxis::Length ? "L (mm)" : std::string(to_string(c.sweep_axis));
    emit(o, output_path(c, model, "svg"),
         svg_lines(series, x_label, "purity", fmt::format("{} {}", to_string(c.command), model)), csv.rows(), "points",
         out);
  }
  if (results == 0)
    o.exit_code = kValidation;
  else if (converged == 0)
    o.exit_code = kConvergence;
  return o;
}

std::string axis_column(GridVariable v) {
  switch (v) {
    case GridVariable::LambdaS: return "lambda_s_nm";
    case GridVariable::LambdaI: return "lambda_i_nm";
    case GridVariable::OmegaS: return "Omega_s";
    case GridVariable::OmegaI: return "Omega_i";
    case GridVariable::XS: return "x_s_um";
    case GridVariable::XI: return "x_i_um";
    default: return std::string(to_string(v));
  }
}

double axis_out(GridVariable v, double x) {
  return v == GridVariable::LambdaS || v == GridVariable::LambdaI ? units::um_to_nm(x) : x;
}

RunOutcome run_jsa(const RunConfig& c, std::ostream& out) {
  const BiphotonModel model = c.model();
  GridSpec g = c.grid;
  g.threads = c.threads;
  const GridField f = jsa_grid(model, g);

  const std::string a = axis_column(f.first_variable), b = axis_column(f.second_variable);
  CsvWriter csv(c.hash_hex(), {a, b, f.quantity == GridQuantity::Intensity ? "intensity" : "amplitude"});
  std::vector<double> first, second;
  for (double x : f.first) first.push_back(axis_out(f.first_variable, x));
  for (double y : f.second) second.push_back(axis_out(f.second_variable, y));
  for (std::size_t i = 0; i < first.size(); ++i)
    for (std::size_t j = 0; j < second.size(); ++j) csv.row({num(first[i]), num(second[j]), num(f.at(i, j))});

  RunOutcome o;
  const std::string name(to_string(c.kind));
  emit(o, output_path(c, name, "csv"), csv.text(), csv.rows(), "rows", out);
  if (c.figures)
    emit(o, output_path(c, name, "svg"), svg_heatmap(first, second, f.values, a, b, fmt::format("jsa {}", name)),
         f.values.size(), "cells", out);
  return o;
}

RunOutcome run_pmf(const RunConfig& c, std::ostream& out) {
  if (is_position_grid(c.grid)) throw ValidationError("phase matching is evaluated in momentum space", "grid.first");
  const BiphotonModel model = c.model();
  const DerivedParams& d = model.derived();
  const std::vector<double> first = c.grid.first.values(), second = c.grid.second.values();
  const std::size_t cells = first.size() * second.size();
  const double center = 2.0 * d.lambda_p;

  CsvWriter csv(c.hash_hex(), {"q_sx", "q_sy", "q_ix", "q_iy", "Omega_s", "Omega_i", "pmf_kind", "value"});
  RunOutcome o;
  std::vector<std::pair<PmfKind, std::vector<double>>> fields;
  for (PmfKind kind : c.pmf_kinds) {
    std::vector<double> values(cells);
    parallel_for(first.size(), c.threads, [&](std::size_t i) {
      for (std::size_t j = 0; j < second.size(); ++j) {
        const GridPoint p = grid_point(c.grid, center, first[i], second[j]);
        const double v = pmf(kind, p.qs, p.qi, p.w, d, d.length, model.guards());
        values[i * second.size() + j] = c.grid.quantity == GridQuantity::Intensity ? v * v : v;
      }
    });
    for (std::size_t i = 0; i < first.size(); ++i)
      for (std::size_t j = 0; j < second.size(); ++j) {
        const GridPoint p = grid_point(c.grid, center, first[i], second[j]);
        csv.row({num(p.qs.qx), num(p.qs.qy), num(p.qi.qx), num(p.qi.qy), num(p.w.omega_s), num(p.w.omega_i),
                 std::string(to_string(kind)), num(values[i * second.size() + j])});
      }
    fields.emplace_back(kind, std::move(values));
  }
  emit(o, output_path(c, "pmf", "csv"), csv.text(), csv.rows(), "rows", out);
  if (c.figures) {
    std::vector<double> fa, fb;
    for (double x : first) fa.push_back(axis_out(c.grid.first.variable, x));
    for (double y : second) fb.push_back(axis_out(c.grid.second.variable, y));
    for (const auto& [kind, values] : fields) {
      const std::string k(to_string(kind));
      emit(o, output_path(c, "pmf", "svg", "_" + k),
           svg_heatmap(fa, fb, values, axis_column(c.grid.first.variable), axis_column(c.grid.second.variable),
                       fmt::format("pmf {}", k)),
           values.size(), "cells", out);
    }
  }
  return o;
}

}  // namespace

RunOutcome run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  std::error_code ec;
  std::filesystem::create_directories(config.out_dir, ec);
  if (ec || !std::filesystem::is_directory(config.out_dir))
    throw ValidationError("output directory is not writable", "--out");
  switch (config.command) {
    case Command::PuritySweep:
    case Command::CompareModels: return run_sweep(config, out, err);
    case Command::Jsa: return run_jsa(config, out);
    case Command::PmfSlice: return run_pmf(config, out);
    case Command::Selftest: break;
  }
  throw ValidationError("selftest takes no config run", "command");
}

int report_error(std::ostream& err) {
  try {
    throw;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const ConvergenceError& e) {
    err << "error: " << e.what() << '\n';
    return kConvergence;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
}

}  // namespace spdc::cli
