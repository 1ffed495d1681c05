#include "lanczos/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "lanczos/csv.hpp"
#include "lanczos/error.hpp"
#include "lanczos/fabius.hpp"
#include "lanczos/kernels.hpp"
#include "lanczos/validator.hpp"

namespace lanczos::cli {

TestFunction parse_function(std::string_view expr) {
  const auto text = csv::trim(expr);
  constexpr std::string_view poly_prefix = "poly:";
  if (text.substr(0, poly_prefix.size()) == poly_prefix) {
    const auto list = text.substr(poly_prefix.size());
    if (list.empty()) throw Error(ErrorCode::UnknownFunction, "poly: needs at least one coefficient");
    std::vector<double> coefficients;
    for (const auto& field : csv::split(list)) {
      try {
        coefficients.push_back(csv::parse_double(field));
      } catch (const Error&) {
        throw Error(ErrorCode::UnknownFunction, "bad polynomial coefficient '" + field + "'");
      }
    }
    return polynomial_function(std::move(coefficients));
  }
  for (auto& fn : test_corpus()) {
    if (fn.id == text && fn.id.rfind("poly:", 0) != 0) return fn;
  }
  throw Error(ErrorCode::UnknownFunction, "unknown function '" + std::string(text) + "'");
}

namespace {

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument:
    case ErrorCode::OutOfRange:
    case ErrorCode::UnsupportedOrder:
    case ErrorCode::OrderMismatch:
    case ErrorCode::UnknownFunction:
    case ErrorCode::UnknownKernel:
      return kExitUsage;
    default:
      return kExitFailure;
  }
}

/// Writes to --out when given, stdout otherwise.
class Sink {
 public:
  Sink(const std::optional<std::string>& path, std::ostream& fallback) : stream_(&fallback) {
    if (path) {
      file_.open(*path);
      if (!file_) throw Error(ErrorCode::Io, "cannot open '" + *path + "' for writing");
      stream_ = &file_;
    }
  }
  std::ostream& stream() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

KernelSpec resolve_kernel(const std::string& id, std::optional<int> order) {
  RegistryEntry entry = lookup_kernel(id);
  if (entry.kernel) {
    if (order && *order != entry.kernel->order) {
      throw Error(ErrorCode::OrderMismatch, "kernel '" + id + "' has order " + std::to_string(entry.kernel->order) +
                                                ", requested " + std::to_string(*order));
    }
    return *entry.kernel;
  }
  if (entry.weight->id == "constant") {
    throw Error(ErrorCode::InvalidArgument,
                "the constant weight has no kernel; use it with diff or validate --weight");
  }
  // bump and fabius take the order from --n
  return *lookup_kernel(id + ":" + std::to_string(order.value_or(1))).kernel;
}

std::shared_ptr<const FabiusTable> fabius_table_for(const CliConfig& config) {
  if (config.import_path) {
    std::ifstream in(*config.import_path);
    if (!in) throw Error(ErrorCode::Io, "cannot open '" + *config.import_path + "'");
    return std::make_shared<const FabiusTable>(FabiusTable::read_csv(in));
  }
  if (config.grid_size != FabiusOptions{}.grid_size) {
    FabiusOptions options;
    options.grid_size = config.grid_size;
    return std::make_shared<const FabiusTable>(FabiusTable::build(options));
  }
  return default_fabius_table();
}

int run_diff(const CliConfig& config, std::ostream& out) {
  const TestFunction fn = parse_function(config.function_id);
  const RegistryEntry entry = lookup_kernel(config.kernel_id);
  DerivativeEstimate result;
  if (!entry.kernel && entry.weight && entry.weight->id == "constant") {
    if (config.order.value_or(1) != 1) {
      throw Error(ErrorCode::OrderMismatch, "the constant weight only yields a first derivative");
    }
    if (!(config.h > 0.0)) throw Error(ErrorCode::InvalidArgument, "h must be positive");
    result.value = boundary_term_derivative(fn.f, config.x0, config.h, *entry.weight);
    result.order = 1;
    result.h = config.h;
    result.x0 = config.x0;
    result.kernel_id = "constant";
  } else {
    const KernelSpec kernel = resolve_kernel(config.kernel_id, config.order);
    result = estimate(fn.f, config.x0, kernel.order, config.h, kernel, config.quad_tol);
  }

  Sink sink(config.output_path, out);
  auto& os = sink.stream();
  if (config.output_format == OutputFormat::Csv) {
    os << "kernel,order,x0,h,estimate,quad_error\n"
       << result.kernel_id << ',' << result.order << ',' << csv::format_double(result.x0) << ','
       << csv::format_double(result.h) << ',' << csv::format_double(result.value) << ','
       << csv::format_double(result.quad_error) << '\n';
  } else {
    os << "kernel      " << result.kernel_id << '\n'
       << "function    " << fn.id << '\n'
       << "order       " << result.order << '\n'
       << "x0          " << csv::format_double(result.x0) << '\n'
       << "h           " << csv::format_double(result.h) << '\n'
       << "estimate    " << csv::format_double(result.value) << '\n'
       << "quad_error  " << csv::format_double(result.quad_error) << '\n';
    if (auto exact = fn.derivative(result.order, result.x0)) {
      os << "exact       " << csv::format_double(*exact) << '\n';
    }
  }
  if (!result.converged) return kExitFailure;
  return kExitOk;
}

int run_validate(const CliConfig& config, std::ostream& out) {
  ValidationOptions options;
  options.tol = config.tol;
  options.grid_size = config.grid_size;
  ValidationReport report;
  if (!config.weight_id.empty()) {
    const RegistryEntry entry = lookup_kernel(config.weight_id);
    if (!entry.weight) throw Error(ErrorCode::UnknownKernel, "'" + config.weight_id + "' has no weight function");
    report = validate_weight(*entry.weight, config.order.value_or(1), options);
  } else {
    report = validate_kernel(resolve_kernel(config.kernel_id, config.order), options);
  }
  Sink sink(config.output_path, out);
  if (config.output_format == OutputFormat::Csv) {
    report.write_csv(sink.stream());
  } else {
    sink.stream() << report.to_text();
  }
  return report.verdict ? kExitOk : kExitFailure;
}

int run_sweep(const CliConfig& config, std::ostream& out) {
  const TestFunction fn = parse_function(config.function_id);
  const KernelSpec kernel = resolve_kernel(config.kernel_id, config.order);
  std::optional<double> reference = config.reference;
  if (!reference && !config.no_reference) reference = fn.derivative(kernel.order, config.x0);

  const SweepResult result = sweep(fn.f, config.x0, kernel.order, kernel, config.h_values, reference, config.quad_tol);
  Sink sink(config.output_path, out);
  if (config.output_format == OutputFormat::Table) {
    sink.stream() << result.to_text();
  } else {
    result.write_csv(sink.stream());
  }
  const bool all_ok = std::all_of(result.rows.begin(), result.rows.end(), [](const SweepRow& r) { return r.ok; });
  return all_ok ? kExitOk : kExitFailure;
}

int run_fabius(const CliConfig& config, std::ostream& out) {
  const auto table = fabius_table_for(config);
  if (config.export_path) {
    std::ofstream file(*config.export_path);
    if (!file) throw Error(ErrorCode::Io, "cannot open '" + *config.export_path + "' for writing");
    table->write_csv(file);
  }
  const double value = table->eval_derivative(config.x, config.derivative_order);
  Sink sink(config.output_path, out);
  if (config.output_format == OutputFormat::Csv) {
    sink.stream() << "x,m,value\n"
                  << csv::format_double(config.x) << ',' << config.derivative_order << ','
                  << csv::format_double(value) << '\n';
  } else {
    sink.stream() << csv::format_double(value) << '\n';
  }
  return kExitOk;
}

int run_kernels(const CliConfig& config, std::ostream& out) {
  Sink sink(config.output_path, out);
  auto& os = sink.stream();
  if (config.output_format == OutputFormat::Csv) {
    os << "id,orders,description\n";
    for (const auto& item : registry_listing()) {
      os << item.pattern << ',' << item.orders << ",\"" << item.description << "\"\n";
    }
    return kExitOk;
  }
  for (const auto& item : registry_listing()) {
    os << item.pattern << std::string(item.pattern.size() < 14 ? 14 - item.pattern.size() : 1, ' ') << item.orders
       << std::string(item.orders.size() < 20 ? 20 - item.orders.size() : 1, ' ') << item.description << '\n';
  }
  return kExitOk;
}

}  // namespace

int run(const CliConfig& config, std::ostream& out, std::ostream& err) {
  try {
    switch (config.subcommand) {
      case Subcommand::Diff: return run_diff(config, out);
      case Subcommand::Validate: return run_validate(config, out);
      case Subcommand::Sweep: return run_sweep(config, out);
      case Subcommand::Fabius: return run_fabius(config, out);
      case Subcommand::Kernels: return run_kernels(config, out);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  }
  return kExitUsage;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CliConfig config;
  std::string format;

  CLI::App app{"Derivatives by integration against validated kernels", "lanczos"};
  app.require_subcommand(1);
  // -h would clash with --h
  app.set_help_flag("--help", "Print this help message and exit");

  auto add_format = [&](CLI::App* sub, const std::string& default_format) {
    sub->add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"table", "csv"}))
        ->default_str(default_format);
    sub->add_option("--out", config.output_path, "Write output to this file");
  };

  auto* diff = app.add_subcommand("diff", "Estimate f^(n)(x0) with one kernel and one h");
  diff->add_option("--kernel", config.kernel_id, "Kernel id (see `kernels`)")->required();
  diff->add_option("--n", config.order, "Derivative order")->check(CLI::PositiveNumber);
  diff->add_option("--f", config.function_id, "Function: sin, cos, exp, abs, xabs, smoothstep, poly:c0,c1,...")
      ->required();
  diff->add_option("--x0", config.x0, "Point of differentiation")->required();
  diff->add_option("--h", config.h, "Half-width of the integration window")->required();
  diff->add_option("--quad-tol", config.quad_tol, "Absolute quadrature tolerance");
  add_format(diff, "table");

  auto* validate = app.add_subcommand("validate", "Check the validity conditions of a kernel or weight");
  auto* kernel_opt = validate->add_option("--kernel", config.kernel_id, "Kernel id");
  auto* weight_opt = validate->add_option("--weight", config.weight_id, "Weight id (lanczos, constant, bump, fabius)");
  kernel_opt->excludes(weight_opt);
  validate->add_option("--n", config.order, "Order")->check(CLI::PositiveNumber);
  validate->add_option("--tol", config.tol, "Residual tolerance");
  validate->add_option("--grid", config.grid_size, "Antiderivative grid size")->check(CLI::Range(16, 1 << 22));
  add_format(validate, "table");

  auto* sweep_cmd = app.add_subcommand("sweep", "Tabulate estimates over decreasing h");
  sweep_cmd->add_option("--kernel", config.kernel_id, "Kernel id")->required();
  sweep_cmd->add_option("--n", config.order, "Derivative order")->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--f", config.function_id, "Function")->required();
  sweep_cmd->add_option("--x0", config.x0, "Point of differentiation")->required();
  sweep_cmd->add_option("--h", config.h_values, "Strictly decreasing h values, comma separated")
      ->delimiter(',')
      ->required();
  auto* ref_opt = sweep_cmd->add_option("--reference", config.reference, "Exact derivative for the error column");
  sweep_cmd->add_flag("--no-reference", config.no_reference, "Do not use the corpus derivative as reference")
      ->excludes(ref_opt);
  sweep_cmd->add_option("--quad-tol", config.quad_tol, "Absolute quadrature tolerance");
  add_format(sweep_cmd, "csv");

  auto* fabius = app.add_subcommand("fabius", "Evaluate the Fabius function or its derivatives");
  fabius->add_option("--x", config.x, "Argument")->required();
  fabius->add_option("--m", config.derivative_order, "Derivative order")->check(CLI::NonNegativeNumber);
  fabius->add_option("--grid", config.grid_size, "Base table grid size (odd, >= 257)");
  fabius->add_option("--export", config.export_path, "Write the base table as CSV");
  fabius->add_option("--import", config.import_path, "Read the base table from CSV");
  add_format(fabius, "table");

  auto* kernels = app.add_subcommand("kernels", "List built-in kernel ids");
  add_format(kernels, "table");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }

  if (*diff) {
    config.subcommand = Subcommand::Diff;
  } else if (*validate) {
    config.subcommand = Subcommand::Validate;
    if (config.kernel_id.empty() && config.weight_id.empty()) {
      err << "usage error: validate needs --kernel or --weight\n";
      return kExitUsage;
    }
  } else if (*sweep_cmd) {
    config.subcommand = Subcommand::Sweep;
  } else if (*fabius) {
    config.subcommand = Subcommand::Fabius;
  } else {
    config.subcommand = Subcommand::Kernels;
  }
  if (format.empty()) format = config.subcommand == Subcommand::Sweep ? "csv" : "table";
  config.output_format = format == "csv" ? OutputFormat::Csv : OutputFormat::Table;
  return run(config, out, err);
}

}  // namespace lanczos::cli
