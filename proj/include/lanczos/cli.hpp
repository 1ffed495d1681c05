#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lanczos/differentiator.hpp"

namespace lanczos::cli {

enum class Subcommand { Diff, Validate, Sweep, Fabius, Kernels };
enum class OutputFormat { Table, Csv };

struct CliConfig {
  Subcommand subcommand = Subcommand::Kernels;
  std::string kernel_id;
  std::string weight_id;
  std::optional<int> order;
  double x0 = 0.0;
  double h = 0.0;
  std::vector<double> h_values;
  std::string function_id;
  OutputFormat output_format = OutputFormat::Table;
  std::optional<std::string> output_path;
  double tol = 1e-9;
  double quad_tol = 1e-10;
  std::size_t grid_size = 4097;
  std::optional<double> reference;
  bool no_reference = false;
  // fabius
  double x = 0.0;
  int derivative_order = 0;
  std::optional<std::string> export_path;
  std::optional<std::string> import_path;
};

/// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // failed verdict, NonConvergence, I/O
inline constexpr int kExitUsage = 2;

/// `sin`, `cos`, `exp`, `abs`, `xabs`, `smoothstep`, or `poly:c0,c1,...`.
/// Error{UnknownFunction} for anything else.
TestFunction parse_function(std::string_view expr);

/// Full command line (argv[0] is the program name) to exit code.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Executes an already parsed configuration.
int run(const CliConfig& config, std::ostream& out, std::ostream& err);

}  // namespace lanczos::cli
