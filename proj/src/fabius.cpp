#include "lanczos/fabius.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "lanczos/csv.hpp"
#include "lanczos/error.hpp"

namespace lanczos {

namespace {

constexpr int kBaseDegree = 5;

void check_grid_size(std::size_t grid_size) {
  if (grid_size < 257) throw Error(ErrorCode::InvalidArgument, "Fabius grid_size must be >= 257");
  if (grid_size % 2 == 0) throw Error(ErrorCode::InvalidArgument, "Fabius grid_size must be odd");
}

double max_argument_for(int max_order) {
  if (max_order < 1 || max_order > 30) throw Error(ErrorCode::InvalidArgument, "max_order must be in [1, 30]");
  return std::ldexp(1.0, max_order + 1);
}

}  // namespace

FabiusTable::FabiusTable(GridFunction base, int iterations, std::vector<double> history, double max_argument)
    : base_(std::move(base)),
      iterations_(iterations),
      residual_history_(std::move(history)),
      max_argument_(max_argument) {}

FabiusTable FabiusTable::build(const FabiusOptions& options) {
  check_grid_size(options.grid_size);
  if (!(options.tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tol must be positive");
  const double max_argument = max_argument_for(options.max_order);

  const std::size_t n = options.grid_size;
  const std::size_t mid = (n - 1) / 2;
  std::vector<double> current(n);
  for (std::size_t i = 0; i < n; ++i) current[i] = static_cast<double>(i) / static_cast<double>(n - 1);
  current.back() = 1.0;

  std::vector<double> history;
  std::vector<double> next(n);
  for (int iteration = 1; iteration <= options.max_iterations; ++iteration) {
    const GridFunction interpolant(0.0, 1.0, current, kBaseDegree);
    const std::vector<double> cumulative = interpolant.cumulative_integral();
    // node 2i of the grid sits at 2 x_i
    for (std::size_t i = 0; i < mid; ++i) next[i] = cumulative[2 * i];
    next[mid] = 0.5;
    for (std::size_t i = mid + 1; i < n; ++i) next[i] = 1.0 - next[n - 1 - i];

    double residual = 0.0;
    for (std::size_t i = 0; i < n; ++i) residual = std::max(residual, std::abs(next[i] - current[i]));
    history.push_back(residual);
    current.swap(next);

    if (residual <= options.tol) {
      return FabiusTable(GridFunction(0.0, 1.0, current, kBaseDegree), iteration, std::move(history), max_argument);
    }
  }
  std::ostringstream msg;
  msg << "Fabius fixed point not reached: residual " << history.back() << " after " << options.max_iterations
      << " iterations";
  throw Error(ErrorCode::NonConvergence, msg.str());
}

FabiusTable build_table(std::size_t grid_size, int max_iterations, double tol) {
  FabiusOptions options;
  options.grid_size = grid_size;
  options.max_iterations = max_iterations;
  options.tol = tol;
  return FabiusTable::build(options);
}

double FabiusTable::eval(double x) const {
  if (!(x >= 0.0 && x <= max_argument_)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "Fabius argument " << x << " outside [0, " << max_argument_ << "]";
    throw Error(ErrorCode::OutOfRange, msg.str());
  }
  // Fb(x) = -Fb(x - 2^r) on (2^r, 2^(r+1)]; every subtraction is exact.
  double sign = 1.0;
  while (x > 2.0) {
    int exponent = 0;
    const double mantissa = std::frexp(x, &exponent);  // x = mantissa * 2^exponent, mantissa in [0.5, 1)
    // largest power of two strictly below x
    const double power = mantissa == 0.5 ? std::ldexp(1.0, exponent - 2) : std::ldexp(1.0, exponent - 1);
    x -= power;
    sign = -sign;
  }
  if (x > 1.0) return sign * (1.0 - base_(x - 1.0));
  return sign * base_(x);
}

double FabiusTable::eval_derivative(double x, int m) const {
  if (m < 0) throw Error(ErrorCode::InvalidArgument, "derivative order must be >= 0");
  if (m > 60) throw Error(ErrorCode::UnsupportedOrder, "derivative order too large");
  const double scale = std::ldexp(1.0, m * (m + 1) / 2);
  return scale * eval(std::ldexp(x, m));
}

void FabiusTable::write_csv(std::ostream& out) const {
  out << "node,value\n";
  const auto& nodes = base_.nodes();
  const auto& values = base_.values();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    out << csv::format_double(nodes[i]) << ',' << csv::format_double(values[i]) << '\n';
  }
}

FabiusTable FabiusTable::read_csv(std::istream& in, int max_order) {
  const double max_argument = max_argument_for(max_order);
  std::string line;
  std::vector<double> nodes;
  std::vector<double> values;
  bool header_seen = false;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto text = csv::trim(line);
    if (text.empty() || text.front() == '#') continue;
    if (!header_seen) {
      header_seen = true;
      if (text == "node,value") continue;
    }
    const auto fields = csv::split(text);
    if (fields.size() != 2) {
      throw Error(ErrorCode::Io, "line " + std::to_string(line_no) + ": expected 'node,value'");
    }
    nodes.push_back(csv::parse_double(fields[0]));
    values.push_back(csv::parse_double(fields[1]));
  }
  check_grid_size(nodes.size());
  const double step = 1.0 / static_cast<double>(nodes.size() - 1);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (std::abs(nodes[i] - static_cast<double>(i) * step) > 1e-12) {
      throw Error(ErrorCode::Io, "Fabius table nodes must be a uniform grid on [0, 1]");
    }
  }
  if (std::abs(values.front()) > 1e-14 || std::abs(values.back() - 1.0) > 1e-14) {
    throw Error(ErrorCode::Io, "Fabius table must satisfy Fb(0) = 0 and Fb(1) = 1");
  }
  return FabiusTable(GridFunction(0.0, 1.0, std::move(values), kBaseDegree), 0, {}, max_argument);
}

std::shared_ptr<const FabiusTable> default_fabius_table() {
  static const std::shared_ptr<const FabiusTable> table = std::make_shared<const FabiusTable>(FabiusTable::build());
  return table;
}

}  // namespace lanczos
