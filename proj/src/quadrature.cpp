#include "lanczos/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <queue>
#include <sstream>

#include "lanczos/error.hpp"

namespace lanczos {

namespace {

// Kronrod 15-point abscissae (positive half, descending) and weights;
// odd-indexed abscissae are the 7-point Gauss nodes.
constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a;
  double b;
  double value;
  double error;
  int depth;
  bool at_roundoff;  // error is the roundoff floor; bisection cannot help
};

struct ByError {
  bool operator()(const Panel& lhs, const Panel& rhs) const { return lhs.error < rhs.error; }
};

double checked(const RealFn& f, double x) {
  const double y = f(x);
  if (!std::isfinite(y)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "integrand returned " << y << " at x = " << x;
    throw Error(ErrorCode::NonFiniteSample, msg.str());
  }
  return y;
}

Panel kronrod_panel(const RealFn& f, double a, double b, int depth) {
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);

  const double fc = checked(f, centre);
  double kronrod = fc * kKronrodWeights[7];
  double gauss = fc * kGaussWeights[3];
  double abs_sum = std::abs(kronrod);
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kKronrodNodes[j];
    const double f1 = checked(f, centre - dx);
    const double f2 = checked(f, centre + dx);
    kronrod += kKronrodWeights[j] * (f1 + f2);
    abs_sum += kKronrodWeights[j] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1) gauss += kGaussWeights[j / 2] * (f1 + f2);
  }
  kronrod *= half;
  gauss *= half;
  abs_sum *= std::abs(half);

  // The raw Kronrod-Gauss difference is a conservative bound; a roundoff
  // floor keeps flat panels from claiming more accuracy than doubles carry.
  const double roundoff = 50.0 * std::numeric_limits<double>::epsilon() * abs_sum;
  const double difference = std::abs(kronrod - gauss);
  return Panel{a, b, kronrod, std::max(difference, roundoff), depth, difference <= roundoff};
}

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

GaussRule make_gauss_rule(int n) {
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // recompute derivative at converged node
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    rule.nodes[i] = x;
    rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

const GaussRule& gauss_rule(int n) {
  static const auto rules = [] {
    std::array<GaussRule, 17> table;
    for (int k = 1; k <= 16; ++k) table[k] = make_gauss_rule(k);
    return table;
  }();
  return rules[n];
}

constexpr int kMaxDegree = 9;

}  // namespace

void CompensatedSum::add(double x) noexcept {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x)) {
    compensation_ += (sum_ - t) + x;
  } else {
    compensation_ += (x - t) + sum_;
  }
  sum_ = t;
}

QuadratureResult integrate(const RealFn& f, double a, double b, const QuadratureOptions& options) {
  if (!(a < b)) throw Error(ErrorCode::InvalidArgument, "integrate requires a < b");
  if (!(options.abs_tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "integrate requires abs_tol > 0");
  if (options.max_depth < 0) throw Error(ErrorCode::InvalidArgument, "max_depth must be >= 0");

  std::priority_queue<Panel, std::vector<Panel>, ByError> queue;
  queue.push(kronrod_panel(f, a, b, 0));
  std::size_t evaluations = 15;
  double total_error = queue.top().error;
  bool converged = true;

  std::vector<Panel> settled;
  while (total_error > options.abs_tol) {
    if (queue.empty()) {
      converged = false;
      break;
    }
    const Panel worst = queue.top();
    if (worst.at_roundoff) {
      queue.pop();
      settled.push_back(worst);
      continue;
    }
    if (worst.depth >= options.max_depth || evaluations + 30 > options.max_evaluations) {
      converged = false;
      break;
    }
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(worst.a < mid && mid < worst.b)) {
      converged = false;
      break;
    }
    queue.pop();
    Panel left = kronrod_panel(f, worst.a, mid, worst.depth + 1);
    Panel right = kronrod_panel(f, mid, worst.b, worst.depth + 1);
    evaluations += 30;
    total_error += left.error + right.error - worst.error;
    queue.push(left);
    queue.push(right);
    // Incremental updates drift; resynchronise once they claim convergence.
    if (total_error <= options.abs_tol) {
      auto copy = queue;
      CompensatedSum err;
      while (!copy.empty()) {
        err.add(copy.top().error);
        copy.pop();
      }
      for (const auto& panel : settled) err.add(panel.error);
      total_error = err.value();
    }
  }
  for (const auto& panel : settled) queue.push(panel);

  QuadratureResult result;
  result.panels = queue.size();
  CompensatedSum value;
  CompensatedSum error;
  while (!queue.empty()) {
    value.add(queue.top().value);
    error.add(queue.top().error);
    queue.pop();
  }
  result.value = value.value();
  result.error_estimate = error.value();
  result.evaluations = evaluations;
  result.converged = converged && result.error_estimate <= options.abs_tol;
  return result;
}

QuadratureResult integrate(const RealFn& f, double a, double b, double abs_tol, int max_depth) {
  QuadratureOptions options;
  options.abs_tol = abs_tol;
  options.max_depth = max_depth;
  return integrate(f, a, b, options);
}

double gauss_legendre(const RealFn& f, double a, double b, int points) {
  if (points < 1 || points > 16) throw Error(ErrorCode::InvalidArgument, "gauss_legendre supports 1..16 points");
  const GaussRule& rule = gauss_rule(points);
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double sum = 0.0;
  for (int i = 0; i < points; ++i) sum += rule.weights[i] * checked(f, centre + half * rule.nodes[i]);
  return half * sum;
}

// ---------------------------------------------------------------------------
// GridFunction

GridFunction::GridFunction(double a, double b, std::vector<double> values, int interpolation_degree)
    : a_(a), b_(b), degree_(interpolation_degree), values_(std::move(values)) {
  if (!(a < b)) throw Error(ErrorCode::InvalidArgument, "GridFunction requires a < b");
  if (degree_ < 1 || degree_ > kMaxDegree) {
    throw Error(ErrorCode::InvalidArgument, "interpolation degree must be in [1, 9]");
  }
  if (values_.size() < static_cast<std::size_t>(degree_) + 1 || values_.size() < 2) {
    throw Error(ErrorCode::InvalidArgument, "GridFunction needs at least degree + 1 nodes");
  }
  const std::size_t n = values_.size();
  step_ = (b - a) / static_cast<double>(n - 1);
  nodes_.resize(n);
  for (std::size_t i = 0; i < n; ++i) nodes_[i] = a + static_cast<double>(i) * step_;
  nodes_.back() = b;
}

std::size_t GridFunction::window_start(std::size_t cell) const {
  const auto d = static_cast<std::ptrdiff_t>(degree_);
  const auto last_start = static_cast<std::ptrdiff_t>(values_.size()) - 1 - d;
  const std::ptrdiff_t start = static_cast<std::ptrdiff_t>(cell) - (d - 1) / 2;
  return static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(start, 0, last_start));
}

double GridFunction::interpolate_in_window(std::size_t start, double u) const {
  // Lagrange basis on integer nodes 0..degree, u measured from node `start`.
  double sum = 0.0;
  for (int m = 0; m <= degree_; ++m) {
    double basis = 1.0;
    for (int j = 0; j <= degree_; ++j) {
      if (j == m) continue;
      basis *= (u - j) / static_cast<double>(m - j);
    }
    sum += basis * values_[start + m];
  }
  return sum;
}

double GridFunction::operator()(double t) const {
  const double slack = 1e-9 * (b_ - a_);
  if (!(t >= a_ - slack && t <= b_ + slack)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "GridFunction evaluated at " << t << " outside [" << a_ << ", " << b_ << "]";
    throw Error(ErrorCode::OutOfRange, msg.str());
  }
  const double u = (t - a_) / step_;
  const auto cells = values_.size() - 1;
  const double fl = std::floor(u);
  const std::size_t cell = fl <= 0.0 ? 0 : std::min(static_cast<std::size_t>(fl), cells - 1);
  const std::size_t start = window_start(cell);
  return interpolate_in_window(start, u - static_cast<double>(start));
}

double GridFunction::cell_integral(std::size_t cell) const {
  if (cell + 1 >= values_.size()) throw Error(ErrorCode::OutOfRange, "cell index out of range");
  const std::size_t start = window_start(cell);
  const double offset = static_cast<double>(cell - start);
  // 8-point Gauss is exact for the degree <= 9 local interpolant.
  const GaussRule& rule = gauss_rule(8);
  double sum = 0.0;
  for (int i = 0; i < 8; ++i) {
    sum += rule.weights[i] * interpolate_in_window(start, offset + 0.5 + 0.5 * rule.nodes[i]);
  }
  return 0.5 * sum * step_;
}

std::vector<double> GridFunction::cumulative_integral() const {
  std::vector<double> out(values_.size(), 0.0);
  CompensatedSum running;
  for (std::size_t i = 0; i + 1 < values_.size(); ++i) {
    running.add(cell_integral(i));
    out[i + 1] = running.value();
  }
  return out;
}

double GridFunction::integral() const { return cumulative_integral().back(); }

RealFn GridFunction::as_function() const {
  auto shared = std::make_shared<const GridFunction>(*this);
  return [shared](double t) { return (*shared)(t); };
}

GridFunction antiderivative(const RealFn& k, std::size_t grid_size, int interpolation_degree, double a, double b) {
  if (grid_size < 16) throw Error(ErrorCode::InvalidArgument, "antiderivative requires grid_size >= 16");
  if (!(a < b)) throw Error(ErrorCode::InvalidArgument, "antiderivative requires a < b");
  const double step = (b - a) / static_cast<double>(grid_size - 1);
  std::vector<double> values(grid_size, 0.0);
  CompensatedSum running;
  for (std::size_t i = 0; i + 1 < grid_size; ++i) {
    const double left = a + static_cast<double>(i) * step;
    const double right = (i + 2 == grid_size) ? b : a + static_cast<double>(i + 1) * step;
    running.add(gauss_legendre(k, left, right, 8));
    values[i + 1] = running.value();
  }
  return GridFunction(a, b, std::move(values), interpolation_degree);
}

}  // namespace lanczos
