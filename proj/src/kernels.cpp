#include "lanczos/kernels.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

#include "lanczos/error.hpp"
#include "lanczos/fabius.hpp"

namespace lanczos {

bool WeightSpec::has_derivative(int k) const {
  if (k == 0) return true;
  if (k < 0 || !derivative_fn) return false;
  return !max_deriv_order || k <= *max_deriv_order;
}

std::optional<RealFn> WeightSpec::derivative(int k) const {
  if (!has_derivative(k)) return std::nullopt;
  if (k == 0) return eval;
  return derivative_fn(k);
}

KernelSpec make_kernel(std::string id, int order, RealFn eval) {
  if (order < 1) throw Error(ErrorCode::InvalidArgument, "kernel order must be >= 1");
  if (!eval) throw Error(ErrorCode::InvalidArgument, "kernel callable is empty");
  return KernelSpec{std::move(id), order, std::move(eval), KernelProvenance::Direct, false};
}

KernelSpec scale_kernel(const KernelSpec& kernel, double factor) {
  KernelSpec scaled = kernel;
  std::ostringstream id;
  id.precision(17);
  id << factor << '*' << kernel.id;
  scaled.id = id.str();
  scaled.eval = [inner = kernel.eval, factor](double t) { return factor * inner(t); };
  return scaled;
}

KernelSpec kernel_from_weight(const WeightSpec& weight, int n) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "kernel order must be >= 1");
  auto derivative = weight.derivative(n);
  if (!derivative) {
    throw Error(ErrorCode::UnsupportedOrder,
                "weight '" + weight.id + "' has no derivative of order " + std::to_string(n));
  }
  return KernelSpec{weight.id + "^(" + std::to_string(n) + ")", n, std::move(*derivative),
                    KernelProvenance::DerivativeOfWeight, false};
}

// ---------------------------------------------------------------------------

WeightSpec lanczos_weight() {
  WeightSpec w;
  w.id = "lanczos";
  w.eval = [](double t) { return std::abs(t) > 1.0 ? 0.0 : 0.75 * (1.0 - t * t); };
  w.derivative_fn = [](int k) -> RealFn {
    switch (k) {
      case 1: return [](double t) { return std::abs(t) > 1.0 ? 0.0 : -1.5 * t; };
      case 2: return [](double t) { return std::abs(t) > 1.0 ? 0.0 : -1.5; };
      default: return [](double) { return 0.0; };
    }
  };
  return w;
}

KernelSpec lanczos_kernel() {
  auto kernel = kernel_from_weight(lanczos_weight(), 1);
  kernel.id = "lanczos";
  return kernel;
}

WeightSpec constant_weight() {
  WeightSpec w;
  w.id = "constant";
  w.eval = [](double t) { return std::abs(t) > 1.0 ? 0.0 : 0.5; };
  w.derivative_fn = [](int) -> RealFn { return [](double) { return 0.0; }; };
  return w;
}

double legendre_polynomial(int n, double x) {
  if (n < 0) throw Error(ErrorCode::InvalidArgument, "Legendre degree must be >= 0");
  if (n == 0) return 1.0;
  double previous = 1.0;
  double current = x;
  for (int k = 1; k < n; ++k) {
    const double next = ((2.0 * k + 1.0) * x * current - k * previous) / (k + 1.0);
    previous = current;
    current = next;
  }
  return current;
}

std::optional<std::uint64_t> odd_double_factorial(int n) {
  if (n < 0) throw Error(ErrorCode::InvalidArgument, "double factorial argument must be >= 0");
  std::uint64_t product = 1;
  for (std::uint64_t odd = 3; odd <= 2 * static_cast<std::uint64_t>(n) + 1; odd += 2) {
    if (product > std::numeric_limits<std::uint64_t>::max() / odd) return std::nullopt;
    product *= odd;
  }
  return product;
}

KernelSpec legendre_kernel(int n) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "Legendre kernel order must be >= 1");
  double double_factorial = 0.0;
  bool approximate = false;
  if (const auto exact = odd_double_factorial(n)) {
    double_factorial = static_cast<double>(*exact);
  } else {
    approximate = true;
    double_factorial = 1.0;
    for (int odd = 3; odd <= 2 * n + 1; odd += 2) double_factorial *= odd;
  }
  const double factor = (n % 2 == 0 ? 0.5 : -0.5) * double_factorial;
  KernelSpec kernel;
  kernel.id = "legendre:" + std::to_string(n);
  kernel.order = n;
  kernel.eval = [n, factor](double t) { return std::abs(t) > 1.0 ? 0.0 : factor * legendre_polynomial(n, t); };
  kernel.provenance = KernelProvenance::Direct;
  kernel.approximate_constant = approximate;
  return kernel;
}

// ---------------------------------------------------------------------------

RationalPrefactor::RationalPrefactor(int order, std::vector<std::int64_t> coefficients)
    : order_(order), coefficients_(std::move(coefficients)) {}

RationalPrefactor RationalPrefactor::of_order(int n) {
  if (n < 0) throw Error(ErrorCode::InvalidArgument, "prefactor order must be >= 0");
  RationalPrefactor q(0, {1});
  for (int k = 0; k < n; ++k) q = q.next();
  return q;
}

RationalPrefactor RationalPrefactor::next() const {
  __extension__ typedef __int128 wide;
  const int degree = this->degree();
  const wide n = order_;
  // (t^2-1)^2 Q' raises the degree by 3, the second term by 3 as well.
  std::vector<wide> out(static_cast<std::size_t>(degree) + 4, 0);
  for (int j = 0; j <= degree; ++j) {
    const wide c = coefficients_[j];
    if (j >= 1) {
      const wide d = c * j;  // coefficient of t^(j-1) in Q'
      out[j - 1] += d;       // * 1
      out[j + 1] -= 2 * d;   // * -2t^2
      out[j + 3] += d;       // * t^4
    }
    out[j + 3] -= 4 * n * c;        // -4n t^3 Q
    out[j + 1] -= (2 - 4 * n) * c;  // -(2 - 4n) t Q
  }
  while (out.size() > 1 && out.back() == 0) out.pop_back();
  std::vector<std::int64_t> narrow(out.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out[i] > std::numeric_limits<std::int64_t>::max() || out[i] < std::numeric_limits<std::int64_t>::min()) {
      throw Error(ErrorCode::Overflow, "bump prefactor of order " + std::to_string(order_ + 1) + " exceeds int64");
    }
    narrow[i] = static_cast<std::int64_t>(out[i]);
  }
  return RationalPrefactor(order_ + 1, std::move(narrow));
}

double RationalPrefactor::operator()(double t) const {
  double sum = 0.0;
  for (auto it = coefficients_.rbegin(); it != coefficients_.rend(); ++it) sum = sum * t + static_cast<double>(*it);
  return sum;
}

namespace {

// exp(1/s) / s^(2n) with s = t^2 - 1 < 0, evaluated in log space so that the
// vanishing exponential wins near the endpoints instead of producing 0 * inf.
double bump_envelope(double t, int n) {
  const double s = (t - 1.0) * (t + 1.0);
  if (!(s < 0.0)) return 0.0;
  const double exponent = 1.0 / s - 2.0 * n * std::log(-s);
  return std::exp(exponent);
}

}  // namespace

WeightSpec bump_weight() {
  WeightSpec w;
  w.id = "bump";
  w.eval = [](double t) { return bump_envelope(t, 0) / kBumpNormalization; };
  w.derivative_fn = [](int k) -> RealFn { return bump_kernel(k).eval; };
  w.flat_endpoints = true;
  return w;
}

KernelSpec bump_kernel(int n) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "bump kernel order must be >= 1");
  const RationalPrefactor q = RationalPrefactor::of_order(n);
  KernelSpec kernel;
  kernel.id = "bump:" + std::to_string(n);
  kernel.order = n;
  kernel.eval = [q, n](double t) {
    const double envelope = bump_envelope(t, n);
    return envelope == 0.0 ? 0.0 : q(t) * envelope / kBumpNormalization;
  };
  kernel.provenance = KernelProvenance::DerivativeOfWeight;
  return kernel;
}

// ---------------------------------------------------------------------------

WeightSpec fabius_weight(std::shared_ptr<const FabiusTable> table) {
  if (!table) table = default_fabius_table();
  const int max_order = static_cast<int>(std::lround(std::log2(table->max_argument()))) - 1;
  WeightSpec w;
  w.id = "fabius";
  w.eval = [table](double t) { return std::abs(t) > 1.0 ? 0.0 : table->eval(t + 1.0); };
  w.derivative_fn = [table](int k) -> RealFn { return fabius_kernel(k, table).eval; };
  w.max_deriv_order = max_order;
  w.flat_endpoints = true;
  return w;
}

KernelSpec fabius_kernel(int n, std::shared_ptr<const FabiusTable> table) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "Fabius kernel order must be >= 1");
  if (!table) table = default_fabius_table();
  if (n > 30 || std::ldexp(1.0, n + 1) > table->max_argument()) {
    std::ostringstream msg;
    msg << "Fabius kernel order " << n << " needs Fb up to 2^" << n + 1 << ", table covers " << table->max_argument();
    throw Error(ErrorCode::UnsupportedOrder, msg.str());
  }
  KernelSpec kernel;
  kernel.id = "fabius:" + std::to_string(n);
  kernel.order = n;
  kernel.eval = [table, n](double t) { return std::abs(t) > 1.0 ? 0.0 : table->eval_derivative(t + 1.0, n); };
  kernel.provenance = KernelProvenance::DerivativeOfWeight;
  return kernel;
}

// ---------------------------------------------------------------------------

namespace {

int parse_order(std::string_view id, std::string_view text) {
  int n = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), n);
  if (ec != std::errc() || ptr != text.data() + text.size() || n < 1) {
    throw Error(ErrorCode::UnknownKernel, "bad order in kernel id '" + std::string(id) + "'");
  }
  return n;
}

}  // namespace

RegistryEntry lookup_kernel(std::string_view id) {
  const auto colon = id.find(':');
  const std::string_view family = id.substr(0, colon);
  const bool has_order = colon != std::string_view::npos;
  const int n = has_order ? parse_order(id, id.substr(colon + 1)) : 0;

  RegistryEntry entry;
  entry.id = std::string(id);
  if (family == "lanczos" && (!has_order || n == 1)) {
    entry.weight = lanczos_weight();
    entry.kernel = lanczos_kernel();
  } else if (family == "constant" && (!has_order || n == 1)) {
    entry.weight = constant_weight();
  } else if (family == "legendre" && has_order) {
    entry.kernel = legendre_kernel(n);
  } else if (family == "bump") {
    entry.weight = bump_weight();
    if (has_order) entry.kernel = bump_kernel(n);
  } else if (family == "fabius") {
    entry.weight = fabius_weight();
    if (has_order) entry.kernel = fabius_kernel(n);
  } else {
    throw Error(ErrorCode::UnknownKernel, "unknown kernel id '" + std::string(id) + "'");
  }
  return entry;
}

std::vector<RegistryListing> registry_listing() {
  return {
      {"lanczos", "1", "classic Lanczos kernel -3/2 t, weight 3/4 (1 - t^2)"},
      {"constant", "1 (boundary terms)", "constant weight 1/2; reproduces the central difference"},
      {"legendre:<n>", "n >= 1", "((-1)^n / 2) (2n+1)!! P_n(t)"},
      {"bump:<n>", "n >= 1", "n-th derivative of exp(1/(t^2-1)) / K"},
      {"fabius:<n>", "1 <= n <= 8", "2^(n(n+1)/2) Fb(2^n (t + 1))"},
  };
}

}  // namespace lanczos
