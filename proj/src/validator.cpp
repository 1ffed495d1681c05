#include "lanczos/validator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include "lanczos/csv.hpp"
#include "lanczos/error.hpp"

namespace lanczos {

namespace {

ConditionResidual condition(std::string name, double residual, double tolerance, std::string note = {}) {
  residual = std::abs(residual);
  const bool pass = std::isfinite(residual) && residual <= tolerance;
  return ConditionResidual{std::move(name), residual, tolerance, pass, std::move(note)};
}

std::string short_double(double x) {
  std::ostringstream out;
  out.precision(6);
  out << x;
  return out.str();
}

void finish(ValidationReport& report) {
  report.verdict = std::all_of(report.conditions.begin(), report.conditions.end(),
                               [](const ConditionResidual& c) { return c.pass; });
}

std::string endpoint_name(int m) { return "k0^(-" + std::to_string(m) + ")(+1)"; }

ValidationReport kernel_report(const KernelSpec& kernel, const ValidationOptions& options, std::size_t grid_size) {
  ValidationReport report;
  report.subject_id = kernel.id;
  report.order = kernel.order;

  const auto levels = repeated_antiderivatives(kernel.eval, kernel.order, grid_size, options.interpolation_degree);
  for (int m = 1; m <= kernel.order; ++m) {
    report.conditions.push_back(condition(endpoint_name(m), levels[m - 1].back(), options.tol));
  }
  report.area = levels.back().integral();
  report.conditions.push_back(condition("area", report.area - 1.0, options.tol,
                                        "int k0^(-" + std::to_string(kernel.order) + ") = " + short_double(report.area)));

  if (kernel.order == 1) {
    // int k and k0^(-1)(1) are the same quantity by two routes
    const auto direct = integrate(kernel.eval, -1.0, 1.0, options.quad_tol);
    if (!direct.converged) {
      throw Error(ErrorCode::NonConvergence, "int k for '" + kernel.id + "' did not converge");
    }
    const double gap = std::abs(direct.value) - std::abs(levels.front().back());
    report.conditions.push_back(condition("integral_k_consistency", gap, options.tol,
                                          "|int k| = " + short_double(std::abs(direct.value))));
  }
  finish(report);
  return report;
}

}  // namespace

std::vector<std::string> ValidationReport::failing() const {
  std::vector<std::string> names;
  for (const auto& c : conditions) {
    if (!c.pass) names.push_back(c.name);
  }
  return names;
}

const ConditionResidual* ValidationReport::find(const std::string& name) const {
  for (const auto& c : conditions) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

std::string ValidationReport::to_text() const {
  std::ostringstream out;
  out << "subject: " << subject_id << "  order: " << order << "  verdict: " << (verdict ? "VALID" : "INVALID")
      << '\n';
  std::size_t width = 9;
  for (const auto& c : conditions) width = std::max(width, c.name.size());
  for (const auto& c : conditions) {
    out << "  " << c.name << std::string(width - c.name.size() + 2, ' ') << (c.pass ? "pass" : "FAIL")
        << "  residual " << short_double(c.residual) << "  tol " << short_double(c.tolerance);
    if (!c.note.empty()) out << "  (" << c.note << ')';
    out << '\n';
  }
  if (discretization_estimate) out << "  grid refinement change: " << short_double(*discretization_estimate) << '\n';
  return out.str();
}

void ValidationReport::write_csv(std::ostream& out) const {
  out << "condition,residual,tolerance,pass\n";
  for (const auto& c : conditions) {
    out << c.name << ',' << csv::format_double(c.residual) << ',' << csv::format_double(c.tolerance) << ','
        << (c.pass ? "true" : "false") << '\n';
  }
}

std::vector<GridFunction> repeated_antiderivatives(const RealFn& kernel, int n, std::size_t grid_size,
                                                   int interpolation_degree) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "antiderivative count must be >= 1");
  std::vector<GridFunction> levels;
  levels.reserve(n);
  levels.push_back(antiderivative(kernel, grid_size, interpolation_degree));
  for (int m = 2; m <= n; ++m) {
    const GridFunction& previous = levels.back();
    levels.push_back(
        antiderivative([&previous](double t) { return previous(t); }, grid_size, interpolation_degree));
  }
  return levels;
}

ValidationReport validate_weight(const WeightSpec& weight, int n, const ValidationOptions& options) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "order must be >= 1");
  ValidationReport report;
  report.subject_id = weight.id;
  report.order = n;

  for (int k = 0; k < n; ++k) {
    const std::string base = "w^(" + std::to_string(k) + ")";
    const auto derivative = weight.derivative(k);
    if (!derivative) {
      const std::string reason = "derivative of order " + std::to_string(k) + " unavailable";
      for (const char* side : {"(-1)", "(+1)"}) {
        report.conditions.push_back(ConditionResidual{base + side, std::numeric_limits<double>::infinity(),
                                                      options.tol, false, reason});
      }
      continue;
    }
    for (const double end : {-1.0, 1.0}) {
      const std::string name = base + (end < 0 ? "(-1)" : "(+1)");
      const double exact = (*derivative)(end);
      if (weight.flat_endpoints) {
        const double inner = end * (1.0 - options.endpoint_epsilon);
        const double limit = (*derivative)(inner);
        report.conditions.push_back(condition(name, std::max(std::abs(exact), std::abs(limit)), options.tol,
                                              "exact " + short_double(exact) + ", limit " + short_double(limit)));
      } else {
        report.conditions.push_back(condition(name, exact, options.tol));
      }
    }
  }

  try {
    const auto area = integrate(weight.eval, -1.0, 1.0, options.quad_tol);
    report.area = area.value;
    std::string note = "int w = " + short_double(area.value);
    if (!area.converged) note += ", quadrature did not converge";
    auto c = condition("area", area.value - 1.0, options.tol, note);
    c.pass = c.pass && area.converged;
    report.conditions.push_back(c);
  } catch (const Error& e) {
    report.conditions.push_back(
        ConditionResidual{"area", std::numeric_limits<double>::infinity(), options.tol, false, e.what()});
  }
  finish(report);
  return report;
}

ValidationReport validate_weight(const WeightSpec& weight, int n, double tol) {
  ValidationOptions options;
  options.tol = tol;
  return validate_weight(weight, n, options);
}

ValidationReport validate_kernel(const KernelSpec& kernel, const ValidationOptions& options) {
  if (kernel.order < 1) throw Error(ErrorCode::InvalidArgument, "kernel order must be >= 1");
  ValidationReport report = kernel_report(kernel, options, options.grid_size);
  if (options.refine_check) {
    const ValidationReport fine = kernel_report(kernel, options, 2 * options.grid_size - 1);
    double change = 0.0;
    for (std::size_t i = 0; i < report.conditions.size(); ++i) {
      change = std::max(change, std::abs(report.conditions[i].residual - fine.conditions[i].residual));
    }
    report.discretization_estimate = change;
  }
  return report;
}

ValidationReport validate_kernel(const KernelSpec& kernel, double tol, std::size_t grid_size) {
  ValidationOptions options;
  options.tol = tol;
  options.grid_size = grid_size;
  return validate_kernel(kernel, options);
}

KernelSpec normalize_kernel(const KernelSpec& kernel, const ValidationOptions& options) {
  ValidationOptions quick = options;
  quick.refine_check = false;
  const ValidationReport report = validate_kernel(kernel, quick);
  for (int m = 1; m <= kernel.order; ++m) {
    const auto* c = report.find(endpoint_name(m));
    if (c && !c->pass) {
      throw Error(ErrorCode::EndpointViolation,
                  "'" + kernel.id + "': " + c->name + " = " + short_double(c->residual) + " is not zero");
    }
  }
  if (std::abs(report.area) <= 1e-13) {
    throw Error(ErrorCode::NotNormalizable, "'" + kernel.id + "' has int k0^(-n) = 0");
  }
  KernelSpec normalized = scale_kernel(kernel, 1.0 / report.area);
  normalized.id = "normalized(" + kernel.id + ")";
  return normalized;
}

}  // namespace lanczos
