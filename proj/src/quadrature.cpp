#include "decolight/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <queue>
#include <sstream>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "decolight/error.hpp"

namespace decolight {

namespace {

constexpr double kPi = std::numbers::pi;
// exp(-6.5^2) ~ 4.5e-19: the Gaussian weight is negligible beyond this many widths.
constexpr double kCutoffWidths = 6.5;

void check_finite(const Complex& v) {
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
    throw ConvergenceError("quadrature: integrand returned NaN or Inf");
}

bool within_tolerance(const QuadratureResult& r, double tol) {
  return r.error_estimate <= tol * std::max(std::abs(r.value), r.scale);
}

[[noreturn]] void throw_not_converged(const char* who, const QuadratureResult& r, double tol) {
  std::ostringstream os;
  os << who << ": no convergence, estimated error " << r.error_estimate << " vs tolerance " << tol
     << " x scale " << std::max(std::abs(r.value), r.scale) << " after " << r.evaluations << " evaluations";
  throw ConvergenceError(os.str());
}

// Gauss-Kronrod 7/15 abscissae and weights.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                       0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b;
  Complex value;
  double error;
  double l1;
  bool operator<(const Segment& o) const { return error < o.error; }
};

Segment gk15(const std::function<Complex(double)>& g, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  const Complex fc = g(c);
  check_finite(fc);
  Complex kron = fc * kWgk[7];
  Complex gauss = fc * kWg[3];
  double l1 = std::abs(fc) * kWgk[7];
  for (int j = 0; j < 7; ++j) {
    const Complex f1 = g(c - h * kXgk[j]);
    const Complex f2 = g(c + h * kXgk[j]);
    check_finite(f1);
    check_finite(f2);
    kron += kWgk[j] * (f1 + f2);
    l1 += kWgk[j] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1) gauss += kWg[j / 2] * (f1 + f2);
  }
  return {a, b, kron * h, std::abs((kron - gauss) * h), l1 * std::abs(h)};
}


}  // namespace

void QuadratureSpec::validate() const {
  if (order < 2) throw std::invalid_argument("quadrature order must be >= 2");
  if (!(tolerance > 0.0)) throw std::invalid_argument("quadrature tolerance must be > 0");
  if (panel_nodes < 4) throw std::invalid_argument("quadrature panel_nodes must be >= 4");
}

GaussRule gauss_hermite_rule(int n) {
  if (n < 1) throw std::invalid_argument("gauss_hermite_rule: n must be >= 1");
  GaussRule rule{std::vector<double>(n), std::vector<double>(n)};
  const double pim4 = std::pow(kPi, -0.25);
  const int m = (n + 1) / 2;
  // Starting guesses from the Jacobi matrix eigenvalues, polished by Newton
  // on the orthonormal recurrence.
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd sub(std::max(n - 1, 0));
  for (int k = 1; k < n; ++k) sub[k - 1] = std::sqrt(0.5 * k);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> jacobi;
  jacobi.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  for (int i = 0; i < m; ++i) {
    double z = jacobi.eigenvalues()[n - 1 - i];
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = pim4, p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / (j + 1)) * p2 - std::sqrt(static_cast<double>(j) / (j + 1)) * p3;
      }
      pp = std::sqrt(2.0 * n) * p2;
      const double dz = p1 / pp;
      z -= dz;
      if (std::abs(dz) <= 1e-15 * std::max(1.0, std::abs(z))) break;
    }
    // one more sweep at the converged root for the weight
    double p1 = pim4, p2 = 0.0;
    for (int j = 0; j < n; ++j) {
      const double p3 = p2;
      p2 = p1;
      p1 = z * std::sqrt(2.0 / (j + 1)) * p2 - std::sqrt(static_cast<double>(j) / (j + 1)) * p3;
    }
    pp = std::sqrt(2.0 * n) * p2;
    rule.nodes[i] = z;
    rule.nodes[n - 1 - i] = -z;
    rule.weights[i] = rule.weights[n - 1 - i] = 2.0 / (pp * pp);
  }
  if (n % 2 == 1) rule.nodes[m - 1] = 0.0;
  return rule;
}

GaussRule gauss_legendre_rule(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre_rule: n must be >= 1");
  GaussRule rule{std::vector<double>(n), std::vector<double>(n)};
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1);
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      const double dz = p1 / pp;
      z -= dz;
      if (std::abs(dz) <= 1e-16) break;
    }
    double p1 = 1.0, p2 = 0.0;
    for (int j = 0; j < n; ++j) {
      const double p3 = p2;
      p2 = p1;
      p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1);
    }
    pp = n * (z * p1 - p2) / (z * z - 1.0);
    rule.nodes[i] = -z;
    rule.nodes[n - 1 - i] = z;
    rule.weights[i] = rule.weights[n - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
  }
  if (n % 2 == 1) rule.nodes[m - 1] = 0.0;
  return rule;
}

QuadratureResult gauss_hermite_fixed(const SpatialIntegrand& f, const CondensateMode& mode, int order) {
  const GaussRule rule = gauss_hermite_rule(order);
  const double norm = std::pow(kPi, -1.5);
  QuadratureResult out;
  Complex sum{0.0, 0.0};
  double l1 = 0.0;
  for (int i = 0; i < order; ++i) {
    Complex si{0.0, 0.0};
    double li = 0.0;
    for (int j = 0; j < order; ++j) {
      Complex sj{0.0, 0.0};
      double lj = 0.0;
      for (int k = 0; k < order; ++k) {
        const Vec3 x = mode.center + mode.width * Vec3(rule.nodes[i], rule.nodes[j], rule.nodes[k]);
        const Complex v = f(x);
        check_finite(v);
        sj += rule.weights[k] * v;
        lj += rule.weights[k] * std::abs(v);
      }
      si += rule.weights[j] * sj;
      li += rule.weights[j] * lj;
    }
    sum += rule.weights[i] * si;
    l1 += rule.weights[i] * li;
  }
  out.value = norm * sum;
  out.scale = norm * l1;
  out.evaluations = static_cast<std::size_t>(order) * order * order;
  return out;
}

QuadratureResult adaptive_gauss_kronrod(const std::function<Complex(double)>& g, double a, double b,
                                        double rel_tol, double abs_tol, int max_subdivisions) {
  std::priority_queue<Segment> heap;
  Segment first = gk15(g, a, b);
  Complex total = first.value;
  double err = first.error, l1 = first.l1;
  std::size_t evals = 15;
  heap.push(first);
  int splits = 0;
  while (err > std::max(abs_tol, rel_tol * l1) && splits < max_subdivisions) {
    const Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    const Segment left = gk15(g, worst.a, mid);
    const Segment right = gk15(g, mid, worst.b);
    evals += 30;
    total += left.value + right.value - worst.value;
    err += left.error + right.error - worst.error;
    l1 += left.l1 + right.l1 - worst.l1;
    heap.push(left);
    heap.push(right);
    ++splits;
  }
  // recompute the sums from the leaves to drop accumulated update roundoff
  total = 0.0;
  err = 0.0;
  l1 = 0.0;
  while (!heap.empty()) {
    total += heap.top().value;
    err += heap.top().error;
    l1 += heap.top().l1;
    heap.pop();
  }
  QuadratureResult out;
  out.value = total;
  out.error_estimate = err;
  out.scale = l1;
  out.evaluations = evals;
  out.converged = err <= std::max(abs_tol, rel_tol * l1);
  return out;
}

QuadratureResult composite_gauss_legendre(const std::function<Complex(double)>& g, double a, double b,
                                          int panels, const GaussRule& rule) {
  QuadratureResult out;
  const double h = (b - a) / panels;
  const std::size_t n = rule.nodes.size();
  Complex sum{0.0, 0.0};
  double l1 = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double c = a + (p + 0.5) * h;
    Complex ps{0.0, 0.0};
    double pl = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const Complex v = g(c + 0.5 * h * rule.nodes[i]);
      check_finite(v);
      ps += rule.weights[i] * v;
      pl += rule.weights[i] * std::abs(v);
    }
    sum += ps;
    l1 += pl;
  }
  out.value = 0.5 * h * sum;
  out.scale = 0.5 * std::abs(h) * l1;
  out.evaluations = static_cast<std::size_t>(panels) * n;
  return out;
}

namespace {

QuadratureResult integrate_gaussian_adaptive(const SpatialIntegrand& f, const CondensateMode& mode,
                                             const QuadratureSpec& spec) {
  const double norm = std::pow(kPi, -1.5);
  const double L = kCutoffWidths;
  const double inner_tol = 0.1 * spec.tolerance;
  std::size_t evals = 0;
  bool converged = true;
  auto level3 = [&](double e1, double e2) {
    auto g = [&](double e3) {
      const Vec3 eta(e1, e2, e3);
      return Complex(std::exp(-eta.squaredNorm())) * f(mode.center + mode.width * eta);
    };
    QuadratureResult r = adaptive_gauss_kronrod(g, -L, L, inner_tol, 0.0, spec.order);
    evals += r.evaluations;
    converged = converged && r.converged;
    return r;
  };
  auto level2 = [&](double e1) {
    QuadratureResult r = adaptive_gauss_kronrod([&](double e2) { return level3(e1, e2).value; }, -L, L,
                                                inner_tol, 0.0, spec.order);
    converged = converged && r.converged;
    return r;
  };
  QuadratureResult outer =
      adaptive_gauss_kronrod([&](double e1) { return level2(e1).value; }, -L, L, spec.tolerance, 0.0, spec.order);
  outer.value *= norm;
  outer.error_estimate *= norm;
  outer.scale *= norm;
  outer.evaluations = evals;
  outer.converged = outer.converged && converged;
  return outer;
}

}  // namespace

QuadratureResult integrate_gaussian_weighted(const SpatialIntegrand& f, const CondensateMode& mode,
                                             const QuadratureSpec& spec) {
  spec.validate();
  if (spec.method == QuadratureMethod::Adaptive) {
    QuadratureResult r = integrate_gaussian_adaptive(f, mode, spec);
    if (!r.converged) throw_not_converged("adaptive Gauss-Kronrod", r, spec.tolerance);
    return r;
  }
  QuadratureResult hi = gauss_hermite_fixed(f, mode, spec.order);
  const QuadratureResult lo = gauss_hermite_fixed(f, mode, std::max(1, spec.order / 2));
  hi.error_estimate = std::abs(hi.value - lo.value);
  hi.evaluations += lo.evaluations;
  hi.converged = within_tolerance(hi, spec.tolerance);
  if (!hi.converged) throw_not_converged("Gauss-Hermite", hi, spec.tolerance);
  return hi;
}

ConvergenceReport convergence_report(const SpatialIntegrand& f, const CondensateMode& mode,
                                     const std::vector<int>& orders, double tolerance) {
  if (!std::is_sorted(orders.begin(), orders.end()))
    throw std::invalid_argument("convergence_report: orders must be increasing");
  ConvergenceReport report;
  for (int n : orders) {
    const QuadratureResult hi = gauss_hermite_fixed(f, mode, n);
    const QuadratureResult lo = gauss_hermite_fixed(f, mode, std::max(1, n / 2));
    const double delta = std::abs(hi.value - lo.value);
    const bool slow = delta > tolerance * std::max(std::abs(hi.value), hi.scale);
    report.rows.push_back({n, hi.value, delta, slow});
    if (!slow && !report.critical_order) report.critical_order = n;
  }
  return report;
}

namespace {

// Panels per 2 pi / kmax of oscillation. The error estimate compares
// against the same rule on panels twice as wide.
constexpr double kPanelPeriods = 1.5;

int panel_count(double length, double max_panel) { return std::max(1, static_cast<int>(std::ceil(length / max_panel))); }

}  // namespace

QuadratureResult integrate_axisymmetric(const AxisymmetricIntegrand& row, double offset, double width,
                                        double max_wavenumber, const QuadratureSpec& spec) {
  spec.validate();
  const double L = kCutoffWidths * width;
  const double R = std::abs(offset) + L;
  const double kmax = std::max(max_wavenumber, 1e-300);
  const double h = std::min(0.25 * width, kPanelPeriods * 2.0 * kPi / kmax);
  const GaussRule rule = gauss_legendre_rule(spec.panel_nodes);
  const double w2 = width * width;
  const double pref = 2.0 / (std::sqrt(kPi) * width * w2);

  // mu range keeping x' inside the cutoff ball around the centre
  auto mu_range = [&](double r) -> std::pair<double, double> {
    if (offset == 0.0 || r == 0.0) return {-1.0, 1.0};
    const double edge = (L * L - r * r - offset * offset) / (2.0 * r * offset);
    if (offset > 0.0) return {-1.0, std::min(1.0, edge)};
    return {std::max(-1.0, edge), 1.0};
  };

  auto radial_value = [&](double r, int coarsen, double& l1_out, std::size_t& evals) -> Complex {
    l1_out = 0.0;
    const auto [lo, hi] = mu_range(r);
    if (!(hi > lo)) return {0.0, 0.0};
    const double len = hi - lo;
    // oscillation kmax * r across mu, plus ~4 e-folds of the weight per panel
    const double per_panel = std::min(kPanelPeriods * 2.0 * kPi / (kmax * r), 8.0 * w2 / (2.0 * r * std::abs(offset) + 1e-300));
    const int panels = (panel_count(len, per_panel) + coarsen - 1) / coarsen;
    const AxisymmetricRow g = row(r);
    const double base = (r * r + offset * offset) / w2;
    auto weighted = [&](double mu) { return std::exp(-base - 2.0 * r * offset * mu / w2) * g(mu); };
    const QuadratureResult q = composite_gauss_legendre(weighted, lo, hi, panels, rule);
    l1_out = q.scale * r * r;
    evals += q.evaluations;
    return q.value * (r * r);
  };

  auto outer = [&](int coarsen, double& l1_total, std::size_t& evals) {
    const int panels = (panel_count(R, h) + coarsen - 1) / coarsen;
    const double hp = R / panels;
    Complex sum{0.0, 0.0};
    l1_total = 0.0;
    for (int p = 0; p < panels; ++p) {
      const double c = (p + 0.5) * hp;
      for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        double l1 = 0.0;
        sum += rule.weights[i] * radial_value(c + 0.5 * hp * rule.nodes[i], coarsen, l1, evals);
        l1_total += rule.weights[i] * l1;
      }
    }
    l1_total *= 0.5 * hp * pref;
    return 0.5 * hp * pref * sum;
  };

  QuadratureResult out;
  double l1_fine = 0.0, l1_coarse = 0.0;
  out.value = outer(1, l1_fine, out.evaluations);
  const Complex lo = outer(2, l1_coarse, out.evaluations);
  out.scale = l1_fine;
  out.error_estimate = std::abs(out.value - lo);
  out.converged = within_tolerance(out, spec.tolerance);
  if (!out.converged) throw_not_converged("axisymmetric quadrature", out, spec.tolerance);
  return out;
}

QuadratureResult integrate_radial(const std::function<Complex(double r)>& h, double offset, double width,
                                  double max_wavenumber, const QuadratureSpec& spec) {
  spec.validate();
  const double R = std::abs(offset) + kCutoffWidths * width;
  const double kmax = std::max(max_wavenumber, 1e-300);
  const double len = std::min(0.25 * width, kPanelPeriods * 2.0 * kPi / kmax);
  const int panels = panel_count(R, len);
  const GaussRule rule = gauss_legendre_rule(spec.panel_nodes);
  QuadratureResult out = composite_gauss_legendre(h, 0.0, R, panels, rule);
  const QuadratureResult lo = composite_gauss_legendre(h, 0.0, R, (panels + 1) / 2, rule);
  out.error_estimate = std::abs(out.value - lo.value);
  out.evaluations += lo.evaluations;
  out.converged = within_tolerance(out, spec.tolerance);
  if (!out.converged) throw_not_converged("radial quadrature", out, spec.tolerance);
  return out;
}

}  // namespace decolight
