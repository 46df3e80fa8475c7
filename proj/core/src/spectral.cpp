#include "netloc/spectral.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "netloc/error.hpp"

namespace netloc {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> v) { return std::sqrt(dot(v, v)); }

void require_connected(const Graph& g, const char* op) {
  if (!is_connected(g)) {
    throw Error(ErrorKind::PreconditionViolation, std::string(op) + " requires a connected graph");
  }
}

}  // namespace

void adjacency_multiply(const Graph& g, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    double s = 0.0;
    for (NodeId j : g.neighbors(static_cast<NodeId>(i))) s += x[j];
    y[i] = s;
  }
}

SpectralResult power_iteration(const Graph& g, const PowerIterationOptions& options) {
  if (!(options.tol > 0.0)) throw Error(ErrorKind::InvalidParams, "power_iteration: tol must be > 0");
  require_connected(g, "power_iteration");

  const std::size_t n = g.node_count();
  std::vector<double> u(n, 1.0 / std::sqrt(static_cast<double>(n)));
  std::vector<double> au(n);
  double lambda = 0.0;
  double residual = 0.0;

  for (std::size_t it = 1; it <= options.max_iter; ++it) {
    adjacency_multiply(g, u, au);
    lambda = dot(u, au);
    double r2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = au[i] - lambda * u[i];
      r2 += d * d;
    }
    residual = std::sqrt(r2);
    if (!std::isfinite(residual)) {
      throw Error(ErrorKind::NumericFailure, "power_iteration: non-finite residual");
    }
    if (residual <= options.tol) {
      if (std::accumulate(u.begin(), u.end(), 0.0) < 0.0) {
        for (double& v : u) v = -v;
      }
      return {lambda, std::move(u), it, residual};
    }
    for (std::size_t i = 0; i < n; ++i) au[i] += u[i];
    const double len = norm2(au);
    for (std::size_t i = 0; i < n; ++i) u[i] = au[i] / len;
  }
  throw ConvergenceError("power_iteration: residual " + std::to_string(residual) +
                             " above tolerance after " + std::to_string(options.max_iter) +
                             " iterations",
                         residual, options.max_iter);
}

double ipr(std::span<const double> v) {
  double s2 = 0.0;
  double s4 = 0.0;
  for (double x : v) {
    const double x2 = x * x;
    s2 += x2;
    s4 += x2 * x2;
  }
  if (v.empty() || s2 == 0.0) throw Error(ErrorKind::InvalidInput, "ipr of an all-zero vector");
  return s4 / (s2 * s2);
}

std::string_view region_name(RegionLabel label) noexcept {
  switch (label) {
    case RegionLabel::Delocalized: return "delocalized";
    case RegionLabel::WeaklyLocalized: return "weakly-localized";
    case RegionLabel::StronglyLocalized: return "strongly-localized";
  }
  return "unknown";
}

void RegionThresholds::validate() const {
  if (!(tau1 > 0.0 && tau1 < tau2 && tau2 < 1.0)) {
    throw Error(ErrorKind::InvalidParams, "region thresholds need 0 < tau1 < tau2 < 1");
  }
  if (!(epsilon > 0.0)) throw Error(ErrorKind::InvalidParams, "region epsilon must be > 0");
}

RegionLabel classify_region(double y, const RegionThresholds& th) {
  if (y <= th.tau1 - th.epsilon) return RegionLabel::Delocalized;
  if (y >= th.tau2 + th.epsilon) return RegionLabel::StronglyLocalized;
  return RegionLabel::WeaklyLocalized;
}

std::vector<double> integrate_dynamics(const Graph& g, const DynamicsParams& p) {
  const std::size_t n = g.node_count();
  if (p.beta == 0.0) throw Error(ErrorKind::InvalidParams, "integrate_dynamics: beta must be nonzero");
  if (!(p.dt > 0.0)) throw Error(ErrorKind::InvalidParams, "integrate_dynamics: dt must be > 0");
  if (!(p.t_max >= 0.0)) throw Error(ErrorKind::InvalidParams, "integrate_dynamics: t_max must be >= 0");
  if (p.x0.size() != n) throw Error(ErrorKind::InvalidParams, "integrate_dynamics: x0 length != n");
  require_connected(g, "integrate_dynamics");

  std::vector<double> x = p.x0;
  const double len0 = norm2(x);
  if (len0 == 0.0) throw Error(ErrorKind::InvalidParams, "integrate_dynamics: x0 is all zeros");
  for (double& v : x) v /= len0;

  std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n), ax(n);
  auto rhs = [&](std::span<const double> state, std::span<double> out) {
    adjacency_multiply(g, state, ax);
    for (std::size_t i = 0; i < n; ++i) out[i] = p.alpha * state[i] + p.beta * ax[i];
  };

  const auto steps = static_cast<std::size_t>(std::ceil(p.t_max / p.dt));
  const double h = p.dt;
  for (std::size_t s = 0; s < steps; ++s) {
    rhs(x, k1);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * h * k1[i];
    rhs(tmp, k2);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * h * k2[i];
    rhs(tmp, k3);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + h * k3[i];
    rhs(tmp, k4);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    // e^{lambda1 t} growth (or decay) would leave the representable range.
    const double len = norm2(x);
    if (!std::isfinite(len) || len == 0.0) {
      throw Error(ErrorKind::NumericFailure,
                  "integrate_dynamics: state degenerated at step " + std::to_string(s));
    }
    for (double& v : x) v /= len;
  }
  return x;
}

double label_graph(const Graph& g, const PowerIterationOptions& options) {
  return ipr(power_iteration(g, options).pev);
}

}  // namespace netloc
