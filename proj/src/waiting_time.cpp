#include "rdsnet/waiting_time.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace rdsnet {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v))
    throw std::invalid_argument(std::string("waiting-time parameter ") + name +
                                " must be positive and finite");
}

double gamma_sample_unit_scale(double shape, Rng& rng) {
  if (shape < 1.0) {
    // Boost the shape by one and correct with U^(1/shape), in log space so
    // very small shapes do not underflow before the final exp.
    const double g = gamma_sample_unit_scale(shape + 1.0, rng);
    return std::exp(std::log(g) + std::log(uniform_open(rng)) / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    const double x = standard_normal(rng);
    double v = 1.0 + c * x;
    if (v <= 0.0) continue;
    v = v * v * v;
    const double u = uniform_open(rng);
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

}  // namespace

double log_gamma_q(double a, double x) {
  if (!(a > 0.0)) throw std::domain_error("log_gamma_q: shape must be positive");
  if (x <= 0.0) return 0.0;
  if (std::isinf(x)) return -kInf;
  constexpr double eps = 1e-16;
  constexpr int max_iter = 100000;
  const double log_prefactor = -x + a * std::log(x) - std::lgamma(a);
  if (x < a + 1.0) {
    // Series for P(a, x).
    double ap = a;
    double del = 1.0 / a;
    double sum = del;
    for (int k = 0; k < max_iter; ++k) {
      ap += 1.0;
      del *= x / ap;
      sum += del;
      if (std::fabs(del) < std::fabs(sum) * eps) break;
    }
    const double p = std::exp(log_prefactor + std::log(sum));
    return std::log1p(-p);
  }
  // Continued fraction for Q(a, x), modified Lentz.
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < max_iter; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < eps) break;
  }
  return log_prefactor + std::log(h);
}

std::string_view family_name(Family family) {
  switch (family) {
    case Family::exponential: return "exponential";
    case Family::gamma: return "gamma";
    case Family::power_law: return "power_law";
  }
  return "unknown";
}

Family parse_family(std::string_view name) {
  if (name == "exponential" || name == "exp") return Family::exponential;
  if (name == "gamma") return Family::gamma;
  if (name == "power_law" || name == "powerlaw" || name == "power-law") return Family::power_law;
  throw std::invalid_argument("unknown distribution family '" + std::string(name) + "'");
}

std::size_t parameter_count(Family family) { return family == Family::exponential ? 1 : 2; }

std::vector<std::string> parameter_names(Family family) {
  switch (family) {
    case Family::exponential: return {"rate"};
    case Family::gamma: return {"shape", "scale"};
    case Family::power_law: return {"shape", "x_min"};
  }
  return {};
}

WaitingTimeModel::WaitingTimeModel(Family family, std::vector<double> params)
    : family_(family), params_(std::move(params)) {
  switch (family_) {
    case Family::exponential:
      require_positive(params_[0], "rate");
      log_norm_ = std::log(params_[0]);
      break;
    case Family::gamma:
      require_positive(params_[0], "shape");
      require_positive(params_[1], "scale");
      log_norm_ = -params_[0] * std::log(params_[1]) - std::lgamma(params_[0]);
      break;
    case Family::power_law:
      require_positive(params_[0], "shape");
      require_positive(params_[1], "x_min");
      if (!(params_[0] > 1.0))
        throw std::invalid_argument("power-law shape must exceed 1 for a normalizable density");
      log_norm_ = std::log(params_[0] - 1.0) + (params_[0] - 1.0) * std::log(params_[1]);
      break;
  }
}

WaitingTimeModel WaitingTimeModel::exponential(double rate) {
  return WaitingTimeModel(Family::exponential, {rate});
}
WaitingTimeModel WaitingTimeModel::gamma(double shape, double scale) {
  return WaitingTimeModel(Family::gamma, {shape, scale});
}
WaitingTimeModel WaitingTimeModel::power_law(double shape, double x_min) {
  return WaitingTimeModel(Family::power_law, {shape, x_min});
}

WaitingTimeModel WaitingTimeModel::create(Family family, std::span<const double> params) {
  if (params.size() != parameter_count(family))
    throw std::invalid_argument(std::string(family_name(family)) + " takes " +
                                std::to_string(parameter_count(family)) + " parameter(s)");
  return WaitingTimeModel(family, std::vector<double>(params.begin(), params.end()));
}

double WaitingTimeModel::mean() const {
  switch (family_) {
    case Family::exponential: return 1.0 / params_[0];
    case Family::gamma: return params_[0] * params_[1];
    case Family::power_law:
      return params_[0] > 2.0 ? (params_[0] - 1.0) * params_[1] / (params_[0] - 2.0) : kInf;
  }
  return kInf;
}

double WaitingTimeModel::log_survival(double t) const {
  if (t <= 0.0) return 0.0;
  switch (family_) {
    case Family::exponential: return -params_[0] * t;
    case Family::gamma: return log_gamma_q(params_[0], t / params_[1]);
    case Family::power_law:
      if (t <= params_[1]) return 0.0;
      return (params_[0] - 1.0) * (std::log(params_[1]) - std::log(t));
  }
  return 0.0;
}

double WaitingTimeModel::log_pdf(double t) const {
  if (t < 0.0) return -kInf;
  switch (family_) {
    case Family::exponential: return log_norm_ - params_[0] * t;
    case Family::gamma:
      if (t == 0.0) {
        if (params_[0] < 1.0) return kInf;
        return params_[0] == 1.0 ? log_norm_ : -kInf;
      }
      return log_norm_ + (params_[0] - 1.0) * std::log(t) - t / params_[1];
    case Family::power_law:
      if (t < params_[1]) return -kInf;
      return log_norm_ - params_[0] * std::log(t);
  }
  return -kInf;
}

double WaitingTimeModel::cdf(double t) const { return -std::expm1(log_survival(t)); }

double WaitingTimeModel::pdf(double t) const { return std::exp(log_pdf(t)); }

double WaitingTimeModel::log_hazard(double t) const {
  switch (family_) {
    case Family::exponential: return log_norm_;
    case Family::power_law:
      if (t < params_[1]) return -kInf;
      return std::log(params_[0] - 1.0) - std::log(t);
    case Family::gamma: return log_pdf(t) - log_survival(t);
  }
  return -kInf;
}

double WaitingTimeModel::hazard(double t) const { return std::exp(log_hazard(t)); }

void WaitingTimeModel::check_condition(double s, double t) const {
  if (!(s >= 0.0) || !(t >= s))
    throw std::domain_error("conditional curve requires 0 <= s <= t");
  if (log_survival(s) == -kInf)
    throw std::domain_error("conditional curve conditions on an event of probability zero");
}

double WaitingTimeModel::log_cond_survival(double s, double t) const {
  check_condition(s, t);
  if (t == s) return 0.0;
  return log_survival(t) - log_survival(s);
}

double WaitingTimeModel::cond_survival(double s, double t) const {
  return std::exp(log_cond_survival(s, t));
}

double WaitingTimeModel::log_cond_hazard(double s, double t) const {
  check_condition(s, t);
  return log_hazard(t);
}

double WaitingTimeModel::cond_hazard(double s, double t) const {
  return std::exp(log_cond_hazard(s, t));
}

double WaitingTimeModel::sample(Rng& rng) const {
  switch (family_) {
    case Family::exponential: return -std::log(uniform_open(rng)) / params_[0];
    case Family::gamma: return params_[1] * gamma_sample_unit_scale(params_[0], rng);
    case Family::power_law:
      return params_[1] * std::exp(-std::log(uniform_open(rng)) / (params_[0] - 1.0));
  }
  return 0.0;
}

}  // namespace rdsnet
