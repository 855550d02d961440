#include "rdsnet/likelihood.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace rdsnet {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double sum_log_expbeta(const std::vector<double>& expbeta, const LikelihoodWorkspace& ws) {
  double total = 0.0;
  for (std::size_t i = 0; i < expbeta.size(); ++i) {
    if (!ws.non_seed(i)) continue;  // 0 log 0 := 0 for masked events
    if (!(expbeta[i] > 0.0)) return kNegInf;
    total += std::log(expbeta[i]);
  }
  return total;
}

}  // namespace

LikelihoodWorkspace::LikelihoodWorkspace(const ObservedStudy& study, const WaitingTimeModel& model,
                                         WorkspaceScope scope)
    : n_(study.size()),
      model_(model),
      b_(n_, n_, 0.0),
      d_(n_, n_, 0.0),
      non_seed_(n_, 0),
      degrees_(n_, 0.0) {
  const bool full = scope == WorkspaceScope::full;
  if (full) {
    hazard_ = DenseMatrix<double>(n_, n_, 0.0);
    log_survival_ = DenseMatrix<double>(n_, n_, 0.0);
  }
  for (std::size_t i = 0; i < n_; ++i) {
    non_seed_[i] = study.is_seed(i) ? 0 : 1;
    degrees_[i] = study.degrees()[i];
  }
  const auto& t = study.times();
  const auto& c = study.coupons();
  const bool gamma = model.family() == Family::gamma;

  for (std::size_t u = 0; u < n_; ++u) {
    // log survival of edge clocks started at t_u, evaluated at the previous
    // event; S(u,i) = logS(t_i - t_u) - logS(t_{i-1} - t_u).
    double prev_log_surv = 0.0;
    std::size_t prev_index = u;
    for (std::size_t i = u + 1; i < n_; ++i) {
      const bool held = c(u, i) != 0;
      if (!full && !held) continue;
      if (prev_index != i - 1) prev_log_surv = model.log_survival(t[i - 1] - t[u]);
      const double gap = t[i] - t[u];
      const double log_surv = model.log_survival(gap);
      if (prev_log_surv == kNegInf)
        throw std::domain_error("likelihood workspace: survival of edge (" + std::to_string(u + 1) +
                                ", " + std::to_string(i + 1) + ") conditions on a null event");
      const double s = log_surv - prev_log_surv;
      const double h = gamma ? std::exp(model.log_pdf(gap) - log_surv) : model.hazard(gap);
      if (!std::isfinite(h) || std::isnan(s))
        throw std::domain_error("likelihood workspace: non-finite curve at pair (" +
                                std::to_string(u + 1) + ", " + std::to_string(i + 1) + ")");
      if (full) {
        hazard_(u, i) = h;
        log_survival_(u, i) = s;
      }
      if (held) {
        b_(u, i) = h;
        d_(u, i) = s;
      }
      prev_log_surv = log_surv;
      prev_index = i;
    }
  }
}

double log_likelihood_direct(const AdjacencyMatrix& a, const ObservedStudy& study,
                             const WaitingTimeModel& model) {
  const std::size_t n = study.size();
  if (a.size() != n) throw std::invalid_argument("log_likelihood_direct: dimension mismatch");
  const auto& t = study.times();
  const auto& d = study.degrees();
  double ll = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double hazard_sum = 0.0;
    double log_surv = 0.0;
    for (std::size_t j = 0; j < i; ++j) {
      if (!study.holds_coupon(j, i)) continue;
      // |I_j(i)|: neighbours of j not yet in the study just before event i,
      // sampled later (k >= i) or never sampled (pendant).
      double unrecruited = static_cast<double>(d[j]) - static_cast<double>(a.degree(j));
      for (std::size_t k = i; k < n; ++k)
        if (a.has_edge(j, k)) unrecruited += 1.0;
      if (unrecruited <= 0.0) continue;
      const double s = t[i - 1] - t[j];
      const double elapsed = t[i] - t[j];
      if (!study.is_seed(i)) hazard_sum += unrecruited * model.cond_hazard(s, elapsed);
      log_surv += unrecruited * model.log_cond_survival(s, elapsed);
    }
    if (!study.is_seed(i)) {
      if (!(hazard_sum > 0.0)) return kNegInf;
      ll += std::log(hazard_sum);
    }
    ll += log_surv;
  }
  return ll;
}

double log_likelihood_matrix(const AdjacencyMatrix& a, const LikelihoodWorkspace& ws) {
  const std::size_t n = ws.size();
  if (a.size() != n) throw std::invalid_argument("log_likelihood_matrix: dimension mismatch");
  const auto& b = ws.b();
  const auto& dm = ws.d();
  std::vector<double> u(n);
  for (std::size_t w = 0; w < n; ++w) u[w] = ws.degrees()[w] - static_cast<double>(a.degree(w));

  // later[w] = sum_{k >= i} A(k, w), built while sweeping i downwards, so
  // (LowerTri(AB)' 1)_i = sum_w B(w, i) later[w].
  std::vector<double> later(n, 0.0);
  std::vector<double> expbeta(n, 0.0);
  std::vector<double> delta(n, 0.0);
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t w = 0; w < n; ++w)
      if (a.has_edge(i, w)) later[w] += 1.0;
    double bu = 0.0, lower_ab = 0.0, du = 0.0, lower_ad = 0.0;
    for (std::size_t w = 0; w < i; ++w) {
      bu += b(w, i) * u[w];
      lower_ab += b(w, i) * later[w];
      du += dm(w, i) * u[w];
      lower_ad += dm(w, i) * later[w];
    }
    expbeta[i] = bu + lower_ab;
    delta[i] = du + lower_ad;
  }
  const double m_beta = sum_log_expbeta(expbeta, ws);
  if (m_beta == kNegInf) return kNegInf;
  double one_delta = 0.0;
  for (double x : delta) one_delta += x;
  return m_beta + one_delta;
}

LikelihoodCache init_cache(const AdjacencyMatrix& a, const LikelihoodWorkspace& ws) {
  const std::size_t n = ws.size();
  if (a.size() != n) throw std::invalid_argument("init_cache: dimension mismatch");
  const auto& b = ws.b();
  const auto& dm = ws.d();
  const auto& deg = ws.degrees();
  LikelihoodCache cache;
  cache.pendant.resize(n);
  cache.expbeta.assign(n, 0.0);
  cache.delta.assign(n, 0.0);
  for (std::size_t w = 0; w < n; ++w) cache.pendant[w] = deg[w] - static_cast<double>(a.degree(w));

  // earlier[w] = sum_{k < i} A(k, w), so
  // (StrictlyUpperTri(AB)' 1)_i = sum_w B(w, i) earlier[w].
  std::vector<double> earlier(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double bd = 0.0, upper_ab = 0.0, dd = 0.0, upper_ad = 0.0;
    for (std::size_t w = 0; w < i; ++w) {
      bd += b(w, i) * deg[w];
      upper_ab += b(w, i) * earlier[w];
      dd += dm(w, i) * deg[w];
      upper_ad += dm(w, i) * earlier[w];
    }
    cache.expbeta[i] = bd - upper_ab;
    cache.delta[i] = dd - upper_ad;
    for (std::size_t w = 0; w < n; ++w)
      if (a.has_edge(i, w)) earlier[w] += 1.0;
  }
  return cache;
}

double cache_log_likelihood(const LikelihoodCache& cache, const LikelihoodWorkspace& ws) {
  const double m_beta = sum_log_expbeta(cache.expbeta, ws);
  if (m_beta == kNegInf) return kNegInf;
  double one_delta = 0.0;
  for (double x : cache.delta) one_delta += x;
  return m_beta + one_delta;
}

double toggle_delta(const LikelihoodCache& cache, const LikelihoodWorkspace& ws, const ToggleMove& move) {
  const std::size_t x = move.edge.first;
  const std::size_t y = move.edge.second;
  const std::size_t n = ws.size();
  const double sign = move.kind == MoveKind::add ? -1.0 : 1.0;
  const double* by = ws.b().row(y);
  const double* bx = ws.b().row(x);
  const double* dy = ws.d().row(y);
  const double* dx = ws.d().row(x);
  double change = 0.0;
  for (std::size_t j = x + 1; j < n; ++j) {
    double db = by[j];
    double dd = dy[j];
    if (j > y) {
      db += bx[j];
      dd += dx[j];
    }
    change += sign * dd;
    if (db == 0.0 || !ws.non_seed(j)) continue;
    const double old_value = cache.expbeta[j];
    const double new_value = old_value + sign * db;
    if (!(new_value > 0.0)) return kNegInf;
    if (!(old_value > 0.0)) return std::numeric_limits<double>::infinity();
    change += std::log1p(sign * db / old_value);
  }
  return change;
}

void apply_toggle(LikelihoodCache& cache, const LikelihoodWorkspace& ws, AdjacencyMatrix& a,
                  const ToggleMove& move) {
  a.apply(move);  // throws if the move does not match the matrix
  const std::size_t x = move.edge.first;
  const std::size_t y = move.edge.second;
  const std::size_t n = ws.size();
  const double sign = move.kind == MoveKind::add ? -1.0 : 1.0;
  const double* by = ws.b().row(y);
  const double* bx = ws.b().row(x);
  const double* dy = ws.d().row(y);
  const double* dx = ws.d().row(x);
  for (std::size_t j = x + 1; j < n; ++j) {
    double db = by[j];
    double dd = dy[j];
    if (j > y) {
      db += bx[j];
      dd += dx[j];
    }
    cache.expbeta[j] += sign * db;
    cache.delta[j] += sign * dd;
  }
  cache.pendant[x] += sign;
  cache.pendant[y] += sign;
}

double cache_deviation(const LikelihoodCache& cache, const LikelihoodWorkspace& ws,
                       const AdjacencyMatrix& a) {
  const LikelihoodCache fresh = init_cache(a, ws);
  const std::size_t n = ws.size();
  // Scale each column by its full-exposure magnitude (B'd, D'd): exact zeros
  // stay comparable and the measure is relative for nonzero columns.
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double bd = 0.0, dd = 0.0;
    for (std::size_t w = 0; w < i; ++w) {
      bd += ws.b()(w, i) * ws.degrees()[w];
      dd += std::fabs(ws.d()(w, i)) * ws.degrees()[w];
    }
    const double sb = std::max({std::fabs(fresh.expbeta[i]), bd, std::numeric_limits<double>::min()});
    const double sd = std::max({std::fabs(fresh.delta[i]), dd, std::numeric_limits<double>::min()});
    worst = std::max(worst, std::fabs(cache.expbeta[i] - fresh.expbeta[i]) / sb);
    worst = std::max(worst, std::fabs(cache.delta[i] - fresh.delta[i]) / sd);
    worst = std::max(worst, std::fabs(cache.pendant[i] - fresh.pendant[i]));
  }
  return worst;
}

EdgePrior EdgePrior::bernoulli(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("Bernoulli edge prior needs 0 < p < 1");
  EdgePrior prior;
  prior.kind = Kind::bernoulli;
  prior.p = p;
  return prior;
}

double EdgePrior::log_prior(const AdjacencyMatrix& a, const ObservedStudy& study) const {
  if (kind == Kind::uniform) return 0.0;
  const double extra = static_cast<double>(a.edge_count()) -
                       static_cast<double>(study.recruitment_adjacency().edge_count());
  return extra * std::log(p / (1.0 - p));
}

double EdgePrior::move_delta(const ToggleMove& move) const {
  if (kind == Kind::uniform) return 0.0;
  const double step = std::log(p / (1.0 - p));
  return move.kind == MoveKind::add ? step : -step;
}

double log_posterior(const AdjacencyMatrix& a, const ObservedStudy& study, const LikelihoodWorkspace& ws,
                     const EdgePrior& prior) {
  return log_likelihood_matrix(a, ws) + prior.log_prior(a, study);
}

}  // namespace rdsnet
