#include "potfuse/scoring.hpp"

#include <algorithm>
#include <cmath>

#include "potfuse/error.hpp"

namespace potfuse {
namespace {

Matrix projections(const LinearModel& model, const TrainSet& bag, int label) {
  std::vector<Eigen::Index> rows;
  for (Eigen::Index i = 0; i < bag.size(); ++i) {
    if (label == 0 || bag.labels[static_cast<std::size_t>(i)] == label) rows.push_back(i);
  }
  const Matrix& basis = model.basis().matrix();
  Matrix out(static_cast<Eigen::Index>(rows.size()), basis.cols());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    out.row(static_cast<Eigen::Index>(r)) = bag.points.row(rows[r]) * basis;
  }
  return out;
}

std::vector<double> class_discriminants(const LinearModel& model, const TrainSet& bag, int label) {
  std::vector<double> out;
  for (Eigen::Index i = 0; i < bag.size(); ++i) {
    if (bag.labels[static_cast<std::size_t>(i)] == label) {
      out.push_back(model.discriminant(bag.points.row(i).transpose()));
    }
  }
  return out;
}

const Kde1D& require(const std::optional<Kde1D>& k) {
  if (!k) throw InternalError("member has no discriminant densities for this strategy");
  return *k;
}

}  // namespace

bool Strategy::is_potential() const {
  return kind == StrategyKind::KE || kind == StrategyKind::KA || kind == StrategyKind::KB ||
         kind == StrategyKind::KC;
}

Strategy parse_strategy(std::string_view name, double zeta) {
  if (!(zeta > 0.0) || !std::isfinite(zeta)) throw InputError("zeta must be positive");
  static constexpr std::pair<std::string_view, StrategyKind> kNames[] = {
      {"avg", StrategyKind::Avg}, {"vote", StrategyKind::Vote}, {"sigmoid", StrategyKind::Sigmoid},
      {"param", StrategyKind::Param}, {"ke", StrategyKind::KE},   {"ka", StrategyKind::KA},
      {"kb", StrategyKind::KB},     {"kc", StrategyKind::KC}};
  for (const auto& [n, kind] : kNames) {
    if (n == name) return Strategy{kind, zeta};
  }
  throw InputError("unknown strategy '" + std::string(name) +
                   "' (expected avg, vote, sigmoid, param, ke, ka, kb, kc)");
}

std::string_view strategy_name(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::Avg: return "avg";
    case StrategyKind::Vote: return "vote";
    case StrategyKind::Sigmoid: return "sigmoid";
    case StrategyKind::Param: return "param";
    case StrategyKind::KE: return "ke";
    case StrategyKind::KA: return "ka";
    case StrategyKind::KB: return "kb";
    case StrategyKind::KC: return "kc";
  }
  return "?";
}

double projected_pdf(const ProjectedDensity& density, const Vector& projection) {
  return std::visit([&](const auto& d) { return d.pdf(projection); }, density);
}

double posterior(double w_pos, double w_neg, const ClassPriors& priors) {
  const double num = w_pos * priors.pos;
  const double den = num + w_neg * priors.neg;
  if (!(den >= 1e-300)) return priors.pos;
  return num / den;
}

double softmax_potential(double a_pos, double a_neg) {
  // e^a / (e^a + e^b) - 1/2 == tanh((a - b) / 2) / 2, which cannot overflow.
  const double a = std::min(a_pos, kExpClamp);
  const double b = std::min(a_neg, kExpClamp);
  return 0.5 * std::tanh(0.5 * (a - b));
}

double ke_potential(double w_pos, double w_neg, const ClassPriors& priors) {
  return softmax_potential(w_pos * priors.pos, w_neg * priors.neg);
}

double ka_exponent(double y_x, double y_peak) {
  return 1.0 / (1.0 + std::exp(std::min(y_peak, kExpClamp) - std::min(y_x, kExpClamp)));
}

double ka_potential(double p, double t) {
  // P^t / (P^t + Q^t) rewritten as 1 / (1 + (Q/P)^t); P = 0 gives -0.5.
  const double q = 1.0 - p;
  return 1.0 / (1.0 + std::pow(q / p, t)) - 0.5;
}

double ka_potential_weighted(double a_pos, double a_neg, double t) {
  // Same value as ka_potential(a_pos / (a_pos + a_neg), t), written with the
  // log odds so that exchanging the classes negates the result exactly, even
  // where 1 - P would round to 0.
  if (!(a_pos + a_neg >= 1e-300)) return 0.0;
  return 0.5 * std::tanh(0.5 * t * (std::log(a_pos) - std::log(a_neg)));
}

double kb_kc_potential(double w_pos, double w_neg, double y_pos, double y_neg,
                       const ClassPriors& priors) {
  return softmax_potential(w_pos * y_pos * priors.pos, w_neg * y_neg * priors.neg);
}

double sigmoid_score(double omega) {
  // 1 / (1 + e^-w) - 1/2 via tanh for saturation without overflow.
  return 0.5 * std::tanh(0.5 * omega);
}

double parametric_score(double omega, double zeta) {
  if (!(zeta > 0.0)) throw InputError("parametric potential: zeta must be positive");
  return omega * std::exp(-zeta * omega * omega + 0.5) * std::sqrt(2.0 * zeta);
}

double ScoredMember::posterior_from_omega(double omega) const {
  return posterior(require(w_pos).pdf(omega), require(w_neg).pdf(omega), priors);
}

double score_average(const ScoredMember& m, const Vector& x) { return m.discriminant(x); }

double score_vote(const ScoredMember& m, const Vector& x) {
  return static_cast<double>(sign_label(m.discriminant(x)));
}

double score_sigmoid(const ScoredMember& m, const Vector& x) {
  return sigmoid_score(m.discriminant(x));
}

double score_parametric(const ScoredMember& m, const Vector& x, double zeta) {
  return parametric_score(m.discriminant(x), zeta);
}

double potential_ke(const ScoredMember& m, const Vector& x) {
  const double omega = m.discriminant(x);
  return ke_potential(require(m.w_pos).pdf(omega), require(m.w_neg).pdf(omega), m.priors);
}

double potential_ka(const ScoredMember& m, const Vector& x) {
  if (!m.y_global) throw InternalError("KA member has no projected density");
  const double omega = m.discriminant(x);
  const double y = m.y_global->pdf(m.model.project(x));
  const double t = ka_exponent(y, m.y_peak);
  const double a_pos = require(m.w_pos).pdf(omega) * m.priors.pos;
  const double a_neg = require(m.w_neg).pdf(omega) * m.priors.neg;
  if (!(a_pos + a_neg >= 1e-300)) {
    // Posterior falls back to the priors.
    return ka_potential_weighted(m.priors.pos, m.priors.neg, t);
  }
  return ka_potential_weighted(a_pos, a_neg, t);
}

double potential_kb_kc(const ScoredMember& m, const Vector& x) {
  if (!m.y_pos || !m.y_neg) throw InternalError("KB/KC member has no class projected densities");
  const double omega = m.discriminant(x);
  const Vector proj = m.model.project(x);
  return kb_kc_potential(require(m.w_pos).pdf(omega), require(m.w_neg).pdf(omega),
                         projected_pdf(*m.y_pos, proj), projected_pdf(*m.y_neg, proj), m.priors);
}

double ScoredMember::score(const Vector& x) const {
  switch (strategy.kind) {
    case StrategyKind::Avg: return score_average(*this, x);
    case StrategyKind::Vote: return score_vote(*this, x);
    case StrategyKind::Sigmoid: return score_sigmoid(*this, x);
    case StrategyKind::Param: return score_parametric(*this, x, strategy.zeta);
    case StrategyKind::KE: return potential_ke(*this, x);
    case StrategyKind::KA: return potential_ka(*this, x);
    case StrategyKind::KB:
    case StrategyKind::KC: return potential_kb_kc(*this, x);
  }
  throw InternalError("unknown strategy");
}

ScoredMember ScoredMember::swapped_classes() const {
  ScoredMember s = *this;
  s.priors = priors.swapped();
  std::swap(s.w_pos, s.w_neg);
  std::swap(s.y_pos, s.y_neg);
  return s;
}

ScoredMember fit_member(const LinearModel& model, const TrainSet& bag, const Strategy& strategy) {
  validate(bag);
  if (bag.dim() != model.dim()) throw InputError("fit_member: bag dimension does not match model");
  ScoredMember m{model, strategy, {}, {}, {}, {}, {}, {}, 0.0};
  const auto n = static_cast<double>(bag.size());
  const std::size_t n_pos = bag.count(1);
  m.priors.pos = static_cast<double>(n_pos) / n;
  m.priors.neg = static_cast<double>(bag.labels.size() - n_pos) / n;
  if (!strategy.needs_class_densities()) return m;

  if (n_pos == 0 || n_pos == bag.labels.size()) {
    throw FitError("fit_member: potential strategies need both classes in the bag");
  }
  m.w_pos = Kde1D::fit(class_discriminants(model, bag, 1));
  m.w_neg = Kde1D::fit(class_discriminants(model, bag, -1));

  switch (strategy.kind) {
    case StrategyKind::KA:
      m.y_global = fit_gaussian_mle(projections(model, bag, 0));
      m.y_peak = m.y_global->pdf(m.y_global->mean());
      break;
    case StrategyKind::KB:
      m.y_pos = fit_gaussian_mle(projections(model, bag, 1));
      m.y_neg = fit_gaussian_mle(projections(model, bag, -1));
      break;
    case StrategyKind::KC:
      m.y_pos = NaiveKde::fit(projections(model, bag, 1));
      m.y_neg = NaiveKde::fit(projections(model, bag, -1));
      break;
    default: break;
  }
  return m;
}

}  // namespace potfuse
