#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "potfuse/density.hpp"
#include "potfuse/linear_models.hpp"

namespace potfuse {

/// How a member turns its discriminant into a score before averaging.
enum class StrategyKind { Avg, Vote, Sigmoid, Param, KE, KA, KB, KC };

struct Strategy {
  StrategyKind kind = StrategyKind::KE;
  double zeta = 0.5;  // only used by Param

  bool is_potential() const;
  bool needs_class_densities() const { return is_potential(); }
};

/// CLI names: avg, vote, sigmoid, param, ke, ka, kb, kc.
Strategy parse_strategy(std::string_view name, double zeta = 0.5);
std::string_view strategy_name(StrategyKind kind);

/// Class priors estimated as class frequency in the bag.
struct ClassPriors {
  double pos = 0.5;
  double neg = 0.5;

  ClassPriors swapped() const { return {neg, pos}; }
};

using ProjectedDensity = std::variant<GaussianMle, NaiveKde>;
double projected_pdf(const ProjectedDensity& density, const Vector& projection);

/// Exponent arguments are clamped to this before exp().
inline constexpr double kExpClamp = 700.0;

// Closed-form building blocks. Each takes already-evaluated densities so that
// the potentials can be checked in isolation from any fitted estimator.

/// w_pos*p_pos / (w_pos*p_pos + w_neg*p_neg); falls back to p_pos when the
/// denominator is below 1e-300.
double posterior(double w_pos, double w_neg, const ClassPriors& priors);

/// exp(a_pos) / (exp(a_pos) + exp(a_neg)) - 0.5 with both arguments clamped.
double softmax_potential(double a_pos, double a_neg);

/// Beta potential (KE) from class-conditional densities of the discriminant.
double ke_potential(double w_pos, double w_neg, const ClassPriors& priors);

/// Exponent t = exp(y) / (exp(y) + exp(y_peak)).
double ka_exponent(double y_x, double y_peak);

/// P^t / (P^t + (1-P)^t) - 0.5.
double ka_potential(double p, double t);
/// KA from the prior-weighted class densities a_m = w_m * p_m instead of P.
double ka_potential_weighted(double a_pos, double a_neg, double t);

/// Epsilon-2 potential (KB/KC): softmax over w_m * y_m * p_m.
double kb_kc_potential(double w_pos, double w_neg, double y_pos, double y_neg,
                       const ClassPriors& priors);

double sigmoid_score(double omega);
double parametric_score(double omega, double zeta);

/// A base model plus whatever density estimates its strategy needs.
struct ScoredMember {
  LinearModel model;
  Strategy strategy;
  ClassPriors priors;
  std::optional<Kde1D> w_pos, w_neg;
  std::optional<GaussianMle> y_global;
  std::optional<ProjectedDensity> y_pos, y_neg;
  double y_peak = 0.0;  // y_global evaluated at its mean

  double discriminant(const Vector& x) const { return model.discriminant(x); }
  double posterior_from_omega(double omega) const;
  double score(const Vector& x) const;

  /// Copy with the roles of the two classes exchanged.
  ScoredMember swapped_classes() const;
};

/// Fits priors and the densities required by `strategy` on the bag that
/// trained `model`. Throws FitError if a potential strategy sees a single class.
ScoredMember fit_member(const LinearModel& model, const TrainSet& bag, const Strategy& strategy);

double score_average(const ScoredMember& m, const Vector& x);
double score_vote(const ScoredMember& m, const Vector& x);
double score_sigmoid(const ScoredMember& m, const Vector& x);
double score_parametric(const ScoredMember& m, const Vector& x, double zeta);
double potential_ke(const ScoredMember& m, const Vector& x);
double potential_ka(const ScoredMember& m, const Vector& x);
double potential_kb_kc(const ScoredMember& m, const Vector& x);

}  // namespace potfuse
