#pragma once

#include "dynsis/compartments.hpp"

namespace dynsis {

/// Population-level mixing terms that close the effective degree model.
///
/// g_s (g_i) is the rate at which a susceptible neighbour of an S (I) node
/// becomes infected; p_s (p_i) is the probability that a newly created link
/// lands on a free stub of a susceptible (infected) node.
struct MixingCoefficients {
  double g_s = 0.0;
  double g_i = 0.0;
  double p_s = 0.0;
  double p_i = 0.0;
};

enum class TransitionKind {
  Infection,
  Recovery,
  NeighbourRecovery,
  NeighbourInfection,
  LoseSusceptibleLink,
  LoseInfectedLink,
  GainSusceptibleLink,
  GainInfectedLink,
};

/// Enumerates every way a node in `from` can change compartment, calling
/// `visit(kind, to, per_capita_rate)` for each transition with a nonzero rate.
/// Mixing terms can be slightly negative when the state carries small
/// negative transients; those rates are passed through unchanged.
///
/// This catalog is the single description of the model: the ODE right-hand
/// side and the linearised transition matrix V are both generated from it.
template <class Visitor>
void for_each_transition(const Compartment& from, const ModelParams& p, const MixingCoefficients& mix,
                         Visitor&& visit) {
  const int s = from.s;
  const int i = from.i;
  const int free_stubs = p.max_degree - (s + i);
  const Status x = from.status;
  const double g = x == Status::S ? mix.g_s : mix.g_i;

  auto emit = [&](TransitionKind kind, Compartment to, double rate) {
    if (rate != 0.0) visit(kind, to, rate);
  };

  if (x == Status::S)
    emit(TransitionKind::Infection, {Status::I, s, i}, p.beta * i);
  else
    emit(TransitionKind::Recovery, {Status::S, s, i}, p.gamma);

  if (i > 0) emit(TransitionKind::NeighbourRecovery, {x, s + 1, i - 1}, p.gamma * i);
  if (s > 0) emit(TransitionKind::NeighbourInfection, {x, s - 1, i + 1}, g * s);
  if (s > 0) emit(TransitionKind::LoseSusceptibleLink, {x, s - 1, i}, p.omega * s);
  if (i > 0) emit(TransitionKind::LoseInfectedLink, {x, s, i - 1}, p.omega * i);
  if (free_stubs > 0) {
    emit(TransitionKind::GainSusceptibleLink, {x, s + 1, i}, p.alpha * free_stubs * mix.p_s);
    emit(TransitionKind::GainInfectedLink, {x, s, i + 1}, p.alpha * free_stubs * mix.p_i);
  }
}

}  // namespace dynsis
