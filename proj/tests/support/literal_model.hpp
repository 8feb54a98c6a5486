#pragma once

// Term-by-term transcription of the dynamic effective-degree equations, kept
// deliberately naive so it can serve as an oracle for the flux-form RHS.

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "dynsis/compartments.hpp"
#include "dynsis/ngm.hpp"

namespace dynsis::oracle {

inline std::vector<double> literal_rhs(const CompartmentIndex& index, const ModelParams& p, std::span<const double> x,
                                       std::optional<double> pinned_g_i = std::nullopt) {
  const int m = index.max_degree();
  auto S = [&](int s, int i) -> double {
    if (s < 0 || i < 0 || s + i > m) return 0.0;
    return x[index.index_of(Status::S, s, i)];
  };
  auto I = [&](int s, int i) -> double {
    if (s < 0 || i < 0 || s + i > m) return 0.0;
    return x[index.index_of(Status::I, s, i)];
  };

  double sum_jl_s = 0, sum_j_s = 0, sum_ll_s = 0, sum_j_i = 0, free_s = 0, free_i = 0;
  for (int j = 0; j <= m; ++j) {
    for (int l = 0; j + l <= m; ++l) {
      sum_jl_s += j * l * S(j, l);
      sum_j_s += j * S(j, l);
      sum_ll_s += l * l * S(j, l);
      sum_j_i += j * I(j, l);
      free_s += (m - (j + l)) * S(j, l);
      free_i += (m - (j + l)) * I(j, l);
    }
  }
  auto safe = [](double a, double b) { return b < 1e-12 ? 0.0 : a / b; };
  const double g_s = p.beta * safe(sum_jl_s, sum_j_s);
  const double g_i = pinned_g_i ? *pinned_g_i : p.beta * safe(sum_ll_s, sum_j_i);
  const double p_s = safe(free_s, free_s + free_i);
  const double p_i = safe(free_i, free_s + free_i);
  const double b = p.beta, g = p.gamma, a = p.alpha, w = p.omega;

  std::vector<double> out(index.size(), 0.0);
  for (int s = 0; s <= m; ++s) {
    for (int i = 0; s + i <= m; ++i) {
      const int k = s + i;
      out[index.index_of(Status::S, s, i)] =
          -b * i * S(s, i) + g * I(s, i) + g * ((i + 1) * S(s - 1, i + 1) - i * S(s, i)) +
          g_s * ((s + 1) * S(s + 1, i - 1) - s * S(s, i)) -
          w * (k * S(s, i) - (i + 1) * S(s, i + 1) - (s + 1) * S(s + 1, i)) - a * (m - k) * S(s, i) +
          a * (m - (k - 1)) * p_s * S(s - 1, i) + a * (m - (k - 1)) * p_i * S(s, i - 1);
      out[index.index_of(Status::I, s, i)] =
          b * i * S(s, i) - g * I(s, i) + g * ((i + 1) * I(s - 1, i + 1) - i * I(s, i)) +
          g_i * ((s + 1) * I(s + 1, i - 1) - s * I(s, i)) -
          w * (k * I(s, i) - (i + 1) * I(s, i + 1) - (s + 1) * I(s + 1, i)) - a * (m - k) * I(s, i) +
          a * (m - (k - 1)) * p_s * I(s - 1, i) + a * (m - (k - 1)) * p_i * I(s, i - 1);
    }
  }
  return out;
}

/// Central-difference Jacobian of literal_rhs at the DFE over the disease
/// states, with G_I held at its DFE limit beta.
inline Eigen::MatrixXd literal_jacobian(const DfeState& dfe, const ModelParams& p) {
  const int m = p.max_degree;
  const CompartmentIndex full(m);
  const DiseaseStateIndex disease(m);
  std::vector<double> base(full.size(), 0.0);
  for (int k = 0; k <= m; ++k) base[full.index_of(Status::S, k, 0)] = dfe.s_k0[static_cast<std::size_t>(k)];
  const double h = 1e-6 * dfe.population();
  const auto n = static_cast<Eigen::Index>(disease.size());
  Eigen::MatrixXd jac(n, n);
  for (Eigen::Index c = 0; c < n; ++c) {
    auto plus = base, minus = base;
    const auto col = full.index_of(disease.state(static_cast<std::size_t>(c)));
    plus[col] += h;
    minus[col] -= h;
    const auto fp = literal_rhs(full, p, plus, p.beta);
    const auto fm = literal_rhs(full, p, minus, p.beta);
    for (Eigen::Index r = 0; r < n; ++r) {
      const auto row = full.index_of(disease.state(static_cast<std::size_t>(r)));
      jac(r, c) = (fp[row] - fm[row]) / (2 * h);
    }
  }
  return jac;
}

}  // namespace dynsis::oracle
