#pragma once

// Coherent-state families over the analytic (closed-form) eigenbasis.
//
// A CoherentState is a finite coefficient vector over enumerated labels of the
// analytic eigenbasis; the truncation error of the dropped tail is tracked as
// an explicit bound.  In this coefficient space the shifted Hamiltonians are
// diagonal, so time evolution, action identities and resolution checks reduce
// to exact arithmetic on the coefficients; `materialize` maps a state back
// onto the truncated numerical space for cross checks.
//
// Phase conventions (they fix the direction of the stability shift):
//   - boson labels carry exp(-i n gamma)      -> gamma  shifts by +omega t
//   - fixed-slot two-part states carry
//     exp(+i m gamma') on the summed slot     -> gamma' shifts by -Omega t
//   - doubly summed states carry exp(-i m gamma') -> gamma' shifts by +Omega t
//   - degenerate labels carry exp(-i j theta); theta is inert under evolution.

#include <gkvcs/assembly.hpp>

#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <vector>

namespace gkvcs {

// Label layouts a coherent state can be expressed in.  The integers stored per
// label are, in order:
//   Boson:       n_1 .. n_N
//   BosonDeg:    n, j            (j = 1..d(n), composition index)
//   Cm:          m
//   CmBoson:     m, n_1 .. n_N
//   CmBosonDeg:  m, n, j
enum class LabelKind { Boson, BosonDeg, Cm, CmBoson, CmBosonDeg };

struct CoherentState {
  LabelKind kind = LabelKind::Boson;
  std::vector<std::vector<int>> labels;
  Vector coeffs;
  std::vector<double> energy;  // shifted-Hamiltonian eigenvalue per label (evolution phase)
  double fixed_energy = 0;     // complementary-part eigenvalue for fixed-slot states
  std::vector<int> fixed_label;  // the frozen quantum numbers of a fixed-slot state
  double tail_bound = 0;         // bound on the analytic l2 mass beyond the cutoffs

  double norm2() const { return coeffs.squaredNorm(); }
};

namespace vcs {

inline double normalization(double J) {
  if (J < 0) throw ParameterError("normalization: J < 0");
  return std::exp(J);
}

inline double log_factorial(int n) { return std::lgamma(static_cast<double>(n) + 1.0); }

// Mass of the exp(-J) J^n / n! weights beyond n_max:
//   sum_{n>n_max} <= e^{-J} J^{n_max+1}/(n_max+1)! * 1/(1 - J/(n_max+2)),
// valid (and required) for J < n_max + 2.
inline double tail_bound(double J, int n_max) {
  if (J < 0 || n_max < 0) throw ParameterError("tail_bound: bad arguments");
  if (J == 0) return 0;
  if (J >= n_max + 2) throw ParameterError("tail_bound: cutoff too small for J (need J < n_max + 2)");
  double log_head = -J + (n_max + 1) * std::log(J) - log_factorial(n_max + 1);
  return std::exp(log_head) / (1.0 - J / (n_max + 2));
}

// Same, but falls back to the trivial bound 1 (total mass) outside the
// formula's domain; the family constructors use this so they stay usable at
// arbitrary quadrature nodes.
inline double tail_bound_or_one(double J, int n_max) {
  if (J >= n_max + 2) return 1.0;
  return std::min(1.0, tail_bound(J, n_max));
}

namespace detail {

// exp(-J/2) J^{n/2} / sqrt(n!), computed in log space.
inline double poisson_amp(double J, int n) {
  if (J == 0) return n == 0 ? 1.0 : 0.0;
  return std::exp(-J / 2 + 0.5 * (n * std::log(J) - log_factorial(n)));
}

inline void check_sizes(std::size_t nj, std::size_t ng, std::size_t nw, std::size_t nc) {
  if (nj != ng || nj != nw || nj != nc || nj == 0)
    throw ParameterError("coherent family: J/gamma/omega/cutoff arity mismatch");
}

}  // namespace detail

// Single-mode Gazeau-Klauder state: c_n = e^{-J/2} J^{n/2} e^{-i n gamma} / sqrt(n!).
inline CoherentState gk_single(double J, double gamma, double omega, int n_max) {
  if (omega <= 0) throw ParameterError("gk_single: omega <= 0");
  CoherentState s;
  s.kind = LabelKind::Boson;
  s.coeffs = Vector::Zero(n_max + 1);
  for (int n = 0; n <= n_max; ++n) {
    s.labels.push_back({n});
    s.coeffs(n) = detail::poisson_amp(J, n) * std::exp(Complex(0, -n * gamma));
    s.energy.push_back(omega * n);
  }
  s.tail_bound = tail_bound_or_one(J, n_max);
  return s;
}

// Multimode product state over N independent modes; labels enumerate the
// occupation box row-major in declared mode order.
inline CoherentState gk_multimode(const std::vector<double>& J, const std::vector<double>& gamma,
                                  const std::vector<double>& omega, const std::vector<int>& n_max) {
  detail::check_sizes(J.size(), gamma.size(), omega.size(), n_max.size());
  std::size_t N = J.size();
  std::vector<CoherentState> single;
  for (std::size_t l = 0; l < N; ++l)
    single.push_back(gk_single(J[l], gamma[l], omega[l], n_max[l]));

  CoherentState s;
  s.kind = LabelKind::Boson;
  Eigen::Index dim = 1;
  for (auto& f : single) dim *= f.coeffs.size();
  s.coeffs = Vector::Zero(dim);
  std::vector<int> n(N, 0);
  for (Eigen::Index idx = 0; idx < dim; ++idx) {
    Complex c = 1.0;
    double e = 0;
    for (std::size_t l = 0; l < N; ++l) {
      c *= single[l].coeffs(n[l]);
      e += omega[l] * n[l];
    }
    s.labels.push_back(n);
    s.coeffs(idx) = c;
    s.energy.push_back(e);
    for (std::size_t l = N; l-- > 0;) {  // row-major increment
      if (++n[l] <= n_max[l]) break;
      n[l] = 0;
    }
  }
  double keep = 1.0;
  for (std::size_t l = 0; l < N; ++l) keep *= 1.0 - tail_bound_or_one(J[l], n_max[l]);
  s.tail_bound = 1.0 - keep;
  return s;
}

// Degenerate-spectrum state for N equal-frequency modes: labels (n, j) with
// j = 1..d(n),  c_{n,j} = e^{-J/2} J^{n/2} e^{-i n gamma} e^{-i j theta} / sqrt(n! d(n)).
inline CoherentState gk_degenerate(double J, double gamma, double theta, double omega, int N, int n_max) {
  if (omega <= 0 || N < 1) throw ParameterError("gk_degenerate: bad arguments");
  CoherentState s;
  s.kind = LabelKind::BosonDeg;
  std::vector<Complex> cs;
  for (int n = 0; n <= n_max; ++n) {
    double d = static_cast<double>(degeneracy(n, N));
    double amp = detail::poisson_amp(J, n) / std::sqrt(d);
    for (int j = 1; j <= static_cast<int>(d); ++j) {
      s.labels.push_back({n, j});
      cs.push_back(amp * std::exp(Complex(0, -n * gamma - j * theta)));
      s.energy.push_back(omega * n);
    }
  }
  s.coeffs = Vector::Zero(static_cast<Eigen::Index>(cs.size()));
  for (std::size_t i = 0; i < cs.size(); ++i) s.coeffs(static_cast<Eigen::Index>(i)) = cs[i];
  s.tail_bound = tail_bound_or_one(J, n_max);
  return s;
}

// Same, but taking the per-mode frequency list and enforcing equality.
inline CoherentState gk_degenerate(double J, double gamma, double theta, const std::vector<double>& omega,
                                   int n_max) {
  if (omega.empty()) throw ParameterError("gk_degenerate: empty frequency list");
  for (double w : omega)
    if (std::abs(w - omega[0]) > 1e-12 * std::abs(omega[0]))
      throw ContractError("gk_degenerate: frequencies are not all equal");
  return gk_degenerate(J, gamma, theta, omega[0], static_cast<int>(omega.size()), n_max);
}

// --- two-part families -------------------------------------------------------
//
// These hold one quantum number fixed and sum over the complementary one.  A
// single member is not normalized; the family is normalized globally:
//   sum over members of norm2() -> 1.
// The summed slot carries exp(+i m gamma'), so the stability shift under the
// c.m. part is gamma' -> gamma' - Omega t (and symmetrically for the mirror).

// Fixed boson occupation [n], summed over the c.m. label m.
inline CoherentState two_sector_fixed_n(const std::vector<double>& J, const std::vector<double>& gamma,
                                        const std::vector<double>& omega, const std::vector<int>& n,
                                        double J_prime, double gamma_prime, double Omega, int m_max) {
  detail::check_sizes(J.size(), gamma.size(), omega.size(), n.size());
  if (Omega <= 0) throw ParameterError("two_sector_fixed_n: Omega <= 0");
  Complex pref = 1.0;
  double e_fixed = 0;
  for (std::size_t l = 0; l < J.size(); ++l) {
    if (n[l] < 0) throw ParameterError("two_sector_fixed_n: negative occupation");
    pref *= detail::poisson_amp(J[l], n[l]) * std::exp(Complex(0, -n[l] * gamma[l]));
    e_fixed += omega[l] * n[l];
  }
  CoherentState s;
  s.kind = LabelKind::Cm;
  s.fixed_label = n;
  s.fixed_energy = e_fixed;
  s.coeffs = Vector::Zero(m_max + 1);
  for (int m = 0; m <= m_max; ++m) {
    s.labels.push_back({m});
    s.coeffs(m) = pref * detail::poisson_amp(J_prime, m) * std::exp(Complex(0, +m * gamma_prime));
    s.energy.push_back(Omega * m);
  }
  s.tail_bound = std::norm(pref) * tail_bound_or_one(J_prime, m_max);
  return s;
}

// Fixed c.m. label m, summed over the boson occupation box.
inline CoherentState two_sector_fixed_m(const std::vector<double>& J, const std::vector<double>& gamma,
                                        const std::vector<double>& omega, const std::vector<int>& n_max,
                                        double J_prime, double gamma_prime, double Omega, int m) {
  if (Omega <= 0 || m < 0) throw ParameterError("two_sector_fixed_m: bad arguments");
  Complex pref = detail::poisson_amp(J_prime, m) * std::exp(Complex(0, +m * gamma_prime));
  CoherentState s = gk_multimode(J, gamma, omega, n_max);
  s.tail_bound *= std::norm(pref);
  s.coeffs *= pref;
  s.fixed_label = {m};
  s.fixed_energy = Omega * m;
  return s;
}

// Degenerate mirror pair: fixed (n, j) / fixed m, equal-frequency bosons with
// the theta phase and the 1/sqrt(d(n)) weight.
inline CoherentState two_sector_deg_fixed_n(double J, double gamma, double theta, double omega, int N, int n,
                                            int j, double J_prime, double gamma_prime, double Omega,
                                            int m_max) {
  if (Omega <= 0 || n < 0) throw ParameterError("two_sector_deg_fixed_n: bad arguments");
  double d = static_cast<double>(degeneracy(n, N));
  if (j < 1 || j > static_cast<int>(d)) throw ParameterError("two_sector_deg_fixed_n: j out of range");
  Complex pref = detail::poisson_amp(J, n) / std::sqrt(d) * std::exp(Complex(0, -n * gamma - j * theta));
  CoherentState s;
  s.kind = LabelKind::Cm;
  s.fixed_label = {n, j};
  s.fixed_energy = omega * n;
  s.coeffs = Vector::Zero(m_max + 1);
  for (int m = 0; m <= m_max; ++m) {
    s.labels.push_back({m});
    s.coeffs(m) = pref * detail::poisson_amp(J_prime, m) * std::exp(Complex(0, +m * gamma_prime));
    s.energy.push_back(Omega * m);
  }
  s.tail_bound = std::norm(pref) * tail_bound_or_one(J_prime, m_max);
  return s;
}

inline CoherentState two_sector_deg_fixed_m(double J, double gamma, double theta, double omega, int N,
                                            int n_max, double J_prime, double gamma_prime, double Omega,
                                            int m) {
  if (Omega <= 0 || m < 0) throw ParameterError("two_sector_deg_fixed_m: bad arguments");
  Complex pref = detail::poisson_amp(J_prime, m) * std::exp(Complex(0, +m * gamma_prime));
  CoherentState s = gk_degenerate(J, gamma, theta, omega, N, n_max);
  s.coeffs *= pref;
  s.tail_bound *= std::norm(pref);
  s.fixed_label = {m};
  s.fixed_energy = Omega * m;
  return s;
}

// --- doubly summed (multidimensional) families -------------------------------
// Both quantum numbers are summed; the c.m. slot carries exp(-i m gamma'), so
// the stability shift under the full shifted Hamiltonian is
// (gamma' + Omega t, gamma_l + omega_l t).

inline CoherentState vcs_multidim(const std::vector<double>& J, const std::vector<double>& gamma,
                                  const std::vector<double>& omega, const std::vector<int>& n_max,
                                  double J_prime, double gamma_prime, double Omega, int m_max) {
  if (Omega <= 0) throw ParameterError("vcs_multidim: Omega <= 0");
  CoherentState boson = gk_multimode(J, gamma, omega, n_max);
  CoherentState s;
  s.kind = LabelKind::CmBoson;
  Eigen::Index bd = boson.coeffs.size();
  s.coeffs = Vector::Zero((m_max + 1) * bd);
  for (int m = 0; m <= m_max; ++m) {
    Complex cm = detail::poisson_amp(J_prime, m) * std::exp(Complex(0, -m * gamma_prime));
    for (Eigen::Index b = 0; b < bd; ++b) {
      std::vector<int> lab;
      lab.push_back(m);
      lab.insert(lab.end(), boson.labels[static_cast<std::size_t>(b)].begin(),
                 boson.labels[static_cast<std::size_t>(b)].end());
      s.labels.push_back(std::move(lab));
      s.coeffs(m * bd + b) = cm * boson.coeffs(b);
      s.energy.push_back(Omega * m + boson.energy[static_cast<std::size_t>(b)]);
    }
  }
  s.tail_bound = 1.0 - (1.0 - boson.tail_bound) * (1.0 - tail_bound_or_one(J_prime, m_max));
  return s;
}

inline CoherentState vcs_multidim_degenerate(double J, double gamma, double theta, double omega, int N,
                                             int n_max, double J_prime, double gamma_prime, double Omega,
                                             int m_max) {
  if (Omega <= 0) throw ParameterError("vcs_multidim_degenerate: Omega <= 0");
  CoherentState boson = gk_degenerate(J, gamma, theta, omega, N, n_max);
  CoherentState s;
  s.kind = LabelKind::CmBosonDeg;
  Eigen::Index bd = boson.coeffs.size();
  s.coeffs = Vector::Zero((m_max + 1) * bd);
  for (int m = 0; m <= m_max; ++m) {
    Complex cm = detail::poisson_amp(J_prime, m) * std::exp(Complex(0, -m * gamma_prime));
    for (Eigen::Index b = 0; b < bd; ++b) {
      s.labels.push_back({m, boson.labels[static_cast<std::size_t>(b)][0],
                          boson.labels[static_cast<std::size_t>(b)][1]});
      s.coeffs(m * bd + b) = cm * boson.coeffs(b);
      s.energy.push_back(Omega * m + boson.energy[static_cast<std::size_t>(b)]);
    }
  }
  s.tail_bound = 1.0 - (1.0 - boson.tail_bound) * (1.0 - tail_bound_or_one(J_prime, m_max));
  return s;
}

// --- helpers over whole families ----------------------------------------------

// A coherent state attached to one sector slot of the 2^M-component vector
// state; all other slots are zero.
struct SectorState {
  SectorId sector;
  CoherentState state;
};

inline SectorState vcs_vector(const SectorId& sector, CoherentState state) {
  return {sector, std::move(state)};
}

// Apply exp(-i H' t) in coefficient space (exact: H' is diagonal there).
inline CoherentState evolve(const CoherentState& s, double t) {
  CoherentState out = s;
  for (Eigen::Index i = 0; i < out.coeffs.size(); ++i)
    out.coeffs(i) *= std::exp(Complex(0, -s.energy[static_cast<std::size_t>(i)] * t));
  return out;
}

// <a|b> in coefficient space; labels must match entrywise.
inline Complex overlap(const CoherentState& a, const CoherentState& b) {
  if (a.labels != b.labels || a.fixed_label != b.fixed_label)
    throw ParameterError("overlap: coherent states live on different label sets");
  return a.coeffs.dot(b.coeffs);
}

// sum_i |c_i|^2 E_i, the shifted-Hamiltonian expectation of one member.
inline double action_value(const CoherentState& s) {
  double acc = 0;
  for (Eigen::Index i = 0; i < s.coeffs.size(); ++i)
    acc += std::norm(s.coeffs(i)) * s.energy[static_cast<std::size_t>(i)];
  return acc;
}

// Map a coherent state onto the truncated numerical space of `spec`, using
// the displaced analytic eigenvectors of the given model variant and sector.
// The fermion factor is excluded (it is common to every term).
inline StateVector materialize(const CoherentState& s, Variant variant, const ModelParams& p,
                               const TruncationSpec& spec, const SectorId& k) {
  Vector acc = Vector::Zero(static_cast<Eigen::Index>(spec.space_dim()));
  auto term = [&](Eigen::Index i, std::optional<int> m, const std::vector<int>* n, std::optional<int> deg_n,
                  std::optional<int> deg_j) {
    StateVector e = deg_n ? displaced_eigenvector_degenerate(variant, p, spec, k, m, *deg_n, *deg_j)
                          : displaced_eigenvector(variant, p, spec, k, m, *n);
    acc += s.coeffs(i) * e.v;
  };
  // Fixed-m states (two_sector_fixed_m and its degenerate mirror) reuse the
  // Boson/BosonDeg layouts with the frozen c.m. label in fixed_label.
  std::optional<int> frozen_m;
  if (s.kind != LabelKind::Cm && s.fixed_label.size() == 1) frozen_m = s.fixed_label[0];
  for (Eigen::Index i = 0; i < s.coeffs.size(); ++i) {
    const auto& lab = s.labels[static_cast<std::size_t>(i)];
    switch (s.kind) {
      case LabelKind::Boson:
        term(i, frozen_m, &lab, std::nullopt, std::nullopt);
        break;
      case LabelKind::BosonDeg:
        term(i, frozen_m, nullptr, lab[0], lab[1]);
        break;
      case LabelKind::Cm: {
        if (s.fixed_label.size() == 2)  // degenerate fixed (n, j)
          term(i, lab[0], nullptr, s.fixed_label[0], s.fixed_label[1]);
        else
          term(i, lab[0], &s.fixed_label, std::nullopt, std::nullopt);
        break;
      }
      case LabelKind::CmBoson: {
        std::vector<int> n(lab.begin() + 1, lab.end());
        term(i, lab[0], &n, std::nullopt, std::nullopt);
        break;
      }
      case LabelKind::CmBosonDeg:
        term(i, lab[0], nullptr, lab[1], lab[2]);
        break;
    }
  }
  return {acc, spec.tag()};
}

}  // namespace vcs
}  // namespace gkvcs
