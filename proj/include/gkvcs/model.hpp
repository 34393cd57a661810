#ifndef GKVCS_MODEL_HPP
#define GKVCS_MODEL_HPP

// Physical parameters, fermionic sector arithmetic, degeneracy counting,
// and the closed-form eigenvalue formulas for every model variant.

#include <gkvcs/fock.hpp>

#include <cmath>
#include <cstdint>
#include <numeric>

namespace gkvcs {

struct ModelParams {
  int N = 1;                                           // boson mode count
  int M = 1;                                           // fermion level count
  std::vector<double> omega;                           // size N, all > 0
  std::vector<double> epsilon;                         // size M
  std::vector<double> g_diag;                          // size M
  std::vector<std::vector<std::vector<double>>> g_extra;  // [i][alpha][alpha'], N x M x M
  std::optional<double> Omega;                         // c.m. frequency
  std::optional<double> g_prime;                       // c.m. coupling

  bool has_extra() const { return !g_extra.empty(); }

  void validate() const {
    if (N < 1 || M < 1) throw ParameterError("ModelParams: N, M >= 1 required");
    if (static_cast<int>(omega.size()) != N) throw ParameterError("ModelParams: omega size != N");
    for (double w : omega)
      if (!(w > 0)) throw ParameterError("ModelParams: omega must be positive");
    if (static_cast<int>(epsilon.size()) != M) throw ParameterError("ModelParams: epsilon size != M");
    if (static_cast<int>(g_diag.size()) != M) throw ParameterError("ModelParams: g_diag size != M");
    if (Omega && !(*Omega > 0)) throw ParameterError("ModelParams: Omega must be positive");
    if (has_extra()) {
      if (static_cast<int>(g_extra.size()) != N) throw ParameterError("ModelParams: g_extra first index != N");
      int count0 = -1;
      for (int i = 0; i < N; ++i) {
        if (static_cast<int>(g_extra[i].size()) != M) throw ParameterError("ModelParams: g_extra second index != M");
        int count = 0;
        for (int a = 0; a < M; ++a) {
          if (static_cast<int>(g_extra[i][a].size()) != M) throw ParameterError("ModelParams: g_extra third index != M");
          for (int b = 0; b < M; ++b) {
            if (a != b && g_extra[i][a][b] != 0.0) ++count;
            if (g_extra[i][a][b] != g_extra[i][b][a])
              throw ParameterError("ModelParams: g_extra must be symmetric in the level indices");
          }
        }
        if (count0 < 0) count0 = count;
        if (count != count0)
          throw ParameterError("ModelParams: extradiagonal coupling count must not depend on the mode index");
      }
    }
  }

  // Count of nonzero extradiagonal couplings at fixed mode index.
  int eps_NM() const {
    if (!has_extra()) return 0;
    int count = 0;
    for (int a = 0; a < M; ++a)
      for (int b = 0; b < M; ++b)
        if (a != b && g_extra[0][a][b] != 0.0) ++count;
    return count;
  }
};

struct SectorDerived {
  double eps_k = 0;
  double g_k = 0;
  int kappa_k = 0;
  int alpha_k = 0;
  int lambda_flag = 1;
  int f_flag = 0;
  std::vector<double> g_i_k;  // per boson mode
  int eps_NM = 0;
};

// kappa_jl = 1 iff k_j = 0 and k_l = 1 (the image of [k] under c†_j c_l exists).
inline int kappa_jl(const SectorId& k, int j, int l) {
  return (k.k(j) == 0 && k.k(l) == 1) ? 1 : 0;
}

inline SectorDerived sector_scalars(const ModelParams& p, const SectorId& k) {
  p.validate();
  if (k.levels != p.M) throw ParameterError("sector_scalars: sector width != M");
  SectorDerived d;
  for (int j = 1; j <= p.M; ++j) {
    d.eps_k += k.k(j) * p.epsilon[static_cast<std::size_t>(j - 1)];
    d.g_k += k.k(j) * p.g_diag[static_cast<std::size_t>(j - 1)];
    d.kappa_k += k.k(j);
  }
  d.lambda_flag = 1;
  for (int j = 1; j < p.M; ++j)
    if (k.k(j) != k.k(j + 1)) d.lambda_flag = 0;
  d.alpha_k = 1 - d.lambda_flag;
  d.f_flag = 1 - d.lambda_flag;
  d.eps_NM = p.eps_NM();
  d.g_i_k.assign(static_cast<std::size_t>(p.N), 0.0);
  if (p.has_extra()) {
    for (int i = 0; i < p.N; ++i)
      for (int j = 1; j <= p.M; ++j)
        for (int l = 1; l <= p.M; ++l)
          if (j != l && kappa_jl(k, j, l))
            d.g_i_k[static_cast<std::size_t>(i)] += p.g_extra[static_cast<std::size_t>(i)][static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(l - 1)];
  }
  return d;
}

// d(n) = C(n+N-1, n), exact; throws on overflow rather than wrapping.
inline std::uint64_t degeneracy(int n, int N) {
  if (n < 0 || N < 1) throw ParameterError("degeneracy: n >= 0, N >= 1 required");
  if (n + N - 1 > 62) throw ContractError("degeneracy: n+N-1 > 62, result may overflow");
  unsigned __int128 num = 1;
  for (int i = 1; i <= N - 1; ++i) {
    num *= static_cast<unsigned>(n + i);
    num /= static_cast<unsigned>(i);
  }
  if (num > UINT64_MAX) throw ContractError("degeneracy overflow");
  return static_cast<std::uint64_t>(num);
}

// Enumerate compositions of n into N ordered non-negative parts, ascending
// lexicographic order. Used as the j -> state bijection for degenerate labels.
inline std::vector<std::vector<int>> compositions(int n, int N) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(static_cast<std::size_t>(N), 0);
  std::function<void(int, int)> rec = [&](int pos, int left) {
    if (pos == N - 1) {
      cur[static_cast<std::size_t>(pos)] = left;
      out.push_back(cur);
      return;
    }
    for (int v = 0; v <= left; ++v) {
      cur[static_cast<std::size_t>(pos)] = v;
      rec(pos + 1, left - v);
    }
  };
  rec(0, n);
  return out;
}

inline double energy_diag(const ModelParams& p, const SectorId& k, const std::vector<int>& n) {
  if (static_cast<int>(n.size()) != p.N) throw ParameterError("energy_diag: occupation arity != N");
  auto d = sector_scalars(p, k);
  double e = d.eps_k;
  double inv = 0;
  for (int l = 0; l < p.N; ++l) {
    e += p.omega[static_cast<std::size_t>(l)] * n[static_cast<std::size_t>(l)];
    inv += 1.0 / p.omega[static_cast<std::size_t>(l)];
  }
  return e - d.g_k * d.g_k * inv;
}

// Equal-frequency variant, n = total quantum number.
inline double energy_diag_equal(const ModelParams& p, const SectorId& k, int n) {
  for (double w : p.omega)
    if (w != p.omega[0]) throw ContractError("energy_diag_equal: frequencies must be equal");
  auto d = sector_scalars(p, k);
  double w = p.omega[0];
  return w * n + d.eps_k - p.N * d.g_k * d.g_k / w;
}

inline double energy_cm_diag(const ModelParams& p, const SectorId& k, int m, const std::vector<int>& n) {
  if (!p.Omega || !p.g_prime) throw ParameterError("energy_cm_diag: Omega, g' required");
  auto d = sector_scalars(p, k);
  double gk = *p.g_prime * d.kappa_k;
  return *p.Omega * m - gk * gk / *p.Omega + energy_diag(p, k, n);
}

struct ExtradiagEnergies {
  double b_form = 0;      // displaced-oscillator form
  double alpha_form = 0;  // free energies plus alpha_[k] * lambda
  double lambda = 0;
};

// Closed forms for the extradiagonal Hamiltonian. These are paper-level
// predictions compared against numeric diagonalization, never asserted exact.
inline ExtradiagEnergies energy_extradiag(const ModelParams& p, const SectorId& k, int m, const std::vector<int>& n) {
  if (!p.Omega || !p.g_prime) throw ParameterError("energy_extradiag: Omega, g' required");
  if (static_cast<int>(n.size()) != p.N) throw ParameterError("energy_extradiag: occupation arity != N");
  auto d = sector_scalars(p, k);
  int eps = d.eps_NM;
  bool has_g = false;
  for (double g : d.g_i_k)
    if (g != 0.0) has_g = true;
  if (eps == 0) {
    if (has_g) throw ParameterError("energy_extradiag: couplings present but eps_NM = 0");
    eps = 1;  // decoupled limit convention, lambda contribution vanishes with g = g' = 0
  }
  ExtradiagEnergies e;
  double gp = *p.g_prime;
  e.b_form = *p.Omega * m - gp * gp / *p.Omega;
  double lam = -gp * gp / *p.Omega;
  double free_b = *p.Omega * m + d.eps_k;
  for (int i = 0; i < p.N; ++i) {
    double w = p.omega[static_cast<std::size_t>(i)];
    double gi = d.g_i_k[static_cast<std::size_t>(i)];
    e.b_form += eps * w * n[static_cast<std::size_t>(i)] - gi * gi / (eps * w);
    lam += (eps - 1) * w * n[static_cast<std::size_t>(i)] - gi * gi / (eps * w);
    free_b += w * n[static_cast<std::size_t>(i)];
  }
  if (d.eps_NM == 0 && gp == 0.0) lam = 0;
  e.lambda = lam;
  e.alpha_form = free_b + d.alpha_k * lam;
  return e;
}

struct GeneralEnergies {
  double e1 = 0;
  double e2 = 0;
  double total() const { return e1 + e2; }
};

// Full-interaction closed form, H = H1 + H2 with halved free parts.
// g_prime_1/g_prime_2 allow zeroing the inertial coupling in one part only.
inline GeneralEnergies energy_general(const ModelParams& p, const SectorId& k, int m, const std::vector<int>& n,
                                      std::optional<double> g_prime_1 = std::nullopt,
                                      std::optional<double> g_prime_2 = std::nullopt) {
  if (!p.Omega || !p.g_prime) throw ParameterError("energy_general: Omega, g' required");
  if (static_cast<int>(n.size()) != p.N) throw ParameterError("energy_general: occupation arity != N");
  auto d = sector_scalars(p, k);
  double gp1 = g_prime_1.value_or(*p.g_prime);
  double gp2 = g_prime_2.value_or(*p.g_prime);
  GeneralEnergies e;
  double gk1 = gp1 * d.kappa_k;
  e.e1 = *p.Omega * m / 2 - 2 * gk1 * gk1 / *p.Omega + d.eps_k / 2;
  for (int l = 0; l < p.N; ++l)
    e.e1 += p.omega[static_cast<std::size_t>(l)] * n[static_cast<std::size_t>(l)] / 2 -
            2 * d.g_k * d.g_k / p.omega[static_cast<std::size_t>(l)];

  int eps = d.eps_NM;
  bool has_g = false;
  for (double g : d.g_i_k)
    if (g != 0.0) has_g = true;
  if (eps == 0) {
    if (has_g) throw ParameterError("energy_general: couplings present but eps_NM = 0");
    eps = 1;
  }
  double lam = -2 * gp2 * gp2 / *p.Omega;
  e.e2 = *p.Omega * m / 2 + d.eps_k / 2;
  for (int i = 0; i < p.N; ++i) {
    double w = p.omega[static_cast<std::size_t>(i)];
    double gi = d.g_i_k[static_cast<std::size_t>(i)];
    e.e2 += w * n[static_cast<std::size_t>(i)] / 2;
    lam += (eps - 1) * w * n[static_cast<std::size_t>(i)] / 2 - 2 * gi * gi / (eps * w);
  }
  if (d.eps_NM == 0 && gp2 == 0.0) lam = 0;
  e.e2 += d.alpha_k * lam;
  return e;
}

inline double average_frequency(const std::vector<int>& n, const std::vector<double>& omega) {
  if (n.size() != omega.size()) throw ParameterError("average_frequency: size mismatch");
  double num = 0;
  long den = 0;
  for (std::size_t l = 0; l < n.size(); ++l) {
    if (n[l] < 0) throw ParameterError("average_frequency: negative occupation");
    num += omega[l] * n[l];
    den += n[l];
  }
  if (den == 0) throw ParameterError("average_frequency: undefined for the vacuum label");
  return num / static_cast<double>(den);
}

}  // namespace gkvcs

#endif
