#pragma once

// Quadrature engine and the coherent-state property checkers: moment
// problems, resolution of identity, temporal stability, action identity,
// continuity, and analytic-vs-numeric spectrum comparison.
//
// All resolution checks work in the analytic coefficient space, where the
// radial integral against e^{-J} dJ is a Gauss-Laguerre sum (exact for
// polynomial degree <= 2Q-1) and the angular integrals are finite uniform
// phase averages (exact Kronecker deltas for frequency gaps below K).

#include <gkvcs/vcs.hpp>

#include <functional>
#include <sstream>
#include <string>
#include <vector>

namespace gkvcs {
namespace verify {

struct QuadratureRule {
  Eigen::VectorXd nodes;    // radial Gauss-Laguerre nodes (weight e^{-J})
  Eigen::VectorXd weights;  // matching weights, sum 1
  int phase_points = 0;     // K equispaced gamma phases on [0, 2pi)
  int theta_points = 0;     // K_theta grid for the degeneracy phase
  bool point_mass_at_zero = false;  // signed -delta(J) term, weight -1 at J=0
  bool allow_coarse = false;        // opt-in: run checks even below exactness thresholds
};

struct VerificationReport {
  std::string property;
  std::string variant;
  std::string params;  // compact parameter descriptor, part of the sort key
  double metric = 0;   // measured deviation
  double tolerance = 0;
  double tail_bound = 0;
  bool pass = false;
  bool report_only = false;  // emitted for information; never gates a run
  bool documented = false;   // an expected failure; counts as satisfied
  std::string notes;
};

inline VerificationReport make_report(std::string property, std::string variant, double metric,
                                      double tolerance, double tail, std::string notes = "") {
  VerificationReport r;
  r.property = std::move(property);
  r.variant = std::move(variant);
  r.metric = metric;
  r.tolerance = tolerance;
  r.tail_bound = tail;
  r.pass = metric <= tolerance;
  r.notes = std::move(notes);
  return r;
}

// Gauss-Laguerre rule of order Q by diagonalizing the Jacobi matrix of the
// Laguerre recurrence (diagonal 2i+1, off-diagonal i); weights are the squared
// first eigenvector components times the total mass 1.
inline QuadratureRule gauss_laguerre(int Q, int phase_points = 0, int theta_points = 0) {
  if (Q < 1) throw ParameterError("gauss_laguerre: Q < 1");
  Matrix jac = Matrix::Zero(Q, Q);
  for (int i = 0; i < Q; ++i) {
    jac(i, i) = 2 * i + 1;
    if (i > 0) jac(i, i - 1) = jac(i - 1, i) = i;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(jac);
  QuadratureRule r;
  r.nodes = es.eigenvalues().real();
  r.weights = es.eigenvectors().row(0).cwiseAbs2().real().transpose();
  r.phase_points = phase_points;
  r.theta_points = theta_points;
  if (std::abs(r.weights.sum() - 1.0) > 1e-12) throw ContractError("gauss_laguerre: weights do not sum to 1");
  return r;
}

inline void require_rule(const QuadratureRule& r, int n_max) {
  if (r.allow_coarse) return;
  int need_q = n_max + 1, need_k = 2 * n_max + 1;
  if (r.nodes.size() < need_q || r.phase_points < need_k) {
    std::ostringstream os;
    os << "quadrature rule too coarse: need Q >= " << need_q << ", K >= " << need_k << " (have Q = "
       << r.nodes.size() << ", K = " << r.phase_points << ")";
    throw ContractError(os.str());
  }
}

// radial integral of J^n against the rule's density (plus the signed point
// mass, which contributes only at n = 0)
inline double radial_moment(const QuadratureRule& r, int n, double density_scale = 1.0) {
  double acc = 0;
  for (Eigen::Index q = 0; q < r.nodes.size(); ++q) acc += r.weights(q) * std::pow(r.nodes(q), n);
  acc *= density_scale;
  if (r.point_mass_at_zero && n == 0) acc -= 1.0;
  return acc;
}

struct MomentTarget {
  int n;
  double expected;
  double density_scale = 1.0;  // d(n) for the degenerate signed measure
};

inline VerificationReport check_moments(const QuadratureRule& r, const std::vector<MomentTarget>& targets,
                                        double rel_tol = 1e-10, std::string variant = "e^-J dJ") {
  double worst = 0;
  std::ostringstream notes;
  for (const auto& t : targets) {
    if (t.n > 2 * static_cast<int>(r.nodes.size()) - 1 && !r.allow_coarse)
      throw ContractError("check_moments: moment order beyond quadrature exactness");
    double got = radial_moment(r, t.n, t.density_scale);
    double rel = std::abs(got - t.expected) / std::max(std::abs(t.expected), 1.0);
    if (rel > worst) {
      worst = rel;
      notes.str("");
      notes << "worst at n = " << t.n << ": measured " << got << ", target " << t.expected;
    }
  }
  return make_report("moments", std::move(variant), worst, rel_tol, 0, notes.str());
}

// 1/K sum of e^{i d gamma_k} over the uniform grid: exactly delta_{d,0} for |d| < K.
inline Complex phase_average(int d, int K) {
  Complex acc = 0;
  for (int k = 0; k < K; ++k) acc += std::exp(Complex(0, d * 2 * M_PI * k / K));
  return acc / static_cast<double>(K);
}

namespace detail {

inline double spectral_norm(const Matrix& a) {
  Matrix h = (a + Matrix(a.adjoint())) / 2.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  double skew = (a - h).cwiseAbs().maxCoeff();
  return es.eigenvalues().cwiseAbs().maxCoeff() + skew;
}

}  // namespace detail

// O = sum_q sum_k (w_q / K) N(J_q) |c(J_q, gamma_k)><c(J_q, gamma_k)| for the
// single-mode family; equals the identity up to quadrature exactness.
inline Matrix resolution_matrix_single(const QuadratureRule& r, int n_max) {
  require_rule(r, n_max);
  int K = r.phase_points;
  Matrix o = Matrix::Zero(n_max + 1, n_max + 1);
  for (Eigen::Index q = 0; q < r.nodes.size(); ++q) {
    double J = r.nodes(q);
    double scale = r.weights(q) / K * vcs::normalization(J);
    for (int k = 0; k < K; ++k) {
      auto s = vcs::gk_single(J, 2 * M_PI * k / K, 1.0, n_max);
      o += scale * (s.coeffs * s.coeffs.adjoint());
    }
  }
  return o;
}

// Degenerate family: radial/gamma/theta grid, density d(n) e^{-J} applied
// weight-by-weight (the gamma average leaves only equal-n entries, where the
// scale is unambiguous), then the signed point mass at J = 0 if requested.
inline Matrix resolution_matrix_degenerate(const QuadratureRule& r, int N, int n_max) {
  require_rule(r, n_max);
  int d_top = static_cast<int>(degeneracy(n_max, N));
  if (!r.allow_coarse && r.theta_points < 2 * d_top + 1)
    throw ContractError("resolution_matrix_degenerate: need K_theta >= 2 d(n_max)+1");
  int K = r.phase_points, Kt = r.theta_points;
  auto ref = vcs::gk_degenerate(0.0, 0.0, 0.0, 1.0, N, n_max);  // label layout only
  Eigen::Index dim = ref.coeffs.size();
  Matrix o = Matrix::Zero(dim, dim);
  for (Eigen::Index q = 0; q < r.nodes.size(); ++q) {
    double J = r.nodes(q);
    double scale = r.weights(q) / (K * Kt) * vcs::normalization(J);
    for (int k = 0; k < K; ++k)
      for (int t = 0; t < Kt; ++t) {
        auto s = vcs::gk_degenerate(J, 2 * M_PI * k / K, 2 * M_PI * t / Kt, 1.0, N, n_max);
        o += scale * (s.coeffs * s.coeffs.adjoint());
      }
  }
  for (Eigen::Index a = 0; a < dim; ++a)
    for (Eigen::Index b = 0; b < dim; ++b) {
      double da = static_cast<double>(degeneracy(ref.labels[static_cast<std::size_t>(a)][0], N));
      double db = static_cast<double>(degeneracy(ref.labels[static_cast<std::size_t>(b)][0], N));
      o(a, b) *= std::sqrt(da * db);
    }
  if (r.point_mass_at_zero) {
    // at J = 0 only the (n=0, j=1) amplitude survives; its theta phase cancels
    o(0, 0) -= 1.0;
  }
  return o;
}

inline VerificationReport check_resolution_single(const QuadratureRule& r, int n_max, double tol = 1e-8) {
  Matrix o = resolution_matrix_single(r, n_max);
  double dev = detail::spectral_norm(o - Matrix::Identity(o.rows(), o.cols()));
  return make_report("resolution", "single-mode", dev, tol, 0);
}

inline VerificationReport check_resolution_multimode(const QuadratureRule& r, const std::vector<int>& n_max,
                                                     double tol = 1e-8) {
  Matrix o = Matrix::Identity(1, 1);
  for (int nm : n_max) o = gkvcs::detail::kron(o, resolution_matrix_single(r, nm));
  double dev = detail::spectral_norm(o - Matrix::Identity(o.rows(), o.cols()));
  return make_report("resolution", "multimode product", dev, tol, 0);
}

// Degenerate family with the signed measure [d(n)e^{-J} - delta(J)]dJ: the
// (n=0, j=1) diagonal weight comes out 0 instead of 1.  That deviation is the
// documented finding; the remainder must still resolve the identity.  With
// the point mass omitted (corrected measure) the full identity is recovered.
inline VerificationReport check_resolution_degenerate(const QuadratureRule& r, int N, int n_max,
                                                      double tol = 1e-7) {
  Matrix o = resolution_matrix_degenerate(r, N, n_max);
  Matrix expected = Matrix::Identity(o.rows(), o.cols());
  std::string notes;
  if (r.point_mass_at_zero) {
    expected(0, 0) = 0.0;
    notes = "signed measure: (n=0) weight measured " + std::to_string(std::real(o(0, 0))) +
            " against required 1 (documented deviation); comparing against identity minus the n=0 slot";
  }
  double dev = detail::spectral_norm(o - expected);
  return make_report("resolution", r.point_mass_at_zero ? "degenerate (signed measure)" : "degenerate (corrected measure)",
                     dev, tol, 0, std::move(notes));
}

// Two-part families.  The gamma integral removes every cross term of the
// frozen slot, leaving a diagonal radial weight per frozen label, tensored
// with the resolution matrix of the summed slot.
inline Matrix frozen_slot_weights(const QuadratureRule& r, int n_max) {
  require_rule(r, n_max);
  Eigen::VectorXd w(n_max + 1);
  for (int n = 0; n <= n_max; ++n) w(n) = radial_moment(r, n) / std::exp(vcs::log_factorial(n));
  return w.asDiagonal().toDenseMatrix().cast<Complex>();
}

inline VerificationReport check_resolution_two_sector(const QuadratureRule& r_boson,
                                                      const QuadratureRule& r_cm,
                                                      const std::vector<int>& n_max, int m_max,
                                                      bool fixed_n, double tol = 1e-7) {
  Matrix frozen = Matrix::Identity(1, 1);
  Matrix summed;
  if (fixed_n) {
    for (int nm : n_max) frozen = gkvcs::detail::kron(frozen, frozen_slot_weights(r_boson, nm));
    summed = resolution_matrix_single(r_cm, m_max);
  } else {
    frozen = frozen_slot_weights(r_cm, m_max);
    summed = Matrix::Identity(1, 1);
    for (int nm : n_max) summed = gkvcs::detail::kron(summed, resolution_matrix_single(r_boson, nm));
  }
  Matrix o = fixed_n ? gkvcs::detail::kron(frozen, summed) : gkvcs::detail::kron(summed, frozen);
  double dev = detail::spectral_norm(o - Matrix::Identity(o.rows(), o.cols()));
  return make_report("resolution", fixed_n ? "two-part fixed occupation" : "two-part fixed c.m.", dev, tol, 0);
}

// Degenerate two-part family (frozen (n, j) slot, signed measure): every
// frozen weight is 1 except the n = 0 slot, which is 0 under the signed
// measure -- the same documented deviation, now a whole m-block.
inline VerificationReport check_resolution_deg_two_sector(const QuadratureRule& r_boson,
                                                          const QuadratureRule& r_cm, int N, int n_max,
                                                          int m_max, double tol = 1e-7) {
  require_rule(r_boson, n_max);
  auto ref = vcs::gk_degenerate(0.0, 0.0, 0.0, 1.0, N, n_max);
  Eigen::Index nd = ref.coeffs.size();
  Matrix frozen = Matrix::Zero(nd, nd);
  QuadratureRule plain = r_boson;
  plain.point_mass_at_zero = false;
  for (Eigen::Index a = 0; a < nd; ++a) {
    int n = ref.labels[static_cast<std::size_t>(a)][0];
    double dn = static_cast<double>(degeneracy(n, N));
    double w = dn * radial_moment(plain, n) / (std::exp(vcs::log_factorial(n)) * dn);
    if (r_boson.point_mass_at_zero && n == 0) w -= 1.0;  // delta(J) hits only the n=0 amplitude
    frozen(a, a) = w;
  }
  Matrix o = gkvcs::detail::kron(frozen, resolution_matrix_single(r_cm, m_max));
  Matrix expected = Matrix::Identity(o.rows(), o.cols());
  std::string notes;
  if (r_boson.point_mass_at_zero) {
    for (Eigen::Index m = 0; m <= m_max; ++m) expected(m, m) = 0.0;  // n = 0 block first
    notes = "signed measure zeroes the n=0 block (documented deviation)";
  }
  double dev = detail::spectral_norm(o - expected);
  return make_report("resolution", "degenerate two-part fixed (n, j)", dev, tol, 0, std::move(notes));
}

inline VerificationReport check_resolution_multidim(const QuadratureRule& r_boson, const QuadratureRule& r_cm,
                                                    const std::vector<int>& n_max, int m_max,
                                                    double tol = 1e-7) {
  Matrix o = resolution_matrix_single(r_cm, m_max);
  for (int nm : n_max) o = gkvcs::detail::kron(o, resolution_matrix_single(r_boson, nm));
  double dev = detail::spectral_norm(o - Matrix::Identity(o.rows(), o.cols()));
  return make_report("resolution", "multidimensional", dev, tol, 0);
}

inline VerificationReport check_resolution_multidim_degenerate(const QuadratureRule& r_boson,
                                                               const QuadratureRule& r_cm, int N, int n_max,
                                                               int m_max, double tol = 1e-7) {
  Matrix o = gkvcs::detail::kron(resolution_matrix_single(r_cm, m_max),
                                 resolution_matrix_degenerate(r_boson, N, n_max));
  Matrix expected = Matrix::Identity(o.rows(), o.cols());
  std::string notes;
  if (r_boson.point_mass_at_zero) {
    // the degenerate factor's n=0 slot is zero under the signed measure
    Eigen::Index bd = o.rows() / (m_max + 1);
    for (Eigen::Index m = 0; m <= m_max; ++m) expected(m * bd, m * bd) = 0.0;
    notes = "signed measure zeroes the n=0 slots (documented deviation)";
  }
  double dev = detail::spectral_norm(o - expected);
  return make_report("resolution", "multidimensional degenerate", dev, tol, 0, std::move(notes));
}

// Temporal stability: min over the t grid of the normalized fidelity between
// exp(-iH't)|CS(p)> (exact in coefficient space) and |CS(shift(p, t))>.
inline VerificationReport check_temporal_stability(const CoherentState& s,
                                                   const std::function<CoherentState(double)>& shifted,
                                                   const std::vector<double>& times,
                                                   std::string variant = "") {
  double min_f = 1.0;
  for (double t : times) {
    auto evolved = vcs::evolve(s, t);
    auto expect = shifted(t);
    double denom = std::sqrt(evolved.norm2() * expect.norm2());
    double f = denom == 0 ? 0.0 : std::abs(vcs::overlap(expect, evolved)) / denom;
    min_f = std::min(min_f, f);
  }
  double tol = std::max(1e-8, 2 * s.tail_bound);
  auto rep = make_report("temporal stability", std::move(variant), 1.0 - min_f, tol, s.tail_bound);
  return rep;
}

// Action identity over a family: sum of <H'> over members (a single state is
// a one-member family).  fixed_part switches to the complementary slot's
// energy, for the mirrored identity of the two-part families.
inline VerificationReport check_action_identity(const std::vector<CoherentState>& members, double rhs,
                                                bool fixed_part = false, std::string variant = "") {
  double value = 0, tail = 0;
  for (const auto& s : members) {
    value += fixed_part ? s.norm2() * s.fixed_energy : vcs::action_value(s);
    tail += s.tail_bound;
  }
  double tol = std::max(1e-6, 10 * tail);
  return make_report("action identity", std::move(variant), std::abs(value - rhs), tol, tail);
}

// Continuity: the state map delta -> CS(p + delta) must have a stabilizing
// modulus ||CS(p+h) - CS(p)|| / h over the h grid (successive ratios within a
// factor of 2).
inline VerificationReport check_continuity(const std::function<CoherentState(double)>& path,
                                           const std::vector<double>& h_grid = {1e-2, 1e-3, 1e-4},
                                           std::string variant = "") {
  if (h_grid.size() < 2) throw ParameterError("check_continuity: need at least two step sizes");
  auto base = path(0.0);
  std::vector<double> modulus;
  for (double h : h_grid) {
    auto moved = path(h);
    modulus.push_back((moved.coeffs - base.coeffs).norm() / h);
  }
  double worst = 1.0;
  for (std::size_t i = 0; i + 1 < modulus.size(); ++i) {
    if (modulus[i] == 0 && modulus[i + 1] == 0) continue;
    if (modulus[i] == 0 || modulus[i + 1] == 0) return make_report("continuity", std::move(variant), 1e300, 2.0, base.tail_bound, "modulus vanished at one step");
    double ratio = modulus[i + 1] / modulus[i];
    worst = std::max(worst, std::max(ratio, 1.0 / ratio));
  }
  return make_report("continuity", std::move(variant), worst, 2.0, base.tail_bound);
}

// Greedy level-by-level comparison of sorted analytic and numeric spectra
// inside the trusted window.
inline VerificationReport compare_spectra(std::vector<double> analytic, std::vector<double> numeric,
                                          int window, double tol, bool report_only = false,
                                          std::string variant = "") {
  if (window < 1 || static_cast<std::size_t>(window) > analytic.size() ||
      static_cast<std::size_t>(window) > numeric.size())
    throw ParameterError("compare_spectra: empty or oversized window");
  std::sort(analytic.begin(), analytic.end());
  std::sort(numeric.begin(), numeric.end());
  double worst = 0;
  for (int i = 0; i < window; ++i)
    worst = std::max(worst, std::abs(analytic[static_cast<std::size_t>(i)] - numeric[static_cast<std::size_t>(i)]));
  auto rep = make_report("spectrum", std::move(variant), worst, tol, 0);
  if (report_only) {
    rep.pass = true;
    rep.report_only = true;
    rep.notes = "report-only: no closed-form prediction is asserted for this variant";
  }
  return rep;
}

}  // namespace verify
}  // namespace gkvcs
