#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <gkvcs/vcs.hpp>

#include <cmath>

using namespace gkvcs;
namespace v = gkvcs::vcs;

static int cutoff_for(double J) { return static_cast<int>(std::ceil(J + 10 * std::sqrt(J))) + 10; }

TEST_CASE("single-mode norm converges within the tail bound") {
  for (double J : {0.5, 1.0, 2.0, 4.0}) {
    int n_max = cutoff_for(J);
    auto s = v::gk_single(J, 0.7, 1.3, n_max);
    CHECK(s.tail_bound < 1e-9);
    CHECK(std::abs(s.norm2() - 1.0) <= s.tail_bound + 1e-14);
  }
}

TEST_CASE("tail bound guards its own domain") {
  CHECK(v::tail_bound(0.0, 3) == 0.0);
  CHECK(v::tail_bound(1.0, 20) < 1e-18);
  CHECK_THROWS_AS(v::tail_bound(12.0, 9), ParameterError);  // J >= n_max + 2
  CHECK_THROWS_AS(v::normalization(-1.0), ParameterError);
}

TEST_CASE("overlap of two single-mode states follows the closed form") {
  double J = 2.0;
  int n_max = cutoff_for(J);
  double g1 = 0.4, g2 = 1.1;
  auto a = v::gk_single(J, g1, 1.0, n_max);
  auto b = v::gk_single(J, g2, 1.0, n_max);
  // sum_n e^{-J} J^n e^{in(g1-g2)}/n! = exp(J(e^{i dg} - 1))
  Complex dg(0, g1 - g2);
  Complex want = std::exp(J * (std::exp(dg) - 1.0));
  CHECK(std::abs(v::overlap(a, b) - want) < 1e-10);
  CHECK(std::abs(std::abs(want) - std::exp(J * (std::cos(g1 - g2) - 1.0))) < 1e-14);
}

TEST_CASE("single-mode action identity") {
  double J = 1.5, omega = 0.9;
  auto s = v::gk_single(J, 0.2, omega, cutoff_for(J));
  CHECK(std::abs(v::action_value(s) - omega * J) < 1e-8);
}

TEST_CASE("multimode state factorizes into singles") {
  std::vector<double> J{1.0, 2.5}, gamma{0.3, -0.8}, omega{1.0, 1.7};
  std::vector<int> n_max{cutoff_for(1.0), cutoff_for(2.5)};
  auto s = v::gk_multimode(J, gamma, omega, n_max);
  auto a = v::gk_single(J[0], gamma[0], omega[0], n_max[0]);
  auto b = v::gk_single(J[1], gamma[1], omega[1], n_max[1]);
  REQUIRE(s.coeffs.size() == a.coeffs.size() * b.coeffs.size());
  for (Eigen::Index i = 0; i < a.coeffs.size(); ++i)
    for (Eigen::Index j = 0; j < b.coeffs.size(); ++j) {
      Eigen::Index flat = i * b.coeffs.size() + j;
      CHECK(std::abs(s.coeffs(flat) - a.coeffs(i) * b.coeffs(j)) < 1e-14);
      CHECK(s.energy[static_cast<std::size_t>(flat)] ==
            doctest::Approx(omega[0] * i + omega[1] * j).epsilon(1e-12));
    }
  CHECK(std::abs(s.norm2() - 1.0) <= s.tail_bound + 1e-13);
  CHECK(std::abs(v::action_value(s) - (omega[0] * J[0] + omega[1] * J[1])) < 1e-7);
}

TEST_CASE("degenerate family basics") {
  double J = 1.2, gamma = 0.5, theta = 0.9, omega = 1.4;
  SUBCASE("normalized for N = 3") {
    auto s = v::gk_degenerate(J, gamma, theta, omega, 3, cutoff_for(J));
    CHECK(std::abs(s.norm2() - 1.0) <= s.tail_bound + 1e-13);
    CHECK(std::abs(v::action_value(s) - omega * J) < 1e-8);
  }
  SUBCASE("N = 1 reduces to the single-mode state up to a global phase") {
    int n_max = 12;
    auto d = v::gk_degenerate(J, gamma, theta, omega, 1, n_max);
    auto s = v::gk_single(J, gamma, omega, n_max);
    REQUIRE(d.coeffs.size() == s.coeffs.size());
    Complex phase = std::exp(Complex(0, -theta));  // j = 1 everywhere
    CHECK((d.coeffs - phase * s.coeffs).norm() < 1e-13);
  }
  SUBCASE("frequency-list overload enforces equality") {
    CHECK_THROWS_AS(v::gk_degenerate(J, gamma, theta, std::vector<double>{1.0, 1.2}, 8), ContractError);
    auto d = v::gk_degenerate(J, gamma, theta, std::vector<double>{omega, omega}, 8);
    CHECK(d.labels.back()[0] == 8);
  }
}

TEST_CASE("theta average kills cross-degeneracy terms") {
  // (1/2pi) \int dtheta c_{n,j} conj(c_{n',j'}) carries e^{-i(j-j')theta};
  // a uniform grid with K > 2 max|j-j'| points averages it to delta_{jj'}.
  double J = 1.0, gamma = 0.4, omega = 1.0;
  int N = 2, n_max = 4;
  int dmax = static_cast<int>(degeneracy(n_max, N));
  int K = 2 * dmax + 1;
  auto ref = v::gk_degenerate(J, gamma, 0.0, omega, N, n_max);
  Eigen::Index dim = ref.coeffs.size();
  Matrix avg = Matrix::Zero(dim, dim);
  for (int q = 0; q < K; ++q) {
    auto s = v::gk_degenerate(J, gamma, 2 * M_PI * q / K, omega, N, n_max);
    avg += (s.coeffs * s.coeffs.adjoint()) / static_cast<double>(K);
  }
  for (Eigen::Index r = 0; r < dim; ++r)
    for (Eigen::Index c = 0; c < dim; ++c) {
      int jr = ref.labels[static_cast<std::size_t>(r)][1];
      int jc = ref.labels[static_cast<std::size_t>(c)][1];
      Complex want = jr == jc ? ref.coeffs(r) * std::conj(ref.coeffs(c)) : Complex(0, 0);
      CHECK(std::abs(avg(r, c) - want) < 1e-12);
    }
}

TEST_CASE("fixed-occupation family is globally normalized") {
  std::vector<double> J{1.0}, gamma{0.3}, omega{1.0};
  double Jp = 1.8, gp = 0.6, Omega = 2.0;
  int n_max = cutoff_for(J[0]), m_max = cutoff_for(Jp);
  double total = 0, action2 = 0, action1 = 0;
  for (int n = 0; n <= n_max; ++n) {
    auto s = v::two_sector_fixed_n(J, gamma, omega, {n}, Jp, gp, Omega, m_max);
    total += s.norm2();
    action2 += v::action_value(s);                // H'_2 expectation summed over members
    action1 += s.norm2() * s.fixed_energy;        // H'_1 expectation
  }
  CHECK(std::abs(total - 1.0) < 1e-9);
  CHECK(std::abs(action2 - Omega * Jp) < 1e-7);
  CHECK(std::abs(action1 - omega[0] * J[0]) < 1e-7);
}

TEST_CASE("fixed-cm family mirrors the identities") {
  std::vector<double> J{0.8, 1.4}, gamma{0.1, 0.9}, omega{1.0, 1.3};
  double Jp = 1.1, gp = -0.4, Omega = 1.6;
  std::vector<int> n_max{cutoff_for(0.8), cutoff_for(1.4)};
  int m_max = cutoff_for(Jp);
  double total = 0, action1 = 0, action2 = 0;
  for (int m = 0; m <= m_max; ++m) {
    auto s = v::two_sector_fixed_m(J, gamma, omega, n_max, Jp, gp, Omega, m);
    total += s.norm2();
    action1 += v::action_value(s);
    action2 += s.norm2() * s.fixed_energy;
  }
  CHECK(std::abs(total - 1.0) < 1e-9);
  CHECK(std::abs(action1 - (omega[0] * J[0] + omega[1] * J[1])) < 1e-7);
  CHECK(std::abs(action2 - Omega * Jp) < 1e-7);
}

TEST_CASE("degenerate two-part families are globally normalized") {
  double J = 1.0, gamma = 0.2, theta = 0.7, omega = 1.0;
  int N = 2;
  double Jp = 0.9, gp = 0.5, Omega = 2.2;
  int n_max = cutoff_for(J), m_max = cutoff_for(Jp);
  SUBCASE("fixed (n, j)") {
    double total = 0, action2 = 0;
    for (int n = 0; n <= n_max; ++n)
      for (int j = 1; j <= static_cast<int>(degeneracy(n, N)); ++j) {
        auto s = v::two_sector_deg_fixed_n(J, gamma, theta, omega, N, n, j, Jp, gp, Omega, m_max);
        total += s.norm2();
        action2 += v::action_value(s);
      }
    CHECK(std::abs(total - 1.0) < 1e-9);
    CHECK(std::abs(action2 - Omega * Jp) < 1e-7);
  }
  SUBCASE("fixed m") {
    double total = 0, action1 = 0;
    for (int m = 0; m <= m_max; ++m) {
      auto s = v::two_sector_deg_fixed_m(J, gamma, theta, omega, N, n_max, Jp, gp, Omega, m);
      total += s.norm2();
      action1 += v::action_value(s);
    }
    CHECK(std::abs(total - 1.0) < 1e-9);
    CHECK(std::abs(action1 - omega * J) < 1e-7);
  }
}

TEST_CASE("doubly summed families") {
  std::vector<double> J{1.0}, gamma{0.3}, omega{1.2};
  double Jp = 1.5, gp = 0.8, Omega = 2.0;
  std::vector<int> n_max{cutoff_for(1.0)};
  int m_max = cutoff_for(Jp);
  SUBCASE("normalization and action") {
    auto s = v::vcs_multidim(J, gamma, omega, n_max, Jp, gp, Omega, m_max);
    CHECK(std::abs(s.norm2() - 1.0) <= s.tail_bound + 1e-12);
    CHECK(std::abs(v::action_value(s) - (Omega * Jp + omega[0] * J[0])) < 1e-7);
  }
  SUBCASE("J' = 0 collapses onto the m = 0 block") {
    auto s = v::vcs_multidim(J, gamma, omega, n_max, 0.0, gp, Omega, 3);
    auto b = v::gk_multimode(J, gamma, omega, n_max);
    Eigen::Index bd = b.coeffs.size();
    CHECK((s.coeffs.segment(0, bd) - b.coeffs).norm() < 1e-14);
    CHECK(s.coeffs.segment(bd, s.coeffs.size() - bd).norm() == 0.0);
  }
  SUBCASE("degenerate variant") {
    auto s = v::vcs_multidim_degenerate(1.0, 0.3, 0.6, 1.2, 2, cutoff_for(1.0), Jp, gp, Omega, m_max);
    CHECK(std::abs(s.norm2() - 1.0) <= s.tail_bound + 1e-12);
    CHECK(std::abs(v::action_value(s) - (Omega * Jp + 1.2 * 1.0)) < 1e-7);
  }
}

TEST_CASE("fixed-slot state with J' = 0 keeps only m = 0") {
  auto s = v::two_sector_fixed_n({1.0}, {0.2}, {1.0}, {2}, 0.0, 0.4, 1.5, 6);
  CHECK(std::abs(s.coeffs(0)) > 0);
  CHECK(s.coeffs.segment(1, 6).norm() == 0.0);
}

TEST_CASE("coefficient-space evolution equals a shifted relabeling") {
  double t = 0.37;
  SUBCASE("single mode: gamma -> gamma + omega t") {
    double J = 1.3, gamma = 0.4, omega = 1.1;
    auto e = v::evolve(v::gk_single(J, gamma, omega, 20), t);
    auto r = v::gk_single(J, gamma + omega * t, omega, 20);
    CHECK((e.coeffs - r.coeffs).norm() < 1e-13);
  }
  SUBCASE("degenerate: theta inert") {
    auto e = v::evolve(v::gk_degenerate(1.0, 0.4, 0.8, 1.1, 2, 10), t);
    auto r = v::gk_degenerate(1.0, 0.4 + 1.1 * t, 0.8, 1.1, 2, 10);
    CHECK((e.coeffs - r.coeffs).norm() < 1e-13);
  }
  SUBCASE("fixed occupation: gamma' -> gamma' - Omega t") {
    auto e = v::evolve(v::two_sector_fixed_n({1.0}, {0.2}, {1.0}, {2}, 1.4, 0.6, 2.0, 20), t);
    auto r = v::two_sector_fixed_n({1.0}, {0.2}, {1.0}, {2}, 1.4, 0.6 - 2.0 * t, 2.0, 20);
    CHECK((e.coeffs - r.coeffs).norm() < 1e-13);
    auto wrong = v::two_sector_fixed_n({1.0}, {0.2}, {1.0}, {2}, 1.4, 0.6 + 2.0 * t, 2.0, 20);
    CHECK((e.coeffs - wrong.coeffs).norm() > 1e-3);
  }
  SUBCASE("fixed m: boson slot shifts, prefactor untouched") {
    auto e = v::evolve(v::two_sector_fixed_m({1.0}, {0.2}, {1.3}, {20}, 1.4, 0.6, 2.0, 3), t);
    auto r = v::two_sector_fixed_m({1.0}, {0.2 + 1.3 * t}, {1.3}, {20}, 1.4, 0.6, 2.0, 3);
    CHECK((e.coeffs - r.coeffs).norm() < 1e-13);
  }
  SUBCASE("doubly summed: both slots advance") {
    auto e = v::evolve(v::vcs_multidim({1.0}, {0.2}, {1.3}, {15}, 1.4, 0.6, 2.0, 15), t);
    auto r = v::vcs_multidim({1.0}, {0.2 + 1.3 * t}, {1.3}, {15}, 1.4, 0.6 + 2.0 * t, 2.0, 15);
    CHECK((e.coeffs - r.coeffs).norm() < 1e-13);
  }
}

TEST_CASE("materialized state matches the analytic picture") {
  ModelParams p;
  p.N = 1;
  p.M = 1;
  p.omega = {1.0};
  p.epsilon = {0.5};
  p.g_diag = {0.2};
  TruncationSpec spec;
  spec.boson_cutoffs = {40};
  auto bundle = build_diag(p, spec);
  SectorId k = SectorId::from_string("1");
  double J = 1.0;
  auto s = v::gk_single(J, 0.3, p.omega[0], 15);

  auto psi = v::materialize(s, Variant::Diag, p, spec, k);
  CHECK(std::abs(psi.v.squaredNorm() - 1.0) < 1e-8);

  // shifted-Hamiltonian expectation reproduces the action identity
  Complex val = psi.v.dot(bundle.sectors[k.index()].h_shifted.m * psi.v);
  CHECK(std::abs(val - Complex(p.omega[0] * J, 0)) < 1e-6);

  // full-space evolution commutes with coefficient-space evolution
  double t = 0.51;
  auto lhs = evolve(bundle.sectors[k.index()].h_shifted, t, psi);
  auto rhs = v::materialize(v::evolve(s, t), Variant::Diag, p, spec, k);
  CHECK((lhs.v - rhs.v).norm() < 1e-7);
}

TEST_CASE("materialize handles cm-carrying label layouts") {
  ModelParams p;
  p.N = 1;
  p.M = 1;
  p.omega = {1.0};
  p.epsilon = {0.5};
  p.g_diag = {0.2};
  p.Omega = 2.0;
  p.g_prime = 0.3;
  TruncationSpec spec;
  spec.boson_cutoffs = {30};
  spec.cm_cutoff = 30;
  SectorId k = SectorId::from_string("1");

  SUBCASE("fixed occupation state") {
    auto s = v::two_sector_fixed_n({1.0}, {0.3}, {1.0}, {2}, 1.2, 0.4, *p.Omega, 12);
    auto psi = v::materialize(s, Variant::CmDiag, p, spec, k);
    CHECK(std::abs(psi.v.squaredNorm() - s.norm2()) < 1e-8);
  }
  SUBCASE("fixed cm state") {
    auto s = v::two_sector_fixed_m({1.0}, {0.3}, {1.0}, {12}, 1.2, 0.4, *p.Omega, 2);
    auto psi = v::materialize(s, Variant::CmDiag, p, spec, k);
    CHECK(std::abs(psi.v.squaredNorm() - s.norm2()) < 1e-8);
  }
  SUBCASE("doubly summed state") {
    auto s = v::vcs_multidim({1.0}, {0.3}, {1.0}, {10}, 1.2, 0.4, *p.Omega, 10);
    auto psi = v::materialize(s, Variant::CmDiag, p, spec, k);
    CHECK(std::abs(psi.v.squaredNorm() - s.norm2()) < 1e-7);
    auto bundle = build_cm_diag(p, spec);
    Complex val = psi.v.dot(bundle.sectors[k.index()].h_shifted.m * psi.v);
    CHECK(std::abs(val - Complex(*p.Omega * 1.2 + 1.0 * 1.0, 0)) < 1e-5);
  }
}
