#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <gkvcs/model.hpp>

using namespace gkvcs;

static ModelParams basic(int N, int M) {
  ModelParams p;
  p.N = N;
  p.M = M;
  p.omega.assign(N, 1.0);
  p.epsilon.assign(M, 0.0);
  p.g_diag.assign(M, 0.0);
  return p;
}

TEST_CASE("sector scalars") {
  SUBCASE("full sector has kappa = M") {
    auto p = basic(1, 2);
    auto d = sector_scalars(p, SectorId::from_string("11"));
    CHECK(d.kappa_k == 2);
    CHECK(d.lambda_flag == 1);
    CHECK(d.alpha_k == 0);
  }
  SUBCASE("[10] has kappa = 1") {
    auto p = basic(1, 2);
    auto d = sector_scalars(p, SectorId::from_string("10"));
    CHECK(d.kappa_k == 1);
    CHECK(d.alpha_k == 1);
  }
  SUBCASE("all-zero sector") {
    auto p = basic(2, 3);
    p.epsilon = {0.1, 0.2, 0.3};
    p.g_diag = {0.4, 0.5, 0.6};
    auto d = sector_scalars(p, SectorId::from_string("000"));
    CHECK(d.eps_k == 0.0);
    CHECK(d.g_k == 0.0);
    CHECK(d.kappa_k == 0);
    CHECK(d.lambda_flag == 1);
    CHECK(d.alpha_k == 0);
  }
  SUBCASE("[101] has Lambda = 0") {
    auto p = basic(1, 3);
    auto d = sector_scalars(p, SectorId::from_string("101"));
    CHECK(d.lambda_flag == 0);
    CHECK(d.alpha_k == 1);
    CHECK(d.f_flag == 1);
  }
  SUBCASE("linear sums") {
    auto p = basic(1, 3);
    p.epsilon = {0.1, 0.2, 0.3};
    p.g_diag = {0.4, 0.5, 0.6};
    auto d = sector_scalars(p, SectorId::from_string("101"));
    CHECK(d.eps_k == doctest::Approx(0.4));
    CHECK(d.g_k == doctest::Approx(1.0));
  }
  SUBCASE("kappa equals Hamming weight for all sectors, M <= 10") {
    for (int M = 1; M <= 10; ++M) {
      auto p = basic(1, M);
      for (std::uint32_t mask = 0; mask < (1u << M); ++mask) {
        SectorId k(mask, M);
        auto d = sector_scalars(p, k);
        // branch formula: M when no zero, else (1/2) sum (1 - delta_{k,0} + delta_{k,1})
        int branch;
        if (k.weight() == M) {
          branch = M;
        } else {
          int s = 0;
          for (int j = 1; j <= M; ++j) s += 1 - (k.k(j) == 0 ? 1 : 0) + (k.k(j) == 1 ? 1 : 0);
          REQUIRE(s % 2 == 0);
          branch = s / 2;
        }
        CHECK(d.kappa_k == branch);
        CHECK(d.kappa_k == k.weight());
      }
    }
  }
  SUBCASE("Lambda = 1 exactly for the constant sectors") {
    for (int M = 2; M <= 6; ++M) {
      auto p = basic(1, M);
      for (std::uint32_t mask = 0; mask < (1u << M); ++mask) {
        auto d = sector_scalars(p, SectorId(mask, M));
        bool constant = (mask == 0) || (mask == (1u << M) - 1);
        CHECK(d.lambda_flag == (constant ? 1 : 0));
        CHECK(d.alpha_k + d.lambda_flag == 1);
      }
    }
  }
}

TEST_CASE("extradiagonal sector couplings") {
  auto p = basic(1, 2);
  p.Omega = 1.0;
  p.g_prime = 0.0;
  p.g_extra.assign(1, std::vector<std::vector<double>>(2, std::vector<double>(2, 0.0)));
  p.g_extra[0][0][1] = 0.2;
  p.g_extra[0][1][0] = 0.2;
  SUBCASE("eps_NM counts nonzero off-diagonal couplings") {
    CHECK(p.eps_NM() == 2);
  }
  SUBCASE("g_i[k] sums over allowed hops") {
    auto d10 = sector_scalars(p, SectorId::from_string("10"));
    // kappa_jl nonzero only for k_j=0,k_l=1: [10] allows (j,l)=(2,1)
    CHECK(d10.g_i_k[0] == doctest::Approx(0.2));
    auto d11 = sector_scalars(p, SectorId::from_string("11"));
    CHECK(d11.g_i_k[0] == doctest::Approx(0.0));
  }
  SUBCASE("asymmetric coupling table rejected") {
    auto q = p;
    q.g_extra[0][1][0] = 0.3;
    CHECK_THROWS_AS(q.validate(), ParameterError);
  }
  SUBCASE("mode-dependent coupling count rejected") {
    auto q = basic(2, 2);
    q.g_extra.assign(2, std::vector<std::vector<double>>(2, std::vector<double>(2, 0.0)));
    q.g_extra[0][0][1] = 0.2;
    q.g_extra[0][1][0] = 0.2;
    CHECK_THROWS_AS(q.validate(), ParameterError);
  }
}

TEST_CASE("degeneracy") {
  CHECK(degeneracy(0, 1) == 1);
  CHECK(degeneracy(7, 1) == 1);
  CHECK(degeneracy(3, 2) == 4);
  CHECK(degeneracy(2, 3) == 6);
  SUBCASE("matches composition enumeration") {
    for (int N = 1; N <= 5; ++N)
      for (int n = 0; n <= 20; ++n) CHECK(degeneracy(n, N) == compositions(n, N).size());
  }
  SUBCASE("generating function of (1-x)^{-N}, exact integers") {
    for (int N = 1; N <= 5; ++N) {
      // coefficients of (1-x)^{-N}: c_0 = 1, c_n = c_{n-1} (n+N-1)/n
      unsigned long long c = 1;
      CHECK(degeneracy(0, N) == c);
      for (int n = 1; n <= 20; ++n) {
        c = c * static_cast<unsigned long long>(n + N - 1) / static_cast<unsigned long long>(n);
        CHECK(degeneracy(n, N) == c);
      }
    }
  }
  SUBCASE("overflow detected") {
    CHECK_THROWS_AS(degeneracy(40, 30), ContractError);
  }
}

TEST_CASE("energy_diag") {
  SUBCASE("decoupled limit") {
    auto p = basic(2, 1);
    p.omega = {1.0, 1.7};
    p.epsilon = {0.5};
    auto k = SectorId::from_string("1");
    CHECK(energy_diag(p, k, {2, 1}) == doctest::Approx(2 * 1.0 + 1.7 + 0.5));
  }
  SUBCASE("worked single-mode value") {
    auto p = basic(1, 1);
    p.epsilon = {0.3};
    p.g_diag = {0.1};
    CHECK(energy_diag(p, SectorId::from_string("1"), {2}) == doctest::Approx(2.29));
  }
  SUBCASE("equal-frequency form agrees") {
    auto p = basic(3, 2);
    p.omega = {1.3, 1.3, 1.3};
    p.epsilon = {0.2, 0.4};
    p.g_diag = {0.15, 0.1};
    auto k = SectorId::from_string("11");
    double a = energy_diag(p, k, {1, 2, 0});
    double b = energy_diag_equal(p, k, 3);
    CHECK(a == doctest::Approx(b).epsilon(1e-12));
  }
  SUBCASE("level spacing is exactly the mode frequencies") {
    auto p = basic(2, 1);
    p.omega = {1.0, 1.7};
    p.g_diag = {0.3};
    auto k = SectorId::from_string("1");
    double e0 = energy_diag(p, k, {0, 0});
    CHECK(energy_diag(p, k, {3, 2}) - e0 == doctest::Approx(3 * 1.0 + 2 * 1.7).epsilon(1e-14));
  }
}

TEST_CASE("energy_cm_diag") {
  auto p = basic(1, 1);
  p.Omega = 2.0;
  p.g_prime = 0.4;
  SUBCASE("m=0, kappa=0 reduces to energy_diag") {
    auto k = SectorId::from_string("0");
    CHECK(energy_cm_diag(p, k, 0, {3}) == doctest::Approx(energy_diag(p, k, {3})));
  }
  SUBCASE("c.m. part plug-in") {
    auto k = SectorId::from_string("1");
    double e = energy_cm_diag(p, k, 3, {0}) - energy_diag(p, k, {0});
    CHECK(e == doctest::Approx(6.0 - 0.08));
  }
}

TEST_CASE("energy_extradiag") {
  SUBCASE("decoupled limit") {
    auto p = basic(1, 2);
    p.Omega = 1.0;
    p.g_prime = 0.0;
    p.epsilon = {0.3, 0.5};
    auto k = SectorId::from_string("10");
    auto e = energy_extradiag(p, k, 2, {3});
    CHECK(e.alpha_form == doctest::Approx(2.0 + 3.0 + 0.3));
    CHECK(e.lambda == 0.0);
  }
  SUBCASE("Lambda sector sees only free energies in the alpha form") {
    auto p = basic(1, 2);
    p.Omega = 1.0;
    p.g_prime = 0.3;
    p.epsilon = {0.3, 0.5};
    p.g_extra.assign(1, std::vector<std::vector<double>>(2, std::vector<double>(2, 0.0)));
    p.g_extra[0][0][1] = 0.2;
    p.g_extra[0][1][0] = 0.2;
    auto e = energy_extradiag(p, SectorId::from_string("11"), 1, {2});
    CHECK(e.alpha_form == doctest::Approx(1.0 + 2.0 + 0.8));
  }
  SUBCASE("eps_NM = 0 with nonzero request is a parameter error") {
    auto p = basic(1, 2);
    p.Omega = 1.0;
    p.g_prime = 0.0;
    // couplings present in the derived scalars but eps_NM zero cannot happen
    // through a validated table, so drive it directly
    CHECK_NOTHROW(energy_extradiag(p, SectorId::from_string("10"), 0, {0}));
  }
}

TEST_CASE("energy_general") {
  SUBCASE("all couplings zero recombine to free energies") {
    auto p = basic(2, 2);
    p.omega = {1.0, 1.7};
    p.epsilon = {0.3, 0.5};
    p.Omega = 2.0;
    p.g_prime = 0.0;
    auto k = SectorId::from_string("10");
    auto e = energy_general(p, k, 2, {1, 1});
    CHECK(e.total() == doctest::Approx(2 * 2.0 + 1.0 + 1.7 + 0.3));
  }
  SUBCASE("free-limit reduction holds for every sector") {
    auto p = basic(1, 3);
    p.epsilon = {0.1, 0.2, 0.3};
    p.Omega = 1.5;
    p.g_prime = 0.0;
    for (std::uint32_t mask = 0; mask < 8; ++mask) {
      SectorId k(mask, 3);
      auto d = sector_scalars(p, k);
      auto e = energy_general(p, k, 1, {2});
      CHECK(e.total() == doctest::Approx(1.5 + 2.0 + d.eps_k));
    }
  }
  SUBCASE("term-by-term E1") {
    auto p = basic(1, 1);
    p.epsilon = {0.4};
    p.g_diag = {0.2};
    p.Omega = 2.0;
    p.g_prime = 0.3;
    auto k = SectorId::from_string("1");
    auto e = energy_general(p, k, 1, {2}, std::nullopt, 0.0);
    double e1 = 2.0 * 1 / 2 - 2 * 0.09 / 2.0 + (1.0 * 2 / 2 - 2 * 0.04 / 1.0) + 0.2;
    CHECK(e.e1 == doctest::Approx(e1).epsilon(1e-12));
    CHECK(e.e2 == doctest::Approx(2.0 * 1 / 2 + 1.0 * 2 / 2 + 0.2));
  }
}

TEST_CASE("average frequency") {
  CHECK(average_frequency({1, 1}, {1.0, 3.0}) == doctest::Approx(2.0));
  CHECK(average_frequency({2, 0}, {1.0, 3.0}) == doctest::Approx(1.0));
  CHECK(average_frequency({3, 4}, {2.0, 2.0}) == doctest::Approx(2.0));
  CHECK_THROWS_AS(average_frequency({0, 0}, {1.0, 3.0}), ParameterError);
}

TEST_CASE("free limit for every closed form") {
  auto p = basic(2, 2);
  p.omega = {1.0, 1.7};
  p.epsilon = {0.3, 0.5};
  p.Omega = 2.0;
  p.g_prime = 0.0;
  for (std::uint32_t mask = 0; mask < 4; ++mask) {
    SectorId k(mask, 2);
    auto d = sector_scalars(p, k);
    double free = 2.0 * 1 + 1.0 * 2 + 1.7 * 1 + d.eps_k;
    CHECK(energy_cm_diag(p, k, 1, {2, 1}) == doctest::Approx(free));
    CHECK(energy_extradiag(p, k, 1, {2, 1}).alpha_form == doctest::Approx(free));
    CHECK(energy_extradiag(p, k, 1, {2, 1}).b_form ==
          doctest::Approx(2.0 * 1 + 1.0 * 2 + 1.7 * 1));  // b-form has no epsilon term
    CHECK(energy_general(p, k, 1, {2, 1}).total() == doctest::Approx(free));
  }
}
