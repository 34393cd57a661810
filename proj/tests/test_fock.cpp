#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <gkvcs/fock.hpp>

#include <random>

using namespace gkvcs;

static TruncationSpec single_mode(int cutoff) {
  TruncationSpec s;
  s.boson_cutoffs = {cutoff};
  return s;
}

TEST_CASE("lowering operator on small cutoff") {
  auto spec = single_mode(2);
  auto a = annihilate(Mode::boson(0), spec);
  auto one = basis_state(spec, {1});
  auto zero = basis_state(spec, {0});
  CHECK((a.m * one.v - zero.v).norm() == doctest::Approx(0.0));
  CHECK((a.m * zero.v).norm() == doctest::Approx(0.0));
}

TEST_CASE("number operator eigenvalues") {
  auto spec = single_mode(6);
  auto n_op = number_op(Mode::boson(0), spec);
  for (int n = 0; n <= 6; ++n) {
    auto e = basis_state(spec, {n});
    CHECK(expectation(n_op, e) == doctest::Approx(static_cast<double>(n)));
  }
}

TEST_CASE("commutator defect sits on the truncation boundary") {
  auto spec = single_mode(5);
  auto a = annihilate(Mode::boson(0), spec);
  Matrix comm = a.m * a.m.adjoint() - a.m.adjoint() * a.m;
  for (int n = 0; n < 5; ++n) CHECK(std::abs(comm(n, n) - 1.0) < 1e-12);
  CHECK(std::abs(comm(5, 5) - (-5.0)) < 1e-12);  // -(n_max+1) + n_max
  Matrix off = comm - Matrix(comm.diagonal().asDiagonal());
  CHECK(off.cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("displacement basics") {
  auto spec = single_mode(30);
  SUBCASE("beta zero is identity") {
    auto d = displacement(Mode::boson(0), 0.0, spec);
    CHECK((d.m - Matrix::Identity(31, 31)).cwiseAbs().maxCoeff() < 1e-13);
  }
  SUBCASE("vacuum overlap") {
    auto d = displacement(Mode::boson(0), 0.3, spec);
    auto vac = basis_state(spec, {0});
    Complex ov = vac.v.dot(d.m * vac.v);
    CHECK(std::abs(ov - std::exp(-0.045)) < 1e-12);
  }
  SUBCASE("unitarity at cutoff 40") {
    auto spec40 = single_mode(40);
    auto d = displacement(Mode::boson(0), 0.5, spec40);
    CHECK((d.m.adjoint() * d.m - Matrix::Identity(41, 41)).cwiseAbs().maxCoeff() < 1e-10);
  }
  SUBCASE("inverse displacement") {
    auto dp = displacement(Mode::boson(0), 0.8, single_mode(18));
    auto dm = displacement(Mode::boson(0), -0.8, single_mode(18));
    CHECK((dp.m * dm.m - Matrix::Identity(19, 19)).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("displaced vacuum expectation of a") {
  auto spec = single_mode(40);
  auto d = displacement(Mode::boson(0), -0.3, spec);
  StateVector psi{d.m.col(0), spec.tag()};
  auto a = annihilate(Mode::boson(0), spec);
  Complex mean = psi.v.dot(a.m * psi.v);
  CHECK(std::abs(mean - Complex(-0.3, 0)) < 1e-10);
}

TEST_CASE("evolve matches scaled Taylor series") {
  std::mt19937 rng(12345);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Matrix h(8, 8);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) h(i, j) = Complex(u(rng), u(rng));
  h = (h + Matrix(h.adjoint())).eval();

  Vector psi0(8);
  for (int i = 0; i < 8; ++i) psi0(i) = Complex(u(rng), u(rng));
  psi0.normalize();

  double t = 0.7;
  // exp(-iHt) psi by 20-term Taylor with 2^4 scaling-and-squaring on the state
  int squarings = 4;
  Matrix step = Matrix::Identity(8, 8);
  Matrix term = Matrix::Identity(8, 8);
  Matrix gen = Complex(0, -t / std::pow(2.0, squarings)) * h;
  for (int k = 1; k <= 20; ++k) {
    term = (term * gen / static_cast<double>(k)).eval();
    step += term;
  }
  Matrix full = step;
  for (int s = 0; s < squarings; ++s) full = (full * full).eval();
  Vector expected = full * psi0;

  std::size_t tag = 777;
  StateVector got = evolve({h, tag}, t, {psi0, tag});
  CHECK((got.v - expected).norm() < 1e-9);
  CHECK(std::abs(got.v.norm() - 1.0) < 1e-10);

  StateVector back = evolve({h, tag}, -t, got);
  CHECK((back.v - psi0).norm() < 1e-9);
}

TEST_CASE("evolve trivial cases and contract") {
  auto spec = single_mode(4);
  auto n_op = number_op(Mode::boson(0), spec);
  auto e2 = basis_state(spec, {2});
  SUBCASE("t = 0") {
    auto r = evolve(n_op, 0.0, e2);
    CHECK((r.v - e2.v).norm() < 1e-14);
  }
  SUBCASE("diagonal phase") {
    auto r = evolve(n_op, 0.4, e2);
    Complex phase = r.v(flat_index(spec, {2}));
    CHECK(std::abs(phase - std::exp(Complex(0, -0.8))) < 1e-12);
  }
  SUBCASE("non-Hermitian rejected") {
    OperatorMatrix bad{Matrix::Zero(5, 5), spec.tag()};
    bad.m(0, 1) = 1.0;
    CHECK_THROWS_AS(evolve(bad, 1.0, e2), ContractError);
  }
}

TEST_CASE("inner, tensor, expectation plumbing") {
  auto spec = single_mode(3);
  auto e1 = basis_state(spec, {1});
  auto e2 = basis_state(spec, {2});
  CHECK(std::abs(inner(e1, e1) - 1.0) < 1e-14);
  CHECK(std::abs(inner(e1, e2)) < 1e-14);

  OperatorMatrix i2{Matrix::Identity(2, 2), 1};
  OperatorMatrix i3{Matrix::Identity(3, 3), 2};
  auto i6 = tensor(i2, i3);
  CHECK((i6.m - Matrix::Identity(6, 6)).cwiseAbs().maxCoeff() == 0.0);

  auto n_op = number_op(Mode::boson(0), spec);
  CHECK(expectation(n_op, e2) == doctest::Approx(2.0));

  StateVector other{e1.v, 999};
  CHECK_THROWS_AS(inner(e1, other), ParameterError);
  CHECK_THROWS_AS((void)expectation(n_op, other), ParameterError);
}

TEST_CASE("multimode flat indexing is row-major in declared order") {
  TruncationSpec spec;
  spec.boson_cutoffs = {2, 1};
  spec.cm_cutoff = 1;
  // factors: cm(dim 2), boson0(dim 3), boson1(dim 2) -> dim 12
  CHECK(spec.space_dim() == 12);
  CHECK(flat_index(spec, {0, 0, 0}) == 0);
  CHECK(flat_index(spec, {0, 0, 1}) == 1);
  CHECK(flat_index(spec, {0, 1, 0}) == 2);
  CHECK(flat_index(spec, {1, 0, 0}) == 6);
  CHECK_THROWS_AS(flat_index(spec, {0, 3, 0}), ParameterError);

  auto n1 = number_op(Mode::boson(1), spec);
  auto s = basis_state(spec, {1, 2, 1});
  CHECK(expectation(n1, s) == doctest::Approx(1.0));
  auto ncm = number_op(Mode::cm(), spec);
  CHECK(expectation(ncm, s) == doctest::Approx(1.0));
}

TEST_CASE("sector id bit conventions") {
  auto k = SectorId::from_string("101");
  CHECK(k.levels == 3);
  CHECK(k.k(1) == 1);
  CHECK(k.k(2) == 0);
  CHECK(k.k(3) == 1);
  CHECK(k.index() == 5);
  CHECK(k.weight() == 2);
  CHECK(k.to_string() == "101");
  CHECK_THROWS_AS(SectorId::from_string("102"), ParameterError);
}

TEST_CASE("fermion hop sector map") {
  SUBCASE("number operator on occupied level") {
    auto k = SectorId::from_string("01");
    auto img = fermion_hop(2, 2, k);
    CHECK(!img.annihilated);
    CHECK(img.sector == k);
    CHECK(img.sign == 1);
  }
  SUBCASE("empty level annihilates") {
    auto img = fermion_hop(1, 2, SectorId::from_string("00"));
    CHECK(img.annihilated);
  }
  SUBCASE("occupied target annihilates") {
    auto img = fermion_hop(1, 2, SectorId::from_string("11"));
    CHECK(img.annihilated);
  }
  SUBCASE("M=2 hop against explicit Jordan-Wigner matrices") {
    // c_1 = s+ x 1, c_2 = sz x s+ with s+ = [[0,1],[0,0]], sz = diag(1,-1),
    // on the basis |0>, c2†|0>, c1†|0>, c1†c2†|0> ordered as 00,01,10,11.
    Matrix sp = Matrix::Zero(2, 2);
    sp(0, 1) = 1;
    Matrix sz = Matrix::Zero(2, 2);
    sz(0, 0) = 1;
    sz(1, 1) = -1;
    Matrix id = Matrix::Identity(2, 2);
    Matrix c1 = detail::kron(sp, id);
    Matrix c2 = detail::kron(sz, sp);
    Matrix hop12 = c1.adjoint() * c2;  // c†_1 c_2
    Matrix got = fermion_hop_matrix(1, 2, 2);
    CHECK((hop12 - got).cwiseAbs().maxCoeff() < 1e-14);
    Matrix hop21 = c2.adjoint() * c1;
    CHECK((fermion_hop_matrix(2, 1, 2) - hop21).cwiseAbs().maxCoeff() < 1e-14);

    auto img = fermion_hop(1, 2, SectorId::from_string("01"));
    CHECK(!img.annihilated);
    CHECK(img.sector.to_string() == "10");
    CHECK(img.sign == 1);
  }
  SUBCASE("M=3 signs against Jordan-Wigner") {
    Matrix sp = Matrix::Zero(2, 2);
    sp(0, 1) = 1;
    Matrix sz = Matrix::Zero(2, 2);
    sz(0, 0) = 1;
    sz(1, 1) = -1;
    Matrix id = Matrix::Identity(2, 2);
    Matrix c1 = detail::kron(detail::kron(sp, id), id);
    Matrix c2 = detail::kron(detail::kron(sz, sp), id);
    Matrix c3 = detail::kron(detail::kron(sz, sz), sp);
    const Matrix cs[3] = {c1, c2, c3};
    for (int j = 1; j <= 3; ++j)
      for (int l = 1; l <= 3; ++l) {
        Matrix want = cs[j - 1].adjoint() * cs[l - 1];
        CHECK((fermion_hop_matrix(j, l, 3) - want).cwiseAbs().maxCoeff() < 1e-14);
      }
  }
  SUBCASE("hop round trip is a projector") {
    for (std::uint32_t mask = 0; mask < 8; ++mask) {
      SectorId k(mask, 3);
      if (k.k(2) == 1 || k.k(1) == 0) continue;
      auto fwd = fermion_hop(2, 1, k);
      REQUIRE(!fwd.annihilated);
      auto back = fermion_hop(1, 2, fwd.sector);
      REQUIRE(!back.annihilated);
      CHECK(back.sector == k);
      CHECK(fwd.sign * back.sign == 1);
    }
  }
}
