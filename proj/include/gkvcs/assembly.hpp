#ifndef GKVCS_ASSEMBLY_HPP
#define GKVCS_ASSEMBLY_HPP

// Hamiltonian matrix construction for all model variants, displaced
// eigenvectors, and the dense diagonalization oracle.

#include <gkvcs/model.hpp>

#include <algorithm>
#include <map>
#include <queue>
#include <set>

namespace gkvcs {

enum class Variant { Diag, CmDiag, Extradiag, General };

struct SectorBundle {
  OperatorMatrix h;          // sector Hamiltonian on the (cm x) boson space
  OperatorMatrix h_shifted;  // h - E0
  double ground_energy = 0;
};

struct HamiltonianBundle {
  Variant variant = Variant::Diag;
  TruncationSpec spec;
  ModelParams params;

  // sector-diagonal variants: indexed by SectorId::index()
  std::vector<SectorBundle> sectors;
  std::vector<OperatorMatrix> h1_sector, h2_sector;  // c.m.-diagonal split

  // extradiagonal / general: one matrix on space (x) fermion factor
  OperatorMatrix full;
  OperatorMatrix h_bf, h_cmf;     // boson-fermion / c.m.-fermion displays
  OperatorMatrix part1, part2;    // general case H1, H2
  OperatorMatrix h_interaction;   // general case H_int
};

namespace detail {

// position operator combination a† + a embedded at one factor
inline Matrix x_op(const TruncationSpec& spec, Mode mode) {
  auto a = annihilate(mode, spec);
  return a.m + Matrix(a.m.adjoint());
}

inline Matrix embed_fermion(const Matrix& space_op, const Matrix& fermi_op) {
  return kron(space_op, fermi_op);
}

}  // namespace detail

inline HamiltonianBundle build_diag(const ModelParams& p, const TruncationSpec& spec) {
  p.validate();
  spec.validate();
  if (spec.has_cm()) throw ParameterError("build_diag: no c.m. mode in this variant");
  if (spec.modes() != p.N) throw ParameterError("build_diag: mode count mismatch");
  HamiltonianBundle b;
  b.variant = Variant::Diag;
  b.spec = spec;
  b.params = p;
  long dim = spec.space_dim();
  Matrix free = Matrix::Zero(dim, dim);
  Matrix xsum = Matrix::Zero(dim, dim);
  for (int l = 0; l < p.N; ++l) {
    free += p.omega[static_cast<std::size_t>(l)] * number_op(Mode::boson(l), spec).m;
    xsum += detail::x_op(spec, Mode::boson(l));
  }
  b.sectors.resize(static_cast<std::size_t>(1L << p.M));
  for (std::uint32_t mask = 0; mask < (1u << p.M); ++mask) {
    SectorId k(mask, p.M);
    auto d = sector_scalars(p, k);
    Matrix h = free + d.eps_k * Matrix::Identity(dim, dim) + d.g_k * xsum;
    double e0 = energy_diag(p, k, std::vector<int>(static_cast<std::size_t>(p.N), 0));
    b.sectors[mask] = {{h, spec.tag()}, {h - e0 * Matrix::Identity(dim, dim), spec.tag()}, e0};
  }
  return b;
}

inline HamiltonianBundle build_cm_diag(const ModelParams& p, const TruncationSpec& spec) {
  p.validate();
  spec.validate();
  if (!spec.has_cm()) throw ParameterError("build_cm_diag: c.m. cutoff required");
  if (!p.Omega || !p.g_prime) throw ParameterError("build_cm_diag: Omega, g' required");
  if (spec.modes() != p.N) throw ParameterError("build_cm_diag: mode count mismatch");
  HamiltonianBundle b;
  b.variant = Variant::CmDiag;
  b.spec = spec;
  b.params = p;
  long dim = spec.space_dim();
  Matrix boson_free = Matrix::Zero(dim, dim);
  Matrix xsum = Matrix::Zero(dim, dim);
  for (int l = 0; l < p.N; ++l) {
    boson_free += p.omega[static_cast<std::size_t>(l)] * number_op(Mode::boson(l), spec).m;
    xsum += detail::x_op(spec, Mode::boson(l));
  }
  Matrix cm_free = *p.Omega * number_op(Mode::cm(), spec).m;
  Matrix cm_x = detail::x_op(spec, Mode::cm());
  b.sectors.resize(static_cast<std::size_t>(1L << p.M));
  b.h1_sector.resize(b.sectors.size());
  b.h2_sector.resize(b.sectors.size());
  for (std::uint32_t mask = 0; mask < (1u << p.M); ++mask) {
    SectorId k(mask, p.M);
    auto d = sector_scalars(p, k);
    Matrix h1 = boson_free + d.eps_k * Matrix::Identity(dim, dim) + d.g_k * xsum;
    Matrix h2 = cm_free - (*p.g_prime * d.kappa_k) * cm_x;
    Matrix h = h1 + h2;
    double e0 = energy_cm_diag(p, k, 0, std::vector<int>(static_cast<std::size_t>(p.N), 0));
    b.sectors[mask] = {{h, spec.tag()}, {h - e0 * Matrix::Identity(dim, dim), spec.tag()}, e0};
    b.h1_sector[mask] = {h1, spec.tag()};
    b.h2_sector[mask] = {h2, spec.tag()};
  }
  return b;
}

inline HamiltonianBundle build_extradiag(const ModelParams& p, const TruncationSpec& spec) {
  p.validate();
  spec.validate();
  if (!spec.has_cm()) throw ParameterError("build_extradiag: c.m. cutoff required");
  if (!p.Omega || !p.g_prime) throw ParameterError("build_extradiag: Omega, g' required");
  if (!p.has_extra()) throw ParameterError("build_extradiag: extradiagonal coupling table required");
  if (spec.fermion_levels != p.M) throw ParameterError("build_extradiag: spec fermion levels != M");
  HamiltonianBundle b;
  b.variant = Variant::Extradiag;
  b.spec = spec;
  b.params = p;
  long sd = spec.space_dim();
  long fd = spec.fermion_dim();
  Matrix id_f = Matrix::Identity(fd, fd);
  Matrix id_s = Matrix::Identity(sd, sd);

  std::vector<Matrix> hop(static_cast<std::size_t>(p.M * p.M));
  for (int j = 1; j <= p.M; ++j)
    for (int l = 1; l <= p.M; ++l) hop[static_cast<std::size_t>((j - 1) * p.M + (l - 1))] = fermion_hop_matrix(j, l, p.M);

  Matrix h = Matrix::Zero(sd * fd, sd * fd);
  h += detail::embed_fermion(*p.Omega * number_op(Mode::cm(), spec).m, id_f);
  for (int i = 0; i < p.N; ++i)
    h += detail::embed_fermion(p.omega[static_cast<std::size_t>(i)] * number_op(Mode::boson(i), spec).m, id_f);
  for (int a = 1; a <= p.M; ++a)
    h += p.epsilon[static_cast<std::size_t>(a - 1)] * detail::embed_fermion(id_s, hop[static_cast<std::size_t>((a - 1) * p.M + (a - 1))]);
  for (int i = 0; i < p.N; ++i) {
    Matrix xi = detail::x_op(spec, Mode::boson(i));
    for (int a = 1; a <= p.M; ++a)
      for (int ap = 1; ap <= p.M; ++ap) {
        double g = p.g_extra[static_cast<std::size_t>(i)][static_cast<std::size_t>(a - 1)][static_cast<std::size_t>(ap - 1)];
        if (g != 0.0) h += g * detail::embed_fermion(xi, hop[static_cast<std::size_t>((a - 1) * p.M + (ap - 1))]);
      }
  }
  Matrix xb = detail::x_op(spec, Mode::cm());
  Matrix hop_sum = Matrix::Zero(fd, fd);
  for (int a = 1; a <= p.M; ++a)
    for (int ap = 1; ap <= p.M; ++ap)
      if (a != ap) hop_sum += hop[static_cast<std::size_t>((a - 1) * p.M + (ap - 1))];
  h += -*p.g_prime * detail::embed_fermion(xb, hop_sum);
  b.full = {h, spec.tag() * 2 + 1};

  // boson-fermion / c.m.-fermion interaction displays
  Matrix hbf = Matrix::Zero(sd * fd, sd * fd);
  for (int i = 0; i < p.N; ++i) {
    Matrix xi = detail::x_op(spec, Mode::boson(i));
    Matrix ni = number_op(Mode::boson(i), spec).m;
    hbf += detail::embed_fermion(p.omega[static_cast<std::size_t>(i)] * ni, id_f);
    for (int j = 1; j <= p.M; ++j)
      for (int l = 1; l <= p.M; ++l)
        if (j != l) {
          double g = p.g_extra[static_cast<std::size_t>(i)][static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(l - 1)];
          const Matrix& c = hop[static_cast<std::size_t>((j - 1) * p.M + (l - 1))];
          hbf += detail::embed_fermion(g * xi + p.omega[static_cast<std::size_t>(i)] * ni, Matrix(c));
        }
  }
  for (int a = 1; a <= p.M; ++a)
    hbf += p.epsilon[static_cast<std::size_t>(a - 1)] * detail::embed_fermion(id_s, hop[static_cast<std::size_t>((a - 1) * p.M + (a - 1))]);
  b.h_bf = {hbf, b.full.basis_tag};

  Matrix cm_core = *p.Omega * number_op(Mode::cm(), spec).m - *p.g_prime * xb;
  Matrix hcmf = detail::embed_fermion(cm_core, hop_sum) + detail::embed_fermion(*p.Omega * number_op(Mode::cm(), spec).m, id_f);
  b.h_cmf = {hcmf, b.full.basis_tag};
  return b;
}

// Full-interaction Hamiltonian H = H1 + H2 with halved free parts.
// g_prime_1/g_prime_2 override the inertial coupling per part (default g').
inline HamiltonianBundle build_general(const ModelParams& p, const TruncationSpec& spec,
                                       std::optional<double> g_prime_1 = std::nullopt,
                                       std::optional<double> g_prime_2 = std::nullopt) {
  p.validate();
  spec.validate();
  if (!spec.has_cm()) throw ParameterError("build_general: c.m. cutoff required");
  if (!p.Omega || !p.g_prime) throw ParameterError("build_general: Omega, g' required");
  if (spec.fermion_levels != p.M) throw ParameterError("build_general: spec fermion levels != M");
  HamiltonianBundle b;
  b.variant = Variant::General;
  b.spec = spec;
  b.params = p;
  long sd = spec.space_dim();
  long fd = spec.fermion_dim();
  Matrix id_f = Matrix::Identity(fd, fd);
  Matrix id_s = Matrix::Identity(sd, sd);
  double gp1 = g_prime_1.value_or(*p.g_prime);
  double gp2 = g_prime_2.value_or(*p.g_prime);

  std::vector<Matrix> hop(static_cast<std::size_t>(p.M * p.M));
  for (int j = 1; j <= p.M; ++j)
    for (int l = 1; l <= p.M; ++l) hop[static_cast<std::size_t>((j - 1) * p.M + (l - 1))] = fermion_hop_matrix(j, l, p.M);
  Matrix n_f = Matrix::Zero(fd, fd);
  for (int a = 1; a <= p.M; ++a) n_f += hop[static_cast<std::size_t>((a - 1) * p.M + (a - 1))];
  Matrix hop_sum = Matrix::Zero(fd, fd);
  for (int a = 1; a <= p.M; ++a)
    for (int ap = 1; ap <= p.M; ++ap)
      if (a != ap) hop_sum += hop[static_cast<std::size_t>((a - 1) * p.M + (ap - 1))];

  Matrix half_free = detail::embed_fermion(*p.Omega / 2 * number_op(Mode::cm(), spec).m, id_f);
  for (int i = 0; i < p.N; ++i)
    half_free += detail::embed_fermion(p.omega[static_cast<std::size_t>(i)] / 2 * number_op(Mode::boson(i), spec).m, id_f);
  for (int a = 1; a <= p.M; ++a)
    half_free += p.epsilon[static_cast<std::size_t>(a - 1)] / 2 *
                 detail::embed_fermion(id_s, hop[static_cast<std::size_t>((a - 1) * p.M + (a - 1))]);

  Matrix xb = detail::x_op(spec, Mode::cm());

  Matrix h1 = half_free;
  for (int i = 0; i < p.N; ++i) {
    Matrix xi = detail::x_op(spec, Mode::boson(i));
    for (int a = 1; a <= p.M; ++a)
      h1 += p.g_diag[static_cast<std::size_t>(a - 1)] *
            detail::embed_fermion(xi, hop[static_cast<std::size_t>((a - 1) * p.M + (a - 1))]);
  }
  h1 += -gp1 * detail::embed_fermion(xb, n_f);

  Matrix h2 = half_free;
  if (p.has_extra()) {
    for (int i = 0; i < p.N; ++i) {
      Matrix xi = detail::x_op(spec, Mode::boson(i));
      for (int a = 1; a <= p.M; ++a)
        for (int ap = 1; ap <= p.M; ++ap)
          if (a != ap) {
            double g = p.g_extra[static_cast<std::size_t>(i)][static_cast<std::size_t>(a - 1)][static_cast<std::size_t>(ap - 1)];
            if (g != 0.0) h2 += g * detail::embed_fermion(xi, hop[static_cast<std::size_t>((a - 1) * p.M + (ap - 1))]);
          }
    }
  }
  h2 += -gp2 * detail::embed_fermion(xb, hop_sum);

  std::size_t tag = spec.tag() * 2 + 1;
  b.part1 = {h1, tag};
  b.part2 = {h2, tag};
  b.full = {h1 + h2, tag};

  // interaction block: boson hops plus the displaced c.m. bracket on the hop sum
  Matrix hint = Matrix::Zero(sd * fd, sd * fd);
  for (int i = 0; i < p.N; ++i) {
    Matrix xi = detail::x_op(spec, Mode::boson(i));
    Matrix ni = number_op(Mode::boson(i), spec).m;
    for (int j = 1; j <= p.M; ++j)
      for (int l = 1; l <= p.M; ++l)
        if (j != l) {
          double g = p.has_extra()
                         ? p.g_extra[static_cast<std::size_t>(i)][static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(l - 1)]
                         : 0.0;
          hint += detail::embed_fermion(g * xi + p.omega[static_cast<std::size_t>(i)] / 2 * ni,
                                        Matrix(hop[static_cast<std::size_t>((j - 1) * p.M + (l - 1))]));
        }
  }
  hint += detail::embed_fermion(*p.Omega / 2 * number_op(Mode::cm(), spec).m - gp2 * xb, hop_sum);
  b.h_interaction = {hint, tag};

  // boson-fermion / c.m.-fermion displays (single epsilon bookkeeping)
  Matrix hbf = hint - detail::embed_fermion(*p.Omega / 2 * number_op(Mode::cm(), spec).m - gp2 * xb, hop_sum);
  for (int i = 0; i < p.N; ++i) {
    Matrix xi = detail::x_op(spec, Mode::boson(i));
    hbf += detail::embed_fermion(p.omega[static_cast<std::size_t>(i)] * number_op(Mode::boson(i), spec).m, id_f);
    for (int j = 1; j <= p.M; ++j)
      hbf += p.g_diag[static_cast<std::size_t>(j - 1)] *
             detail::embed_fermion(xi, hop[static_cast<std::size_t>((j - 1) * p.M + (j - 1))]);
  }
  for (int j = 1; j <= p.M; ++j)
    hbf += p.epsilon[static_cast<std::size_t>(j - 1)] *
           detail::embed_fermion(id_s, hop[static_cast<std::size_t>((j - 1) * p.M + (j - 1))]);
  b.h_bf = {hbf, tag};

  Matrix hcmf = detail::embed_fermion(*p.Omega / 2 * number_op(Mode::cm(), spec).m, id_f) +
                detail::embed_fermion(*p.Omega / 2 * number_op(Mode::cm(), spec).m - gp2 * xb, hop_sum) +
                detail::embed_fermion(*p.Omega / 2 * number_op(Mode::cm(), spec).m - gp1 * xb, n_f);
  b.h_cmf = {hcmf, tag};
  return b;
}

// Displaced analytic eigenvector for the sector-diagonal and extradiagonal
// variants, as a state on the (cm x) boson space (fermion factor excluded).
inline StateVector displaced_eigenvector(Variant variant, const ModelParams& p, const TruncationSpec& spec,
                                         const SectorId& k, std::optional<int> m, const std::vector<int>& n) {
  p.validate();
  spec.validate();
  if (static_cast<int>(n.size()) != p.N) throw ParameterError("displaced_eigenvector: occupation arity != N");
  auto d = sector_scalars(p, k);
  auto dims = spec.factor_dims();
  std::vector<Vector> factors;
  std::size_t fpos = 0;
  if (spec.has_cm()) {
    if (!m) throw ParameterError("displaced_eigenvector: c.m. label required");
    if (!p.Omega || !p.g_prime) throw ParameterError("displaced_eigenvector: Omega, g' required");
    double beta;
    switch (variant) {
      case Variant::CmDiag: beta = *p.g_prime * d.kappa_k / *p.Omega; break;
      case Variant::Extradiag: beta = d.f_flag ? *p.g_prime / *p.Omega : 0.0; break;
      case Variant::General: beta = 2 * *p.g_prime * d.kappa_k / *p.Omega; break;
      default: throw ParameterError("displaced_eigenvector: variant has no c.m. mode");
    }
    factors.push_back(displacement_factor(dims[fpos], beta).col(*m));
    ++fpos;
  } else if (variant != Variant::Diag) {
    throw ParameterError("displaced_eigenvector: variant requires a c.m. mode");
  }
  int eps = d.eps_NM > 0 ? d.eps_NM : 1;
  for (int l = 0; l < p.N; ++l, ++fpos) {
    double w = p.omega[static_cast<std::size_t>(l)];
    double beta;
    switch (variant) {
      case Variant::Diag:
      case Variant::CmDiag: beta = -d.g_k / w; break;
      case Variant::Extradiag: beta = d.f_flag ? -d.g_i_k[static_cast<std::size_t>(l)] / (eps * w) : 0.0; break;
      case Variant::General: beta = -2 * d.g_k / w; break;
    }
    if (n[static_cast<std::size_t>(l)] < 0 || n[static_cast<std::size_t>(l)] >= dims[fpos])
      throw ParameterError("displaced_eigenvector: label beyond cutoff");
    factors.push_back(displacement_factor(dims[fpos], beta).col(n[static_cast<std::size_t>(l)]));
  }
  Vector v = factors[0];
  for (std::size_t f = 1; f < factors.size(); ++f) v = detail::kron_vec(v, factors[f]);
  return {v, spec.tag()};
}

// Degenerate label (n, j): j indexes the compositions of n into N parts in
// ascending lexicographic order, 1 <= j <= d(n).
inline StateVector displaced_eigenvector_degenerate(Variant variant, const ModelParams& p, const TruncationSpec& spec,
                                                    const SectorId& k, std::optional<int> m, int n, int j) {
  auto comps = compositions(n, p.N);
  if (j < 1 || j > static_cast<int>(comps.size())) throw ParameterError("degenerate label j out of range");
  return displaced_eigenvector(variant, p, spec, k, m, comps[static_cast<std::size_t>(j - 1)]);
}

// Orbit of [k] under the allowed extradiagonal hops, including [k] itself.
inline std::vector<std::uint32_t> psi_orbit(const SectorId& k) {
  std::set<std::uint32_t> orbit{k.index()};
  for (int j = 1; j <= k.levels; ++j)
    for (int l = 1; l <= k.levels; ++l)
      if (j != l && kappa_jl(k, j, l)) {
        auto img = fermion_hop(j, l, k);
        if (!img.annihilated) orbit.insert(img.sector.index());
      }
  return {orbit.begin(), orbit.end()};
}

// Psi = sum over the orbit of [k], normalized by 1/sqrt(orbit size).
inline StateVector psi_state(const SectorId& k) {
  auto orbit = psi_orbit(k);
  Vector v = Vector::Zero(1L << k.levels);
  for (auto idx : orbit) v(idx) = 1.0;
  v /= std::sqrt(static_cast<double>(orbit.size()));
  return {v, static_cast<std::size_t>(k.levels)};
}

struct PsiHopReport {
  double rayleigh = 0;   // <Psi| sum kappa_jl c†_j c_l |Psi>
  double residual = 0;   // ||(O - rayleigh) Psi||
  int orbit_size = 0;
};

// Measures to what extent Psi is an eigenvector of the hop sum with an
// integer factor, as the identification step assumes.
inline PsiHopReport psi_hop_report(const SectorId& k) {
  int M = k.levels;
  long fd = 1L << M;
  Matrix op = Matrix::Zero(fd, fd);
  for (std::uint32_t mask = 0; mask < (1u << M); ++mask) {
    SectorId src(mask, M);
    for (int j = 1; j <= M; ++j)
      for (int l = 1; l <= M; ++l)
        if (j != l && kappa_jl(src, j, l)) {
          auto img = fermion_hop(j, l, src);
          if (!img.annihilated) op(img.sector.index(), mask) += img.sign;
        }
  }
  auto psi = psi_state(k);
  PsiHopReport r;
  r.orbit_size = static_cast<int>(psi_orbit(k).size());
  Complex q = psi.v.dot(op * psi.v);
  r.rayleigh = q.real();
  r.residual = (op * psi.v - q * psi.v).norm();
  return r;
}

struct EigenPairs {
  Eigen::VectorXd values;
  Matrix vectors;
};

inline EigenPairs numeric_spectrum(const OperatorMatrix& h) {
  if (!is_hermitian(h.m, 1e-10)) throw ContractError("numeric_spectrum: non-Hermitian input");
  Eigen::SelfAdjointEigenSolver<Matrix> es(h.m);
  if (es.info() != Eigen::Success) throw ContractError("numeric_spectrum: solver failed");
  Matrix recon = es.eigenvectors() * es.eigenvalues().cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
  double scale = std::max(1.0, h.m.cwiseAbs().maxCoeff());
  if ((recon - h.m).cwiseAbs().maxCoeff() > 1e-9 * scale * static_cast<double>(h.m.rows()))
    throw ContractError("numeric_spectrum: reconstruction check failed");
  return {es.eigenvalues(), es.eigenvectors()};
}

// Lowest L values of { sum_f spectrum_f(i_f) } over all index tuples, for
// Hamiltonians that decompose as sums of single-factor terms.
inline std::vector<double> tensor_sum_spectrum(const std::vector<std::vector<double>>& factor_levels, int L,
                                               double offset = 0.0) {
  if (factor_levels.empty()) throw ParameterError("tensor_sum_spectrum: no factors");
  for (const auto& f : factor_levels) {
    if (f.empty()) throw ParameterError("tensor_sum_spectrum: empty factor");
    if (!std::is_sorted(f.begin(), f.end())) throw ParameterError("tensor_sum_spectrum: factors must be sorted");
  }
  using Node = std::pair<double, std::vector<int>>;
  auto cmp = [](const Node& a, const Node& b) { return a.first > b.first; };
  std::priority_queue<Node, std::vector<Node>, decltype(cmp)> heap(cmp);
  std::set<std::vector<int>> seen;
  std::vector<int> start(factor_levels.size(), 0);
  double base = offset;
  for (const auto& f : factor_levels) base += f[0];
  heap.push({base, start});
  seen.insert(start);
  std::vector<double> out;
  while (!heap.empty() && static_cast<int>(out.size()) < L) {
    auto [val, idx] = heap.top();
    heap.pop();
    out.push_back(val);
    for (std::size_t f = 0; f < idx.size(); ++f) {
      if (idx[f] + 1 >= static_cast<int>(factor_levels[f].size())) continue;
      auto next = idx;
      ++next[f];
      if (seen.insert(next).second)
        heap.push({val - factor_levels[f][static_cast<std::size_t>(idx[f])] +
                       factor_levels[f][static_cast<std::size_t>(idx[f] + 1)],
                   next});
    }
  }
  return out;
}

// Exact per-factor spectra for the sector-diagonal variants, usable with
// tensor_sum_spectrum. Returns ascending eigenvalues of each 1-factor term.
inline std::vector<std::vector<double>> sector_factor_levels(Variant variant, const ModelParams& p,
                                                             const TruncationSpec& spec, const SectorId& k) {
  auto d = sector_scalars(p, k);
  std::vector<std::vector<double>> out;
  auto one_factor = [](long dim, double w, double g) {
    Matrix a = detail::lower(dim);
    Matrix h = w * Matrix(a.adjoint() * a) + g * Matrix(a + Matrix(a.adjoint()));
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    std::vector<double> lv(es.eigenvalues().data(), es.eigenvalues().data() + dim);
    return lv;
  };
  auto dims = spec.factor_dims();
  std::size_t fpos = 0;
  if (spec.has_cm()) {
    if (variant != Variant::CmDiag) throw ParameterError("sector_factor_levels: variant/spec mismatch");
    out.push_back(one_factor(dims[fpos], *p.Omega, -*p.g_prime * d.kappa_k));
    ++fpos;
  } else if (variant != Variant::Diag) {
    throw ParameterError("sector_factor_levels: variant/spec mismatch");
  }
  for (int l = 0; l < p.N; ++l, ++fpos) out.push_back(one_factor(dims[fpos], p.omega[static_cast<std::size_t>(l)], d.g_k));
  return out;
}

}  // namespace gkvcs

#endif
