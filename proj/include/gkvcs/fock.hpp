#ifndef GKVCS_FOCK_HPP
#define GKVCS_FOCK_HPP

// Truncated multimode bosonic Fock space with fermionic sector labels.
// Factor order everywhere: c.m. mode (if present) ⊗ boson modes ⊗ fermion sector.

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace gkvcs {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

struct ParameterError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct ContractError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Fermionic occupation pattern k_1...k_M. Stored so that the flat index is the
// value of the bit string read left to right (k_1 most significant), matching
// the canonical C^{2^M} basis ordering Psi_{00..0}, Psi_{00..01}, ...
struct SectorId {
  std::uint32_t mask = 0;
  int levels = 1;

  SectorId() = default;
  SectorId(std::uint32_t m, int M) : mask(m), levels(M) {
    if (M < 1 || M > 20) throw ParameterError("SectorId: M out of range");
    if (m >> M) throw ParameterError("SectorId: mask wider than M bits");
  }
  static SectorId from_string(const std::string& bits) {
    std::uint32_t m = 0;
    for (char c : bits) {
      if (c != '0' && c != '1') throw ParameterError("SectorId: bad bit string");
      m = (m << 1) | static_cast<std::uint32_t>(c - '0');
    }
    return SectorId(m, static_cast<int>(bits.size()));
  }
  // k_j for 1 <= j <= M
  int k(int j) const {
    if (j < 1 || j > levels) throw ParameterError("SectorId: level index");
    return static_cast<int>((mask >> (levels - j)) & 1u);
  }
  int weight() const {
    int w = 0;
    for (int j = 1; j <= levels; ++j) w += k(j);
    return w;
  }
  std::uint32_t index() const { return mask; }
  std::string to_string() const {
    std::string s(static_cast<std::size_t>(levels), '0');
    for (int j = 1; j <= levels; ++j) s[static_cast<std::size_t>(j - 1)] = k(j) ? '1' : '0';
    return s;
  }
  SectorId with(int j, int value) const {
    std::uint32_t bit = 1u << (levels - j);
    return SectorId(value ? (mask | bit) : (mask & ~bit), levels);
  }
  bool operator==(const SectorId& o) const { return mask == o.mask && levels == o.levels; }
};

struct TruncationSpec {
  std::vector<int> boson_cutoffs;  // n_max per mode
  std::optional<int> cm_cutoff;    // m_max, absent when no c.m. mode
  int fermion_levels = 1;          // M

  void validate() const {
    if (boson_cutoffs.empty()) throw ParameterError("TruncationSpec: no boson modes");
    for (int c : boson_cutoffs)
      if (c < 0) throw ParameterError("TruncationSpec: negative cutoff");
    if (cm_cutoff && *cm_cutoff < 0) throw ParameterError("TruncationSpec: negative cm cutoff");
    if (fermion_levels < 1) throw ParameterError("TruncationSpec: M >= 1 required");
  }
  int modes() const { return static_cast<int>(boson_cutoffs.size()); }
  bool has_cm() const { return cm_cutoff.has_value(); }

  // Dimensions of the factors in declared order: [cm], boson_1, ..., boson_N.
  std::vector<long> factor_dims() const {
    std::vector<long> d;
    if (cm_cutoff) d.push_back(*cm_cutoff + 1);
    for (int c : boson_cutoffs) d.push_back(c + 1);
    return d;
  }
  long space_dim() const {
    long dim = 1;
    for (long d : factor_dims()) dim *= d;
    return dim;
  }
  long fermion_dim() const { return 1L << fermion_levels; }

  std::size_t tag() const {
    std::size_t h = 1469598103934665603ull;
    auto mix = [&h](long v) {
      h ^= static_cast<std::size_t>(v);
      h *= 1099511628211ull;
    };
    mix(cm_cutoff ? *cm_cutoff + 1 : 0);
    for (int c : boson_cutoffs) mix(c + 2);
    mix(fermion_levels);
    return h;
  }
};

// A mode address: one bosonic mode (0-based) or the c.m. mode.
struct Mode {
  enum class Kind { Boson, CenterOfMass } kind = Kind::Boson;
  int index = 0;  // boson mode index, 0-based

  static Mode boson(int l) { return Mode{Kind::Boson, l}; }
  static Mode cm() { return Mode{Kind::CenterOfMass, 0}; }
};

struct OperatorMatrix {
  Matrix m;
  std::size_t basis_tag = 0;
};

struct StateVector {
  Vector v;
  std::size_t basis_tag = 0;

  double norm() const { return v.norm(); }
};

namespace detail {

inline int factor_position(const TruncationSpec& spec, Mode mode) {
  if (mode.kind == Mode::Kind::CenterOfMass) {
    if (!spec.has_cm()) throw ParameterError("no c.m. mode in this space");
    return 0;
  }
  if (mode.index < 0 || mode.index >= spec.modes()) throw ParameterError("invalid boson mode index");
  return mode.index + (spec.has_cm() ? 1 : 0);
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (long i = 0; i < a.rows(); ++i)
    for (long j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline Vector kron_vec(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (long i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

// Single-factor lowering operator, <n-1|a|n> = sqrt(n).
inline Matrix lower(long dim) {
  Matrix a = Matrix::Zero(dim, dim);
  for (long n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

// Embed a single-factor operator at factor position `pos`, identity elsewhere.
inline Matrix embed(const TruncationSpec& spec, const Matrix& op, int pos) {
  auto dims = spec.factor_dims();
  Matrix out = (pos == 0) ? op : Matrix(Matrix::Identity(dims[0], dims[0]));
  for (std::size_t f = 1; f < dims.size(); ++f) {
    const Matrix& next = (static_cast<int>(f) == pos) ? op : Matrix(Matrix::Identity(dims[f], dims[f]));
    out = kron(out, next);
  }
  return out;
}

// exp(K) for anti-Hermitian K, via eigendecomposition of the Hermitian iK.
inline Matrix expm_antihermitian(const Matrix& k) {
  Matrix h = Complex(0, 1) * k;
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  if (es.info() != Eigen::Success) throw ContractError("eigendecomposition failed");
  Vector phases(es.eigenvalues().size());
  for (long i = 0; i < phases.size(); ++i) phases(i) = std::exp(Complex(0, -es.eigenvalues()(i)));
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace detail

inline bool is_hermitian(const Matrix& m, double tol = 1e-12) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol * std::max(1.0, m.cwiseAbs().maxCoeff());
}

inline OperatorMatrix identity_op(const TruncationSpec& spec) {
  long d = spec.space_dim();
  return {Matrix::Identity(d, d), spec.tag()};
}

inline OperatorMatrix annihilate(Mode mode, const TruncationSpec& spec) {
  spec.validate();
  int pos = detail::factor_position(spec, mode);
  auto dims = spec.factor_dims();
  return {detail::embed(spec, detail::lower(dims[static_cast<std::size_t>(pos)]), pos), spec.tag()};
}

inline OperatorMatrix create(Mode mode, const TruncationSpec& spec) {
  OperatorMatrix a = annihilate(mode, spec);
  return {a.m.adjoint(), a.basis_tag};
}

inline OperatorMatrix number_op(Mode mode, const TruncationSpec& spec) {
  OperatorMatrix a = annihilate(mode, spec);
  return {a.m.adjoint() * a.m, a.basis_tag};
}

// Unitary e^{beta (a† − a)} on the addressed factor. D(beta)|0> has <a> = beta.
inline OperatorMatrix displacement(Mode mode, double beta, const TruncationSpec& spec) {
  if (!std::isfinite(beta)) throw ParameterError("displacement: beta must be finite");
  spec.validate();
  int pos = detail::factor_position(spec, mode);
  auto dims = spec.factor_dims();
  long d = dims[static_cast<std::size_t>(pos)];
  Matrix a = detail::lower(d);
  Matrix k = beta * (a.adjoint() - a);
  return {detail::embed(spec, detail::expm_antihermitian(k), pos), spec.tag()};
}

// Single-factor displacement matrix (no embedding), for building product states.
inline Matrix displacement_factor(long dim, double beta) {
  Matrix a = detail::lower(dim);
  return detail::expm_antihermitian(beta * Matrix(a.adjoint() - a));
}

inline OperatorMatrix tensor(const OperatorMatrix& a, const OperatorMatrix& b) {
  std::size_t tag = a.basis_tag * 31 + b.basis_tag;
  return {detail::kron(a.m, b.m), tag};
}

inline Complex inner(const StateVector& u, const StateVector& v) {
  if (u.basis_tag != v.basis_tag) throw ParameterError("inner: basis mismatch");
  return u.v.dot(v.v);  // Eigen dot conjugates the first argument
}

inline double expectation(const OperatorMatrix& h, const StateVector& psi) {
  if (h.basis_tag != psi.basis_tag) throw ParameterError("expectation: basis mismatch");
  Complex e = psi.v.dot(h.m * psi.v);
  return e.real();
}

// e^{-iHt} psi via eigendecomposition; H must be Hermitian.
inline StateVector evolve(const OperatorMatrix& h, double t, const StateVector& psi) {
  if (h.basis_tag != psi.basis_tag) throw ParameterError("evolve: basis mismatch");
  if (!is_hermitian(h.m, 1e-10)) throw ContractError("evolve: non-Hermitian generator");
  Eigen::SelfAdjointEigenSolver<Matrix> es(h.m);
  if (es.info() != Eigen::Success) throw ContractError("evolve: eigendecomposition failed");
  Vector coeffs = es.eigenvectors().adjoint() * psi.v;
  for (long i = 0; i < coeffs.size(); ++i) coeffs(i) *= std::exp(Complex(0, -es.eigenvalues()(i) * t));
  return {es.eigenvectors() * coeffs, psi.basis_tag};
}

// Flat index over the space factors (occupations in declared order, row-major).
inline long flat_index(const TruncationSpec& spec, const std::vector<int>& occupations) {
  auto dims = spec.factor_dims();
  if (occupations.size() != dims.size()) throw ParameterError("flat_index: occupation arity");
  long idx = 0;
  for (std::size_t f = 0; f < dims.size(); ++f) {
    if (occupations[f] < 0 || occupations[f] >= dims[f]) throw ParameterError("flat_index: occupation beyond cutoff");
    idx = idx * dims[f] + occupations[f];
  }
  return idx;
}

inline StateVector basis_state(const TruncationSpec& spec, const std::vector<int>& occupations) {
  Vector v = Vector::Zero(spec.space_dim());
  v(flat_index(spec, occupations)) = 1.0;
  return {v, spec.tag()};
}

// Action of c†_j c_l on the occupation-ordered fermion state
// Psi_[k] = (c†_1)^{k_1} ... (c†_M)^{k_M} |0>.
struct HopImage {
  bool annihilated = true;
  SectorId sector;
  int sign = 0;
};

inline HopImage fermion_hop(int j, int l, const SectorId& k) {
  int M = k.levels;
  if (j < 1 || j > M || l < 1 || l > M) throw ParameterError("fermion_hop: level out of range");
  if (k.k(l) == 0) return {};
  if (j != l && k.k(j) == 1) return {};
  if (j == l) return {false, k, +1};
  int sign = 1;
  for (int p = 1; p < l; ++p)
    if (k.k(p)) sign = -sign;
  SectorId mid = k.with(l, 0);
  for (int p = 1; p < j; ++p)
    if (mid.k(p)) sign = -sign;
  return {false, mid.with(j, 1), sign};
}

// Per-sector image table as a dense 2^M x 2^M matrix for c†_j c_l.
inline Matrix fermion_hop_matrix(int j, int l, int M) {
  long dim = 1L << M;
  Matrix out = Matrix::Zero(dim, dim);
  for (long s = 0; s < dim; ++s) {
    HopImage img = fermion_hop(j, l, SectorId(static_cast<std::uint32_t>(s), M));
    if (!img.annihilated) out(img.sector.index(), s) = static_cast<double>(img.sign);
  }
  return out;
}

}  // namespace gkvcs

#endif
