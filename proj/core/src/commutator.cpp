#include "mixdet/commutator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "mixdet/error.hpp"
#include "mixdet/mdp.hpp"
#include "mixdet/selection.hpp"

namespace mixdet {

bool SpectralSquare::contains(Complex z, double tol) const {
  const Complex d = z - center;
  return std::abs(d.real()) <= half_side + tol && std::abs(d.imag()) <= half_side + tol;
}

double SpectralSquare::margin(Complex z) const {
  const Complex d = z - center;
  return half_side - std::max(std::abs(d.real()), std::abs(d.imag()));
}

SpectralSquare tile_of_root_square(std::size_t index, std::size_t side) {
  if (side == 0 || index >= side * side) throw ValidationError("tile_of_root_square: index out of range");
  const double s = static_cast<double>(side);
  const double row = static_cast<double>(index / side);
  const double col = static_cast<double>(index % side);
  SpectralSquare sq;
  sq.half_side = 1.0 / s;
  sq.center = Complex(-1.0 + (2.0 * col + 1.0) / s, 1.0 - (2.0 * row + 1.0) / s);
  return sq;
}

namespace {

/// v = sqrt(1-t) x + sqrt(t) e^{i theta} y with v^* M v = a + s (d - a), for
/// orthonormal x, y with compression [[a, b], [c, d]] and s in [0, 1].
std::vector<Complex> two_point_target(const std::vector<Complex>& x, const std::vector<Complex>& y, Complex a,
                                      Complex b, Complex c, Complex d, double s) {
  const Complex w = d - a;
  if (std::abs(w) <= 1e-300) return x;
  const Complex beta = b / w;
  const Complex gamma = c / w;
  const Complex z = beta - std::conj(gamma);
  const double theta = std::abs(z) > 0.0 ? -std::arg(z) : 0.0;
  const Complex phase = std::polar(1.0, theta);
  // g(theta) / w is real by the choice of theta.
  const double eta = ((phase * b + std::conj(phase) * c) / w).real();
  double lo = 0.0;
  double hi = 1.0;
  for (int it = 0; it < 200; ++it) {
    const double t = 0.5 * (lo + hi);
    const double f = t + eta * std::sqrt(t * (1.0 - t)) - s;
    if (f < 0.0) {
      lo = t;
    } else {
      hi = t;
    }
    if (hi - lo <= 1e-17) break;
  }
  const double t = 0.5 * (lo + hi);
  std::vector<Complex> v(x.size());
  const double cx = std::sqrt(1.0 - t);
  const Complex cy = std::sqrt(t) * phase;
  for (std::size_t i = 0; i < x.size(); ++i) v[i] = cx * x[i] + cy * y[i];
  return v;
}

Complex quad(const ComplexMatrix& m, const std::vector<Complex>& u, const std::vector<Complex>& v) {
  Complex s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (u[i] == Complex(0.0)) continue;
    Complex row = 0.0;
    for (std::size_t j = 0; j < v.size(); ++j) row += m(i, j) * v[j];
    s += std::conj(u[i]) * row;
  }
  return s;
}

/// Unit vector v with v^* M v = tr(M) / dim, by walking the running mean of
/// the diagonal: step j moves within span(u, e_j) from mean(d_0..d_{j-1}) to
/// mean(d_0..d_j).
std::vector<Complex> mean_value_vector(const ComplexMatrix& m) {
  const std::size_t n = m.rows();
  std::vector<Complex> u(n, 0.0);
  u[0] = 1.0;
  for (std::size_t j = 1; j < n; ++j) {
    std::vector<Complex> e(n, 0.0);
    e[j] = 1.0;
    const Complex a = quad(m, u, u);
    const Complex b = quad(m, u, e);
    const Complex c = quad(m, e, u);
    const Complex d = m(j, j);
    u = two_point_target(u, e, a, b, c, d, 1.0 / static_cast<double>(j + 1));
  }
  return u;
}

/// Unitary W on C^n with first column v (up to a unit phase for n > 2); for
/// n = 2 the second column is (-conj(v_2), conj(v_1)).
ComplexMatrix complete_to_unitary(const std::vector<Complex>& v) {
  const std::size_t n = v.size();
  ComplexMatrix w(n);
  if (n == 1) {
    w(0, 0) = 1.0;
    return w;
  }
  if (n == 2) {
    w(0, 0) = v[0];
    w(1, 0) = v[1];
    w(0, 1) = -std::conj(v[1]);
    w(1, 1) = std::conj(v[0]);
    return w;
  }
  // Householder reflector mapping e_1 to phase * v.
  const Complex phase = std::abs(v[0]) > 0.0 ? std::conj(v[0]) / std::abs(v[0]) : Complex(1.0);
  std::vector<Complex> diff(n);
  double norm2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    diff[i] = (i == 0 ? Complex(1.0) : Complex(0.0)) - phase * v[i];
    norm2 += std::norm(diff[i]);
  }
  w = ComplexMatrix::identity(n);
  if (norm2 <= 1e-300) return w;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) w(i, j) -= 2.0 * diff[i] * std::conj(diff[j]) / norm2;
  return w;
}

std::vector<Complex> base_spectrum(std::size_t m) {
  std::vector<Complex> b(m, 0.0);
  if (m < 2) return b;
  for (std::size_t i = 0; i < m; ++i) b[i] = 1.0 - 2.0 * static_cast<double>(i) / static_cast<double>(m - 1);
  return b;
}

ComplexMatrix commutator_of(const ComplexMatrix& b, const ComplexMatrix& c) { return b * c - c * b; }

struct CoreResult {
  std::vector<Complex> spectrum;
  ComplexMatrix c;
};

CoreResult base_core(const ComplexMatrix& a) {
  const std::size_t m = a.rows();
  CoreResult out{base_spectrum(m), ComplexMatrix(m)};
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      if (i != j) out.c(i, j) = a(i, j) / (out.spectrum[i] - out.spectrum[j]);
  return out;
}

bool is_perfect_square(std::size_t x) {
  const auto s = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(x))));
  return s * s == x;
}

/// A = [diag(spectrum), C] for a zero-diagonal contraction A.
CoreResult core(const ComplexMatrix& a, std::size_t depth, const CommutatorOptions& options,
                std::vector<CommutatorLevel>& trace) {
  const std::size_t m = a.rows();
  CommutatorLevel level;
  level.depth = depth;
  level.m = m;
  if (m <= std::max<std::size_t>(options.base_threshold, 1)) {
    CoreResult out = base_core(a);
    level.mode = "base";
    level.block_sizes = {m};
    level.norm_c = operator_norm(out.c);
    trace.push_back(std::move(level));
    return out;
  }

  const std::size_t r = options.fixed_r ? *options.fixed_r : commutator_block_parameter(m);
  if (r == 0 || !is_perfect_square(2 * r)) throw ValidationError("commutator: 2r must be a perfect square");
  const std::size_t tiles = 2 * r;
  const auto side = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(tiles))));
  level.r = r;
  level.tiles = tiles;

  std::vector<IndexSet> blocks;
  if (r >= m) {
    level.mode = "singleton";
    for (std::size_t i = 0; i < m; ++i) blocks.push_back({i});
  } else {
    try {
      SelectionOptions sel;
      sel.budget = options.budget;
      const PavingReport paving = two_sided_pave(a, r, sel);
      for (auto& b : balance_blocks(paving.paving, r, m).blocks())
        if (!b.empty()) blocks.push_back(std::move(b));
      level.mode = "paved";
    } catch (const BudgetExceeded&) {
      CoreResult out = base_core(a);
      level.mode = "fallback";
      level.block_sizes = {m};
      level.norm_c = operator_norm(out.c);
      trace.push_back(std::move(level));
      return out;
    }
  }
  if (blocks.size() > tiles) throw BoundViolation("commutator: more blocks than tiles");

  const std::size_t level_index = trace.size();
  trace.push_back(level);

  CoreResult out{std::vector<Complex>(m), ComplexMatrix(m)};
  const double scale_up = 2.0 * std::sqrt(static_cast<double>(tiles));
  double min_margin = std::numeric_limits<double>::infinity();
  std::vector<SpectralSquare> squares;
  std::vector<double> norms;
  std::vector<std::size_t> sizes;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const ComplexMatrix aii = principal_submatrix(a, blocks[i]);
    const double nrm = operator_norm(aii);
    CoreResult sub;
    if (nrm > 0.0) {
      sub = core(aii * Complex(1.0 / nrm), depth + 1, options, trace);
    } else {
      sub = {base_spectrum(aii.rows()), ComplexMatrix(aii.rows())};
    }
    const SpectralSquare sq = tile_of_root_square(i, side);
    const Placement placed = place_spectrum(sub.spectrum, sq, tiles);
    for (std::size_t p = 0; p < blocks[i].size(); ++p) {
      out.spectrum[blocks[i][p]] = placed.diagonal[p];
      min_margin = std::min(min_margin, sq.margin(placed.diagonal[p]));
      for (std::size_t q = 0; q < blocks[i].size(); ++q)
        out.c(blocks[i][p], blocks[i][q]) = scale_up * nrm * sub.c(p, q);
    }
    squares.push_back(sq);
    norms.push_back(nrm);
    sizes.push_back(blocks[i].size());
  }
  const double required = 1.0 / scale_up;
  if (min_margin < required * (1.0 - 1e-9)) {
    throw BoundViolation("commutator: block spectrum closer than 1/(2 sqrt(2r)) to its tile boundary");
  }

  for (std::size_t i = 0; i < blocks.size(); ++i)
    for (std::size_t j = 0; j < blocks.size(); ++j) {
      if (i == j) continue;
      std::vector<Complex> si;
      std::vector<Complex> tj;
      for (std::size_t x : blocks[i]) si.push_back(out.spectrum[x]);
      for (std::size_t y : blocks[j]) tj.push_back(out.spectrum[y]);
      const ComplexMatrix x = sylvester_solve(ComplexMatrix::diagonal(si), ComplexMatrix::diagonal(tj),
                                              submatrix(a, blocks[i], blocks[j]));
      for (std::size_t p = 0; p < blocks[i].size(); ++p)
        for (std::size_t q = 0; q < blocks[j].size(); ++q) out.c(blocks[i][p], blocks[j][q]) = x(p, q);
    }

  CommutatorLevel& rec = trace[level_index];
  rec.block_sizes = std::move(sizes);
  rec.block_norms = std::move(norms);
  rec.squares = std::move(squares);
  rec.min_margin = min_margin;
  rec.norm_c = operator_norm(out.c);
  return out;
}

bool is_diagonal(const ComplexMatrix& m) {
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (i != j && m(i, j) != Complex(0.0)) return false;
  return true;
}

}  // namespace

ZeroDiagonalization zero_diagonal_conjugation(const ComplexMatrix& a) {
  const std::size_t n = a.dim();
  if (!a.all_finite()) throw ValidationError("zero_diagonal_conjugation: non-finite entry");
  const double scale = std::max(1.0, operator_norm(a));
  if (std::abs(a.trace()) > 1e-10 * static_cast<double>(std::max<std::size_t>(n, 1)) * scale) {
    throw ValidationError("zero_diagonal_conjugation: trace is not zero");
  }
  ZeroDiagonalization out{ComplexMatrix::identity(n), a};
  const double tol = 1e-13 * scale;
  for (std::size_t t = 0; t + 1 < n; ++t) {
    if (std::abs(out.conjugated(t, t)) <= tol) continue;
    IndexSet active;
    for (std::size_t i = t; i < n; ++i) active.push_back(i);
    ComplexMatrix block = principal_submatrix(out.conjugated, active);
    // Remove the residual trace so the running mean ends exactly at zero.
    const Complex shift = block.trace() / static_cast<double>(active.size());
    for (std::size_t i = 0; i < active.size(); ++i) block(i, i) -= shift;
    const ComplexMatrix w = complete_to_unitary(mean_value_vector(block));
    ComplexMatrix full = ComplexMatrix::identity(n);
    for (std::size_t i = 0; i < active.size(); ++i)
      for (std::size_t j = 0; j < active.size(); ++j) full(t + i, t + j) = w(i, j);
    out.conjugated = full.adjoint() * out.conjugated * full;
    out.unitary = out.unitary * full;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(out.conjugated(i, i)) > 1e-10 * scale) {
      throw NumericalError("zero_diagonal_conjugation: diagonal entry did not vanish");
    }
    out.conjugated(i, i) = 0.0;
  }
  return out;
}

ComplexMatrix sylvester_solve(const ComplexMatrix& s, const ComplexMatrix& t, const ComplexMatrix& a) {
  const std::size_t p = s.dim();
  const std::size_t q = t.dim();
  if (a.rows() != p || a.cols() != q) throw ValidationError("sylvester_solve: shape mismatch");
  ComplexMatrix x(p, q);
  if (is_diagonal(s) && is_diagonal(t)) {
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t j = 0; j < q; ++j) {
        const Complex gap = s(i, i) - t(j, j);
        if (std::abs(gap) <= 1e-8) throw NumericalError("sylvester_solve: spectra of S and T collide");
        x(i, j) = a(i, j) / gap;
      }
  } else {
    // Row-major vec: (S (x) I - I (x) T^T) vec(X) = vec(A).
    ComplexMatrix k(p * q);
    std::vector<Complex> rhs(p * q);
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t j = 0; j < q; ++j) {
        const std::size_t row = i * q + j;
        rhs[row] = a(i, j);
        for (std::size_t l = 0; l < p; ++l) k(row, l * q + j) += s(i, l);
        for (std::size_t l = 0; l < q; ++l) k(row, i * q + l) -= t(l, j);
      }
    std::vector<Complex> sol;
    try {
      sol = solve_linear(k, rhs, 1e-12);
    } catch (const NumericalError&) {
      throw NumericalError("sylvester_solve: spectra of S and T (nearly) collide");
    }
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t j = 0; j < q; ++j) x(i, j) = sol[i * q + j];
  }
  const double residual = (s * x - x * t - a).frobenius_norm();
  const double allowed =
      1e-9 * (s.frobenius_norm() + t.frobenius_norm()) * x.frobenius_norm() + 1e-9 * a.frobenius_norm();
  if (!(residual <= allowed)) throw NumericalError("sylvester_solve: residual check failed");
  return x;
}

Placement place_spectrum(const std::vector<Complex>& diagonal, const SpectralSquare& square, std::size_t tiles) {
  if (tiles == 0) throw ValidationError("place_spectrum: tile count must be positive");
  const SpectralSquare root = SpectralSquare::root();
  Placement out;
  out.scale = 1.0 / (2.0 * std::sqrt(static_cast<double>(tiles)));
  out.shift = square.center;
  for (const Complex& z : diagonal) {
    if (!root.contains(z, 1e-12)) throw ValidationError("place_spectrum: spectrum outside the root square");
    out.diagonal.push_back(out.scale * z + out.shift);
  }
  return out;
}

CommutatorResult base_case_commutator(const ComplexMatrix& a) {
  const std::size_t m = a.dim();
  const double scale = std::max(1.0, a.max_abs());
  if (!has_zero_diagonal(a, 1e-12 * scale)) throw ValidationError("base_case_commutator: A must have zero diagonal");
  ComplexMatrix zd = a;
  for (std::size_t i = 0; i < m; ++i) zd(i, i) = 0.0;
  const CoreResult core_result = base_core(zd);
  CommutatorResult out;
  out.b_spectrum = core_result.spectrum;
  out.b = ComplexMatrix::diagonal(out.b_spectrum);
  out.c = core_result.c;
  out.unitary = ComplexMatrix::identity(m);
  out.norm_a = operator_norm(a);
  out.norm_b = operator_norm(out.b);
  out.norm_c = operator_norm(out.c);
  out.residual = operator_norm(a - commutator_of(out.b, out.c));
  CommutatorLevel level;
  level.m = m;
  level.mode = "base";
  level.block_sizes = {m};
  level.norm_c = out.norm_c;
  out.trace.push_back(std::move(level));
  return out;
}

std::size_t commutator_block_parameter(std::size_t m) {
  const double lm = std::log(static_cast<double>(std::max<std::size_t>(m, 1)));
  const double target = std::exp(std::sqrt(8.0 / 3.0) * std::sqrt(lm));
  auto r = static_cast<std::size_t>(std::ceil(target - 1e-12));
  r = std::max<std::size_t>(r, 1);
  while (!is_perfect_square(2 * r)) ++r;
  return r;
}

CommutatorResult recursive_commutator(const ComplexMatrix& a, const CommutatorOptions& options) {
  const std::size_t m = a.dim();
  CommutatorResult out;
  out.norm_a = operator_norm(a);
  if (out.norm_a == 0.0) {
    if (m > 0 && std::abs(a.trace()) > 0.0) throw ValidationError("recursive_commutator: trace is not zero");
    out.b_spectrum = base_spectrum(m);
    out.b = ComplexMatrix::diagonal(out.b_spectrum);
    out.c = ComplexMatrix(m);
    out.unitary = ComplexMatrix::identity(m);
    out.norm_b = operator_norm(out.b);
    CommutatorLevel level;
    level.m = m;
    level.mode = "base";
    level.block_sizes = {m};
    out.trace.push_back(std::move(level));
    return out;
  }
  const ComplexMatrix normalized = a * Complex(1.0 / out.norm_a);
  const ZeroDiagonalization zd = zero_diagonal_conjugation(normalized);
  CoreResult inner = core(zd.conjugated, 0, options, out.trace);
  out.b_spectrum = inner.spectrum;
  out.unitary = zd.unitary;
  const ComplexMatrix u_adj = zd.unitary.adjoint();
  out.b = zd.unitary * ComplexMatrix::diagonal(inner.spectrum) * u_adj;
  out.c = zd.unitary * inner.c * u_adj * Complex(out.norm_a);
  out.norm_b = operator_norm(out.b);
  out.norm_c = operator_norm(out.c);
  out.residual = operator_norm(a - commutator_of(out.b, out.c));
  if (out.residual > 1e-8 * std::max(1.0, out.norm_a)) {
    throw NumericalError("recursive_commutator: residual " + std::to_string(out.residual) + " too large");
  }
  return out;
}

CommutatorNormReport commutator_norm_report(const CommutatorResult& result, std::size_t m) {
  CommutatorNormReport out;
  out.product_norm = result.norm_b * result.norm_c;
  const double lm = std::log(static_cast<double>(std::max<std::size_t>(m, 1)));
  out.paper_bound = 300.0 * std::exp(9.0 * std::sqrt(lm));
  return out;
}

}  // namespace mixdet
