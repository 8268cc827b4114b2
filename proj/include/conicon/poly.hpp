#pragma once

// Real-coefficient polynomials of small degree and their roots.

#include <algorithm>
#include <span>
#include <vector>

#include "conicon/errors.hpp"
#include "conicon/numeric.hpp"

namespace conicon {

/// Polynomial with real coefficients, constant term first, degree ≤ 8.
/// Exactly-zero leading coefficients are trimmed on construction.
class Poly {
 public:
  static constexpr int kMaxDegree = 8;

  explicit Poly(std::vector<BigReal> coefficients) : c_(std::move(coefficients)) {
    while (c_.size() > 1 && c_.back().is_zero()) c_.pop_back();
    if (c_.empty()) c_.emplace_back();
    if (degree() > kMaxDegree) throw DegreeTooLarge("polynomial degree exceeds 8");
  }

  int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
  std::span<const BigReal> coefficients() const noexcept { return c_; }
  const BigReal& operator[](int k) const { return c_.at(static_cast<std::size_t>(k)); }
  const BigReal& leading() const { return c_.back(); }

  bool is_zero() const {
    return std::all_of(c_.begin(), c_.end(), [](const BigReal& x) { return x.is_zero(); });
  }

  Precision precision() const {
    Precision p = c_.front().precision();
    for (const auto& x : c_) p = min(p, x.precision());
    return p;
  }

  Poly with_precision(Precision p) const {
    std::vector<BigReal> out;
    out.reserve(c_.size());
    for (const auto& x : c_) out.push_back(x.with_precision(p));
    return Poly(std::move(out));
  }

  BigReal max_abs_coefficient() const {
    BigReal m(precision());
    for (const auto& x : c_) m = max(m, abs(x));
    return m;
  }

  BigReal operator()(const BigReal& x) const {
    BigReal acc = c_.back().with_precision(min(precision(), x.precision()));
    for (int k = degree() - 1; k >= 0; --k) acc = acc * x + c_[static_cast<std::size_t>(k)];
    return acc;
  }

  BigComplex operator()(const BigComplex& z) const {
    Precision p = min(precision(), z.precision());
    BigComplex acc(c_.back().with_precision(p), BigReal(p));
    for (int k = degree() - 1; k >= 0; --k) acc = acc * z + BigComplex(c_[static_cast<std::size_t>(k)]);
    return acc;
  }

  Poly derivative() const {
    if (degree() == 0) return Poly({BigReal(precision())});
    std::vector<BigReal> d;
    for (int k = 1; k <= degree(); ++k) d.push_back(c_[static_cast<std::size_t>(k)] * k);
    return Poly(std::move(d));
  }

  friend Poly operator+(const Poly& a, const Poly& b) {
    std::size_t n = std::max(a.c_.size(), b.c_.size());
    Precision p = min(a.precision(), b.precision());
    std::vector<BigReal> out(n, BigReal(p));
    for (std::size_t k = 0; k < a.c_.size(); ++k) out[k] = out[k] + a.c_[k];
    for (std::size_t k = 0; k < b.c_.size(); ++k) out[k] = out[k] + b.c_[k];
    return Poly(std::move(out));
  }

  friend Poly operator-(const Poly& a) {
    std::vector<BigReal> out;
    for (const auto& x : a.c_) out.push_back(-x);
    return Poly(std::move(out));
  }

  friend Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }

  friend Poly operator*(const Poly& a, const Poly& b) {
    Precision p = min(a.precision(), b.precision());
    std::vector<BigReal> out(a.c_.size() + b.c_.size() - 1, BigReal(p));
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) out[i + j] = out[i + j] + a.c_[i] * b.c_[j];
    return Poly(std::move(out));
  }

 private:
  std::vector<BigReal> c_;
};

namespace detail {

/// Aberth–Ehrlich simultaneous iteration on a polynomial with nonzero
/// constant term, at the polynomial's own precision.
inline std::vector<BigComplex> aberth(const Poly& p) {
  const int n = p.degree();
  const Precision prec = p.precision();
  const Poly dp = p.derivative();

  // Initial radius from the Fujiwara bound.
  double radius = 0.0;
  const double lead = std::abs(p.leading().to_double());
  for (int k = 0; k < n; ++k) {
    double ratio = std::abs(p[k].to_double()) / lead;
    if (k == 0) ratio /= 2.0;
    radius = std::max(radius, std::pow(ratio, 1.0 / (n - k)));
  }
  radius = std::isfinite(radius) && radius > 0 ? 2.0 * radius : 1.0;

  std::vector<BigComplex> z;
  const BigReal two_pi = pi(prec) * 2;
  for (int k = 0; k < n; ++k) {
    BigReal angle = two_pi * k / n + BigReal(mpq_class(2, 5), prec);
    BigReal rad(mpq_class(radius), prec);
    z.emplace_back(rad * cos(angle), rad * sin(angle));
  }

  const BigReal eps = pow2(-static_cast<double>(prec.bits()) + 4, prec);
  const int max_iter = 40 * static_cast<int>(prec.bits()) + 200;
  BigReal best_step;
  int stalled = 0;
  for (int iter = 0; iter < max_iter; ++iter) {
    BigReal max_rel(prec);
    for (int k = 0; k < n; ++k) {
      BigComplex pz = p(z[k]);
      if (pz.is_zero()) continue;
      BigComplex ratio = pz / dp(z[k]);
      BigComplex repulsion(prec);
      for (int j = 0; j < n; ++j)
        if (j != k) repulsion += BigComplex(BigReal(1, prec), BigReal(prec)) / (z[k] - z[j]);
      BigComplex step = ratio / (BigComplex(BigReal(1, prec), BigReal(prec)) - ratio * repulsion);
      z[k] -= step;
      BigReal rel = step.abs() / max(BigReal(1, prec), z[k].abs());
      max_rel = max(max_rel, rel);
    }
    if (!max_rel.is_finite()) throw NonConvergence("root iteration diverged");
    if (max_rel <= eps) break;
    // Multiple roots converge linearly and eventually stall at the
    // attainable accuracy; stop once no progress is made.
    if (iter == 0 || max_rel < best_step) {
      best_step = max_rel;
      stalled = 0;
    } else if (++stalled > 25) {
      break;
    }
  }
  return z;
}

}  // namespace detail

/// All complex roots with multiplicity, ordered by real part then imaginary
/// part. Roots within τ(prec) of the real axis are returned as real;
/// the others come in exact conjugate pairs.
inline std::vector<BigComplex> poly_roots(const Poly& input, Precision prec) {
  if (input.is_zero()) throw ZeroPolynomial("all coefficients are zero");
  if (input.degree() == 0) return {};

  // Iterate at more than twice the target precision so roots of
  // multiplicity up to four still land within τ.
  const Precision work{2 * prec.bits() + 64};
  const BigReal tol = tau(prec);

  std::vector<BigReal> c(input.coefficients().begin(), input.coefficients().end());
  std::vector<BigComplex> roots;
  std::size_t zeros = 0;
  while (zeros < c.size() - 1 && c[zeros].is_zero()) ++zeros;
  for (std::size_t k = 0; k < zeros; ++k) roots.emplace_back(prec);

  std::vector<BigReal> rest;
  for (std::size_t k = zeros; k < c.size(); ++k) rest.push_back(c[k].with_precision(work));
  Poly reduced(std::move(rest));

  if (reduced.degree() == 1) {
    roots.emplace_back((-reduced[0] / reduced[1]).with_precision(prec), BigReal(prec));
  } else if (reduced.degree() > 1) {
    for (auto& z : detail::aberth(reduced)) {
      BigReal re = z.re().with_precision(prec);
      BigReal im = z.im().with_precision(prec);
      if (abs(im) <= tol) im = BigReal(prec);
      roots.emplace_back(std::move(re), std::move(im));
    }
  }

  // Enforce exact conjugate symmetry: match upper-half roots to lower-half ones.
  std::vector<std::size_t> upper, lower;
  for (std::size_t k = 0; k < roots.size(); ++k) {
    if (roots[k].im().sign() > 0) upper.push_back(k);
    if (roots[k].im().sign() < 0) lower.push_back(k);
  }
  if (upper.size() == lower.size()) {
    std::vector<bool> used(lower.size(), false);
    for (std::size_t u : upper) {
      std::size_t best = lower.size();
      BigReal best_d;
      for (std::size_t j = 0; j < lower.size(); ++j) {
        if (used[j]) continue;
        BigReal d = distance(roots[u].conj(), roots[lower[j]]);
        if (best == lower.size() || d < best_d) {
          best = j;
          best_d = d;
        }
      }
      used[best] = true;
      roots[lower[best]] = roots[u].conj();
    }
  }

  std::sort(roots.begin(), roots.end(), lexicographic_less);

  // Residual contract, evaluated at working precision.
  const Poly exact = input.with_precision(work);
  const BigReal scale = exact.max_abs_coefficient();
  for (const auto& z : roots) {
    BigReal bound = tol * scale;
    BigReal m = max(BigReal(1, prec), z.abs());
    for (int k = 0; k < input.degree(); ++k) bound = bound * m;
    if (exact(z.with_precision(work)).abs() > bound)
      throw NonConvergence("root residual exceeds tolerance; increase precision");
  }
  return roots;
}

/// Real roots (|Im| ≤ τ), ascending, multiplicity preserved.
inline std::vector<BigReal> real_roots(const Poly& p, Precision prec) {
  std::vector<BigReal> out;
  for (auto& z : poly_roots(p, prec))
    if (z.im().is_zero()) out.push_back(z.re());
  std::sort(out.begin(), out.end(), [](const BigReal& a, const BigReal& b) { return a < b; });
  return out;
}

}  // namespace conicon
