#pragma once

// Test-side reference implementations. Everything here is written from the
// definitions, without calling into the library's kernels, so the library can
// be checked against it.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <vector>

namespace oracle {

using Word = std::vector<int>;  // letters 1..d
using Tensor = std::map<Word, double>;

inline Tensor add(Tensor a, const Tensor& b, double s = 1.0) {
  for (const auto& [w, v] : b) a[w] += s * v;
  return a;
}

inline Tensor scale(Tensor a, double s) {
  for (auto& [w, v] : a) v *= s;
  return a;
}

// Concatenation product truncated at depth n.
inline Tensor product(const Tensor& a, const Tensor& b, int n) {
  Tensor out;
  for (const auto& [u, x] : a)
    for (const auto& [v, y] : b) {
      if (static_cast<int>(u.size() + v.size()) > n) continue;
      Word w = u;
      w.insert(w.end(), v.begin(), v.end());
      out[w] += x * y;
    }
  return out;
}

inline Tensor bracket(const Tensor& a, const Tensor& b, int n) { return add(product(a, b, n), product(b, a, n), -1.0); }

inline Tensor letter(int i) { return {{Word{i}, 1.0}}; }

// Left-normed bracketing [..[[w1,w2],w3],..,wk] of a word.
inline Tensor left_normed(const Word& w, int n) {
  Tensor t = letter(w[0]);
  for (std::size_t i = 1; i < w.size(); ++i) t = bracket(t, letter(w[i]), n);
  return t;
}

// Dynkin map D(w) = left-normed bracket of w. A homogeneous tensor P of degree
// k is Lie iff D(P) = k P; returns max |D(P) - kP| / k.
inline double lie_residual(const Tensor& p, int k) {
  Tensor d;
  for (const auto& [w, v] : p)
    if (static_cast<int>(w.size()) == k) d = add(d, left_normed(w, k), v);
  Tensor diff = add(d, p, -static_cast<double>(k));
  double r = 0.0;
  for (const auto& [w, v] : diff)
    if (static_cast<int>(w.size()) == k) r = std::max(r, std::abs(v));
  return r / k;
}

// Lyndon words of length k by brute force: strictly smaller than every proper rotation.
inline std::int64_t lyndon_count(int d, int k) {
  std::int64_t total = 1;
  for (int i = 0; i < k; ++i) total *= d;
  std::int64_t count = 0;
  Word w(k);
  for (std::int64_t c = 0; c < total; ++c) {
    std::int64_t x = c;
    for (int i = k - 1; i >= 0; --i) {
      w[i] = static_cast<int>(x % d) + 1;
      x /= d;
    }
    bool lyndon = true;
    for (int r = 1; r < k && lyndon; ++r) {
      Word rot(w.begin() + r, w.end());
      rot.insert(rot.end(), w.begin(), w.begin() + r);
      if (!(w < rot)) lyndon = false;
    }
    if (lyndon) ++count;
  }
  return count;
}

// Iterated integrals of a piecewise-linear path by nested trapezoid sums over
// `per_segment` sub-steps per segment. Returns all words up to depth n.
inline Tensor iterated_integrals(const std::vector<std::vector<double>>& vertices, int n, int per_segment) {
  const int d = static_cast<int>(vertices.front().size());
  std::vector<std::vector<double>> pts;
  for (std::size_t s = 0; s + 1 < vertices.size(); ++s)
    for (int i = 0; i < per_segment; ++i) {
      const double t = static_cast<double>(i) / per_segment;
      std::vector<double> p(d);
      for (int j = 0; j < d; ++j) p[j] = (1 - t) * vertices[s][j] + t * vertices[s + 1][j];
      pts.push_back(p);
    }
  pts.push_back(vertices.back());
  // all words up to depth n
  std::vector<Word> words{Word{}};
  for (std::size_t i = 0; i < words.size(); ++i)
    if (static_cast<int>(words[i].size()) < n)
      for (int j = 1; j <= d; ++j) {
        Word w = words[i];
        w.push_back(j);
        words.push_back(w);
      }
  std::map<Word, double> value;
  for (const auto& w : words) value[w] = w.empty() ? 1.0 : 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    std::map<Word, double> next = value;
    // process by increasing length so prefixes at both ends are available
    for (const auto& w : words) {
      if (w.empty()) continue;
      const Word prefix(w.begin(), w.end() - 1);
      const int j = w.back() - 1;
      next[w] = value[w] + 0.5 * (value[prefix] + next[prefix]) * (pts[i + 1][j] - pts[i][j]);
    }
    value = std::move(next);
  }
  return Tensor(value.begin(), value.end());
}

// Heisenberg group, f = exp(-(a^2/A^2 + b^2/B^2 + c^2/C^2)/2) in exponential
// coordinates a X1 + b X2 + c [X1,X2], functional lambda * l_{12}, polarization
// span{X1, [X1,X2]}, section exp(t X2). Direct Gaussian integration over the
// subgroup gives the closed forms below.
struct Heisenberg {
  double A = 1.0, B = 0.8, C = 0.7;

  double f(double a, double b, double c) const {
    return std::exp(-0.5 * (a * a / (A * A) + b * b / (B * B) + c * c / (C * C)));
  }

  double kernel(double lambda, double s, double t) const {
    const double v = 0.5 * (s + t);
    const double r = std::sqrt(2 * std::numbers::pi);
    return A * r * std::exp(-0.5 * lambda * lambda * v * v * A * A) * C * r *
           std::exp(-0.5 * lambda * lambda * C * C) * std::exp(-(s - t) * (s - t) / (2 * B * B));
  }

  double trace(double lambda) const {
    return std::pow(2 * std::numbers::pi, 1.5) * C * std::exp(-0.5 * lambda * lambda * C * C) / std::abs(lambda);
  }

  // int |f|^2 over R^3
  double l2_norm_sq() const { return std::pow(std::numbers::pi, 1.5) * A * B * C; }
};

// Midpoint rule for a 1-d integral on [-L, L].
template <class F>
double midpoint(F&& f, double L, int n) {
  const double h = 2 * L / n;
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += f(-L + (i + 0.5) * h);
  return s * h;
}

}  // namespace oracle
