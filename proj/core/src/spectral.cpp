#include "ifp/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ifp/error.hpp"

namespace ifp {

namespace {

constexpr std::size_t kPowerIterations = 10000;
constexpr double kPowerTol = 1e-14;
constexpr int kMaxSquarings = 80;

double inf_norm(const std::vector<double>& a, std::size_t n) {
  double best = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) row += a[i * n + j];
    best = std::max(best, row);
  }
  return best;
}

// r = lim ||A^(2^k)||^(1/2^k), tracking the log of the norm to avoid
// overflow. Converges from above.
double gelfand_radius(const ExtendedMatrix& m) {
  const std::size_t n = m.dim();
  std::vector<double> b(m.data().begin(), m.data().end());
  double norm = inf_norm(b, n);
  if (norm == 0.0) return 0.0;
  for (double& v : b) v /= norm;
  double log_r = std::log(norm);  // log ||A^(2^k)|| / 2^k, running
  double scale = 1.0;             // 2^-k
  double prev = kInf;
  std::vector<double> sq(n * n);
  for (int k = 0; k < kMaxSquarings; ++k) {
    std::fill(sq.begin(), sq.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t l = 0; l < n; ++l) {
        const double bil = b[i * n + l];
        if (bil == 0.0) continue;
        for (std::size_t j = 0; j < n; ++j) sq[i * n + j] += bil * b[l * n + j];
      }
    const double s = inf_norm(sq, n);
    if (s == 0.0) return 0.0;  // nilpotent
    scale *= 0.5;
    log_r += scale * std::log(s);
    for (std::size_t t = 0; t < sq.size(); ++t) b[t] = sq[t] / s;
    const double r = std::exp(log_r);
    if (std::abs(r - prev) <= 1e-16 * r && k > 40) return r;
    prev = r;
  }
  return std::exp(log_r);
}

}  // namespace

double spectral_radius(const ExtendedMatrix& m) {
  if (!m.all_finite()) throw NonFiniteEntry("spectral_radius requires finite entries");
  const std::size_t n = m.dim();
  if (n == 0) return 0.0;
  const double maxe = m.max_entry();
  if (maxe == 0.0) return 0.0;
  if (n == 1) return m(0, 0);

  const double eps = 1e-12 * maxe;
  std::vector<double> x(n, 1.0), y(n);
  for (std::size_t it = 0; it < kPowerIterations; ++it) {
    double lo = kInf, hi = 0.0, ymax = 0.0;
    bool positive = true;
    for (std::size_t i = 0; i < n; ++i) {
      double acc = eps * x[i];
      const auto row = m.row(i);
      for (std::size_t j = 0; j < n; ++j) acc += row[j] * x[j];
      y[i] = acc;
      ymax = std::max(ymax, acc);
      if (x[i] > 0.0) {
        const double ratio = acc / x[i];
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
      } else {
        positive = false;
      }
    }
    // Collatz-Wielandt: min ratio <= r(m + eps I) <= max ratio for x > 0.
    if (positive && hi - lo <= kPowerTol * hi) return std::max(0.0, 0.5 * (lo + hi) - eps);
    if (ymax == 0.0) return 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = y[i] / ymax;
      if (x[i] < std::numeric_limits<double>::min()) x[i] = 0.0;
    }
  }
  return gelfand_radius(m);
}

BlockDecomposition irreducible_blocks(const ExtendedMatrix& m) {
  const std::size_t n = m.dim();
  constexpr std::size_t kUnvisited = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> index(n, kUnvisited), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::vector<std::vector<std::size_t>> sccs;  // reverse topological order
  std::size_t counter = 0;

  struct Frame {
    std::size_t v;
    std::size_t next;
  };
  std::vector<Frame> call;

  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != kUnvisited) continue;
    call.push_back({root, 0});
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      Frame& f = call.back();
      const std::size_t v = f.v;
      if (f.next < n) {
        const std::size_t w = f.next++;
        if (!(m(v, w) > 0.0)) continue;
        if (index[w] == kUnvisited) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      if (low[v] == index[v]) {
        std::vector<std::size_t> comp;
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp.push_back(w);
        } while (w != v);
        std::sort(comp.begin(), comp.end());
        sccs.push_back(std::move(comp));
      }
      call.pop_back();
      if (!call.empty()) {
        const std::size_t parent = call.back().v;
        low[parent] = std::min(low[parent], low[v]);
      }
    }
  }

  BlockDecomposition out;
  out.block_of.assign(n, 0);
  out.blocks.assign(sccs.rbegin(), sccs.rend());
  for (std::size_t b = 0; b < out.blocks.size(); ++b) {
    const auto& blk = out.blocks[b];
    for (std::size_t v : blk) {
      out.ordering.push_back(v);
      out.block_of[v] = b;
    }
    const ExtendedMatrix sub = m.submatrix(blk);
    out.block_radii.push_back(sub.all_finite() ? spectral_radius(sub) : kInf);
  }
  return out;
}

std::vector<bool> reachable_set(const ExtendedMatrix& m, std::size_t from) {
  const std::size_t n = m.dim();
  std::vector<bool> seen(n, false);
  std::vector<std::size_t> frontier;
  for (std::size_t w = 0; w < n; ++w)
    if (m(from, w) > 0.0 && !seen[w]) {
      seen[w] = true;
      frontier.push_back(w);
    }
  while (!frontier.empty()) {
    const std::size_t v = frontier.back();
    frontier.pop_back();
    for (std::size_t w = 0; w < n; ++w)
      if (m(v, w) > 0.0 && !seen[w]) {
        seen[w] = true;
        frontier.push_back(w);
      }
  }
  return seen;
}

bool reachable(const ExtendedMatrix& m, std::size_t from, std::size_t to) {
  return reachable_set(m, from)[to];
}

namespace {

// Grassmann-Taksar-Heyman elimination on an irreducible stochastic matrix.
std::vector<double> gth(const ExtendedMatrix& p) {
  const std::size_t n = p.dim();
  std::vector<double> a(p.data().begin(), p.data().end());
  for (std::size_t k = n; k-- > 1;) {
    double s = 0.0;
    for (std::size_t j = 0; j < k; ++j) s += a[k * n + j];
    for (std::size_t i = 0; i < k; ++i) a[i * n + k] /= s;
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) a[i * n + j] += a[i * n + k] * a[k * n + j];
  }
  std::vector<double> pi(n, 0.0);
  pi[0] = 1.0;
  double total = 1.0;
  for (std::size_t k = 1; k < n; ++k) {
    double s = 0.0;
    for (std::size_t i = 0; i < k; ++i) s += pi[i] * a[i * n + k];
    pi[k] = s;
    total += s;
  }
  for (double& v : pi) v /= total;
  return pi;
}

// Solves A x = b in place by Gaussian elimination with partial pivoting.
std::vector<double> solve_dense(std::vector<double> a, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(a[r * n + c]) > std::abs(a[piv * n + c])) piv = r;
    if (piv != c) {
      for (std::size_t k = 0; k < n; ++k) std::swap(a[c * n + k], a[piv * n + k]);
      std::swap(b[c], b[piv]);
    }
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = a[r * n + c] / a[c * n + c];
      if (f == 0.0) continue;
      for (std::size_t k = c; k < n; ++k) a[r * n + k] -= f * a[c * n + k];
      b[r] -= f * b[c];
    }
  }
  std::vector<double> x(n);
  for (std::size_t r = n; r-- > 0;) {
    double s = b[r];
    for (std::size_t k = r + 1; k < n; ++k) s -= a[r * n + k] * x[k];
    x[r] = s / a[r * n + r];
  }
  return x;
}

}  // namespace

std::vector<double> stationary_distribution(const ExtendedMatrix& p) {
  const std::size_t n = p.dim();
  const BlockDecomposition dec = irreducible_blocks(p);
  if (dec.blocks.size() == 1) return gth(p);

  // Reducible chain: mix the closed classes by their absorption
  // probabilities from a uniform start.
  std::vector<bool> closed(dec.blocks.size(), true);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (p(i, j) > 0.0 && dec.block_of[i] != dec.block_of[j]) closed[dec.block_of[i]] = false;
  std::vector<std::size_t> transient;
  for (std::size_t i = 0; i < n; ++i)
    if (!closed[dec.block_of[i]]) transient.push_back(i);

  std::vector<double> pi(n, 0.0);
  for (std::size_t b = 0; b < dec.blocks.size(); ++b) {
    if (!closed[b]) continue;
    const auto& blk = dec.blocks[b];
    double weight = static_cast<double>(blk.size());
    if (!transient.empty()) {
      const std::size_t t = transient.size();
      std::vector<double> a(t * t, 0.0), rhs(t, 0.0);
      for (std::size_t r = 0; r < t; ++r) {
        for (std::size_t c = 0; c < t; ++c) a[r * t + c] = (r == c ? 1.0 : 0.0) - p(transient[r], transient[c]);
        for (std::size_t v : blk) rhs[r] += p(transient[r], v);
      }
      for (double h : solve_dense(std::move(a), std::move(rhs))) weight += h;
    }
    const std::vector<double> local = gth(p.submatrix(blk));
    for (std::size_t k = 0; k < blk.size(); ++k) pi[blk[k]] = weight / static_cast<double>(n) * local[k];
  }
  double total = 0.0;
  for (double v : pi) total += v;
  for (double& v : pi) v /= total;
  return pi;
}

}  // namespace ifp
