#include "symcon/geometry.hh"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "symcon/errors.hh"

namespace symcon {

/*
 * Boundary handling: box bounds are rarely exact multiples of the spacing in
 * binary floating point (pi/4 divided by pi/1000 evaluates to 249.99999...97),
 * so quotients are padded by an absolute guard before rounding toward the
 * box.  The guard admits a point only if its true quotient is within 1e-9 of
 * the boundary integer, far above the ~1e-13 division noise at the scales
 * handled here and far below one lattice step.
 */
static constexpr double kQuotientGuard = 1e-9;

double norm_inf(const Vec& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double dist_inf(const Vec& a, const Vec& b) {
  if (a.size() != b.size())
    throw config_error("dist_inf: dimension mismatch");
  double m = 0.0;
  for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

Box::Box(Vec lo_, Vec hi_) : lo(std::move(lo_)), hi(std::move(hi_)) {
  if (lo.size() != hi.size())
    throw config_error("box: lower and upper bound dimension mismatch");
  if (lo.empty())
    throw config_error("box: zero-dimensional");
  for (size_t i = 0; i < lo.size(); ++i) {
    if (!std::isfinite(lo[i]) || !std::isfinite(hi[i]))
      throw config_error("box: non-finite bound on axis " + std::to_string(i));
    if (!(lo[i] < hi[i]))
      throw config_error("box: empty or zero-width side on axis " + std::to_string(i));
  }
}

bool Box::contains(const Vec& p, double guard) const {
  if (static_cast<int>(p.size()) != dim()) return false;
  for (int i = 0; i < dim(); ++i)
    if (p[i] < lo[i] - guard || p[i] > hi[i] + guard) return false;
  return true;
}

double Box::sup_norm() const {
  double m = 0.0;
  for (int i = 0; i < dim(); ++i)
    m = std::max(m, std::max(std::abs(lo[i]), std::abs(hi[i])));
  return m;
}

Vec Box::center() const {
  Vec c(dim());
  for (int i = 0; i < dim(); ++i) c[i] = 0.5 * (lo[i] + hi[i]);
  return c;
}

double mu_hat(const Box& box) {
  double m = std::numeric_limits<double>::infinity();
  for (int i = 0; i < box.dim(); ++i) m = std::min(m, box.side(i));
  return m;
}

Lattice::Lattice(Box box, double mu) : m_box(std::move(box)), m_mu(mu) {
  if (!(mu > 0.0) || !std::isfinite(mu))
    throw config_error("lattice: precision must be positive and finite");
  const double s = 2.0 * m_mu;
  m_kmin.resize(m_box.dim());
  m_kmax.resize(m_box.dim());
  for (int i = 0; i < m_box.dim(); ++i) {
    const double qlo = m_box.lo[i] / s;
    const double qhi = m_box.hi[i] / s;
    if (std::abs(qlo) > 9.0e15 || std::abs(qhi) > 9.0e15)
      throw config_error("lattice: spacing too small for axis " + std::to_string(i));
    m_kmin[i] = static_cast<int64_t>(std::ceil(qlo - kQuotientGuard));
    m_kmax[i] = static_cast<int64_t>(std::floor(qhi + kQuotientGuard));
  }
}

uint64_t Lattice::axis_count(int axis) const {
  if (m_kmax[axis] < m_kmin[axis]) return 0;
  return static_cast<uint64_t>(m_kmax[axis] - m_kmin[axis]) + 1u;
}

uint64_t Lattice::size() const {
  uint64_t n = 1;
  for (int i = 0; i < dim(); ++i) {
    const uint64_t c = axis_count(i);
    if (c == 0) return 0;
    if (n > std::numeric_limits<uint64_t>::max() / c)
      throw runtime_failure("lattice: point count overflows 64 bits");
    n *= c;
  }
  return n;
}

bool Lattice::contains_key(const Key& k) const {
  if (static_cast<int>(k.size()) != dim()) return false;
  for (int i = 0; i < dim(); ++i)
    if (k[i] < m_kmin[i] || k[i] > m_kmax[i]) return false;
  return true;
}

Vec Lattice::point(const Key& k) const {
  Vec p(dim());
  for (int i = 0; i < dim(); ++i) p[i] = spacing() * static_cast<double>(k[i]);
  return p;
}

uint64_t Lattice::index_of(const Key& k) const {
  if (!contains_key(k))
    throw runtime_failure("lattice: key outside the box");
  uint64_t idx = 0;
  for (int i = 0; i < dim(); ++i)
    idx = idx * axis_count(i) + static_cast<uint64_t>(k[i] - m_kmin[i]);
  return idx;
}

Key Lattice::key_of(uint64_t index) const {
  if (index >= size())
    throw runtime_failure("lattice: index out of range");
  Key k(dim());
  for (int i = dim() - 1; i >= 0; --i) {
    const uint64_t c = axis_count(i);
    k[i] = m_kmin[i] + static_cast<int64_t>(index % c);
    index /= c;
  }
  return k;
}

Key Lattice::nearest(const Vec& a) const {
  if (static_cast<int>(a.size()) != dim())
    throw config_error("lattice: query point dimension mismatch");
  if (empty())
    throw runtime_failure("lattice: empty, no nearest point");
  const double s = spacing();

  /* pass 1: per-axis clamped nearest (half-way ties toward the smaller k) */
  Key k(dim());
  double dmin = 0.0;
  for (int i = 0; i < dim(); ++i) {
    const double q = a[i] / s;
    int64_t ki = static_cast<int64_t>(std::ceil(q - 0.5));
    ki = std::clamp(ki, m_kmin[i], m_kmax[i]);
    k[i] = ki;
    dmin = std::max(dmin, std::abs(a[i] - s * static_cast<double>(ki)));
  }

  /* pass 2: lexicographic minimum over the arg-min set; per axis the
   * smallest in-range k whose distance still fits under dmin */
  for (int i = 0; i < dim(); ++i) {
    int64_t klow = static_cast<int64_t>(std::ceil((a[i] - dmin) / s - kQuotientGuard));
    klow = std::clamp(klow, m_kmin[i], m_kmax[i]);
    if (klow < k[i] && std::abs(a[i] - s * static_cast<double>(klow)) <= dmin)
      k[i] = klow;
  }
  return k;
}

std::vector<Key> Lattice::enumerate_keys() const {
  const uint64_t n = size();
  std::vector<Key> out;
  out.reserve(n);
  if (n == 0) return out;
  Key k(m_kmin.begin(), m_kmin.end());
  for (;;) {
    out.push_back(k);
    int i = dim() - 1;
    for (; i >= 0; --i) {
      if (k[i] < m_kmax[i]) { ++k[i]; break; }
      k[i] = m_kmin[i];
    }
    if (i < 0) break;
  }
  return out;
}

std::vector<Vec> Lattice::enumerate_points() const {
  std::vector<Key> keys = enumerate_keys();
  std::vector<Vec> pts;
  pts.reserve(keys.size());
  for (const Key& k : keys) pts.push_back(point(k));
  return pts;
}

Lattice enumerate_lattice(const Box& box, double mu) {
  return Lattice(box, mu);
}

void write_keys_csv(std::ostream& os, const Lattice& lat) {
  Key k;
  const uint64_t n = lat.size();
  for (uint64_t idx = 0; idx < n; ++idx) {
    k = lat.key_of(idx);
    for (size_t i = 0; i < k.size(); ++i) {
      if (i) os << ',';
      os << k[i];
    }
    os << '\n';
  }
}

std::vector<Key> read_keys_csv(std::istream& is, int dim) {
  std::vector<Key> keys;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    Key k;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ','))
      k.push_back(std::stoll(cell));
    if (static_cast<int>(k.size()) != dim)
      throw io_error("key csv: expected " + std::to_string(dim) + " columns");
    keys.push_back(std::move(k));
  }
  return keys;
}

} /* namespace symcon */
