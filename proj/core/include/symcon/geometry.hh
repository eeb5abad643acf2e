/*
 * geometry.hh
 *
 * Hyperrectangles and the integer lattices (2*mu*Z^n) intersected with them.
 * Lattice points are addressed by exact integer key vectors k, the real
 * coordinates being 2*mu*k componentwise; all set operations (membership,
 * enumeration order, nearest-point queries) are defined on the keys so that
 * results do not depend on accumulated floating point noise.
 */

#ifndef SYMCON_GEOMETRY_HH_
#define SYMCON_GEOMETRY_HH_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace symcon {

using Vec = std::vector<double>;
using Key = std::vector<int64_t>;

/* infinity norm and distance */
double norm_inf(const Vec& v);
double dist_inf(const Vec& a, const Vec& b);

/* axis-aligned box [lo_1,hi_1] x ... x [lo_n,hi_n]; sides must have positive width */
struct Box {
  Vec lo, hi;

  Box() = default;
  Box(Vec lo_, Vec hi_);

  int dim() const { return static_cast<int>(lo.size()); }
  double side(int i) const { return hi[i] - lo[i]; }
  /* closed membership with an absolute guard band on each face */
  bool contains(const Vec& p, double guard = 0.0) const;
  /* largest sup-norm of any member, max_i max(|lo_i|, |hi_i|) */
  double sup_norm() const;
  Vec center() const;
};

/* shortest side length; the precision threshold from the lattice covering claim */
double mu_hat(const Box& box);

/*
 * (2*mu*Z^n) intersected with a box.  Per axis the member keys form the
 * contiguous integer range [kmin_i, kmax_i]; enumeration order is
 * lexicographic in the key (axis 0 most significant, keys ascending), and
 * linear indices follow that order.
 */
class Lattice {
public:
  Lattice(Box box, double mu);

  int dim() const { return m_box.dim(); }
  double mu() const { return m_mu; }
  double spacing() const { return 2.0 * m_mu; }
  const Box& box() const { return m_box; }
  int64_t kmin(int axis) const { return m_kmin[axis]; }
  int64_t kmax(int axis) const { return m_kmax[axis]; }
  uint64_t axis_count(int axis) const;

  /* total number of points; throws on uint64 overflow */
  uint64_t size() const;
  bool empty() const { return size() == 0; }

  bool contains_key(const Key& k) const;
  Vec point(const Key& k) const;

  /* lexicographic linear index <-> key */
  uint64_t index_of(const Key& k) const;
  Key key_of(uint64_t index) const;

  /*
   * Key of a point minimizing the sup-norm distance to a, restricted to the
   * in-box key ranges.  Among minimizers the lexicographically smallest key
   * is returned (per axis the smallest k attaining a distance within the
   * minimum), so equidistant ties resolve toward the smaller key.
   */
  Key nearest(const Vec& a) const;

  /* materialized enumeration in index order (use size() first; may be large) */
  std::vector<Key> enumerate_keys() const;
  std::vector<Vec> enumerate_points() const;

private:
  Box m_box;
  double m_mu;
  std::vector<int64_t> m_kmin, m_kmax;
};

/* convenience wrapper mirroring the lattice construction used everywhere */
Lattice enumerate_lattice(const Box& box, double mu);

/* one "k1,k2,...,kn" line per key, in enumeration order */
void write_keys_csv(std::ostream& os, const Lattice& lat);
std::vector<Key> read_keys_csv(std::istream& is, int dim);

} /* namespace symcon */

#endif /* SYMCON_GEOMETRY_HH_ */
