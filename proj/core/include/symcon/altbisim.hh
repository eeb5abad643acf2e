/*
 * altbisim.hh
 *
 * Alternating epsilon-approximate bisimulation between finite metric
 * transition systems with split control/disturbance label alphabets.
 * A relation R is an AeA bisimulation when every pair (q1,q2) in R has
 * (i) outputs within eps, and the two game conditions
 * (ii)  forall a1 exists a2 forall b2 exists b1 with a successor pair in R,
 * (iii) forall a2 exists a1 forall b1 exists b2 with a successor pair in R.
 * A blocked label (empty successor set) fails the inner existential.
 */

#ifndef SYMCON_ALTBISIM_HH_
#define SYMCON_ALTBISIM_HH_

#include <cstdint>
#include <string>
#include <vector>

#include "symcon/geometry.hh"

namespace symcon {

struct FiniteTS {
  int nq = 0, na = 0, nb = 0;
  std::vector<Vec> output;                    /* one vector per state */
  std::vector<std::vector<uint32_t>> trans;   /* [(q*na+a)*nb+b] -> successors */

  const std::vector<uint32_t>& succ(int q, int a, int b) const {
    return trans[(static_cast<size_t>(q) * na + a) * nb + b];
  }
  /* shape and range checks; throws config errors */
  void validate() const;
};

class Relation {
public:
  Relation(int n1, int n2) : m_n1(n1), m_n2(n2), m_bits(size_t(n1) * n2, 0) {}

  int n1() const { return m_n1; }
  int n2() const { return m_n2; }
  bool at(int i, int j) const { return m_bits[size_t(i) * m_n2 + j] != 0; }
  void set(int i, int j, bool v) { m_bits[size_t(i) * m_n2 + j] = v ? 1 : 0; }
  size_t count() const;
  std::vector<std::pair<int, int>> pairs() const;

private:
  int m_n1, m_n2;
  std::vector<uint8_t> m_bits;
};

struct BisimVerdict {
  bool ok = false;
  std::string witness;  /* first failing pair with its quantifier trail */
};

/* exhaustive check of (i)-(iii) over every pair in R */
BisimVerdict is_aea_bisim(const FiniteTS& t1, const FiniteTS& t2,
                          const Relation& r, double eps);

struct LargestResult {
  Relation rel;
  bool bisimilar = false;  /* rel surjective onto both state sets */
};

/* greatest fixed point: all pairs with outputs within eps, then delete
 * violators of (ii)/(iii) until stable */
LargestResult largest_aea_bisim(const FiniteTS& t1, const FiniteTS& t2,
                                double eps);

/* singleton-disturbance specialization along an independent code path;
 * agrees with largest_aea_bisim on every singleton instance */
LargestResult reduce_to_approx_bisim(const FiniteTS& t1, const FiniteTS& t2,
                                     double eps);

} /* namespace symcon */

#endif /* SYMCON_ALTBISIM_HH_ */
