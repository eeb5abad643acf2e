#include "symcon/altbisim.hh"

#include <sstream>

#include "symcon/errors.hh"

namespace symcon {

namespace {

/* some successor pair of (q1,a1,b1) x (q2,a2,b2) lies in r */
bool succ_pair_in(const FiniteTS& t1, const FiniteTS& t2, const Relation& r,
                  int q1, int a1, int b1, int q2, int a2, int b2) {
  for (uint32_t p1 : t1.succ(q1, a1, b1))
    for (uint32_t p2 : t2.succ(q2, a2, b2))
      if (r.at(static_cast<int>(p1), static_cast<int>(p2))) return true;
  return false;
}

/* condition (ii) for one pair; with swapped arguments it is condition (iii).
 * fail_a/fail_b report the outer universal witnesses of a violation. */
bool forward_game(const FiniteTS& t1, const FiniteTS& t2, const Relation& r,
                  int q1, int q2, int* fail_a1, int* fail_b2) {
  for (int a1 = 0; a1 < t1.na; ++a1) {
    bool some_a2 = false;
    int blocking_b2 = -1;
    for (int a2 = 0; a2 < t2.na && !some_a2; ++a2) {
      bool all_b2 = true;
      for (int b2 = 0; b2 < t2.nb; ++b2) {
        bool some_b1 = false;
        for (int b1 = 0; b1 < t1.nb && !some_b1; ++b1)
          some_b1 = succ_pair_in(t1, t2, r, q1, a1, b1, q2, a2, b2);
        if (!some_b1) {
          all_b2 = false;
          blocking_b2 = b2;
          break;
        }
      }
      some_a2 = all_b2;
    }
    if (!some_a2) {
      if (fail_a1) *fail_a1 = a1;
      if (fail_b2) *fail_b2 = blocking_b2;
      return false;
    }
  }
  return true;
}

bool mirrored_game(const FiniteTS& t1, const FiniteTS& t2, const Relation& r,
                   int q1, int q2, int* fail_a2, int* fail_b1) {
  for (int a2 = 0; a2 < t2.na; ++a2) {
    bool some_a1 = false;
    int blocking_b1 = -1;
    for (int a1 = 0; a1 < t1.na && !some_a1; ++a1) {
      bool all_b1 = true;
      for (int b1 = 0; b1 < t1.nb; ++b1) {
        bool some_b2 = false;
        for (int b2 = 0; b2 < t2.nb && !some_b2; ++b2)
          some_b2 = succ_pair_in(t1, t2, r, q1, a1, b1, q2, a2, b2);
        if (!some_b2) {
          all_b1 = false;
          blocking_b1 = b1;
          break;
        }
      }
      some_a1 = all_b1;
    }
    if (!some_a1) {
      if (fail_a2) *fail_a2 = a2;
      if (fail_b1) *fail_b1 = blocking_b1;
      return false;
    }
  }
  return true;
}

bool surjective_both(const Relation& r) {
  for (int i = 0; i < r.n1(); ++i) {
    bool hit = false;
    for (int j = 0; j < r.n2() && !hit; ++j) hit = r.at(i, j);
    if (!hit) return false;
  }
  for (int j = 0; j < r.n2(); ++j) {
    bool hit = false;
    for (int i = 0; i < r.n1() && !hit; ++i) hit = r.at(i, j);
    if (!hit) return false;
  }
  return true;
}

}  /* namespace */

void FiniteTS::validate() const {
  if (nq <= 0 || na <= 0 || nb <= 0)
    throw config_error("transition system: state and label counts must be positive");
  if (output.size() != static_cast<size_t>(nq))
    throw config_error("transition system: one output vector per state required");
  const size_t k = output.empty() ? 0 : output[0].size();
  for (const Vec& o : output)
    if (o.size() != k)
      throw config_error("transition system: output dimensions disagree");
  if (trans.size() != static_cast<size_t>(nq) * na * nb)
    throw config_error("transition system: transition table has wrong shape");
  for (const auto& row : trans)
    for (uint32_t p : row)
      if (p >= static_cast<uint32_t>(nq))
        throw config_error("transition system: successor index out of range");
}

size_t Relation::count() const {
  size_t c = 0;
  for (uint8_t b : m_bits) c += b;
  return c;
}

std::vector<std::pair<int, int>> Relation::pairs() const {
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < m_n1; ++i)
    for (int j = 0; j < m_n2; ++j)
      if (at(i, j)) out.emplace_back(i, j);
  return out;
}

BisimVerdict is_aea_bisim(const FiniteTS& t1, const FiniteTS& t2,
                          const Relation& r, double eps) {
  t1.validate();
  t2.validate();
  if (r.n1() != t1.nq || r.n2() != t2.nq)
    throw config_error("is_aea_bisim: relation shape does not match the systems");

  BisimVerdict v;
  for (int i = 0; i < t1.nq; ++i)
    for (int j = 0; j < t2.nq; ++j) {
      if (!r.at(i, j)) continue;
      if (dist_inf(t1.output[i], t2.output[j]) > eps) {
        std::ostringstream os;
        os << "pair (" << i << "," << j << ") violates (i): output distance "
           << dist_inf(t1.output[i], t2.output[j]) << " > " << eps;
        v.witness = os.str();
        return v;
      }
      int a = -1, b = -1;
      if (!forward_game(t1, t2, r, i, j, &a, &b)) {
        std::ostringstream os;
        os << "pair (" << i << "," << j << ") violates (ii): a1=" << a
           << " has no matching a2 (first blocked at b2=" << b << ")";
        v.witness = os.str();
        return v;
      }
      if (!mirrored_game(t1, t2, r, i, j, &a, &b)) {
        std::ostringstream os;
        os << "pair (" << i << "," << j << ") violates (iii): a2=" << a
           << " has no matching a1 (first blocked at b1=" << b << ")";
        v.witness = os.str();
        return v;
      }
    }
  v.ok = true;
  return v;
}

LargestResult largest_aea_bisim(const FiniteTS& t1, const FiniteTS& t2,
                                double eps) {
  t1.validate();
  t2.validate();

  Relation r(t1.nq, t2.nq);
  for (int i = 0; i < t1.nq; ++i)
    for (int j = 0; j < t2.nq; ++j)
      r.set(i, j, dist_inf(t1.output[i], t2.output[j]) <= eps);

  /* delete violators until a full sweep is clean; deletion only shrinks the
   * relation, so the sweep order does not affect the fixed point */
  bool changed = true;
  while (changed) {
    changed = false;
    for (int i = 0; i < t1.nq; ++i)
      for (int j = 0; j < t2.nq; ++j) {
        if (!r.at(i, j)) continue;
        if (!forward_game(t1, t2, r, i, j, nullptr, nullptr) ||
            !mirrored_game(t1, t2, r, i, j, nullptr, nullptr)) {
          r.set(i, j, false);
          changed = true;
        }
      }
  }
  LargestResult out{r, surjective_both(r)};
  return out;
}

LargestResult reduce_to_approx_bisim(const FiniteTS& t1, const FiniteTS& t2,
                                     double eps) {
  t1.validate();
  t2.validate();
  if (t1.nb != 1 || t2.nb != 1)
    throw config_error(
        "reduce_to_approx_bisim: both disturbance alphabets must be singletons");

  /* independent specialization: with one disturbance label the games drop to
   * forall a1 exists a2 (and mirror) over successor pairs */
  Relation r(t1.nq, t2.nq);
  for (int i = 0; i < t1.nq; ++i)
    for (int j = 0; j < t2.nq; ++j)
      r.set(i, j, dist_inf(t1.output[i], t2.output[j]) <= eps);

  bool changed = true;
  while (changed) {
    changed = false;
    for (int i = 0; i < t1.nq; ++i)
      for (int j = 0; j < t2.nq; ++j) {
        if (!r.at(i, j)) continue;
        bool ok = true;
        for (int a1 = 0; a1 < t1.na && ok; ++a1) {
          bool some = false;
          for (int a2 = 0; a2 < t2.na && !some; ++a2)
            some = succ_pair_in(t1, t2, r, i, a1, 0, j, a2, 0);
          ok = some;
        }
        for (int a2 = 0; a2 < t2.na && ok; ++a2) {
          bool some = false;
          for (int a1 = 0; a1 < t1.na && !some; ++a1)
            some = succ_pair_in(t1, t2, r, i, a1, 0, j, a2, 0);
          ok = some;
        }
        if (!ok) {
          r.set(i, j, false);
          changed = true;
        }
      }
  }
  LargestResult out{r, surjective_both(r)};
  return out;
}

} /* namespace symcon */
