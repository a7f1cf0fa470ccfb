#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "pf/rational.hpp"
#include "pf/sparse.hpp"

#include <random>

using namespace pf;

TEST_CASE("rational invariants and string form") {
  Rational r = rat(6, -4);
  CHECK(numerator(r) == -3);
  CHECK(denominator(r) == 2);
  CHECK(rat_str(r) == "-3/2");
  CHECK(rat_str(Rational(0)) == "0");
  CHECK(rat_str(Rational(7)) == "7");
  CHECK(rat_parse("-3/2") == r);
  CHECK(rat_parse("5") == Rational(5));
  CHECK(rat_parse("4/6") == Rational(2, 3));
  CHECK_THROWS(rat_parse("1/0"));
  Rational big = rat_parse("123456789012345678901234567890/7");
  CHECK(rat_str(big * 7) == "123456789012345678901234567890");
}

static SparseVec sv(std::initializer_list<std::pair<const char*, long>> xs) {
  SparseVec v;
  for (auto& [k, c] : xs) v.set(k, Rational(c));
  return v;
}

TEST_CASE("rref on echelon and duplicate rows") {
  auto b = rref({sv({{"e1", 1}}), sv({{"e2", 1}})});
  CHECK(b.rank() == 2);
  auto d = rref({sv({{"e1", 1}, {"e2", 1}}), sv({{"e1", 1}, {"e2", 1}})});
  CHECK(d.rank() == 1);
  CHECK(d.rows.begin()->second == sv({{"e1", 1}, {"e2", 1}}));
}

TEST_CASE("rref is idempotent") {
  std::mt19937 rng(7);
  std::vector<SparseVec> vs;
  for (int i = 0; i < 12; ++i) {
    SparseVec v;
    for (int j = 0; j < 6; ++j)
      v.set("k" + std::to_string(rng() % 15), Rational((long)(rng() % 9) - 4));
    vs.push_back(v);
  }
  auto b = rref(vs);
  std::vector<SparseVec> rows;
  for (auto& [p, r] : b.rows) rows.push_back(r);
  auto b2 = rref(rows);
  CHECK(b.rows == b2.rows);
}

// Independent oracle: dense fraction-free (Bareiss) elimination rank.
static int bareiss_rank(std::vector<std::vector<Int>> a) {
  int rows = (int)a.size();
  if (!rows) return 0;
  int cols = (int)a[0].size(), rank = 0;
  Int prev = 1;
  for (int c = 0; c < cols && rank < rows; ++c) {
    int piv = -1;
    for (int r = rank; r < rows; ++r)
      if (a[r][c] != 0) {
        piv = r;
        break;
      }
    if (piv < 0) continue;
    std::swap(a[rank], a[piv]);
    for (int r = 0; r < rows; ++r) {
      if (r == rank) continue;
      for (int cc = 0; cc < cols; ++cc)
        if (cc != c) a[r][cc] = (a[rank][c] * a[r][cc] - a[r][c] * a[rank][cc]) / prev;
      a[r][c] = 0;
    }
    prev = a[rank][c];
    ++rank;
  }
  return rank;
}

TEST_CASE("rref rank agrees with fraction-free elimination") {
  std::mt19937 rng(20240811);
  for (int trial = 0; trial < 5; ++trial) {
    const int dim = 30, cnt = 20;
    std::vector<SparseVec> vs;
    std::vector<std::vector<Int>> dense(cnt, std::vector<Int>(dim, 0));
    for (int i = 0; i < cnt; ++i) {
      SparseVec v;
      for (int t = 0; t < 7; ++t) {
        int j = rng() % dim;
        long c = (long)(rng() % 19) - 9;
        v.set("x" + std::string(1, char('a' + j / 10)) + std::to_string(j % 10), Rational(c));
      }
      for (auto& [k, c] : v.e) {
        int j = (k[1] - 'a') * 10 + (k[2] - '0');
        dense[i][j] = numerator(c);
      }
      vs.push_back(v);
    }
    CHECK((int)rref(vs).rank() == bareiss_rank(dense));
  }
}

TEST_CASE("membership") {
  auto b = rref({sv({{"e1", 1}})});
  auto m1 = membership(b, sv({{"e1", 1}}));
  CHECK(m1.member);
  CHECK(m1.coords.at("e1") == 1);
  auto m2 = membership(b, sv({{"e2", 1}}));
  CHECK(!m2.member);
  CHECK(m2.residual == sv({{"e2", 1}}));

  // membership succeeds iff the rank does not grow
  auto b2 = rref({sv({{"a", 1}, {"b", 2}}), sv({{"b", 1}, {"c", 1}})});
  SparseVec in_span = sv({{"a", 2}, {"b", 5}, {"c", 1}});
  CHECK(membership(b2, in_span).member);
  RowBasis grown = b2;
  CHECK(!grown.insert(in_span));
  SparseVec out_span = sv({{"a", 1}, {"c", 1}});
  CHECK(!membership(b2, out_span).member);
  RowBasis grown2 = b2;
  CHECK(grown2.insert(out_span));
}

TEST_CASE("orthogonal complement dimensions") {
  std::vector<Key> keys = {"k0", "k1", "k2", "k3"};
  auto delta = [&](const Key& a, const Key& b) { return Rational(a == b ? 1 : 0); };

  RowBasis empty;
  auto c0 = orthogonal_complement(empty, keys, keys, delta);
  CHECK(c0.rank() == 4);

  std::vector<SparseVec> all;
  for (auto& k : keys) all.push_back(sv({{k.c_str(), 1}}));
  auto full = rref(all);
  CHECK(orthogonal_complement(full, keys, keys, delta).rank() == 0);

  auto b = rref({sv({{"k0", 1}, {"k1", -1}})});
  auto c = orthogonal_complement(b, keys, keys, delta);
  CHECK(c.rank() == 3);
  CHECK(b.rank() + c.rank() == keys.size());

  auto degen = [&](const Key&, const Key&) { return Rational(0); };
  CHECK_THROWS(orthogonal_complement(b, keys, keys, degen));
}
