#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "etcir/error.hpp"
#include "etcir/retrieval.hpp"

using namespace etcir;

namespace {

IndexEntry entry(std::string id, std::vector<double> v) {
  return IndexEntry{id, "owner-" + id, WeightedDescriptor{std::move(v)}};
}

}  // namespace

TEST_CASE("exhaustive query") {
  const Index idx({entry("e2", {0, 1}), entry("e1", {1, 0}), entry("e3", {-1, 0})});
  SUBCASE("ranked by distance, ties by id") {
    const auto hits = idx.query(WeightedDescriptor{{1, 0}}, 3);
    REQUIRE(hits.size() == 3);
    CHECK(hits[0].image_id == "e1");
    CHECK(hits[0].distance == 0.0);
    CHECK(hits[0].owner_id == "owner-e1");
    CHECK(hits[1].image_id == "e2");
    CHECK(hits[1].distance == doctest::Approx(std::sqrt(2.0)));
    CHECK(hits[2].image_id == "e3");
    CHECK(hits[2].distance == 2.0);
    for (std::size_t i = 0; i < 3; ++i) CHECK(hits[i].rank == i + 1);
  }
  SUBCASE("equidistant entries order by id") {
    const auto hits = idx.query(WeightedDescriptor{{0, 0}}, 3);
    CHECK(hits[0].image_id == "e1");
    CHECK(hits[1].image_id == "e2");
    CHECK(hits[2].image_id == "e3");
  }
  SUBCASE("k larger than the index") {
    CHECK(idx.query(WeightedDescriptor{{1, 0}}, 10).size() == 3);
    CHECK(idx.query(WeightedDescriptor{{1, 0}}, 1).size() == 1);
  }
  SUBCASE("bad arguments") {
    CHECK_THROWS_AS(idx.query(WeightedDescriptor{{1, 0}}, 0), Error);
    CHECK_THROWS_AS(idx.query(WeightedDescriptor{{1, 0, 0}}, 1), Error);
  }
}

TEST_CASE("empty index and duplicates") {
  const Index empty;
  CHECK(empty.empty());
  CHECK(empty.query(WeightedDescriptor{{1.0}}, 5).empty());
  try {
    Index dup({entry("a", {1}), entry("a", {2})});
    FAIL("expected duplicate id error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::duplicate_id);
  }
}

TEST_CASE("query matches a brute-force ranking") {
  std::mt19937_64 rng(41);
  std::uniform_int_distribution<int> coord(0, 3);  // coarse grid forces ties
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 1 + rng() % 100;
    std::vector<IndexEntry> es;
    for (std::size_t i = 0; i < n; ++i) {
      es.push_back(entry("img" + std::to_string(rng() % 100000) + "_" + std::to_string(i),
                         {double(coord(rng)), double(coord(rng)), double(coord(rng))}));
    }
    const WeightedDescriptor q{{double(coord(rng)), double(coord(rng)), double(coord(rng))}};
    std::vector<std::pair<double, std::string>> ref;
    for (const auto& e : es) {
      double s = 0.0;
      for (std::size_t d = 0; d < 3; ++d) {
        const double diff = e.descriptor.values[d] - q.values[d];
        s += diff * diff;
      }
      ref.emplace_back(std::sqrt(s), e.image_id);
    }
    std::sort(ref.begin(), ref.end());
    const std::size_t k = 1 + rng() % n;
    const auto hits = Index(es).query(q, k);
    REQUIRE(hits.size() == k);
    for (std::size_t i = 0; i < k; ++i) {
      REQUIRE(hits[i].image_id == ref[i].second);
      REQUIRE(hits[i].distance == ref[i].first);
    }
  }
}
