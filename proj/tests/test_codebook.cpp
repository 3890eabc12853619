#include <doctest.h>

#include <algorithm>
#include <limits>
#include <random>

#include "etcir/codebook.hpp"
#include "etcir/error.hpp"
#include "etcir/etc_crypto.hpp"
#include "test_support.hpp"

using namespace etcir;

namespace {

ScdVector point(double x, double y) {
  ScdVector v;
  v.coeffs[0] = x;
  v.coeffs[1] = y;
  return v;
}

struct TwoMeans {
  double sse;
  std::vector<ScdVector> centers;
};

// Exhaustive search over every split into two nonempty clusters.
TwoMeans brute_force_two_means(const std::vector<ScdVector>& pts) {
  const std::size_t n = pts.size();
  TwoMeans best{std::numeric_limits<double>::infinity(), {}};
  for (std::size_t mask = 1; mask + 1 < (std::size_t{1} << n); ++mask) {
    std::array<ScdVector, 2> c{};
    std::array<std::size_t, 2> cnt{};
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t side = (mask >> i) & 1;
      for (std::size_t d = 0; d < kScdLength; ++d) c[side].coeffs[d] += pts[i].coeffs[d];
      ++cnt[side];
    }
    for (int s = 0; s < 2; ++s)
      for (double& v : c[static_cast<std::size_t>(s)].coeffs) v /= static_cast<double>(cnt[static_cast<std::size_t>(s)]);
    double sse = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto& ctr = c[(mask >> i) & 1];
      for (std::size_t d = 0; d < kScdLength; ++d) {
        const double diff = pts[i].coeffs[d] - ctr.coeffs[d];
        sse += diff * diff;
      }
    }
    if (sse < best.sse) best = TwoMeans{sse, {c[0], c[1]}};
  }
  return best;
}

std::vector<ScdVector> random_points(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<ScdVector> pts(n);
  for (auto& p : pts)
    for (double& c : p.coeffs) c = u(rng);
  return pts;
}

bool close(const ScdVector& a, const ScdVector& b, double tol) {
  for (std::size_t i = 0; i < kScdLength; ++i)
    if (std::abs(a.coeffs[i] - b.coeffs[i]) > tol) return false;
  return true;
}

}  // namespace

TEST_CASE("canonicalize_patch_set") {
  std::mt19937_64 rng(21);
  auto pts = random_points(rng, 50);
  pts.push_back(pts[3]);  // duplicates survive
  const auto canon = canonicalize_patch_set(pts);
  CHECK(canon.size() == pts.size());
  CHECK(std::is_sorted(canon.begin(), canon.end(),
                       [](const ScdVector& a, const ScdVector& b) { return a.coeffs < b.coeffs; }));
  CHECK(canonicalize_patch_set(canon) == canon);

  auto shuffled = pts;
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  CHECK(canonicalize_patch_set(shuffled) == canon);

  SUBCASE("plain and EtC corpora canonicalize identically") {
    std::vector<ScdVector> plain, etc;
    for (int i = 0; i < 5; ++i) {
      const auto img = testing::random_image(rng, 64, 48);
      const auto a = block_descriptors(img);
      const auto b = block_descriptors(encrypt(img, KeySet{rng(), rng()}));
      plain.insert(plain.end(), a.begin(), a.end());
      etc.insert(etc.end(), b.begin(), b.end());
    }
    CHECK_FALSE(plain == etc);
    CHECK(canonicalize_patch_set(plain) == canonicalize_patch_set(etc));
  }
}

TEST_CASE("kmeans: M = 1 is the mean") {
  std::mt19937_64 rng(22);
  const auto pts = random_points(rng, 37);
  const auto cb = kmeans(pts, ClusteringConfig{1, 5, 100, 1e-9});
  REQUIRE(cb.size() == 1);
  ScdVector mean;
  for (const auto& p : pts)
    for (std::size_t d = 0; d < kScdLength; ++d) mean.coeffs[d] += p.coeffs[d];
  for (double& c : mean.coeffs) c /= 37.0;
  CHECK(close(cb.words[0], mean, 1e-15));
}

TEST_CASE("kmeans agrees with brute-force optimal 2-means on separable sets") {
  const std::vector<ScdVector> fixed = {point(0, 0), point(0.1, 0), point(0, 0.2),
                                        point(5, 5), point(5.2, 5.1), point(4.9, 5.3)};
  std::vector<std::vector<ScdVector>> cases = {fixed};
  std::mt19937_64 rng(23);
  std::normal_distribution<double> noise(0.0, 0.05);
  for (int t = 0; t < 20; ++t) {
    const std::size_t n = 4 + static_cast<std::size_t>(rng() % 5);  // 4..8 points
    std::vector<ScdVector> pts;
    for (std::size_t i = 0; i < n; ++i) {
      ScdVector p;
      const double base = (i % 2 == 0) ? 0.0 : 3.0;
      for (std::size_t d = 0; d < 4; ++d) p.coeffs[d] = base + noise(rng);
      pts.push_back(p);
    }
    cases.push_back(pts);
  }
  for (const auto& pts : cases) {
    const auto best = brute_force_two_means(pts);
    for (std::uint64_t seed : {0ULL, 1ULL, 99ULL}) {
      const auto cb = kmeans(canonicalize_patch_set(pts), ClusteringConfig{2, seed, 100, 1e-12});
      REQUIRE(cb.size() == 2);
      const bool direct = close(cb.words[0], best.centers[0], 1e-12) &&
                          close(cb.words[1], best.centers[1], 1e-12);
      const bool swapped = close(cb.words[0], best.centers[1], 1e-12) &&
                           close(cb.words[1], best.centers[0], 1e-12);
      CHECK((direct || swapped));
    }
  }
}

TEST_CASE("kmeans determinism and monotone SSE") {
  std::mt19937_64 rng(24);
  const auto pts = canonicalize_patch_set(random_points(rng, 400));
  const ClusteringConfig cfg{8, 77, 100, 1e-9};
  KMeansTrace trace;
  const auto a = kmeans(pts, cfg, &trace);
  const auto b = kmeans(pts, cfg);
  CHECK(a == b);
  CHECK(a.iterations == trace.sse.size());
  CHECK(a.iterations >= 2);
  for (std::size_t i = 1; i < trace.sse.size(); ++i) {
    CHECK(trace.sse[i] <= trace.sse[i - 1] * (1.0 + 1e-12));
  }
  const auto other = kmeans(pts, ClusteringConfig{8, 78, 100, 1e-9});
  CHECK(other.seed == 78);
}

TEST_CASE("kmeans edge cases") {
  SUBCASE("too few descriptors") {
    const std::vector<ScdVector> pts(3);
    try {
      kmeans(pts, ClusteringConfig{4, 0, 10, 1e-9});
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::insufficient_descriptors);
    }
  }
  SUBCASE("identical points leave empty clusters to repair") {
    const std::vector<ScdVector> pts(5, point(1, 2));
    const auto cb = kmeans(pts, ClusteringConfig{3, 0, 10, 1e-9});
    REQUIRE(cb.size() == 3);
    for (const auto& w : cb.words) CHECK(w == point(1, 2));
  }
  SUBCASE("max_iters caps the Lloyd loop") {
    std::mt19937_64 rng(25);
    const auto pts = random_points(rng, 200);
    const auto cb = kmeans(pts, ClusteringConfig{10, 1, 1, 0.0});
    CHECK(cb.iterations == 1);
  }
  SUBCASE("invalid config") {
    const std::vector<ScdVector> pts(3);
    CHECK_THROWS_AS(kmeans(pts, ClusteringConfig{0, 0, 10, 1e-9}), Error);
    CHECK_THROWS_AS(kmeans(pts, ClusteringConfig{1, 0, 0, 1e-9}), Error);
  }
}

TEST_CASE("assign") {
  Codebook cb;
  cb.words = {point(0, 0), point(1, 0), point(-1, 0), point(0, 5)};
  CHECK(assign(point(0, 5), cb) == 3);
  CHECK(assign(point(0, 0), cb) == 0);

  Codebook tie;
  tie.words = {point(10, 10), point(1, 0), point(-1, 0)};
  CHECK(assign(point(0, 0), tie) == 1);

  SUBCASE("matches an exhaustive scan") {
    std::mt19937_64 rng(26);
    Codebook rnd;
    rnd.words = random_points(rng, 4);
    for (const auto& q : random_points(rng, 200)) {
      std::size_t best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < 4; ++k) {
        double d = 0.0;
        for (std::size_t i = 0; i < kScdLength; ++i) {
          const double diff = q.coeffs[i] - rnd.words[k].coeffs[i];
          d += diff * diff;
        }
        if (d < best_d) {
          best_d = d;
          best = k;
        }
      }
      REQUIRE(assign(q, rnd) == best);
    }
  }
  CHECK_THROWS_AS(assign(point(0, 0), Codebook{}), Error);
}
