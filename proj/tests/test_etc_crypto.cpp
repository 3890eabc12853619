#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "etcir/error.hpp"
#include "etcir/etc_crypto.hpp"
#include "etcir/rng.hpp"
#include "test_support.hpp"

using namespace etcir;

// Expected values below were produced by tests/oracles/keystream_oracle.py.

TEST_CASE("splitmix64 reference outputs") {
  SplitMix64 s0(0);
  CHECK(s0.next() == 0xe220a8397b1dcdafULL);
  CHECK(s0.next() == 0x6e789e6aa1b965f4ULL);
  CHECK(s0.next() == 0x06c45d188009454fULL);
  CHECK(SplitMix64(1).next() == 0x910a2dec89025cc1ULL);

  auto [state, out] = splitmix64_next(0);
  CHECK(state == kSplitMixGamma);
  CHECK(out == 0xe220a8397b1dcdafULL);

  SplitMix64 a(99), b(99);
  for (int i = 0; i < 100; ++i) REQUIRE(a.next() == b.next());
}

TEST_CASE("bounded_uniform") {
  SplitMix64 s(42);
  std::vector<std::uint64_t> got;
  for (int i = 0; i < 5; ++i) got.push_back(bounded_uniform(s, 4));
  CHECK(got == std::vector<std::uint64_t>{1, 3, 2, 0, 2});

  SplitMix64 one(7);
  CHECK(bounded_uniform(one, 1) == 0);
  CHECK(one.state() == 7 + kSplitMixGamma);  // exactly one draw consumed

  SplitMix64 z(0);
  CHECK_THROWS_AS(bounded_uniform(z, 0), Error);

  SplitMix64 big(3);
  const std::uint64_t n = (std::uint64_t{1} << 63) + 12345;
  CHECK_THROWS_AS(bounded_uniform(big, n), Error);
  CHECK(bounded_uniform(big, std::uint64_t{1} << 63) < (std::uint64_t{1} << 63));
}

TEST_CASE("derive_permutation") {
  CHECK(derive_permutation(0, 1).mapping == std::vector<std::size_t>{0});
  CHECK(derive_permutation(0, 4).mapping == std::vector<std::size_t>{2, 1, 0, 3});
  CHECK(derive_permutation(7, 10).mapping ==
        std::vector<std::size_t>{8, 1, 5, 9, 0, 4, 3, 2, 6, 7});
  CHECK_THROWS_AS(derive_permutation(0, 0), Error);

  SUBCASE("bijection for every B <= 64 over 100 seeds") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      for (std::size_t b = 1; b <= 64; ++b) {
        const auto perm = derive_permutation(seed * 0x1234567ULL, b);
        auto sorted = perm.mapping;
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t i = 0; i < b; ++i) REQUIRE(sorted[i] == i);
        REQUIRE(perm.is_bijection());
      }
    }
  }
}

TEST_CASE("derive_dihedral_codes") {
  auto values = [](const std::vector<DihedralCode>& codes) {
    std::vector<int> v;
    for (auto c : codes) v.push_back(c.value());
    return v;
  };
  CHECK(values(derive_dihedral_codes(0, 3)) == std::vector<int>{7, 4, 7});
  CHECK(values(derive_dihedral_codes(5, 8)) == std::vector<int>{2, 0, 7, 5, 5, 4, 1, 3});
  CHECK(derive_dihedral_codes(11, 50) == derive_dihedral_codes(11, 50));
  for (auto c : derive_dihedral_codes(123, 500)) {
    REQUIRE(c.value() >= 0);
    REQUIRE(c.value() < 8);
  }
  CHECK_THROWS_AS(DihedralCode(8), Error);
  CHECK_THROWS_AS(DihedralCode(-1), Error);
}

TEST_CASE("apply_dihedral geometry and group structure") {
  std::mt19937_64 rng(5);
  const Block b = testing::random_block(rng);

  CHECK(apply_dihedral(b, DihedralCode(0)) == b);
  CHECK(apply_dihedral(apply_dihedral(b, DihedralCode(2)), DihedralCode(2)) == b);

  Block corner;
  corner.at(0, 0) = Rgb8{255, 255, 255};
  const Block turned = apply_dihedral(corner, DihedralCode(1));
  CHECK(turned.at(15, 0) == Rgb8{255, 255, 255});
  CHECK(turned.at(0, 0) == Rgb8{});
  const Block mirrored = apply_dihedral(corner, DihedralCode(4));
  CHECK(mirrored.at(15, 0) == Rgb8{255, 255, 255});
  const Block turn_then_mirror = apply_dihedral(corner, DihedralCode(5));
  CHECK(turn_then_mirror.at(0, 0) == Rgb8{255, 255, 255});

  SUBCASE("all eight codes give distinct images of a generic block") {
    Block generic;
    for (int i = 0; i < kBlockPixels; ++i) {
      generic.pixels[static_cast<std::size_t>(i)] =
          Rgb8{static_cast<std::uint8_t>(i), static_cast<std::uint8_t>(i >> 8), 7};
    }
    std::set<std::vector<std::uint8_t>> seen;
    for (int c = 0; c < 8; ++c) {
      const Block out = apply_dihedral(generic, DihedralCode(c));
      std::vector<std::uint8_t> bytes;
      for (auto p : out.pixels) {
        bytes.push_back(p.r);
        bytes.push_back(p.g);
      }
      seen.insert(bytes);
    }
    CHECK(seen.size() == 8);
  }

  SUBCASE("pixel multiset is preserved") {
    auto sorted = [](const Block& blk) {
      std::vector<Rgb8> v(blk.pixels.begin(), blk.pixels.end());
      std::sort(v.begin(), v.end());
      return v;
    };
    for (int c = 0; c < 8; ++c) CHECK(sorted(apply_dihedral(b, DihedralCode(c))) == sorted(b));
  }
}

TEST_CASE("invert_dihedral") {
  CHECK(invert_dihedral(DihedralCode(0)).value() == 0);
  CHECK(invert_dihedral(DihedralCode(1)).value() == 3);
  CHECK(invert_dihedral(DihedralCode(3)).value() == 1);

  std::mt19937_64 rng(6);
  const Block b = testing::random_block(rng);
  // Exhaustive 8 x 8 composition table: exactly one inverse per code, and it
  // is the one invert_dihedral reports.
  for (int c = 0; c < 8; ++c) {
    int inverses = 0;
    for (int d = 0; d < 8; ++d) {
      if (apply_dihedral(apply_dihedral(b, DihedralCode(c)), DihedralCode(d)) == b) {
        ++inverses;
        CHECK(invert_dihedral(DihedralCode(c)).value() == d);
      }
    }
    CHECK(inverses == 1);
  }
}

TEST_CASE("encrypt matches the hand-composed oracle trace") {
  // pixel (x, y) -> (8x, 8y, x + 2y) mod 256; k1 = k2 = 0 gives
  // permutation [2, 1, 0, 3] and codes [7, 4, 7, 4].
  std::vector<Rgb8> px;
  for (int y = 0; y < 32; ++y) {
    for (int x = 0; x < 32; ++x) {
      px.push_back(Rgb8{static_cast<std::uint8_t>(x * 8 % 256), static_cast<std::uint8_t>(y * 8 % 256),
                        static_cast<std::uint8_t>((x + 2 * y) % 256)});
    }
  }
  const ImageBuffer img(32, 32, std::move(px));
  const ImageBuffer enc = encrypt(img, KeySet{0, 0});
  CHECK(enc.at(0, 0) == Rgb8{120, 248, 77});
  CHECK(enc.at(15, 0) == Rgb8{120, 128, 47});
  CHECK(enc.at(16, 0) == Rgb8{248, 0, 31});
  CHECK(enc.at(31, 31) == Rgb8{128, 248, 78});
  CHECK(enc.at(5, 20) == Rgb8{88, 80, 31});
}

TEST_CASE("encrypt / decrypt") {
  std::mt19937_64 rng(7);

  SUBCASE("single block: identity permutation, one dihedral transform") {
    const auto img = testing::random_image(rng, 16, 16);
    const KeySet k{1, 2};
    const auto code = derive_dihedral_codes(k.k2, 1).front();
    CHECK(encrypt(img, k) == assemble_blocks({1, 1, {apply_dihedral(partition_blocks(img).blocks[0], code)}}));
  }
  SUBCASE("round trip crops to multiples of 16") {
    for (auto [w, h] : {std::pair{16, 16}, {17, 33}, {128, 96}, {50, 20}}) {
      const auto img = testing::random_image(rng, w, h);
      const KeySet k{rng(), rng()};
      const auto enc = encrypt(img, k);
      CHECK(enc.width() == w / 16 * 16);
      CHECK(enc.height() == h / 16 * 16);
      CHECK(decrypt(enc, k) == crop16(img));
    }
  }
  SUBCASE("wrong key does not decrypt") {
    const auto img = testing::random_image(rng, 64, 64);
    const KeySet k{rng(), rng()};
    const KeySet wrong{k.k1 ^ 1, k.k2};
    CHECK_FALSE(decrypt(encrypt(img, k), wrong) == img);
    CHECK_FALSE(decrypt(encrypt(img, k), KeySet{k.k1, k.k2 + 1}) == img);
  }
  SUBCASE("per-block pixel multisets are preserved") {
    const auto img = testing::random_image(rng, 80, 48);
    const auto enc = encrypt(img, KeySet{rng(), rng()});
    auto multisets = [](const ImageBuffer& im) {
      std::multiset<std::vector<Rgb8>> out;
      for (const auto& blk : partition_blocks(im).blocks) {
        std::vector<Rgb8> v(blk.pixels.begin(), blk.pixels.end());
        std::sort(v.begin(), v.end());
        out.insert(v);
      }
      return out;
    };
    CHECK(multisets(enc) == multisets(img));
  }
  SUBCASE("decrypt rejects unaligned images") {
    const auto img = testing::random_image(rng, 20, 32);
    try {
      decrypt(img, KeySet{});
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::malformed);
    }
  }
}

TEST_CASE("derive_keyset follows the master stream") {
  const auto k2 = derive_keyset(1234, 2);
  CHECK(k2.k1 == 0xb912e3ff44b145a5ULL);
  CHECK(k2.k2 == 0xb0bfb29e8c72a511ULL);
  SplitMix64 s(1234);
  const KeySet k0{s.next(), s.next()};
  CHECK(derive_keyset(1234, 0) == k0);
  CHECK_FALSE(derive_keyset(1234, 0) == derive_keyset(1234, 1));
}
