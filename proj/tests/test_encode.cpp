#include <doctest.h>

#include <numbers>

#include "qimp/encode.hpp"
#include "qimp/error.hpp"
#include "support.hpp"

using namespace qimp;

TEST_CASE("QPIE stores normalized pixels column-major") {
  const GrayImage img(2, 2, {0, 128, 192, 255});
  const auto q = qpie_encode(img);
  CHECK(q.state.n_qubits() == 2);
  CHECK(q.norm == doctest::Approx(std::sqrt(118273.0)));
  const double expected[] = {0, 192, 128, 255};
  for (int i = 0; i < 4; ++i) CHECK(q.state[i].real() == doctest::Approx(expected[i] / 343.9085).epsilon(1e-4));
  CHECK(qpie_decode(q) == img);

  const auto c = qpie_encode(GrayImage(2, 2, {7, 7, 7, 7}));
  for (int i = 0; i < 4; ++i) CHECK(c.state[i].real() == doctest::Approx(0.5));

  const GrayImage row(1, 3, {10, 20, 20});
  const auto r = qpie_encode(row);
  CHECK(r.state.n_qubits() == 2);
  CHECK(r.state[0].real() == doctest::Approx(10.0 / 30));
  CHECK(r.state[1].real() == doctest::Approx(20.0 / 30));
  CHECK(r.state[2].real() == doctest::Approx(20.0 / 30));
  CHECK(r.state[3].real() == 0.0);
  CHECK(qpie_decode(r) == row);

  CHECK_THROWS_AS(qpie_encode(GrayImage(2, 2)), ZeroNormError);
  CHECK(qpie_qubits(1, 1) == 1);
  CHECK(qpie_qubits(3, 3) == 4);
  CHECK(qpie_qubits(32, 32) == 10);
}

TEST_CASE("QPIE roundtrip and normalization on random images") {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 1000; ++i) {
    const auto img = qimp::testing::random_image(rng, 4, 4, 1, 255);
    const auto q = qpie_encode(img);
    CHECK(std::abs(q.state.norm_squared() - 1.0) < 1e-12);
    REQUIRE(qpie_decode(q) == img);
  }
}

TEST_CASE("QPIE of a transpose permutes amplitudes by the index swap") {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 20; ++t) {
    const auto img = qimp::testing::random_image(rng, 4, 4, 1, 255);
    const auto a = qpie_encode(img);
    const auto b = qpie_encode(img.transposed());
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) CHECK(a.state[c * 4 + r] == b.state[r * 4 + c]);
  }
}

TEST_CASE("FRQI angle pairs") {
  const auto zero = frqi_encode(GrayImage(2, 2));
  CHECK(zero.n == 1);
  CHECK(zero.state.n_qubits() == 3);
  for (int pos = 0; pos < 4; ++pos) {
    CHECK(std::abs(zero.state[pos]) < 1e-15);               // color qubit 0
    CHECK(zero.state[4 + pos].real() == doctest::Approx(0.5));  // color qubit 1
  }
  GrayImage bright(2, 2, {0, 255, 0, 0});
  const auto f = frqi_encode(bright);
  CHECK(f.state[1].real() == doctest::Approx(0.5));
  CHECK(std::abs(f.state[4 + 1]) < 1e-15);
  CHECK(frqi_decode(f) == bright);

  CHECK_THROWS_AS(frqi_encode(GrayImage(2, 3)), ShapeError);

  std::mt19937_64 rng(3);
  for (int i = 0; i < 500; ++i) {
    const auto img = qimp::testing::random_image(rng, 4, 4);
    REQUIRE(frqi_decode(frqi_encode(img)) == img);
  }
}

TEST_CASE("NEQR basis indices") {
  const auto m = neqr_encode(GrayImage(2, 2, {0, 1, 2, 3}));
  std::vector<std::size_t> nonzero;
  for (std::size_t i = 0; i < m.state.size(); ++i) {
    if (std::abs(m.state[i]) > 0) {
      nonzero.push_back(i);
      CHECK(m.state[i].real() == doctest::Approx(0.5));
    }
  }
  CHECK(nonzero == std::vector<std::size_t>{0, 5, 10, 15});

  const auto z = neqr_encode(GrayImage(2, 2));
  nonzero.clear();
  for (std::size_t i = 0; i < z.state.size(); ++i)
    if (std::abs(z.state[i]) > 0) nonzero.push_back(i);
  CHECK(nonzero == std::vector<std::size_t>{0, 1, 2, 3});

  std::mt19937_64 rng(4);
  for (int i = 0; i < 500; ++i) {
    const auto img = qimp::testing::random_image(rng, 4, 4);
    const auto e = neqr_encode(img);
    std::size_t count = 0;
    for (auto a : e.state.amplitudes()) count += std::abs(a) > 0;
    CHECK(count == img.size());
    REQUIRE(neqr_decode(e) == img);
  }
}

TEST_CASE("NEQR rejects states that are not a valid image") {
  std::vector<Complex> a(1u << 10);
  a[0] = 1;  // only position 0 populated
  NeqrImage bad{StateVector::from_amplitudes(a), 1};
  CHECK_THROWS_AS(neqr_decode(bad), ValidationError);
}

TEST_CASE("qubit lattice angles") {
  const auto l = lattice_encode(GrayImage(1, 3, {0, 255, 128}));
  CHECK(l.angle(0, 0) == 0.0);
  CHECK(l.angle(0, 1) == doctest::Approx(std::numbers::pi));
  CHECK(l.angle(0, 2) == doctest::Approx(1.5770).epsilon(1e-4));
  CHECK(std::abs(l.qubit(0, 0)[0] - 1.0) < 1e-15);
  CHECK(std::abs(std::abs(l.qubit(0, 1)[1]) - 1.0) < 1e-15);
  std::mt19937_64 rng(5);
  for (int i = 0; i < 200; ++i) {
    const auto img = qimp::testing::random_image(rng, 3, 5);
    REQUIRE(lattice_decode(lattice_encode(img)) == img);
  }
}
