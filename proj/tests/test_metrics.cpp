#include <doctest.h>

#include <cmath>
#include <limits>

#include "scuw/metrics.hpp"
#include "support.hpp"

using namespace scuw;

TEST_CASE("papr of simple blocks") {
  ComplexVector constant(64);
  for (std::size_t k = 0; k < 64; ++k) constant[k] = std::polar(1.0, 0.3 * static_cast<double>(k * k));
  CHECK(papr_db(constant, 1) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
  ComplexVector impulse(64);
  impulse[5] = 1.0;
  CHECK(papr_db(impulse, 1) == doctest::Approx(10 * std::log10(64.0)));
  // A single tone stays flat after spectral zero padding.
  ComplexVector tone(64);
  for (std::size_t k = 0; k < 64; ++k) tone[k] = std::polar(1.0, 2 * M_PI * 3 * k / 64.0);
  CHECK(papr_db(tone, 4) == doctest::Approx(0.0).scale(1.0).epsilon(1e-9));
  CHECK_THROWS(papr_db(ComplexVector{}, 4));
  CHECK_THROWS(papr_db(ComplexVector(8), 4));
}

TEST_CASE("oversampling never lowers the peak") {
  Engine e = make_engine(31);
  for (int t = 0; t < 20; ++t) {
    const ComplexVector x = testing::random_complex(128, e);
    CHECK(papr_db(x, 4) >= papr_db(x, 1) - 1e-9);
  }
}

TEST_CASE("block papr and ccdf") {
  Engine e = make_engine(32);
  const ComplexVector x = testing::random_complex(64 * 50 + 7, e);
  const auto v = block_papr_db(x, 64, 2, 7);
  CHECK(v.size() == 50);
  const CcdfCurve c = papr_ccdf(SamplePacket{x}, 64, 2);
  REQUIRE(c.thresholds_db.size() == c.probabilities.size());
  CHECK(c.thresholds_db.front() == 0.0);
  CHECK(c.probabilities.front() == 1.0);
  for (std::size_t k = 1; k < c.probabilities.size(); ++k) {
    CHECK(c.probabilities[k] <= c.probabilities[k - 1]);
    CHECK(c.thresholds_db[k] >= c.thresholds_db[k - 1]);
  }
  CHECK_THROWS(papr_ccdf(SamplePacket{ComplexVector(10, 1.0)}, 64));
  const std::vector<double> vals{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  CHECK(value_at_ccdf(vals, 0.1) == 9.0);
  CHECK(value_at_ccdf(vals, 0.5) == 5.0);
}

TEST_CASE("ber counts") {
  const Bits a{0, 1, 1, 0}, b{1, 0, 0, 1};
  CHECK(ber(a, a) == 0.0);
  CHECK(ber(a, b) == 1.0);
  CHECK_THROWS(ber(a, Bits{0}));
  Engine e = make_engine(33);
  std::uniform_int_distribution<int> coin(0, 1);
  Bits x(1000000), y(1000000);
  for (auto& v : x) v = static_cast<std::uint8_t>(coin(e));
  for (auto& v : y) v = static_cast<std::uint8_t>(coin(e));
  CHECK(ber(x, y) == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("waveform mse") {
  Engine e = make_engine(34);
  const ComplexVector x = testing::random_complex(100, e);
  CHECK(waveform_mse_db(x, x) == kDbFloor);
  ComplexVector y = x;
  for (auto& v : y) v *= 1.01;
  CHECK(waveform_mse_db(x, y) == doctest::Approx(-40.0).epsilon(1e-9));
  const ComplexVector tail(x.begin() + 10, x.end());
  CHECK(waveform_mse_db(x, tail, 10) == kDbFloor);
  CHECK(waveform_mse_db(tail, x, -10) == kDbFloor);
  CHECK_THROWS(waveform_mse_db(x, y, 100));
  CHECK(evm_db(x, y) == doctest::Approx(-40.0).epsilon(1e-9));
}

TEST_CASE("analytic bounds") {
  CHECK(q_function(0.0) == doctest::Approx(0.5));
  CHECK(q_function(1.0) == doctest::Approx(0.158655253931457));
  const double ebn0 = std::pow(10.0, 0.7);
  CHECK(ber_bound(Modulation::qpsk, ebn0) == doctest::Approx(q_function(std::sqrt(2 * ebn0))));
  CHECK(ber_bound(Modulation::bpsk, ebn0) == doctest::Approx(q_function(std::sqrt(2 * ebn0))));
  CHECK(ber_bound(Modulation::qam16, ebn0) ==
        doctest::Approx(0.75 * q_function(std::sqrt(0.8 * ebn0))).epsilon(0.02));
  // Per-sample SNR to Eb/N0: the symbol energy gains N/M, split over bits.
  CHECK(10 * std::log10(ebn0_from_snr(8.0, 512, 768, Modulation::qpsk)) ==
        doctest::Approx(8.0 + 10 * std::log10(1.5 / 2.0)));
  const double s = snr_for_bound(Modulation::qpsk, 1e-3, 512, 768);
  CHECK(ber_bound(Modulation::qpsk, ebn0_from_snr(s, 512, 768, Modulation::qpsk)) ==
        doctest::Approx(1e-3).epsilon(1e-6));
}

TEST_CASE("snr at ber interpolates in the log domain") {
  SweepResult r;
  r.points.resize(2);
  r.points[0].snr_db = 0.0;
  r.points[0].ber = 1e-1;
  r.points[1].snr_db = 10.0;
  r.points[1].ber = 1e-3;
  CHECK(snr_at_ber(r, 1e-2) == doctest::Approx(5.0));
  CHECK(std::isnan(snr_at_ber(r, 1e-5)));
  CHECK(snr_range(0, 2, 10).size() == 6);
  CHECK(snr_range(0, 0.1, 1).size() == 11);
}
