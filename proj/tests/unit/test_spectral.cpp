#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

#include "eegsz/error.hpp"
#include "eegsz/spectral.hpp"
#include "oracles.hpp"

using namespace eegsz;

namespace {

constexpr double kFs = 173.61;
constexpr std::size_t kN = 4096;

double energy(std::span<const double> x) {
  double e = 0.0;
  for (double v : x) e += v * v;
  return e;
}

const FilterBank& paper_bank() {
  static const FilterBank bank = build_filter_bank(kFs, kN, BoundarySet::for_sampling_rate(kFs));
  return bank;
}

std::size_t bin_near(double hz) {
  return static_cast<std::size_t>(std::lround(hz * static_cast<double>(kN) / kFs));
}

std::vector<double> tone_at_bin(std::size_t bin, double amplitude, double phase) {
  std::vector<double> x(kN);
  for (std::size_t i = 0; i < kN; ++i) {
    x[i] = amplitude * std::cos(2.0 * std::numbers::pi * static_cast<double>(bin * i % kN) /
                                    static_cast<double>(kN) +
                                phase);
  }
  return x;
}

}  // namespace

TEST_SUITE("spectral") {

TEST_CASE("lambda for the published boundaries") {
  const std::array<double, 5> cuts{4, 8, 16, 30, 60};
  const double lambda = compute_lambda(cuts, kFs / 2.0);
  CHECK(lambda == doctest::Approx(0.1826).epsilon(0.0003));
  CHECK(std::abs(lambda - 0.1825) <= 0.0005);

  // Brute force over the consecutive pairs, Nyquist appended.
  const std::array<double, 6> edges{4, 8, 16, 30, 60, kFs / 2.0};
  double expected = 1.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    expected = std::min(expected, (edges[i + 1] - edges[i]) / (edges[i + 1] + edges[i]));
  }
  CHECK(lambda == expected);
  CHECK(lambda == doctest::Approx(0.1825891488709513).epsilon(1e-14));
}

TEST_CASE("lambda for two boundaries") {
  const std::array<double, 2> cuts{10, 30};
  CHECK(compute_lambda(cuts, 50.0) == doctest::Approx(0.25));
}

TEST_CASE("lambda rejects bad boundaries") {
  const std::array<double, 3> unordered{4, 16, 8};
  const std::array<double, 2> non_positive{0, 8};
  const std::array<double, 2> above_nyquist{4, 90};
  CHECK_THROWS_AS(compute_lambda(unordered, 86.8), InvalidArgument);
  CHECK_THROWS_AS(compute_lambda(non_positive, 86.8), InvalidArgument);
  CHECK_THROWS_AS(compute_lambda(above_nyquist, 86.8), InvalidArgument);
  CHECK_THROWS_AS(compute_lambda(std::span<const double>{}, 86.8), InvalidArgument);
}

TEST_CASE("beta transition values") {
  CHECK(beta_transition(0.5) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(beta_transition(-3.0) == 0.0);
  CHECK(beta_transition(0.0) == 0.0);
  CHECK(beta_transition(1.0) == 1.0);
  CHECK(beta_transition(2.0) == 1.0);
  CHECK(beta_transition(0.25) == doctest::Approx(0.070556640625).epsilon(1e-14));
  CHECK(beta_transition(0.75) == doctest::Approx(0.929443359375).epsilon(1e-14));
  CHECK_THROWS_AS(beta_transition(std::numeric_limits<double>::quiet_NaN()), InvalidArgument);
}

TEST_CASE("beta transition is complementary and monotone") {
  double prev = 0.0;
  for (int i = 0; i <= 1000; ++i) {
    const double y = i / 1000.0;
    CHECK(beta_transition(y) + beta_transition(1.0 - y) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(beta_transition(y) >= prev);
    prev = beta_transition(y);
  }
}

TEST_CASE("filter bank flat passbands") {
  const auto& bank = paper_bank();
  const std::size_t k2 = bin_near(2.0);
  CHECK(bank.response(Rhythm::delta, k2) == 1.0);
  for (Rhythm r : {Rhythm::theta, Rhythm::alpha, Rhythm::beta, Rhythm::gamma}) {
    CHECK(bank.response(r, k2) == 0.0);
  }
  const std::size_t k12 = bin_near(12.0);
  CHECK(bank.response(Rhythm::alpha, k12) == 1.0);
  for (Rhythm r : {Rhythm::delta, Rhythm::theta, Rhythm::beta, Rhythm::gamma}) {
    CHECK(bank.response(r, k12) == 0.0);
  }
  CHECK(bank.response(Rhythm::theta, bin_near(6.0)) == 1.0);
  CHECK(bank.response(Rhythm::beta, bin_near(23.0)) == 1.0);
  CHECK(bank.response(Rhythm::gamma, bin_near(45.0)) == 1.0);
}

TEST_CASE("filter bank: squared responses sum to one below the gamma taper") {
  const auto& bank = paper_bank();
  const double limit = 60.0 * (1.0 - bank.boundaries().lambda);
  std::size_t checked = 0;
  for (std::size_t k = 0; k < bank.n_fft(); ++k) {
    if (bank.bin_frequency(k) > limit) continue;
    double sum = 0.0;
    for (Rhythm r : kAllRhythms) sum += bank.response(r, k) * bank.response(r, k);
    CHECK(std::abs(sum - 1.0) <= 1e-9);
    ++checked;
  }
  CHECK(checked > 2000);
}

TEST_CASE("filter bank responses are bounded, symmetric and vanish above the gamma band") {
  const auto& bank = paper_bank();
  const double top = 60.0 * (1.0 + bank.boundaries().lambda);
  for (Rhythm r : kAllRhythms) {
    const auto resp = bank.response(r);
    REQUIRE(resp.size() == kN);
    for (std::size_t k = 0; k < kN; ++k) {
      CHECK(resp[k] >= 0.0);
      CHECK(resp[k] <= 1.0);
      if (k >= 1) CHECK(resp[k] == resp[kN - k]);
      if (bank.bin_frequency(k) > top) CHECK(resp[k] == 0.0);
    }
  }
}

TEST_CASE("filter bank rejects incompatible configurations") {
  const auto b = BoundarySet::for_sampling_rate(kFs);
  CHECK_THROWS_AS(build_filter_bank(130.0, kN, b), InvalidArgument);
  CHECK_THROWS_AS(build_filter_bank(kFs, 1, b), InvalidArgument);
  BoundarySet wide = b;
  wide.lambda = 0.3;
  CHECK_THROWS_AS(build_filter_bank(kFs, kN, wide), InvalidArgument);
  CHECK_THROWS_AS(BoundarySet::for_sampling_rate(100.0), InvalidArgument);  // 60 Hz > Nyquist
}

TEST_CASE("decompose: DC goes entirely to delta") {
  const std::vector<double> x(kN, 5.0);
  const auto rh = decompose(x, paper_bank());
  for (double v : rh[Rhythm::delta]) CHECK(v == doctest::Approx(5.0).epsilon(1e-12));
  for (Rhythm r : {Rhythm::theta, Rhythm::alpha, Rhythm::beta, Rhythm::gamma}) {
    for (double v : rh[r]) CHECK(std::abs(v) <= 1e-9);
  }
}

TEST_CASE("decompose: a 10 Hz tone lands in alpha") {
  std::vector<double> x(kN);
  for (std::size_t i = 0; i < kN; ++i) {
    x[i] = std::sin(2.0 * std::numbers::pi * 10.0 * static_cast<double>(i) / kFs);
  }
  const auto rh = decompose(x, paper_bank());
  CHECK(energy(rh[Rhythm::alpha]) >= 0.99 * energy(x));
}

TEST_CASE("decompose: energy partitions for signals below the gamma taper") {
  std::mt19937_64 rng(2024);
  const double limit = 60.0 * (1.0 - paper_bank().boundaries().lambda);
  for (int trial = 0; trial < 10; ++trial) {
    const auto x = oracle::bandlimited_signal(rng, kN, kFs, limit, 12);
    const auto e = band_energies(decompose(x, paper_bank()));
    const double total = e[0] + e[1] + e[2] + e[3] + e[4];
    CHECK(std::abs(total - energy(x)) <= 1e-6 * energy(x));
  }
}

TEST_CASE("decompose: energy inside the gamma taper is attenuated by the squared response") {
  const std::size_t bin = bin_near(55.0);
  const auto x = tone_at_bin(bin, 3.0, 0.4);
  const auto e = band_energies(decompose(x, paper_bank()));
  const double gain = paper_bank().response(Rhythm::gamma, bin);
  CHECK(gain < 1.0);
  CHECK(e[index_of(Rhythm::gamma)] == doctest::Approx(gain * gain * energy(x)).epsilon(1e-9));
}

TEST_CASE("decompose matches a naive-DFT filter oracle") {
  constexpr std::size_t n = 256;
  const auto bank = build_filter_bank(kFs, n, BoundarySet::for_sampling_rate(kFs));
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g(0.0, 10.0);
  std::vector<double> x(n);
  for (double& v : x) v = g(rng);

  const auto X = oracle::naive_dft(x);
  const auto rh = decompose(x, bank);
  double spectral_energy = 0.0;
  for (Rhythm r : kAllRhythms) {
    // Inverse DFT of X * H, written out.
    for (std::size_t t = 0; t < n; ++t) {
      std::complex<double> acc = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        const double a = 2.0 * std::numbers::pi * static_cast<double>(k * t % n) / n;
        acc += X[k] * bank.response(r, k) * std::complex<double>(std::cos(a), std::sin(a));
      }
      CHECK(rh[r][t] == doctest::Approx(acc.real() / n).epsilon(1e-9).scale(100.0));
    }
    for (std::size_t k = 0; k < n; ++k) {
      spectral_energy += std::norm(X[k]) * bank.response(r, k) * bank.response(r, k) / n;
    }
  }
  const auto e = band_energies(rh);
  CHECK(e[0] + e[1] + e[2] + e[3] + e[4] == doctest::Approx(spectral_energy).epsilon(1e-10));
}

TEST_CASE("decompose is linear") {
  std::mt19937_64 rng(77);
  std::normal_distribution<double> g(0.0, 20.0);
  std::vector<double> x(kN), y(kN), z(kN);
  const double a = 1.7, b = -0.35;
  for (std::size_t i = 0; i < kN; ++i) {
    x[i] = g(rng);
    y[i] = g(rng);
    z[i] = a * x[i] + b * y[i];
  }
  const auto dx = decompose(x, paper_bank());
  const auto dy = decompose(y, paper_bank());
  const auto dz = decompose(z, paper_bank());
  for (Rhythm r : kAllRhythms) {
    double scale = 0.0;
    for (double v : dz[r]) scale = std::max(scale, std::abs(v));
    for (std::size_t i = 0; i < kN; ++i) {
      CHECK(std::abs(dz[r][i] - (a * dx[r][i] + b * dy[r][i])) <= 1e-9 * scale);
    }
  }
}

TEST_CASE("decompose returns a flat-passband tone unchanged") {
  const auto x = tone_at_bin(bin_near(12.0), 40.0, 1.1);
  const auto rh = decompose(x, paper_bank());
  for (std::size_t i = 0; i < kN; ++i) {
    CHECK(std::abs(rh[Rhythm::alpha][i] - x[i]) <= 1e-9 * 40.0);
  }
  for (Rhythm r : {Rhythm::delta, Rhythm::theta, Rhythm::beta, Rhythm::gamma}) {
    for (double v : rh[r]) CHECK(std::abs(v) <= 1e-9 * 40.0);
  }
}

TEST_CASE("decompose drops content above the gamma band") {
  const auto x = tone_at_bin(bin_near(80.0), 10.0, 0.0);
  const auto e = band_energies(decompose(x, paper_bank()));
  for (double v : e) CHECK(v <= 1e-18 * energy(x));
}

TEST_CASE("decompose rejects bad input") {
  CHECK_THROWS_AS(decompose(std::vector<double>(100, 1.0), paper_bank()), InvalidArgument);
  std::vector<double> x(kN, 1.0);
  x[7] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(decompose(x, paper_bank()), InvalidArgument);
}

TEST_CASE("filter bank and rhythm CSV shapes") {
  const auto csv = filter_bank_csv(paper_bank());
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line == "bin,hz,delta,theta,alpha,beta,gamma");
  std::size_t rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == kN / 2 + 1);

  const auto rh = decompose(std::vector<double>(kN, 1.0), paper_bank());
  std::istringstream rin(rhythms_csv(rh));
  std::getline(rin, line);
  CHECK(line == "delta,theta,alpha,beta,gamma");
  rows = 0;
  while (std::getline(rin, line)) ++rows;
  CHECK(rows == kN);
}

TEST_CASE("filter bank copies share state and decompose concurrently") {
  const FilterBank copy = paper_bank();
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  std::vector<double> x(kN);
  for (double& v : x) v = g(rng);
  const auto ref = decompose(x, copy);
  std::vector<RhythmSet> results(4);
  {
    std::vector<std::jthread> pool;
    for (int t = 0; t < 4; ++t) pool.emplace_back([&, t] { results[t] = decompose(x, copy); });
  }
  for (const auto& r : results) CHECK(r.bands == ref.bands);
}

}
