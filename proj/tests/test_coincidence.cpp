#include <doctest.h>

#include <pstream/coincidence.hpp>
#include <pstream/errors.hpp>

#include <algorithm>
#include <random>

using namespace pstream;

namespace {

PulseTrain train(std::initializer_list<Pulse> pulses) {
  PulseTrain t;
  t.pulses = pulses;
  return t;
}

/// All-pairs oracle with the same greedy rule: A in order, earliest free B.
CoincidenceResult brute_force(const PulseTrain &a, const PulseTrain &b, const CcmConfig &cfg) {
  const Picoseconds thr = to_ps(cfg.overlap_threshold);
  const Picoseconds d = to_ps(cfg.delay_tau);
  CoincidenceResult r;
  std::vector<bool> used(b.size(), false);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      const Picoseconds lo = std::max(a.pulses[i].start, b.pulses[j].start + d);
      const Picoseconds hi = std::min(a.pulses[i].end(), b.pulses[j].end() + d);
      if (!used[j] && hi - lo >= thr) {
        used[j] = true;
        r.matches.push_back({i, j});
        break;
      }
    }
  }
  r.count = r.matches.size();
  return r;
}

PulseTrain random_train(std::mt19937_64 &rng, std::size_t n, Picoseconds min_gap,
                        Picoseconds max_gap, Picoseconds min_len, Picoseconds max_len) {
  std::uniform_int_distribution<Picoseconds> gap(min_gap, max_gap), len(min_len, max_len);
  PulseTrain t;
  Picoseconds at = gap(rng);
  for (std::size_t i = 0; i < n; ++i) {
    const Picoseconds l = std::min(len(rng), min_gap);
    t.pulses.push_back({at, l});
    at += std::max(gap(rng), l);
  }
  return t;
}

} // namespace

TEST_CASE("coincide: interval arithmetic cases") {
  CcmConfig cfg;
  auto r = coincide(train({{0, 10000}}), train({{4000, 10000}}), cfg);
  CHECK(r.count == 1);
  CHECK(r.matches.front() == Match{0, 0});
  CHECK(coincide(train({{0, 10000}}), train({{6000, 10000}}), cfg).count == 0);
  CHECK(coincide(train({{0, 10000}}), train({{5000, 10000}}), cfg).count == 1);
  CHECK(coincide(train({{0, 10000}, {50000, 10000}}), PulseTrain{}, cfg).count == 0);
  CHECK(coincide(PulseTrain{}, train({{0, 10000}}), cfg).count == 0);
}

TEST_CASE("coincide: delay shifts channel B") {
  CcmConfig cfg;
  cfg.delay_tau = 30e-9;
  CHECK(coincide(train({{30000, 10000}}), train({{0, 10000}}), cfg).count == 1);
  CHECK(coincide(train({{0, 10000}}), train({{0, 10000}}), cfg).count == 0);
}

TEST_CASE("coincide: a pulse never matches twice") {
  CcmConfig cfg;
  // B pulses abut, each A pulse overlaps two of them by >= 5 ns
  const auto a = train({{0, 10000}, {10000, 10000}});
  const auto b = train({{0, 10000}, {10000, 10000}, {20000, 10000}});
  const auto r = coincide(a, b, cfg);
  CHECK(r.count == 2);
  CHECK(r.matches == brute_force(a, b, cfg).matches);
}

TEST_CASE("coincide: rejects invariant-violating trains") {
  CcmConfig cfg;
  CHECK_THROWS_AS(coincide(train({{10, 10000}, {5, 10000}}), PulseTrain{}, cfg), ContractError);
  CHECK_THROWS_AS(coincide(PulseTrain{}, train({{0, 10000}, {5000, 10000}}), cfg), ContractError);
}

TEST_CASE("coincide equals the all-pairs oracle on random trains") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 60; ++trial) {
    CcmConfig cfg;
    cfg.overlap_threshold = (1 + rng() % 10) * 1e-9;
    cfg.delay_tau = static_cast<double>(static_cast<int>(rng() % 41) - 20) * 1e-9;
    const std::size_t n = 1 + rng() % 1000, m = 1 + rng() % 1000;
    // tight gaps and mixed widths give many multi-candidate overlaps
    const auto a = random_train(rng, n, 10000, 40000, 2000, 20000);
    const auto b = random_train(rng, m, 10000, 40000, 2000, 20000);
    const auto fast = coincide(a, b, cfg);
    const auto slow = brute_force(a, b, cfg);
    CHECK(fast.count == slow.count);
    CHECK(fast.matches == slow.matches);
  }
}

TEST_CASE("coincide: symmetric at zero delay, monotone in threshold, additive") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 40; ++trial) {
    const auto a = random_train(rng, 300, 22000, 60000, 10000, 10000);
    const auto b = random_train(rng, 300, 22000, 60000, 10000, 10000);
    CcmConfig cfg;
    CHECK(coincide(a, b, cfg).count == coincide(b, a, cfg).count);

    std::uint64_t previous = 0;
    for (double thr = 10e-9; thr >= 1e-9; thr -= 1e-9) {
      cfg.overlap_threshold = thr;
      const auto c = coincide(a, b, cfg).count;
      CHECK(c >= previous);
      previous = c;
    }

    cfg.overlap_threshold = 5e-9;
    PulseTrain a2 = a, b2 = b;
    const Picoseconds shift = std::max(a.pulses.back().end(), b.pulses.back().end()) + 100000;
    for (auto &p : a2.pulses)
      p.start += shift;
    for (auto &p : b2.pulses)
      p.start += shift;
    PulseTrain ab = a, bb = b;
    ab.pulses.insert(ab.pulses.end(), a2.pulses.begin(), a2.pulses.end());
    bb.pulses.insert(bb.pulses.end(), b2.pulses.begin(), b2.pulses.end());
    CHECK(coincide(ab, bb, cfg).count == coincide(a, b, cfg).count + coincide(a2, b2, cfg).count);
  }
}

TEST_CASE("accumulate sums steps into bins") {
  CcmConfig cfg;
  std::vector<CountRecord> steps(10);
  auto bins = accumulate(steps, cfg);
  REQUIRE(bins.size() == 1);
  CHECK(bins[0] == CountRecord{0, 0, 0, 0, false});

  for (auto &s : steps)
    s = {0, 27000, 27000, 82, false};
  bins = accumulate(steps, cfg);
  REQUIRE(bins.size() == 1);
  CHECK(bins[0].n_a == 270000);
  CHECK(bins[0].n_b == 270000);
  CHECK(bins[0].n_c == 820);
  CHECK(bins[0].n_c <= std::min(bins[0].n_a, bins[0].n_b));
  CHECK_FALSE(bins[0].partial);

  steps.resize(13);
  steps[10] = steps[11] = steps[12] = {0, 5, 6, 1, false};
  bins = accumulate(steps, cfg);
  REQUIRE(bins.size() == 2);
  CHECK(bins[1].partial);
  CHECK(bins[1].bin_index == 1);
  CHECK(bins[1].n_a == 15);

  std::vector<CountRecord> three(3, CountRecord{0, 1, 1, 0, false});
  bins = accumulate(three, cfg);
  REQUIRE(bins.size() == 1);
  CHECK(bins[0].partial);
}

TEST_CASE("CcmConfig validation") {
  CcmConfig cfg;
  CHECK(cfg.steps_per_bin() == 10);
  cfg.step = 0.3;
  CHECK_THROWS_AS(cfg.steps_per_bin(), ConfigError);
  cfg = CcmConfig{};
  cfg.overlap_threshold = 12e-9;
  CHECK_THROWS_AS(cfg.validate(10e-9), ConfigError);
  cfg = CcmConfig{};
  cfg.step = 2.0;
  CHECK_THROWS_AS(cfg.validate(10e-9), ConfigError);
}
