#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "qmeasure/histories.hpp"
#include "support/oracles.hpp"

using namespace qmeasure;
using cplx = std::complex<double>;

namespace {

const double kHalf = std::numbers::sqrt2 / 2;
const double kQuarter = std::numbers::pi / 2;

HopperModel<double> two_step(BeamsplitterParams<double> a, BeamsplitterParams<double> b) {
  return HopperModel<double>({a, b});
}

Event ev(std::vector<std::string> s) { return Event::from_strings(s); }

std::map<std::string, cplx> library_amplitudes(const HopperModel<double>& m) {
  std::map<std::string, cplx> out;
  for (const History& h : enumerate_histories(m)) out[h.to_string()] = amplitude(m, h);
  return out;
}

}  // namespace

TEST_CASE("history strings round trip and index order") {
  const History h = History::from_string("0110");
  CHECK(h.size() == 4);
  CHECK(h.to_string() == "0110");
  CHECK(h.site(0) == 0);
  CHECK(h.site(1) == 1);
  CHECK(h.endpoint() == 0);
  CHECK(h.index() == 0b0110u);
  CHECK(History::from_string("01") < History::from_string("10"));
  CHECK_THROWS_AS(History::from_string("012"), ValidationError);
  CHECK_THROWS_AS(History::from_string(""), ValidationError);
  CHECK_THROWS_AS(h.site(4), ContractViolation);
}

TEST_CASE("enumerate_histories") {
  const auto two = enumerate_histories(HopperModel<double>::symmetric(2));
  std::vector<std::string> names;
  for (const History& h : two) names.push_back(h.to_string());
  CHECK(names == std::vector<std::string>{"00", "01", "10", "11"});

  const HistorySpace one(1);
  REQUIRE(one.size() == 2);
  CHECK(one.histories()[0].to_string() == "0");
  CHECK(one.histories()[1].to_string() == "1");

  const HistorySpace three(3);
  std::vector<std::string> got;
  for (const History& h : three) got.push_back(h.to_string());
  CHECK(got == oracle::all_strings(3));

  CHECK_THROWS_AS(HistorySpace(30), ConfigError);
  CHECK_THROWS_AS(HistorySpace(5, 4), ConfigError);
  CHECK_NOTHROW(HistorySpace(4, 4));
}

TEST_CASE("events reject duplicates and mixed lengths") {
  CHECK_THROWS_AS(ev({"00", "00"}), ValidationError);
  CHECK_THROWS_AS(ev({"00", "011"}), ValidationError);
  CHECK(Event::parse("").empty());
  CHECK(Event::parse(" 11, 00 ,01").to_strings() == std::vector<std::string>{"00", "01", "11"});
  CHECK_THROWS_AS(Event::parse("00,0x"), ValidationError);

  const HistorySpace space(2);
  const Event e = ev({"00", "01", "11"});
  CHECK(e.complement(space).to_strings() == std::vector<std::string>{"10"});
  CHECK(e.subset_of(space));
  CHECK_FALSE(ev({"000"}).subset_of(space));
  CHECK(e.contains(History::from_string("01")));
  CHECK_FALSE(e.contains(History::from_string("10")));
}

TEST_CASE("model construction validates parameters") {
  CHECK_THROWS_AS(HopperModel<double>({}), ConfigError);
  CHECK_THROWS_AS(two_step({0.9, 0.9, 0.0}, {kHalf, kHalf, 0.0}), ConfigError);
  CHECK_THROWS_AS(two_step({-0.6, 0.8, 0.0}, {kHalf, kHalf, 0.0}), ConfigError);
  CHECK_THROWS_AS(two_step({NAN, 0.8, 0.0}, {kHalf, kHalf, 0.0}), ConfigError);
  CHECK_THROWS_AS(HopperModel<double>({{1.0, 0.0, 0.0}}, {StepRole::ReflectStays, StepRole::ReflectStays}),
                  ConfigError);
  CHECK_THROWS_AS(HopperModel<double>::symmetric(25), ConfigError);
}

TEST_CASE("amplitudes of the two-step hopper") {
  const auto sym = HopperModel<double>::symmetric(2);
  const cplx a00 = amplitude(sym, History::from_string("00"));
  CHECK(std::abs(a00 - cplx(-0.5, 0.0)) < 1e-15);

  // t1 = 1: a reflection at step 1 carries r1 = 0.
  const auto transmit_first = two_step({1.0, 0.0, 0.3}, {kHalf, kHalf, kQuarter});
  CHECK(amplitude(transmit_first, History::from_string("00")) == cplx(0.0));
  CHECK(amplitude(transmit_first, History::from_string("01")) == cplx(0.0));

  const auto asym = two_step({0.8, 0.6, 0.0}, {kHalf, kHalf, kQuarter});
  CHECK(std::abs(amplitude(asym, History::from_string("11")) - cplx(0.0, 0.8 * kHalf)) < 1e-15);

  CHECK_THROWS_AS(amplitude(sym, History::from_string("000")), ContractViolation);

  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const auto m = oracle::random_model(rng, 2, false);
    const auto lib = m.to_library();
    if (!m.stay_reflects[0] || !m.stay_reflects[1]) continue;
    for (const char* h : {"00", "01", "10", "11"}) {
      const cplx expected = oracle::two_step_amplitude(m.steps[0], m.steps[1], h);
      CHECK(std::abs(amplitude(lib, History::from_string(h)) - expected) < 1e-14);
    }
  }
}

TEST_CASE("amplitude_table agrees with per-history amplitudes") {
  std::mt19937_64 rng(5);
  for (std::size_t n = 1; n <= 6; ++n) {
    const auto m = oracle::random_model(rng, n, false);
    const auto lib = m.to_library();
    const auto table = amplitude_table(lib);
    REQUIRE(static_cast<std::size_t>(table.size()) == (std::size_t{1} << n));
    for (const History& h : enumerate_histories(lib)) {
      CHECK(std::abs(table(h.index()) - amplitude(lib, h)) < 1e-14);
      CHECK(std::abs(table(h.index()) - oracle::walk_amplitude(m.steps, m.stay_reflects,
                                                               h.to_string())) < 1e-14);
    }
  }
}

TEST_CASE("measure examples") {
  const auto sym = HopperModel<double>::symmetric(2);
  CHECK(measure(sym, ev({"00", "01", "11"})) == doctest::Approx(1.25).epsilon(1e-14));
  CHECK(measure(sym, ev({"00"})) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(measure(sym, ev({"01", "11"})) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(measure(sym, Event{}) == 0.0);
  CHECK(measure(sym, Event::parse("00,01,10,11")) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(measure(sym, ev({"000"})), ContractViolation);

  const auto amps = library_amplitudes(sym);
  CHECK(oracle::double_sum_measure({"01", "11"}, amps) == doctest::Approx(1.0));
}

TEST_CASE("float scalar instantiation") {
  const auto sym = HopperModel<float>::symmetric(2);
  CHECK(measure(sym, Event::parse("00,01,11")) == doctest::Approx(1.25f).epsilon(1e-6));
}

TEST_CASE("property: endpoint-grouped measure equals the double sum") {
  std::mt19937_64 rng(20240601);
  std::uniform_int_distribution<std::size_t> steps(1, 4);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto m = oracle::random_model(rng, steps(rng), false);
    const auto lib = m.to_library();
    const auto space = oracle::all_strings(m.steps.size());
    std::map<std::string, cplx> amps;
    for (const auto& h : space) amps[h] = oracle::walk_amplitude(m.steps, m.stay_reflects, h);
    const auto e = oracle::random_event(rng, space);
    const double got = measure(lib, Event::from_strings(e));
    const double expected = oracle::double_sum_measure(e, amps);
    REQUIRE(std::abs(got - expected) < 1e-12);
    CHECK(got >= 0.0);
  }
}

TEST_CASE("property: lossless quarter-turn models give the full space unit measure") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<std::size_t> steps(1, 8);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto lib = oracle::random_model(rng, steps(rng), true).to_library();
    const HistorySpace space = enumerate_histories(lib);
    REQUIRE(std::abs(measure(lib, Event(space.histories())) - 1.0) < 1e-12);
  }
}

TEST_CASE("property: two-step full-space measure is 1 + 4 r1 r2 t1 t2 cos(phi1) cos(phi2)") {
  // Unit measure of the full space needs a reflection phase of +-pi/2.
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 500; ++trial) {
    auto m = oracle::random_model(rng, 2, false);
    m.stay_reflects = {true, true};
    const auto& [s1, s2] = std::pair{m.steps[0], m.steps[1]};
    const double expected =
        1.0 + 4.0 * s1.r * s2.r * s1.t * s2.t * std::cos(s1.phi) * std::cos(s2.phi);
    CHECK(measure(m.to_library(), Event::parse("00,01,10,11")) ==
          doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("property: measure is not additive across complementary events") {
  const auto sym = HopperModel<double>::symmetric(2);
  const Event e = ev({"00", "01", "11"});
  const double total = measure(sym, e) + measure(sym, e.complement(enumerate_histories(sym)));
  CHECK(std::abs(total - 1.5) < 1e-12);

  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 300; ++trial) {
    const auto m = oracle::random_model(rng, 3, true);
    const auto lib = m.to_library();
    const HistorySpace space = enumerate_histories(lib);
    const Event a = Event::from_strings(oracle::random_event(rng, oracle::all_strings(3)));
    const Event b = a.complement(space);
    // mu(A) + mu(B) - mu(Omega) is the summed interference between A and B.
    std::map<std::string, cplx> amps;
    for (const auto& h : oracle::all_strings(3))
      amps[h] = oracle::walk_amplitude(m.steps, m.stay_reflects, h);
    double cross = 0.0;
    for (const auto& g : a.to_strings())
      for (const auto& h : b.to_strings())
        if (g.back() == h.back()) cross += 2.0 * (amps[g] * std::conj(amps[h])).real();
    CHECK(measure(lib, a) + measure(lib, b) + cross == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("serial classifier examples") {
  const HistorySpace space(2);
  CHECK(is_serial(ev({"00", "10"}), space));
  CHECK_FALSE(is_serial(ev({"00", "11"}), space));
  CHECK(is_serial(Event(space.histories()), space));
  CHECK(is_serial(ev({"01"}), space));
  CHECK_FALSE(is_serial(ev({"00", "01", "11"}), space));
  CHECK(is_serial(Event{}, space));
}

TEST_CASE("property: is_serial matches the brute-force product check") {
  for (std::size_t n : {2u, 3u}) {
    const HistorySpace space(n);
    const auto names = oracle::all_strings(n);
    const std::size_t count = std::size_t{1} << names.size();
    for (std::size_t mask = 0; mask < count; ++mask) {
      std::vector<std::string> e;
      for (std::size_t i = 0; i < names.size(); ++i)
        if (mask >> i & 1) e.push_back(names[i]);
      INFO("n=" << n << " mask=" << mask);
      CHECK(is_serial(Event::from_strings(e), space) == oracle::brute_force_serial(e, n));
    }
  }
}
