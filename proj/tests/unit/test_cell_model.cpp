#include <doctest.h>

#include <cmath>
#include <random>

#include "parafault/cell_model.hpp"
#include "parafault/errors.hpp"

using namespace parafault;

TEST_CASE("ocv is the linear OCV-SoC line") {
  CellParams p;  // a = 0.8, b = 3.3
  CHECK(ocv(p, 0.0) == doctest::Approx(3.3).epsilon(1e-15));
  CHECK(ocv(p, 1.0) == doctest::Approx(4.1).epsilon(1e-15));
  CHECK(ocv(p, 0.5) == doctest::Approx(3.7).epsilon(1e-15));
  CHECK_THROWS_AS(ocv(p, -0.01), DomainError);
  CHECK_THROWS_AS(ocv(p, 1.01), DomainError);
  CHECK_THROWS_AS(ocv(p, NAN), DomainError);
}

TEST_CASE("params validation") {
  CellParams p;
  CHECK_NOTHROW(p.validate());
  p.rs_ohm = 0.0;
  CHECK_THROWS_AS(p.validate(), DomainError);
  p = {};
  p.eta = 1.2;
  CHECK_THROWS_AS(p.validate(), DomainError);
  p = {};
  p.tau_s = -1.0;
  CHECK_THROWS_AS(p.validate(), DomainError);
}

TEST_CASE("step_cell homogeneous decay over one time constant") {
  CellParams p;
  const CellState s{1.0, 0.8, false};
  const auto n = step_cell(p, s, 0.0, p.tau_s);
  CHECK(n.vc_volt == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
  CHECK(n.vc_volt == doctest::Approx(0.3679).epsilon(1e-4));
  CHECK(n.soc == 0.8);
}

TEST_CASE("one C-hour discharges a full cell") {
  CellParams p;
  p.qb_ah = 5.0;
  p.eta = 1.0;
  CellState s{0.0, 1.0, false};
  for (int k = 0; k < 36000; ++k) s = step_cell(p, s, 5.0, 0.1);
  CHECK(s.soc == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(std::abs(s.soc) < 1e-9);
}

TEST_CASE("RC voltage settles at Rt * i") {
  CellParams p;
  CellState s{0.0, 1.0, false};
  // 20 time constants
  for (int k = 0; k < 6000; ++k) s = step_cell(p, s, 1.0, 0.1);
  CHECK(s.vc_volt == doctest::Approx(p.rt_ohm * 1.0).epsilon(1e-8));
}

TEST_CASE("terminal voltage") {
  CellParams p;
  p.rs_ohm = 5.8e-3;
  const CellState full{0.0, 1.0, false};
  CHECK(terminal_voltage(p, full, 0.0) == doctest::Approx(4.1).epsilon(1e-15));
  CHECK(terminal_voltage(p, full, 2.5) == doctest::Approx(4.0855).epsilon(1e-14));
  CHECK(terminal_voltage(p, full, -2.5) == doctest::Approx(4.1 + 5.8e-3 * 2.5).epsilon(1e-14));
  CHECK(terminal_voltage(p, full, -2.5) > ocv(p, 1.0));
}

TEST_CASE("step_cell error paths") {
  CellParams p;
  CellState s;
  CHECK_THROWS_AS(step_cell(p, s, NAN, 0.1), NumericError);
  CHECK_THROWS_AS(step_cell(p, s, 1.0, INFINITY), NumericError);
  CHECK_THROWS_AS(step_cell(p, s, 1.0, 0.0), DomainError);
}

TEST_CASE("SoC saturation clamps and flags instead of failing") {
  CellParams p;
  CellState s{0.0, 0.001, false};
  s = step_cell(p, s, 100.0, 10.0);
  CHECK(s.soc == 0.0);
  CHECK(s.saturated);
  CellState c{0.0, 1.04, false};
  c = step_cell(p, c, -100.0, 10.0);
  CHECK(c.soc == kSocMax);
  CHECK(c.saturated);
  CellState ok{0.0, 0.5, false};
  CHECK_FALSE(step_cell(p, ok, 1.0, 1.0).saturated);
}

TEST_CASE("property: ZOH exactness, two half steps equal one full step") {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> cur(-10.0, 10.0), dtd(0.01, 20.0), vc(-0.05, 0.05),
      tau(1.0, 100.0), rt(0.0, 0.05);
  for (int trial = 0; trial < 500; ++trial) {
    CellParams p;
    p.tau_s = tau(gen);
    p.rt_ohm = rt(gen);
    p.qb_ah = 50.0;
    const CellState s{vc(gen), 0.5, false};
    const double i = cur(gen), dt = dtd(gen);
    const auto two = step_cell(p, step_cell(p, s, i, dt), i, dt);
    const auto one = step_cell(p, s, i, 2.0 * dt);
    CHECK(two.vc_volt == doctest::Approx(one.vc_volt).epsilon(1e-12).scale(1e-6));
    CHECK(two.soc == doctest::Approx(one.soc).epsilon(1e-12));
  }
}

TEST_CASE("property: SoC non-increasing under discharge and charge bookkeeping") {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> cur(0.0, 10.0);
  CellParams p;
  p.eta = 0.97;
  CellState s{0.0, 1.0, false};
  const double dt = 0.1;
  double charge = 0.0;  // ZOH: current constant over each step
  for (int k = 0; k < 2000; ++k) {
    const double i = cur(gen);
    const auto next = step_cell(p, s, i, dt);
    CHECK(next.soc <= s.soc);
    charge += i * dt;
    s = next;
  }
  CHECK(s.soc - 1.0 == doctest::Approx(-p.eta / (3600.0 * p.qb_ah) * charge).epsilon(1e-10));
}

TEST_CASE("property: RC voltage is linear in the current") {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  CellParams p;
  for (int trial = 0; trial < 200; ++trial) {
    const double i1 = u(gen), i2 = u(gen), a = u(gen);
    const CellState zero{0.0, 0.5, false};
    const double v1 = step_cell(p, zero, i1, 0.7).vc_volt;
    const double v2 = step_cell(p, zero, i2, 0.7).vc_volt;
    const double v12 = step_cell(p, zero, a * i1 + i2, 0.7).vc_volt;
    CHECK(v12 == doctest::Approx(a * v1 + v2).epsilon(1e-12).scale(1e-3));
  }
}
