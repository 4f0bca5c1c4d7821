#include <chrono>
#include <cstdio>
#include <memory>
#include <vector>

#include "oscert/comparison.hpp"
#include "oscert/search.hpp"
#include "oscert/solver.hpp"

using namespace oscert;
using Clock = std::chrono::steady_clock;

namespace {

CoeffPtr wavy_set() {
  double b = 12.0;
  PiecewiseFunction p(0.0, b, parse_expr("1 + x/12"));
  PiecewiseFunction q(0.0, b, parse_expr("-2 + sin(x)"));
  PiecewiseFunction r(0.0, b, parse_expr("cos(x)/4"));
  PiecewiseFunction s(0.0, b, parse_expr("x/48"));
  return std::make_shared<CoefficientSet>(p, q, r, s);
}

template <class F>
double time_ms(F&& work) {
  auto t0 = Clock::now();
  work();
  auto t1 = Clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

void row(const char* name, double serial_ms, double parallel_ms, bool match) {
  std::printf("%-28s %10.1f %12.1f %9.2fx   %s\n", name, serial_ms,
              parallel_ms, serial_ms / parallel_ms, match ? "yes" : "NO");
}

}  // namespace

int main() {
  CoeffPtr wavy = wavy_set();
  SolveOptions opt;
  opt.tol = 1e-10;

  std::printf("%-28s %10s %12s %10s   %s\n", "task", "serial/ms", "parallel/ms",
              "speedup", "match");

  {
    std::vector<Solution> serial, parallel;
    double ts = time_ms(
        [&] { serial = theta_sweep(wavy, 0.0, 192, opt, RunPolicy::Serial); });
    double tp = time_ms([&] {
      parallel = theta_sweep(wavy, 0.0, 192, opt, RunPolicy::Parallel);
    });
    bool match = serial.size() == parallel.size();
    for (std::size_t j = 0; match && j < serial.size(); ++j)
      for (double x : serial[j].sample_points())
        if (serial[j].u(x) != parallel[j].u(x) ||
            serial[j].v(x) != parallel[j].v(x))
          match = false;
    row("theta sweep, 192 rays", ts, tp, match);
  }

  {
    CoeffPtr tilde = leighton_tilde();
    Solution u = shoot_vanishing(tilde, 1e-9);
    CoeffPtr target = leighton_target(1.672);
    GaugeScan ss, sp;
    double ts = time_ms([&] {
      ss = linear_gauge_scan(tilde, target, u, 0.0, 1.2, 97, 1e-8,
                             RunPolicy::Serial);
    });
    double tp = time_ms([&] {
      sp = linear_gauge_scan(tilde, target, u, 0.0, 1.2, 97, 1e-8,
                             RunPolicy::Parallel);
    });
    bool match = ss.c == sp.c && ss.certificate.value == sp.certificate.value;
    row("gauge scan, 97 slopes", ts, tp, match);
  }

  return 0;
}
