// Timings of the OpenMP kernels against their serial reference
// implementations: lattice sup-convolution, jet-set Hausdorff distance and
// the fiber-continuity certification sweep.

#include <chrono>
#include <cstdio>

#include "jetcone/fibermap.hpp"
#include "jetcone/manifest.hpp"
#include "jetcone/potential.hpp"
#include "jetcone/reference.hpp"

using namespace jetcone;

namespace {

template <class F>
double time_ms(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

void row(const char* name, double serial_ms, double parallel_ms) {
  std::printf("%-28s %10.1f ms %10.1f ms %8.2fx\n", name, serial_ms, parallel_ms,
              parallel_ms > 0 ? serial_ms / parallel_ms : 0.0);
}

}  // namespace

int main() {
  std::printf("%-28s %13s %13s %9s\n", "kernel", "serial", "parallel", "speedup");

  {
    BoxDomain Om({-1.0, -1.0}, {1.0, 1.0}, 1.0 / 75.0);
    GridFunction u = GridFunction::from_callable(
        Om, [](const Vec& x) { return std::abs(x[0]) + 0.3 * std::sin(5.0 * x[1]); });
    GridFunction a, b;
    const double ts = time_ms([&] { a = serial::sup_convolution(u, 0.05); });
    const double tp = time_ms([&] { b = sup_convolution(u, 0.05); });
    double dmax = 0;
    for (size_t i = 0; i < a.values.size(); ++i)
      dmax = std::max(dmax, std::abs(a.values[i] - b.values[i]));
    row("sup_convolution 151x151", ts, tp);
    std::printf("  max |serial - parallel| = %.3e\n", dmax);
  }

  {
    JetWindow A = JetWindow::make(3, 2.0, 800, 1);
    JetWindow B = JetWindow::make(3, 2.0, 800, 2);
    double hs = 0, hp = 0;
    const double ts = time_ms([&] { hs = serial::hausdorff(A.points, B.points); });
    const double tp = time_ms([&] { hp = hausdorff(A.points, B.points); });
    row("hausdorff 800x800 jets", ts, tp);
    std::printf("  |serial - parallel| = %.3e\n", std::abs(hs - hp));
  }

  {
    BoxDomain Om({0.0, 0.0}, {1.0, 1.0}, 0.02);
    OperatorPair P = ot_operator(1.0, Om);
    CorrespondenceSubequation C = build_correspondence(P);
    JetWindow W = JetWindow::make(2, 3.0, 120, 1);
    FiberegCertificate cert;
    const double tp =
        time_ms([&] { cert = certify_fiberegularity(C.oracle, Om, 0.1, W, 60, 1); });
    std::printf("%-28s %13s %10.1f ms   (delta = %.4f)\n", "fibereg sweep (parallel)", "-",
                tp, cert.delta);
  }
  return 0;
}
