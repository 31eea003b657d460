// Serial vs OpenMP timing of the data-parallel kernels, with a bitwise
// equality check between the two schedules.
#include <chrono>
#include <cstdio>
#include <functional>

#include "qsense/protocol.hpp"
#include "qsense/randomstates.hpp"

using namespace qsense;

namespace {

double timed(const std::function<void()>& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  fn();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void report(const char* name, double serial, double parallel, bool identical) {
  std::printf("%-28s %9.3f s %9.3f s   x%.2f   %s\n", name, serial, parallel,
              serial / parallel, identical ? "identical" : "MISMATCH");
}

}  // namespace

int main() {
  std::printf("%-28s %11s %11s   %s\n", "kernel", "serial", "openmp", "speedup");

  {
    ProtocolConfig cfg;
    cfg.model.s = SpinValue{2};  // s = 1, 81-dimensional chain
    cfg.t_grid = TimeGrid{0.0, 60.0, 0.01};
    SensingResult a, b;
    const double ts = timed([&] { a = scan(cfg, ExecPolicy::serial); });
    const double tp = timed([&] { b = scan(cfg, ExecPolicy::parallel); });
    bool same = a.records.size() == b.records.size();
    for (std::size_t i = 0; same && i < a.records.size(); ++i) {
      same = a.records[i].delta_omega_sqrt_tall == b.records[i].delta_omega_sqrt_tall &&
             a.records[i].qfi == b.records[i].qfi && a.records[i].p_plus == b.records[i].p_plus;
    }
    report("protocol scan (s=1)", ts, tp, same);
  }

  {
    ProtocolConfig cfg;
    cfg.model.s = SpinValue{3};  // s = 3/2, 256-dimensional chain
    cfg.t_grid = TimeGrid{0.0, 30.0, 0.01};
    SensingResult a, b;
    const double ts = timed([&] { a = scan(cfg, ExecPolicy::serial); });
    const double tp = timed([&] { b = scan(cfg, ExecPolicy::parallel); });
    bool same = true;
    for (std::size_t i = 0; same && i < a.records.size(); ++i) {
      same = a.records[i].delta_omega_sqrt_tall == b.records[i].delta_omega_sqrt_tall;
    }
    report("protocol scan (s=3/2)", ts, tp, same);
  }

  {
    QfiHistogram a, b;
    const double ts =
        timed([&] { a = qfi_distribution(4, SpinValue{3}, 4000, 7, 50, ExecPolicy::serial); });
    const double tp =
        timed([&] { b = qfi_distribution(4, SpinValue{3}, 4000, 7, 50, ExecPolicy::parallel); });
    const bool same = arma::all(a.frequencies == b.frequencies) && a.mean == b.mean;
    report("haar qfi batch (s=3/2)", ts, tp, same);
  }

  {
    // Mixed-state QFI at dimension 256.
    ModelSpec model;
    model.s = SpinValue{3};
    model.n_sites = 4;
    const QOperator h = build_sensor(model);
    const QState gibbs = thermal_state(h, 2.0);
    const QOperator jz = collective_operator(model.s, model.n_sites, Axis::z);
    double a = 0, b = 0;
    const double ts = timed([&] {
      for (int rep = 0; rep < 10; ++rep) a = qfi_mixed(gibbs, jz, ExecPolicy::serial);
    });
    const double tp = timed([&] {
      for (int rep = 0; rep < 10; ++rep) b = qfi_mixed(gibbs, jz, ExecPolicy::parallel);
    });
    report("qfi_mixed dim=256 (x10)", ts, tp, a == b);
  }

  return 0;
}
