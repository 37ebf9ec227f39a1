#include <benchmark/benchmark.h>

#include "mracsim/scenario.hpp"

namespace {

using namespace mracsim;

const Scenario& paper_scenario() {
    static const Scenario sc = resolve_scenario("paper_sec4");
    return sc;
}

void BM_SolveLyapunov7x7(benchmark::State& state) {
    const Scenario& sc = paper_scenario();
    const Matrix q = Matrix::identity(7);
    for (auto _ : state) {
        Matrix p = solve_lyapunov(sc.ref.A_r, q);
        benchmark::DoNotOptimize(p);
    }
}
BENCHMARK(BM_SolveLyapunov7x7);

void BM_MinEigSym7x7(benchmark::State& state) {
    const Scenario& sc = paper_scenario();
    const Matrix p = solve_lyapunov(sc.ref.A_r, Matrix::identity(7));
    for (auto _ : state) {
        double lam = min_eig_sym(p);
        benchmark::DoNotOptimize(lam);
    }
}
BENCHMARK(BM_MinEigSym7x7);

void BM_ClosedLoopDerivative(benchmark::State& state) {
    const Scenario& sc = paper_scenario();
    const SimSetup setup = make_setup(sc);
    AugmentedState s;
    s.x = sc.sim.x0;
    s.x_r = sc.sim.xr0;
    s.controller = setup.constrained0;
    for (auto _ : state) {
        AugmentedState d = closed_loop_derivative(s, 0.5, setup);
        benchmark::DoNotOptimize(d);
    }
}
BENCHMARK(BM_ClosedLoopDerivative);

void BM_Rk4Step(benchmark::State& state) {
    const Scenario& sc = paper_scenario();
    const SimSetup setup = make_setup(sc);
    AugmentedState s;
    s.x = sc.sim.x0;
    s.x_r = sc.sim.xr0;
    s.controller = setup.constrained0;
    for (auto _ : state) {
        AugmentedState next = rk4_step(s, 0.0, 1e-3, setup);
        benchmark::DoNotOptimize(next);
    }
}
BENCHMARK(BM_Rk4Step);

void BM_SimulateClassical1s(benchmark::State& state) {
    Scenario sc = paper_scenario();
    sc.sim.t_final = 1.0;
    const SimSetup setup = make_setup(sc);
    for (auto _ : state) {
        SimResult r = simulate(setup, ControllerKind::classical, sc.sim);
        benchmark::DoNotOptimize(r);
    }
}
BENCHMARK(BM_SimulateClassical1s);

} // namespace

int main(int argc, char** argv) {
    benchmark::Initialize(&argc, argv);
    if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
    benchmark::RunSpecifiedBenchmarks();
    return 0;
}
