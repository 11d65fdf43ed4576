#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "flc/expr.hpp"
#include "flc/fracops.hpp"
#include "flc/solvers.hpp"
#include "flc/special.hpp"

namespace {

void BM_MittagLeffler(benchmark::State& state) {
    const flc::FractalOrder order(0.5);
    const double w = static_cast<double>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(flc::ml(order, w).value);
}
BENCHMARK(BM_MittagLeffler)->Arg(-4)->Arg(1)->Arg(4);

void BM_CantorIntegral(benchmark::State& state) {
    const auto part = flc::PartitionScheme::cantor(static_cast<unsigned>(state.range(0)));
    const auto order = flc::FractalOrder::cantor();
    auto f = [](double x) { return flc::cantor_staircase(x, 12); };
    for (auto _ : state) benchmark::DoNotOptimize(flc::lf_integral(f, 0.0, 1.0, order, part, 1).value);
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(part.cell_count()));
}
BENCHMARK(BM_CantorIntegral)->DenseRange(8, 16, 4);

void BM_DerivativeFd(benchmark::State& state) {
    const flc::FractalOrder order(0.5);
    auto f = [](double x) { return std::sqrt(x) + x * x; };
    for (auto _ : state) benchmark::DoNotOptimize(flc::lf_derivative_fd(f, 0.0, order).value);
}
BENCHMARK(BM_DerivativeFd);

void BM_PdeDiffusion(benchmark::State& state) {
    const auto nx = static_cast<std::size_t>(state.range(0));
    std::vector<double> x(nx);
    for (std::size_t i = 0; i < nx; ++i) x[i] = -5.0 + 10.0 * static_cast<double>(i) / static_cast<double>(nx - 1);
    const double dx = x[1] - x[0];
    std::vector<double> t(101);
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = 0.4 * dx * dx * static_cast<double>(i);
    const flc::ModelSpec model{flc::FractalOrder(1.0),
                               flc::DiffusionModel{1.0, [](double v) { return std::exp(-2.0 * v * v); }}};
    for (auto _ : state) benchmark::DoNotOptimize(flc::pde_solve(model, x, t).values.back());
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(nx * (t.size() - 1)));
}
BENCHMARK(BM_PdeDiffusion)->Arg(101)->Arg(401)->Arg(1601);

void BM_ExprParseDiff(benchmark::State& state) {
    for (auto _ : state) {
        const auto e = flc::expr::parse("3*E(2*x^a) - x^(4*a)/G(1+4*a) + 0.5*E(-0.25*x^a)");
        benchmark::DoNotOptimize(flc::expr::to_string(flc::expr::diff(e)));
    }
}
BENCHMARK(BM_ExprParseDiff);

}  // namespace

BENCHMARK_MAIN();
