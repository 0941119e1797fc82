#include "wwr/calibration.hpp"
#include "wwr/pricing.hpp"
#include "wwr/synthetic.hpp"

#include <benchmark/benchmark.h>

using namespace wwr;

namespace {

MarketSnapshot bench_snapshot() {
    RegimeConfig cfg = default_regime_config();
    cfg.end_date = cfg.start_date.plus_days(7);
    cfg.segments = {{cfg.start_date, cfg.end_date, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0}};
    return generate(cfg).back();
}

Portfolio swap_30y() {
    IrsTrade t;
    t.id = "b30";
    t.direction = Direction::ReceiveFixed;
    t.notional = 1e6;
    t.fixed_rate = 0.02;
    t.start = 0.0;
    t.maturity = 30.0;
    t.fixed_freq = 1;
    t.float_freq = 2;
    Portfolio p;
    p.trades = {t};
    return p;
}

HistoryStore bench_history(int days) {
    RegimeConfig cfg = default_regime_config();
    cfg.end_date = cfg.start_date.plus_days(static_cast<int>(days * 365.0 / 252.0) + 3);
    cfg.segments = {{cfg.start_date, cfg.end_date, -0.01, 0.005, 0.02, 0.001, 0.35, 0.003}};
    return generate(cfg);
}

} // namespace

static void BM_BootstrapHazard(benchmark::State& state) {
    const MarketSnapshot snap = bench_snapshot();
    for (auto _ : state) {
        const HazardCurve hz = bootstrap_hazard(snap.counterparty_cds, snap.zero_curve);
        benchmark::DoNotOptimize(hz.survival(10.0));
    }
}
BENCHMARK(BM_BootstrapHazard);

static void BM_ExposureProfile30y(benchmark::State& state) {
    const MarketSnapshot snap = bench_snapshot();
    const Portfolio p = swap_30y();
    const auto grid = uniform_grid(30.0, 0.25);
    for (auto _ : state) {
        const ExposureProfile prof = exposure_profile(p, snap, grid);
        benchmark::DoNotOptimize(prof.ee.back());
    }
}
BENCHMARK(BM_ExposureProfile30y);

static void BM_GenerateHistory(benchmark::State& state) {
    RegimeConfig cfg = default_regime_config();
    for (auto _ : state) {
        const HistoryStore h = generate(cfg);
        benchmark::DoNotOptimize(h.size());
    }
}
BENCHMARK(BM_GenerateHistory);

static void BM_CalibrateSingleTrade(benchmark::State& state) {
    const HistoryStore h = bench_history(static_cast<int>(state.range(0)));
    const Portfolio p = swap_30y();
    CalibrationConfig cfg;
    cfg.sd_window_years = 0.25;
    for (auto _ : state) {
        const CalibrationSet cs = calibrate(p, h, cfg);
        benchmark::DoNotOptimize(cs.trades.size());
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_CalibrateSingleTrade)->Arg(60)->Arg(120)->Arg(240)->Complexity(benchmark::oN);

BENCHMARK_MAIN();
