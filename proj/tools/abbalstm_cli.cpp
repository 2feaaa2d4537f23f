// abbalstm: runs the forecasting experiments and writes results.csv, per-run
// forecast CSVs and an SVG chart into the output directory.
//
//   abbalstm sine  --model abba --mode stateful --frequencies 5 20 40 --seed 0 1 2
//   abbalstm trend --out runs/trend
//   abbalstm bench --data UCRArchive_2018 --scale 0.25
//   abbalstm forecast --data series.csv --k 30 --model abba
//
// The output directory defaults to $ABBALSTM_OUT, else ./results.

#include "abbalstm/harness.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <map>

namespace h = abbalstm::harness;

namespace {

void print_run(const h::RunRecord& r) {
    if (!r.error.empty()) {
        std::fprintf(stderr, "FAILED %s %s %s seed %llu: %s\n", r.series.c_str(), r.model.c_str(), r.mode.c_str(),
                     static_cast<unsigned long long>(r.seed), r.error.c_str());
        return;
    }
    std::printf("%-14s %-4s %-9s seed %-3llu epochs %-5zu %7.1fs", r.series.c_str(), r.model.c_str(), r.mode.c_str(),
                static_cast<unsigned long long>(r.seed), r.epochs, r.seconds.total());
    if (r.has_truth) std::printf("  dtw %.4g  smape %.4g", r.report.dtw, r.report.smape);
    if (!std::isnan(r.score)) std::printf("  score %.4g", r.score);
    std::printf("\n");
    std::fflush(stdout);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"ABBA-LSTM forecasting experiments"};
    app.require_subcommand(1);

    const char* env_out = std::getenv("ABBALSTM_OUT");
    std::string out_dir = env_out && *env_out ? env_out : "results";

    const std::map<h::ExperimentKind, std::string> help{
        {h::ExperimentKind::sine, "sine waves of varying frequency, DTW to the true continuation"},
        {h::ExperimentKind::trend, "linear ramp: can the forecast leave the training range"},
        {h::ExperimentKind::shape, "two-level series: do forecasts stay on the two levels"},
        {h::ExperimentKind::bench, "first series of every UCR file, raw against ABBA"},
        {h::ExperimentKind::forecast, "forecast a single series from a CSV or UCR file"},
    };
    std::map<h::ExperimentKind, h::ExperimentConfig> configs;
    std::map<h::ExperimentKind, CLI::App*> subs;
    for (const auto& [kind, text] : help) {
        configs[kind] = h::defaults(kind);
        auto* sub = app.add_subcommand(h::to_string(kind), text);
        h::add_options(*sub, configs[kind]);
        sub->add_option("--out", out_dir, "output directory")->capture_default_str();
        subs[kind] = sub;
    }

    CLI11_PARSE(app, argc, argv);

    for (const auto& [kind, sub] : subs) {
        if (!sub->parsed()) continue;
        try {
            const auto records = h::run_experiment(configs[kind], print_run);
            h::emit_outputs(kind, records, out_dir);
            std::size_t failed = 0;
            for (const auto& r : records) failed += !r.error.empty();
            std::printf("%zu runs, %zu failed; results in %s\n", records.size(), failed,
                        (std::filesystem::path(out_dir) / "results.csv").c_str());
            return failed == 0 ? 0 : 1;
        } catch (const std::exception& e) {
            std::fprintf(stderr, "error: %s\n", e.what());
            return 1;
        }
    }
    return 0;
}
