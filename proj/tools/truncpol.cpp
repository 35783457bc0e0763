// Command-line harness: dataset generation, the integral and sampling
// benchmarks, the proposition checks, and the policy-gradient demo.
#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <vector>

#include "truncpol/bench.hpp"
#include "truncpol/dataset.hpp"
#include "truncpol/errors.hpp"
#include "truncpol/learning.hpp"
#include "truncpol/verify.hpp"

namespace tp = truncpol;

namespace {

constexpr int kExitProperty = 1;
constexpr int kExitArgument = 2;

// "2..6" or "2,3,5".
std::vector<int> parse_dims(std::string const& text) {
    std::vector<int> out;
    try {
        auto const range = text.find("..");
        if (range != std::string::npos) {
            int const lo = std::stoi(text.substr(0, range));
            int const hi = std::stoi(text.substr(range + 2));
            if (lo > hi) throw tp::ArgumentError("empty dimension range " + text);
            for (int d = lo; d <= hi; ++d) out.push_back(d);
            return out;
        }
        std::size_t pos = 0;
        while (pos <= text.size()) {
            auto const comma = text.find(',', pos);
            out.push_back(std::stoi(text.substr(pos, comma - pos)));
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
    } catch (std::logic_error const&) {
        throw tp::ArgumentError("cannot parse dimensions '" + text + "'");
    }
    return out;
}

void print_summary(std::vector<tp::SummaryRow> const& rows) {
    for (auto const& r : rows)
        std::cout << "dim " << r.dim << "  " << r.method << "  median " << r.median << "  q1 " << r.q1
                  << "  q3 " << r.q3 << "  max " << r.max << "  (n=" << r.count << ")\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Truncated Gaussian policies over feasible action sets"};
    app.require_subcommand(1);

    // gen-dataset
    std::string dims_text = "2..6";
    tp::DatasetOptions ds_opts;
    std::string ds_out;
    std::int64_t oracle_override = 0;
    auto* gen = app.add_subcommand("gen-dataset", "Generate the random polytope benchmark dataset");
    gen->add_option("--dims", dims_text, "Dimensions, e.g. 2..6 or 2,3")->capture_default_str();
    gen->add_option("--per-dim", ds_opts.per_dim, "Instances per dimension")->capture_default_str();
    gen->add_option("--seed", ds_opts.seed, "Master seed")->capture_default_str();
    gen->add_option("--oracle-samples", oracle_override,
                    "Monte Carlo draws per instance for every dimension (default 1e7 for d<=4, 4e7 above)");
    gen->add_option("--pilot-samples", ds_opts.pilot_samples, "Draws of the mass estimate used for binning")
        ->capture_default_str();
    gen->add_option("--out", ds_out, "Output JSON-lines file")->required();

    // bench-integral
    std::string bi_dataset, bi_out;
    auto* bint = app.add_subcommand("bench-integral", "Inner/outer/combined normalizing-constant errors");
    bint->add_option("--dataset", bi_dataset)->required();
    bint->add_option("--out", bi_out)->required();

    // bench-sampling
    std::string bs_dataset, bs_out;
    tp::SamplingOptions bs_opts;
    auto* bsam = app.add_subcommand("bench-sampling", "Sampling time of RDHR, rejection and hybrid");
    bsam->add_option("--dataset", bs_dataset)->required();
    bsam->add_option("--M", bs_opts.M, "Rejection limit of the hybrid sampler")->capture_default_str();
    bsam->add_option("--n", bs_opts.n_per_instance, "Samples per instance")->capture_default_str();
    bsam->add_option("--reps", bs_opts.repetitions, "Timed repetitions per instance")->capture_default_str();
    bsam->add_option("--seed", bs_opts.seed)->capture_default_str();
    bsam->add_option("--out", bs_out)->required();

    // verify
    std::string vf_out;
    tp::VerifyOptions vf_opts;
    auto* ver = app.add_subcommand("verify", "Check the interval-union and reparameterization identities");
    ver->add_option("--seed", vf_opts.seed)->capture_default_str();
    ver->add_option("--out", vf_out)->required();

    // train-demo
    std::vector<std::string> td_modes{"exact-int", "og-int"};
    int td_seeds = 10;
    tp::TrainConfig td_cfg;
    std::string td_out;
    auto* demo = app.add_subcommand("train-demo", "REINFORCE on Seeker-2D under different policy metrics");
    demo->add_option("--mode", td_modes,
                     "exact-int, og-int, approx-poly-outer, approx-poly-inner, approx-poly-combined, og-poly")
        ->delimiter(',')
        ->capture_default_str();
    demo->add_option("--seeds", td_seeds)->capture_default_str();
    demo->add_option("--episodes", td_cfg.episodes)->capture_default_str();
    demo->add_option("--seed", td_cfg.seed, "First seed")->capture_default_str();
    demo->add_option("--lr", td_cfg.learning_rate)->capture_default_str();
    demo->add_option("--discount", td_cfg.discount)->capture_default_str();
    demo->add_option("--out", td_out, "Output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (CLI::CallForHelp const& e) {
        return app.exit(e);
    } catch (CLI::CallForAllHelp const& e) {
        return app.exit(e);
    } catch (CLI::ParseError const& e) {
        app.exit(e);
        return kExitArgument;
    }

    try {
        if (gen->parsed()) {
            ds_opts.dims = parse_dims(dims_text);
            if (oracle_override > 0) ds_opts.oracle_samples_low = ds_opts.oracle_samples_high = oracle_override;
            tp::Dataset const ds = tp::generate_dataset(ds_opts);
            tp::write_dataset(ds_out, ds);
            std::cout << "wrote " << ds.instances.size() << " instances to " << ds_out << "\n";
            return 0;
        }
        if (bint->parsed()) {
            tp::IntegralBench const b = tp::bench_integral(tp::read_dataset(bi_dataset));
            tp::write_integral_csv(bi_out, b);
            tp::write_summary_csv(tp::sibling_path(bi_out, "summary"), b.summary);
            print_summary(b.summary);
            return 0;
        }
        if (bsam->parsed()) {
            tp::SamplingBench const b = tp::bench_sampling(tp::read_dataset(bs_dataset), bs_opts);
            tp::write_sampling_csv(bs_out, b);
            tp::write_summary_csv(tp::sibling_path(bs_out, "summary"), b.summary);
            tp::write_summary_csv(tp::sibling_path(bs_out, "lowmass"), b.low_mass);
            print_summary(b.summary);
            std::cout << "lowest-mass decile:\n";
            print_summary(b.low_mass);
            return 0;
        }
        if (ver->parsed()) {
            auto const results = tp::verify_all(vf_opts);
            tp::write_verify_csv(vf_out, results);
            bool ok = true;
            for (auto const& r : results) {
                std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << "  instances=" << r.instances
                          << "  max_deviation=" << r.max_deviation << "  threshold=" << r.threshold << "\n    "
                          << r.note << "\n";
                ok = ok && r.passed;
            }
            return ok ? 0 : kExitProperty;
        }
        if (demo->parsed()) {
            std::vector<tp::MetricMode> modes;
            for (auto const& m : td_modes) modes.push_back(tp::parse_metric_mode(m));
            auto const summaries = tp::train_demo(modes, td_seeds, td_cfg, td_out);
            for (auto const& s : summaries)
                std::cout << to_string(s.mode) << ": mean final return " << s.mean_final << " +- " << s.ci95
                          << " (95%, " << s.seeds << " seeds)\n";
            return 0;
        }
    } catch (tp::ArgumentError const& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitArgument;
    } catch (std::exception const& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitProperty;
    }
    return 0;
}
