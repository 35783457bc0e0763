#include "truncpol/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>

#include "truncpol/csv.hpp"
#include "truncpol/errors.hpp"
#include "truncpol/parallel.hpp"
#include "truncpol/stats.hpp"

namespace truncpol {

SummaryRow summarize(int dim, std::string method, std::vector<double> const& values) {
    SummaryRow s;
    s.dim = dim;
    s.method = std::move(method);
    s.count = values.size();
    if (values.empty()) return s;
    s.median = quantile_of(values, 0.5);
    s.q1 = quantile_of(values, 0.25);
    s.q3 = quantile_of(values, 0.75);
    s.max = *std::max_element(values.begin(), values.end());
    return s;
}

std::string sibling_path(std::string const& path, std::string const& suffix) {
    auto const dot = path.rfind('.');
    auto const slash = path.rfind('/');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
        return path + "_" + suffix;
    return path.substr(0, dot) + "_" + suffix + path.substr(dot);
}

void write_summary_csv(std::string const& path, std::vector<SummaryRow> const& rows) {
    CsvWriter csv(path);
    csv.header({"dim", "method", "count", "median", "q1", "q3", "max"});
    for (auto const& r : rows)
        csv.row({std::to_string(r.dim), r.method, std::to_string(r.count), format_real(r.median),
                 format_real(r.q1), format_real(r.q3), format_real(r.max)});
}

// ------------------------------------------------------------- integrals

IntegralBench bench_integral(Dataset const& ds) {
    std::map<int, std::pair<double, int>> mass;  // dim -> (sum, count)
    for (auto const& inst : ds.instances) {
        auto& m = mass[inst.dim];
        m.first += inst.oracle_Z.value;
        m.second += 1;
    }
    constexpr ApproxMode kMethods[] = {ApproxMode::Inner, ApproxMode::Outer, ApproxMode::Combined};
    std::vector<IntegralRow> rows(3 * ds.instances.size());
    parallel_for(ds.instances.size(), [&](std::size_t i) {
        auto const& inst = ds.instances[i];
        Interval const inner = inner_interval(inst.polytope);
        Interval const outer = outer_interval(inst.polytope);
        auto const [sum, count] = mass.at(inst.dim);
        double const scale = sum / count;
        for (std::size_t k = 0; k < 3; ++k) {
            PolytopeTrunc const pt(inst.base(), inst.polytope, inner, outer, kMethods[k]);
            IntegralRow& r = rows[3 * i + k];
            r.id = inst.id;
            r.dim = inst.dim;
            r.method = kMethods[k];
            r.z_method = std::exp(pt.approx_log_z());
            r.z_oracle = inst.oracle_Z.value;
            r.oracle_std_error = inst.oracle_Z.std_error;
            r.normalized_error = scale > 0 ? std::abs(r.z_method - r.z_oracle) / scale
                                           : std::numeric_limits<double>::infinity();
            r.low_mass_fallback = pt.low_mass_fallback();
        }
    });
    IntegralBench out;
    out.rows = std::move(rows);
    for (auto const& [d, unused] : mass) {
        for (ApproxMode m : kMethods) {
            std::vector<double> errs;
            for (auto const& r : out.rows)
                if (r.dim == d && r.method == m) errs.push_back(r.normalized_error);
            out.summary.push_back(summarize(d, to_string(m), errs));
        }
    }
    return out;
}

void write_integral_csv(std::string const& path, IntegralBench const& bench) {
    CsvWriter csv(path);
    csv.header({"id", "dim", "method", "z_method", "z_oracle", "oracle_std_error", "normalized_error",
                "low_mass_fallback"});
    for (auto const& r : bench.rows)
        csv.row({std::to_string(r.id), std::to_string(r.dim), to_string(r.method), format_real(r.z_method),
                 format_real(r.z_oracle), format_real(r.oracle_std_error), format_real(r.normalized_error),
                 r.low_mass_fallback ? "1" : "0"});
}

// -------------------------------------------------------------- sampling

namespace {

using Clock = std::chrono::steady_clock;

struct RunStats {
    double seconds = 0.0;
    bool censored = false;
    std::int64_t proposals = 0;
    int walked = 0;
};

RunStats run_rejection(DatasetInstance const& inst, SamplingOptions const& opts, Rng& rng) {
    RunStats s;
    DiagGaussian const base = inst.base();
    auto const t0 = Clock::now();
    for (int k = 0; k < opts.n_per_instance; ++k) {
        RejectionResult const r = rejection_sample(base, inst.polytope, opts.rejection_cap, rng);
        s.proposals += r.attempts;
        s.censored = s.censored || r.exhausted();
    }
    s.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    return s;
}

RunStats run_rdhr(DatasetInstance const& inst, SamplingOptions const& opts, Rng& rng) {
    RunStats s;
    auto const t0 = Clock::now();
    RdhrWalker walker(inst.base(), inst.polytope, opts.rdhr.start);
    walker.walk(opts.rdhr.burn_in, rng);
    int const thin = opts.rdhr.thin_for(inst.dim);
    for (int k = 0; k < opts.n_per_instance; ++k) walker.walk(thin, rng);
    s.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    s.walked = opts.n_per_instance;
    if (!contains(inst.polytope, walker.state(), kContainmentSlack))
        throw InvariantViolation("bench_sampling: walk left the polytope");
    return s;
}

RunStats run_hybrid(DatasetInstance const& inst, SamplingOptions const& opts, Rng& rng) {
    RunStats s;
    auto const t0 = Clock::now();
    HybridSampler sampler(inst.base(), inst.polytope, opts.M, opts.rdhr);
    for (int k = 0; k < opts.n_per_instance; ++k) {
        SampleDraw const d = sampler.draw(rng);
        s.proposals += d.attempts;
        s.walked += d.method == SamplerKind::Rdhr ? 1 : 0;
    }
    s.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    return s;
}

}  // namespace

SamplingBench bench_sampling(Dataset const& ds, SamplingOptions const& opts) {
    if (opts.M < 1 || opts.n_per_instance < 1 || opts.repetitions < 1)
        throw ArgumentError("bench-sampling: M, n and repetitions must be >= 1");
    using Runner = RunStats (*)(DatasetInstance const&, SamplingOptions const&, Rng&);
    struct Method {
        char const* name;
        Runner run;
    };
    Method const methods[] = {{"rdhr", run_rdhr}, {"rejection", run_rejection}, {"hybrid", run_hybrid}};
    std::size_t const nm = std::size(methods);

    SamplingBench out;
    out.rows.resize(nm * ds.instances.size());
    parallel_for(ds.instances.size(), [&](std::size_t i) {
        auto const& inst = ds.instances[i];
        std::vector<std::vector<double>> times(nm);
        std::vector<RunStats> last(nm);
        // Each method gets its own warm-up run (repetition 0) right before its
        // timed runs. Repetition k uses the same random stream for every
        // method, so rejection and hybrid see identical proposals until
        // hybrid falls back.
        for (std::size_t m = 0; m < nm; ++m) {
            for (int rep = 0; rep <= opts.repetitions; ++rep) {
                Rng rng(Rng::derive(opts.seed, (static_cast<std::uint64_t>(inst.id) << 20) |
                                                   static_cast<std::uint64_t>(rep)));
                last[m] = methods[m].run(inst, opts, rng);
                if (rep > 0) times[m].push_back(last[m].seconds / opts.n_per_instance);
            }
        }
        for (std::size_t m = 0; m < nm; ++m) {
            SamplingRow& r = out.rows[nm * i + m];
            r.id = inst.id;
            r.dim = inst.dim;
            r.method = methods[m].name;
            r.z_oracle = inst.oracle_Z.value;
            r.seconds_per_sample = median_of(times[m]);
            r.censored = last[m].censored;
            r.mean_proposals = static_cast<double>(last[m].proposals) / opts.n_per_instance;
            r.walk_fraction = static_cast<double>(last[m].walked) / opts.n_per_instance;
        }
    });

    std::vector<int> dims;
    for (auto const& inst : ds.instances)
        if (std::find(dims.begin(), dims.end(), inst.dim) == dims.end()) dims.push_back(inst.dim);
    std::sort(dims.begin(), dims.end());
    for (int d : dims)
        for (auto const& m : methods) {
            std::vector<double> t;
            for (auto const& r : out.rows)
                if (r.dim == d && r.method == m.name) t.push_back(r.seconds_per_sample);
            out.summary.push_back(summarize(d, m.name, t));
        }

    if (!ds.instances.empty()) {
        std::vector<double> masses;
        for (auto const& inst : ds.instances) masses.push_back(inst.oracle_Z.value);
        double const cut = quantile_of(masses, 0.1);
        for (auto const& m : methods) {
            std::vector<double> t;
            for (auto const& r : out.rows)
                if (r.method == m.name && r.z_oracle <= cut) t.push_back(r.seconds_per_sample);
            out.low_mass.push_back(summarize(0, m.name, t));
        }
    }
    return out;
}

void write_sampling_csv(std::string const& path, SamplingBench const& bench) {
    CsvWriter csv(path);
    csv.header({"id", "dim", "method", "z_oracle", "seconds_per_sample", "censored", "mean_proposals",
                "walk_fraction"});
    for (auto const& r : bench.rows)
        csv.row({std::to_string(r.id), std::to_string(r.dim), r.method, format_real(r.z_oracle),
                 format_real(r.seconds_per_sample), r.censored ? "1" : "0", format_real(r.mean_proposals),
                 format_real(r.walk_fraction)});
}

}  // namespace truncpol
