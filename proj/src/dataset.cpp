#include "truncpol/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>

#include "truncpol/errors.hpp"
#include "truncpol/parallel.hpp"
#include "truncpol/stats.hpp"

namespace truncpol {
namespace {

constexpr std::uint64_t kOracleStream = 1ULL << 40;
constexpr std::uint64_t kPilotStream = 1ULL << 41;

std::uint64_t candidate_stream(int d, std::int64_t k) {
    return static_cast<std::uint64_t>(d) * 100000000ULL + static_cast<std::uint64_t>(k);
}

Json estimate_to_json(OracleEstimate const& e) {
    return {{"value", e.value}, {"std_error", e.std_error}, {"n_samples", e.n_samples}, {"seed", e.seed}};
}

OracleEstimate estimate_from_json(Json const& j) {
    return {j.at("value").get<double>(), j.at("std_error").get<double>(),
            j.at("n_samples").get<std::int64_t>(), j.at("seed").get<std::uint64_t>()};
}

}  // namespace

Json DatasetInstance::to_json() const {
    return {{"id", id},
            {"dim", dim},
            {"polytope", set_to_json(polytope)},
            {"mu", truncpol::to_json(mu)},
            {"sigma", truncpol::to_json(sigma)},
            {"oracle_Z", estimate_to_json(oracle_Z)}};
}

DatasetInstance DatasetInstance::from_json(Json const& j) {
    DatasetInstance inst;
    inst.id = j.at("id").get<int>();
    inst.dim = j.at("dim").get<int>();
    inst.polytope = hpolytope_from_json(j.at("polytope"));
    inst.mu = vec_from_json(j.at("mu"));
    inst.sigma = vec_from_json(j.at("sigma"));
    inst.oracle_Z = estimate_from_json(j.at("oracle_Z"));
    if (inst.polytope.dim() != inst.dim || inst.mu.size() != inst.dim || inst.sigma.size() != inst.dim)
        throw ArgumentError("dataset instance " + std::to_string(inst.id) + ": dimension mismatch");
    return inst;
}

bool DatasetInstance::operator==(DatasetInstance const& o) const {
    return id == o.id && dim == o.dim && polytope == o.polytope && mu == o.mu && sigma == o.sigma &&
           oracle_Z.value == o.oracle_Z.value && oracle_Z.std_error == o.oracle_Z.std_error &&
           oracle_Z.n_samples == o.oracle_Z.n_samples && oracle_Z.seed == o.oracle_Z.seed;
}

DatasetInstance random_instance(int d, Rng& rng) {
    if (d < 1) throw ArgumentError("random_instance: d must be >= 1");
    auto const n_p = static_cast<Eigen::Index>(rng.integer(d, 4 * d));
    Vec x0(d);
    for (Eigen::Index i = 0; i < d; ++i) x0[i] = rng.uniform(-0.8, 0.8);
    Mat A(2 * d + n_p, d);
    Vec b(2 * d + n_p);
    A.topRows(d) = Mat::Identity(d, d);
    A.middleRows(d, d) = -Mat::Identity(d, d);
    b.head(2 * d).setOnes();
    for (Eigen::Index j = 0; j < n_p; ++j) {
        Vec const a = rng.unit_direction(d);
        A.row(2 * d + j) = a.transpose();
        b[2 * d + j] = a.dot(x0) + rng.uniform(0.1, 1.0);
    }
    DatasetInstance inst;
    inst.dim = d;
    inst.polytope = HPolytope(std::move(A), std::move(b));
    Vec const center = chebyshev_center(inst.polytope).center;
    inst.mu.resize(d);
    for (Eigen::Index i = 0; i < d; ++i) inst.mu[i] = rng.uniform(0.0, 0.5) + center[i];
    inst.sigma.resize(d);
    for (Eigen::Index i = 0; i < d; ++i) inst.sigma[i] = rng.uniform(0.1, 1.0);
    return inst;
}

void DatasetOptions::validate() const {
    if (dims.empty()) throw ArgumentError("gen-dataset: no dimensions given");
    for (int d : dims)
        if (d < 1) throw ArgumentError("gen-dataset: dimensions must be >= 1");
    if (per_dim < 1) throw ArgumentError("gen-dataset: per_dim must be >= 1");
    if (oracle_samples_low < 1000 || oracle_samples_high < 1000 || pilot_samples < 1000)
        throw ArgumentError("gen-dataset: Monte Carlo sample counts must be >= 1000");
}

int MassBins::bin(double z) const {
    if (!(z > 0)) return 0;
    double const width = -log10_low / kCount;
    int const b = static_cast<int>(std::floor((std::log10(z) - log10_low) / width));
    return std::clamp(b, 0, kCount - 1);
}

std::vector<double> MassBins::edges() const {
    std::vector<double> e;
    for (int b = 0; b <= kCount; ++b) e.push_back(log10_low - log10_low * b / kCount);
    return e;
}

Dataset generate_dataset(DatasetOptions const& opts) {
    opts.validate();
    Dataset ds;
    Json warnings = Json::array();
    Json counts = Json::object();
    auto const need = static_cast<std::size_t>(std::ceil(opts.per_dim / 10.0));
    auto const cap = static_cast<std::int64_t>(20) * opts.per_dim;
    int next_id = 0;

    for (int d : opts.dims) {
        std::vector<DatasetInstance> cand;
        std::vector<int> bins;
        std::vector<std::size_t> filled(MassBins::kCount, 0);
        std::optional<MassBins> bins_def;
        auto balanced = [&] {
            if (cand.size() < static_cast<std::size_t>(opts.per_dim)) return false;
            return std::all_of(filled.begin(), filled.end(), [&](std::size_t c) { return c >= need; });
        };
        // Candidates come in parallel chunks; each depends only on its index,
        // and the stopping point is checked in index order.
        while (!balanced() && static_cast<std::int64_t>(cand.size()) < cap) {
            std::int64_t const base = static_cast<std::int64_t>(cand.size());
            std::int64_t const chunk = std::min<std::int64_t>(std::max(opts.per_dim, 64), cap - base);
            std::vector<DatasetInstance> fresh(static_cast<std::size_t>(chunk));
            std::vector<double> pilot(static_cast<std::size_t>(chunk));
            parallel_for(static_cast<std::size_t>(chunk), [&](std::size_t i) {
                auto const k = base + static_cast<std::int64_t>(i);
                Rng rng(Rng::derive(opts.seed, candidate_stream(d, k)));
                fresh[i] = random_instance(d, rng);
                pilot[i] = mc_Z(fresh[i].base(), fresh[i].polytope, opts.pilot_samples,
                                Rng::derive(opts.seed, kPilotStream + candidate_stream(d, k)))
                               .value;
            });
            if (!bins_def) {
                std::vector<double> logs;
                for (double z : pilot) logs.push_back(std::log10(std::max(z, 1e-300)));
                // Below ~10 pilot hits the estimate cannot place an instance in a bin.
                double const resolution = std::log10(10.0 / static_cast<double>(opts.pilot_samples));
                bins_def = MassBins{std::min(-1e-3, std::max(resolution, quantile_of(logs, 0.02)))};
            }
            for (std::size_t i = 0; i < fresh.size() && !balanced(); ++i) {
                cand.push_back(std::move(fresh[i]));
                bins.push_back(bins_def->bin(pilot[i]));
                ++filled[static_cast<std::size_t>(bins.back())];
            }
        }
        if (!balanced()) {
            warnings.push_back({{"dim", d},
                                {"message", "retry cap reached before every mass bin was filled"},
                                {"bin_counts", filled}});
            std::cerr << "warning: dim " << d << ": mass bins not balanced after " << cand.size()
                      << " candidates\n";
        }
        // Round-robin over bins in candidate order.
        std::vector<std::vector<std::size_t>> by_bin(MassBins::kCount);
        for (std::size_t i = 0; i < cand.size(); ++i) by_bin[static_cast<std::size_t>(bins[i])].push_back(i);
        std::vector<std::size_t> keep;
        std::vector<std::size_t> cursor(MassBins::kCount, 0);
        while (keep.size() < static_cast<std::size_t>(opts.per_dim) && keep.size() < cand.size()) {
            for (std::size_t b = 0; b < by_bin.size() && keep.size() < static_cast<std::size_t>(opts.per_dim); ++b)
                if (cursor[b] < by_bin[b].size()) keep.push_back(by_bin[b][cursor[b]++]);
        }
        std::sort(keep.begin(), keep.end());
        std::vector<int> kept_counts(MassBins::kCount, 0);
        for (std::size_t i : keep) ++kept_counts[static_cast<std::size_t>(bins[i])];
        counts[std::to_string(d)] = {{"candidates", cand.size()},
                                     {"log10_edges", bins_def->edges()},
                                     {"kept_per_bin", kept_counts}};

        std::size_t const first = ds.instances.size();
        for (std::size_t i : keep) {
            DatasetInstance inst = std::move(cand[i]);
            inst.id = next_id++;
            ds.instances.push_back(std::move(inst));
        }
        std::int64_t const n_oracle = d <= 4 ? opts.oracle_samples_low : opts.oracle_samples_high;
        parallel_for(ds.instances.size() - first, [&](std::size_t i) {
            auto& inst = ds.instances[first + i];
            inst.oracle_Z = mc_Z(inst.base(), inst.polytope, n_oracle,
                                 Rng::derive(opts.seed, kOracleStream + static_cast<std::uint64_t>(inst.id)));
        });
    }

    ds.header = {{"format", "truncpol-dataset"},
                 {"version", 1},
                 {"seed", opts.seed},
                 {"dims", opts.dims},
                 {"per_dim", opts.per_dim},
                 {"oracle_samples", {{"d_le_4", opts.oracle_samples_low}, {"d_ge_5", opts.oracle_samples_high}}},
                 {"balance",
                  {{"statistic", "log10 pilot Monte Carlo mass"},
                   {"pilot_samples", opts.pilot_samples},
                   {"bins", MassBins::kCount},
                   {"range", "equal width in log10 mass from the 2nd percentile of the first pilot batch, floored at 10 pilot hits, to 0"},
                   {"min_per_bin", need},
                   {"retry_cap", cap},
                   {"selection", "round-robin over bins in generation order"},
                   {"per_dim", counts}}},
                 {"warnings", warnings}};
    return ds;
}

void write_dataset(std::string const& path, Dataset const& ds) {
    std::ofstream out(path);
    if (!out) throw ArgumentError("cannot write " + path);
    out << Json{{"header", ds.header}}.dump() << '\n';
    for (auto const& inst : ds.instances) out << inst.to_json().dump() << '\n';
}

Dataset read_dataset(std::string const& path) {
    std::ifstream in(path);
    if (!in) throw ArgumentError("cannot open " + path);
    Dataset ds;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        Json j;
        try {
            j = Json::parse(line);
        } catch (Json::parse_error const& e) {
            throw ArgumentError(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
        if (j.contains("header")) {
            ds.header = j["header"];
            continue;
        }
        ds.instances.push_back(DatasetInstance::from_json(j));
    }
    return ds;
}

}  // namespace truncpol
