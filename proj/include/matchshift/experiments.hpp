#pragma once

#include <matchshift/changes.hpp>
#include <matchshift/core.hpp>
#include <matchshift/errors.hpp>
#include <matchshift/gale_shapley.hpp>
#include <matchshift/io.hpp>
#include <matchshift/rng.hpp>
#include <matchshift/sampling.hpp>
#include <matchshift/solvers.hpp>
#include <matchshift/stats.hpp>

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace matchshift {

constexpr const char * kArtifactVersion = "matchshift 0.1.0";

// Which matchings to compute per sample. `best`/`worst` are the stable
// matchings of P2 with minimum/maximum symmetric difference to M1;
// `gale_shapley` reruns men-proposing deferred acceptance on P2; `almost`
// allows a beta fraction of all left-right pairs to block; `almost_rel`
// allows a fraction of the pairs that block M1 itself.
struct SolverSpec {
    enum class Kind { Best, Worst, GaleShapley, Almost, AlmostRelative };
    Kind kind = Kind::Best;
    double param = 0;

    std::string label() const
    {
        char buf[48];
        switch (kind) {
        case Kind::Best: return "best";
        case Kind::Worst: return "worst";
        case Kind::GaleShapley: return "gale_shapley";
        case Kind::Almost:
            std::snprintf(buf, sizeof buf, "almost:%g", param);
            return buf;
        case Kind::AlmostRelative:
            std::snprintf(buf, sizeof buf, "almost_rel:%g", param);
            return buf;
        }
        return "?";
    }
};

struct ExperimentConfig {
    std::string name = "experiment";
    std::string sampler = "uniform"; // uniform | identical | mallows
    std::vector<double> norm_phi;    // mallows sweep; empty otherwise
    std::vector<int> n_values = {50};
    ChangeKind change_kind = ChangeKind::Reorder;
    std::vector<double> r_values = {0.0};
    bool r_uniform = false;
    double r_lo = 0, r_hi = 0;
    int samples_per_point = 200;
    std::vector<SolverSpec> solvers = {{SolverSpec::Kind::Best, 0}};
    std::uint64_t root_seed = 1;
    std::string output_path;
    bool emit_samples = false;
    long long node_limit = 10'000'000;
};

struct SampleRow {
    int grid_index = 0;
    int n = 0;
    double norm_phi = std::nan("");
    double r = 0;
    int sample = 0;
    std::string solver;
    double beta = std::nan("");
    double rel_i = std::nan("");
    long long delta_count = 0;
    double delta_norm = 0;
    long long bp_count = 0;
    double bp_frac = 0;
    bool missing = false; // node budget exhausted: value withheld, not approximated
    std::uint64_t seed = 0;
};

struct ExperimentResult {
    std::vector<SampleRow> samples; // deterministic order: grid x sample x solver
    std::string csv;
};

// ---------------------------------------------------------------------------
// config parsing: line oriented `key = value`, lists comma separated

inline ExperimentConfig parse_experiment_config(const std::string & text)
{
    ExperimentConfig cfg;
    cfg.solvers.clear();
    std::istringstream in(text);
    std::map<std::string, std::string> kv;
    for (std::string raw; std::getline(in, raw);) {
        std::string line = detail::trim(raw);
        if (line.empty() || line[0] == '#')
            continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError("expected 'key = value' but got '" + line + "'");
        kv[detail::trim(line.substr(0, eq))] = detail::trim(line.substr(eq + 1));
    }

    auto split = [](const std::string & s) {
        std::vector<std::string> out;
        std::string cur;
        for (char c : s) {
            if (c == ',') {
                out.push_back(detail::trim(cur));
                cur.clear();
            }
            else
                cur += c;
        }
        if (! detail::trim(cur).empty() || ! out.empty())
            out.push_back(detail::trim(cur));
        return out;
    };

    if (kv.count("name"))
        cfg.name = kv["name"];
    if (kv.count("sampler"))
        cfg.sampler = kv["sampler"];
    if (cfg.sampler != "uniform" && cfg.sampler != "identical" && cfg.sampler != "mallows")
        throw ParseError("unknown sampler '" + cfg.sampler + "'");
    if (kv.count("norm_phi"))
        for (const auto & tok : split(kv["norm_phi"]))
            cfg.norm_phi.push_back(std::stod(tok));
    if (cfg.sampler == "mallows" && cfg.norm_phi.empty())
        throw ParseError("mallows sampler needs norm_phi values");
    if (kv.count("n")) {
        cfg.n_values.clear();
        for (const auto & tok : split(kv["n"]))
            cfg.n_values.push_back(std::stoi(tok));
    }
    if (kv.count("change"))
        cfg.change_kind = change_kind_from_string(kv["change"]);
    if (kv.count("r")) {
        const std::string & rv = kv["r"];
        if (rv.rfind("uniform:", 0) == 0) {
            auto parts = split(rv.substr(8));
            std::string lo = parts.size() > 0 ? parts[0] : "0";
            std::string hi = parts.size() > 1 ? parts[1] : "0";
            // also accept uniform:lo:hi
            auto colon = lo.find(':');
            if (colon != std::string::npos) {
                hi = lo.substr(colon + 1);
                lo = lo.substr(0, colon);
            }
            cfg.r_uniform = true;
            cfg.r_lo = std::stod(lo);
            cfg.r_hi = std::stod(hi);
            cfg.r_values = {std::nan("")};
        }
        else {
            cfg.r_values.clear();
            for (const auto & tok : split(rv))
                cfg.r_values.push_back(std::stod(tok));
        }
    }
    if (kv.count("samples"))
        cfg.samples_per_point = std::stoi(kv["samples"]);
    if (kv.count("solvers")) {
        for (const auto & tok : split(kv["solvers"])) {
            if (tok == "best")
                cfg.solvers.push_back({SolverSpec::Kind::Best, 0});
            else if (tok == "worst")
                cfg.solvers.push_back({SolverSpec::Kind::Worst, 0});
            else if (tok == "gale_shapley" || tok == "gs")
                cfg.solvers.push_back({SolverSpec::Kind::GaleShapley, 0});
            else if (tok.rfind("almost:", 0) == 0)
                cfg.solvers.push_back({SolverSpec::Kind::Almost, std::stod(tok.substr(7))});
            else if (tok.rfind("almost_rel:", 0) == 0)
                cfg.solvers.push_back({SolverSpec::Kind::AlmostRelative, std::stod(tok.substr(11))});
            else
                throw ParseError("unknown solver '" + tok + "'");
        }
    }
    if (cfg.solvers.empty())
        cfg.solvers.push_back({SolverSpec::Kind::Best, 0});
    if (kv.count("seed"))
        cfg.root_seed = std::stoull(kv["seed"]);
    if (kv.count("output"))
        cfg.output_path = kv["output"];
    if (kv.count("emit_samples"))
        cfg.emit_samples = kv["emit_samples"] == "true" || kv["emit_samples"] == "1";
    if (kv.count("node_limit"))
        cfg.node_limit = std::stoll(kv["node_limit"]);
    if (cfg.samples_per_point < 1)
        throw ParseError("samples must be >= 1");
    for (double r : cfg.r_values)
        if (! std::isnan(r) && (r < 0 || r > 1))
            throw FractionOutOfRange("r values must lie in [0,1]");
    return cfg;
}

inline std::string canonical_config_string(const ExperimentConfig & cfg)
{
    std::ostringstream out;
    out << "name=" << cfg.name << ";sampler=" << cfg.sampler << ";change=" << to_string(cfg.change_kind)
        << ";samples=" << cfg.samples_per_point << ";seed=" << cfg.root_seed << ";node_limit=" << cfg.node_limit << ";n=";
    for (int n : cfg.n_values)
        out << n << ',';
    out << ";phi=";
    for (double p : cfg.norm_phi)
        out << p << ',';
    out << ";r=";
    if (cfg.r_uniform)
        out << "uniform:" << cfg.r_lo << ':' << cfg.r_hi;
    else
        for (double r : cfg.r_values)
            out << r << ',';
    out << ";solvers=";
    for (const auto & s : cfg.solvers)
        out << s.label() << ',';
    return out.str();
}

// ---------------------------------------------------------------------------

namespace experiment_detail {

struct GridPoint {
    int index;
    int n;
    double norm_phi; // NaN unless mallows
    double r;        // NaN when r is drawn per sample
};

inline std::string fmt(double v)
{
    if (std::isnan(v))
        return "";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

inline PreferenceProfile draw_profile(const ExperimentConfig & cfg, const GridPoint & g, std::uint64_t seed)
{
    if (cfg.sampler == "uniform")
        return sample_uniform_profile(g.n, g.n, seed);
    if (cfg.sampler == "identical")
        return sample_identical_profile(g.n, seed);
    return sample_mallows_profile(g.n, g.n, g.norm_phi, seed);
}

} // namespace experiment_detail

// Runs the sweep. Sample evaluation is embarrassingly parallel; per-sample
// seeds depend only on (root seed, grid index, sample index), and rows are
// assembled in deterministic order, so the worker count cannot change the
// output. MATCHSHIFT_SEED overrides the configured root seed.
inline ExperimentResult run_experiment(ExperimentConfig cfg, int workers = 1)
{
    if (const char * env = std::getenv("MATCHSHIFT_SEED"); env && *env)
        cfg.root_seed = std::strtoull(env, nullptr, 10);

    std::vector<experiment_detail::GridPoint> grid;
    {
        int gi = 0;
        std::vector<double> phis = cfg.sampler == "mallows" ? cfg.norm_phi : std::vector<double>{std::nan("")};
        for (int n : cfg.n_values)
            for (double phi : phis)
                for (double r : cfg.r_values)
                    grid.push_back({gi++, n, phi, r});
    }

    const int S = cfg.samples_per_point;
    const int n_solvers = static_cast<int>(cfg.solvers.size());
    std::vector<SampleRow> rows(grid.size() * S * n_solvers);

    auto run_sample = [&](const experiment_detail::GridPoint & g, int sample_index) {
        const std::uint64_t seed = derive_seed(cfg.root_seed, g.index, sample_index);
        Rng rng(seed);
        double r = g.r;
        if (cfg.r_uniform)
            r = cfg.r_lo + rng.unit() * (cfg.r_hi - cfg.r_lo);

        PreferenceProfile p1 = experiment_detail::draw_profile(cfg, g, derive_seed(seed, 0));
        Matching m1 = gale_shapley(p1, Side::Left);
        auto [p2, script] = apply_changes(p1, cfg.change_kind, r, derive_seed(seed, 1));
        if (cfg.change_kind == ChangeKind::Add)
            p1 = extend_for_add(p1, script);

        const long long s1 = m1.size();
        const long long s2 = stable_matching_size(p2);
        auto bp = blocking_pairs_of_old_matching(m1, p2);
        const long long bp_count = static_cast<long long>(bp.size());
        const long long acc_pairs = count_acceptable_pairs(p2);
        const double bp_frac = acc_pairs > 0 ? static_cast<double>(bp_count) / static_cast<double>(acc_pairs) : 0.0;

        for (int si = 0; si < n_solvers; ++si) {
            const SolverSpec & spec = cfg.solvers[si];
            SampleRow row;
            row.grid_index = g.index;
            row.n = g.n;
            row.norm_phi = g.norm_phi;
            row.r = r;
            row.sample = sample_index;
            row.solver = spec.label();
            row.bp_count = bp_count;
            row.bp_frac = bp_frac;
            row.seed = seed;

            InstancePair pair;
            pair.profile1 = p1;
            pair.profile2 = p2;
            pair.matching1 = m1;

            switch (spec.kind) {
            case SolverSpec::Kind::Best:
                row.delta_count = solve_ism(pair, Objective::Minimize).count;
                break;
            case SolverSpec::Kind::Worst:
                row.delta_count = solve_ism(pair, Objective::Maximize).count;
                break;
            case SolverSpec::Kind::GaleShapley:
                row.delta_count = symmetric_difference_count(m1, gale_shapley(p2, Side::Left));
                break;
            case SolverSpec::Kind::Almost: {
                row.beta = spec.param;
                pair.budget_b = round_half_up(spec.param * static_cast<double>(p2.n_left()) * p2.n_right());
                auto res = solve_iasm_exact(pair, cfg.node_limit);
                row.missing = res.status == SolveStatus::BudgetExceeded;
                row.delta_count = res.count;
                break;
            }
            case SolverSpec::Kind::AlmostRelative: {
                row.rel_i = spec.param;
                pair.budget_b = round_half_up(spec.param * static_cast<double>(bp_count));
                auto res = solve_iasm_exact(pair, cfg.node_limit);
                row.missing = res.status == SolveStatus::BudgetExceeded;
                row.delta_count = res.count;
                break;
            }
            }
            row.delta_norm = normalized_symmetric_difference(row.delta_count, s1, s2);
            rows[(static_cast<std::size_t>(g.index) * S + sample_index) * n_solvers + si] = std::move(row);
        }
    };

    const std::size_t n_tasks = grid.size() * S;
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        while (true) {
            std::size_t t = next.fetch_add(1);
            if (t >= n_tasks)
                break;
            run_sample(grid[t / S], static_cast<int>(t % S));
        }
    };
    if (workers <= 1)
        worker();
    else {
        std::vector<std::thread> pool;
        for (int i = 0; i < workers; ++i)
            pool.emplace_back(worker);
        for (auto & th : pool)
            th.join();
    }

    // deterministic serialisation: fold over rows in index order
    std::ostringstream csv;
    csv << "experiment,change_kind,n,norm_phi,r,beta,i,sample,solver,delta_count,delta_norm,bp_count,bp_frac,status,seed\n";
    using experiment_detail::fmt;
    auto emit_row = [&](const SampleRow & row, const std::string & sample_label, bool aggregate) {
        csv << cfg.name << ',' << to_string(cfg.change_kind) << ',' << row.n << ',' << fmt(row.norm_phi) << ','
            << fmt(row.r) << ',' << fmt(row.beta) << ',' << fmt(row.rel_i) << ',' << sample_label << ',' << row.solver << ',';
        if (row.missing)
            csv << ",,";
        else
            csv << row.delta_count << ',' << fmt(row.delta_norm) << ',';
        csv << row.bp_count << ',' << fmt(row.bp_frac) << ','
            << (aggregate ? "agg" : (row.missing ? "budget_exceeded" : "ok")) << ',';
        if (! aggregate)
            csv << row.seed;
        csv << '\n';
    };

    if (cfg.emit_samples)
        for (const auto & row : rows)
            emit_row(row, std::to_string(row.sample), false);

    for (const auto & g : grid)
        for (int si = 0; si < n_solvers; ++si) {
            std::vector<double> dc, dn, bc, bf, rs;
            int missing = 0;
            for (int s = 0; s < S; ++s) {
                const auto & row = rows[(static_cast<std::size_t>(g.index) * S + s) * n_solvers + si];
                if (row.missing) {
                    ++missing;
                    continue;
                }
                dc.push_back(static_cast<double>(row.delta_count));
                dn.push_back(row.delta_norm);
                bc.push_back(static_cast<double>(row.bp_count));
                bf.push_back(row.bp_frac);
                rs.push_back(row.r);
            }
            const double beta = cfg.solvers[si].kind == SolverSpec::Kind::Almost ? cfg.solvers[si].param : std::nan("");
            const double rel_i = cfg.solvers[si].kind == SolverSpec::Kind::AlmostRelative ? cfg.solvers[si].param : std::nan("");
            const double r_col = cfg.r_uniform ? (rs.empty() ? std::nan("") : mean(rs)) : g.r;
            const std::string status = missing ? "agg_missing_" + std::to_string(missing) : "agg";
            auto agg_line = [&](const char * label, auto && stat) {
                csv << cfg.name << ',' << to_string(cfg.change_kind) << ',' << g.n << ',' << fmt(g.norm_phi) << ','
                    << fmt(r_col) << ',' << fmt(beta) << ',' << fmt(rel_i) << ',' << label << ','
                    << cfg.solvers[si].label() << ',';
                if (dc.empty())
                    csv << ",,,,";
                else
                    csv << fmt(stat(dc)) << ',' << fmt(stat(dn)) << ',' << fmt(stat(bc)) << ',' << fmt(stat(bf)) << ',';
                csv << status << ",\n";
            };
            agg_line("mean", [](const std::vector<double> & v) { return mean(v); });
            agg_line("q90", [](const std::vector<double> & v) { return quantile(v, 0.9); });
        }

    ExperimentResult result;
    result.samples = std::move(rows);
    result.csv = csv.str();

    if (! cfg.output_path.empty()) {
        write_file(cfg.output_path, result.csv);
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (char c : canonical_config_string(cfg))
            h = (h ^ static_cast<unsigned char>(c)) * 0x100000001b3ULL;
        std::ostringstream meta;
        meta << "config_hash=" << std::hex << h << std::dec << '\n'
             << "version=" << kArtifactVersion << '\n'
             << "root_seed=" << cfg.root_seed << '\n';
        write_file(cfg.output_path + ".meta", meta.str());
    }
    return result;
}

} // namespace matchshift
