#include <matchshift/matchshift.hpp>

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <string>

using namespace matchshift;

namespace {

int run_solve(const std::string & input, const std::string & problem, const std::string & algo,
              const std::string & objective, long long node_limit)
{
    auto pair = parse_instance_pair(read_file(input));
    const Objective obj = objective == "max" ? Objective::Maximize : Objective::Minimize;

    IncrementalResult res;
    if (problem == "ism")
        res = solve_ism(pair, obj);
    else if (problem == "ihr")
        res = solve_ihr(pair);
    else if (problem == "iasm") {
        if (algo == "xp-b")
            res = solve_iasm_xp_b(pair, node_limit);
        else if (algo == "xp-k")
            res = solve_iasm_xp_k(pair, node_limit);
        else
            res = solve_iasm_exact(pair, node_limit);
    }
    else if (problem == "ism-t")
        res = solve_ismt_agent_types(pair);
    else {
        std::cerr << "unknown problem '" << problem << "'\n";
        return 2;
    }

    if (res.status == SolveStatus::NoSolutionWithinK) {
        std::cout << "no matching within k=" << pair.budget_k << " edits admits at most b=" << pair.budget_b
                  << " blocking pairs\n";
        std::cout << "count=-1 blockers=-1\n";
        return 1;
    }

    const char right_prefix = pair.profile2.mode == Mode::HR ? 'h' : 'w';
    std::cout << "matching (" << res.matching.size() << " pairs):\n";
    for (auto [m, w] : res.matching.pairs)
        std::cout << "  m" << m + 1 << ' ' << right_prefix << w + 1 << '\n';
    std::cout << "symmetric difference to matching1: " << res.count;
    if (pair.budget_k > 0)
        std::cout << (res.count <= pair.budget_k ? "  (within k)" : "  (exceeds k)");
    std::cout << '\n';
    if (res.status == SolveStatus::BudgetExceeded)
        std::cout << "warning: node budget exhausted, result may be suboptimal\n";
    std::cout << "count=" << res.count << " blockers=" << res.blockers.size() << '\n';
    return 0;
}

int run_oracle(const std::string & input, const std::string & problem)
{
    auto pair = parse_instance_pair(read_file(input));
    long long count = 0;
    if (problem == "ism")
        count = oracle_ism(pair, Objective::Minimize);
    else if (problem == "iasm")
        count = oracle_iasm(pair);
    else if (problem == "ihr-t")
        count = oracle_ihrt(pair);
    else {
        std::cerr << "unknown oracle problem '" << problem << "'\n";
        return 2;
    }
    std::cout << "count=" << count << '\n';
    return 0;
}

int run_reduce(const std::string & input, const std::string & output, const std::string & from_s, const std::string & to_s)
{
    auto pair = parse_instance_pair(read_file(input));
    ChangeType from = from_s.empty() ? classify_change(pair.profile1, pair.profile2) : change_type_from_string(from_s);
    if (from == ChangeType::Mixed) {
        std::cerr << "instance mixes change types; no reduction applies\n";
        return 1;
    }
    auto red = reduce_change_type(pair, from, change_type_from_string(to_s));
    write_file(output, serialize_instance_pair(red.pair));
    std::cout << "reduced " << to_string(from) << " -> " << to_string(red.to) << ": k'=" << red.k_prime << ", "
              << red.gadget_agents.size() << " new agents\n";
    for (const auto & [id, name] : red.gadget_agents)
        std::cout << "  " << (id.side == Side::Left ? 'm' : 'w') << id.index + 1 << " = " << name << '\n';
    return 0;
}

int run_verify_reduction(const std::string & input, const std::string & k_range, const std::string & to_s)
{
    auto pair = parse_instance_pair(read_file(input));
    ChangeType from = classify_change(pair.profile1, pair.profile2);
    if (from == ChangeType::Mixed) {
        std::cerr << "instance mixes change types; no reduction applies\n";
        return 1;
    }
    ChangeType to;
    if (! to_s.empty())
        to = change_type_from_string(to_s);
    else
        switch (from) { // next step along the reduction cycle
        case ChangeType::Swap: to = ChangeType::Replace; break;
        case ChangeType::Replace: to = ChangeType::Add; break;
        case ChangeType::Add: to = ChangeType::Delete; break;
        default: to = ChangeType::Swap; break;
        }

    long long k_from = 0, k_to = 6;
    if (auto dots = k_range.find(".."); dots != std::string::npos) {
        k_from = std::stoll(k_range.substr(0, dots));
        k_to = std::stoll(k_range.substr(dots + 2));
    }
    else if (! k_range.empty())
        k_from = k_to = std::stoll(k_range);

    auto red = reduce_change_type(pair, from, to);
    auto report = verify_reduction(pair, red, k_from, k_to);
    std::cout << "reduction " << to_string(from) << " -> " << to_string(to) << ", offset " << report.offset << '\n';
    std::cout << "min delta: original " << report.min_delta_original << ", reduced " << report.min_delta_reduced << '\n';
    for (const auto & row : report.rows)
        std::cout << "  k=" << row.k << " original=" << (row.yes_original ? "yes" : "no")
                  << " reduced=" << (row.yes_reduced ? "yes" : "no")
                  << (row.yes_original != row.yes_reduced ? "  MISMATCH" : "") << '\n';
    std::cout << (report.mismatches == 0 ? "equivalent on the sweep\n" : "MISMATCHES FOUND\n");
    return report.mismatches == 0 ? 0 : 1;
}

} // namespace

int main(int argc, char ** argv)
{
    CLI::App app{"incremental stable matching toolkit"};
    app.require_subcommand(1);

    // solve
    std::string input, output, problem = "ism", algo = "auto", objective = "min";
    long long node_limit = 10'000'000;
    auto * solve = app.add_subcommand("solve", "solve an incremental matching instance");
    solve->add_option("--problem", problem, "ism | iasm | ihr | ism-t")->default_val("ism");
    solve->add_option("--algo", algo, "auto | exact | xp-b | xp-k | types")->default_val("auto");
    solve->add_option("--objective", objective, "min | max")->default_val("min");
    solve->add_option("--input", input, "instance pair file")->required();
    solve->add_option("--node-limit", node_limit, "search node budget");

    // oracle
    std::string oracle_problem = "ism", oracle_input;
    auto * oracle = app.add_subcommand("oracle", "brute-force reference solver for small instances");
    oracle->add_option("--problem", oracle_problem, "ism | iasm | ihr-t")->default_val("ism");
    oracle->add_option("--input", oracle_input, "instance pair file")->required();

    // reduce
    std::string red_in, red_out, red_from, red_to = "swap";
    auto * reduce = app.add_subcommand("reduce", "rewrite an instance into another change type");
    reduce->add_option("--input", red_in)->required();
    reduce->add_option("--output", red_out)->required();
    reduce->add_option("--from", red_from, "swap | replace | delete | add (default: classify)");
    reduce->add_option("--to", red_to, "target change type")->required();

    // verify-reduction
    std::string ver_in, ver_k = "0..6", ver_to;
    auto * verify = app.add_subcommand("verify-reduction", "compare oracle answers before and after reducing");
    verify->add_option("--input", ver_in)->required();
    verify->add_option("--k", ver_k, "k sweep, e.g. 0..6");
    verify->add_option("--to", ver_to, "target change type (default: next along the cycle)");

    // sample
    std::string model = "uniform", sample_out;
    double norm_phi = 0.5;
    int sample_n = 10, sample_n_right = -1;
    std::uint64_t seed = 1;
    auto * sample = app.add_subcommand("sample", "draw a random preference profile");
    sample->add_option("--model", model, "uniform | identical | mallows")->default_val("uniform");
    sample->add_option("--norm-phi", norm_phi, "normalised dispersion for mallows");
    sample->add_option("--n", sample_n, "agents per side")->required();
    sample->add_option("--n-right", sample_n_right, "right side size (defaults to --n)");
    sample->add_option("--seed", seed, "random seed")->required();
    sample->add_option("--output", sample_out, "profile file")->required();

    // perturb
    std::string perturb_kind = "reorder", perturb_in, perturb_out;
    double fraction = 0.1;
    std::uint64_t perturb_seed = 1;
    long long perturb_k = 0;
    auto * perturb = app.add_subcommand("perturb", "apply an r-fraction of changes and emit an instance pair");
    perturb->add_option("--kind", perturb_kind, "reorder | reorder-inv | delete | swaps | add")->required();
    perturb->add_option("--r", fraction, "fraction of all possible changes")->required();
    perturb->add_option("--seed", perturb_seed)->required();
    perturb->add_option("--input", perturb_in, "profile file")->required();
    perturb->add_option("--output", perturb_out, "instance pair file")->required();
    perturb->add_option("--k", perturb_k, "k budget recorded in the pair");

    // experiment
    std::string config_path;
    int workers = 1;
    auto * experiment = app.add_subcommand("experiment", "run a seeded Monte-Carlo sweep from a config file");
    experiment->add_option("--config", config_path)->required();
    experiment->add_option("--workers", workers, "worker threads (output is identical for any count)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed())
            return run_solve(input, problem, algo, objective, node_limit);
        if (oracle->parsed())
            return run_oracle(oracle_input, oracle_problem);
        if (reduce->parsed())
            return run_reduce(red_in, red_out, red_from, red_to);
        if (verify->parsed())
            return run_verify_reduction(ver_in, ver_k, ver_to);
        if (sample->parsed()) {
            if (sample_n_right < 0)
                sample_n_right = sample_n;
            PreferenceProfile p;
            if (model == "uniform")
                p = sample_uniform_profile(sample_n, sample_n_right, seed);
            else if (model == "identical")
                p = sample_identical_profile(sample_n, seed);
            else if (model == "mallows")
                p = sample_mallows_profile(sample_n, sample_n_right, norm_phi, seed);
            else {
                std::cerr << "unknown model '" << model << "'\n";
                return 2;
            }
            write_file(sample_out, serialize_profile(p));
            std::cout << "wrote " << sample_out << '\n';
            return 0;
        }
        if (perturb->parsed()) {
            auto p1 = parse_profile(read_file(perturb_in));
            auto kind = change_kind_from_string(perturb_kind);
            auto m1 = gale_shapley(p1, Side::Left);
            auto [p2, script] = apply_changes(p1, kind, fraction, perturb_seed);
            InstancePair pair;
            pair.profile1 = kind == ChangeKind::Add ? extend_for_add(p1, script) : p1;
            pair.profile2 = p2;
            pair.matching1 = m1;
            pair.budget_k = perturb_k;
            write_file(perturb_out, serialize_instance_pair(pair));
            std::cout << "wrote " << perturb_out << '\n';
            return 0;
        }
        if (experiment->parsed()) {
            auto cfg = parse_experiment_config(read_file(config_path));
            auto result = run_experiment(cfg, workers);
            if (cfg.output_path.empty())
                std::cout << result.csv;
            else
                std::cout << "wrote " << cfg.output_path << " and " << cfg.output_path << ".meta\n";
            return 0;
        }
    }
    catch (const Error & e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
