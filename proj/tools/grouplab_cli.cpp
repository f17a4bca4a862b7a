// Command-line front end: scenario replay, expander builds and Poincare
// reports, and the geometry/realizer check corpora.
//
// Exit codes: 0 success; 1 verdict or corpus mismatch; 2 parse or schema
// error; 3 invalid move (the step index is printed); 4 undecided at cap.

#include "CLI11.hpp"

#include "grouplab/affine.hpp"
#include "grouplab/game.hpp"
#include "grouplab/poincare.hpp"
#include "grouplab/predicates.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    json j;
    in >> j;
    return j;
}

void write_file(const fs::path& path, const std::string& content) {
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    out << content;
    if (!out) throw std::runtime_error("cannot write " + path.string());
}

int cmd_game(const std::string& scenario_path, const std::string& strategy_path,
             const std::string& out_dir, std::uint64_t cap) {
    std::shared_ptr<const grouplab::game::GameConfig> config;
    grouplab::game::Strategy strategy;
    try {
        const json jscen = load_json(scenario_path);
        config = grouplab::game::scenario_from_json(jscen, cap);
        const json jstrat = load_json(strategy_path);
        strategy = grouplab::game::strategy_from_json(jstrat, config->ambient->dim(),
                                                      config->ambient->modulus());
    } catch (const std::exception& ex) {
        std::cerr << "parse error: " << ex.what() << "\n";
        return 2;
    }

    const auto trace = grouplab::game::run_strategy(config, strategy);

    std::string lines;
    for (const auto& rec : trace.to_json_lines()) lines += rec.dump() + "\n";
    write_file(fs::path(out_dir) / "trace.jsonl", lines);
    write_file(fs::path(out_dir) / "summary.txt", trace.summary_table());
    std::cout << trace.summary_table();

    using grouplab::game::Verdict;
    switch (trace.verdict) {
        case Verdict::Win:
            if (!strategy.expected_winner || trace.winner == strategy.expected_winner) return 0;
            std::cerr << "winner H" << *trace.winner << " does not match expected H"
                      << *strategy.expected_winner << "\n";
            return 1;
        case Verdict::InvalidAtStep:
            std::cerr << "invalid move at step " << *trace.failed_step << "\n";
            return 3;
        case Verdict::IndeterminateAtStep:
            std::cerr << "undecided at cap (step " << *trace.failed_step << ")\n";
            return 4;
        default:
            std::cerr << "strategy incomplete: no H_i reached the whole group\n";
            return 1;
    }
}

int cmd_expander(const std::vector<std::uint32_t>& m_list, std::uint32_t p,
                 std::vector<double> q_list, std::uint32_t d, std::uint32_t restarts,
                 std::uint64_t seed, std::uint64_t budget, bool graph_only,
                 const std::string& out_dir) {
    namespace ex = grouplab::expander;
    if (graph_only) q_list.clear();
    for (const auto m : m_list) {
        try {
            const auto mq = ex::standard_generating_images(m, p, budget);
            std::vector<grouplab::algebra::MatrixOverFp> gens;
            for (const auto& im : mq.images) gens.push_back(im.matrix);
            grouplab::groups::FiniteMatrixGroup group(4 * m, p, gens, budget);
            const auto graph = ex::build_cayley(group, mq.images);
            const std::string stem = "m" + std::to_string(m) + "-p" + std::to_string(p);
            write_file(fs::path(out_dir) / ("edges-" + stem + ".txt"),
                       ex::edge_list_text(graph));
            write_file(fs::path(out_dir) / ("graph-" + stem + ".json"),
                       ex::graph_header_json(graph).dump(2) + "\n");
            std::cout << "m=" << m << ": |V|=" << graph.vertex_count
                      << " degree=" << graph.degree << " exported\n";
        } catch (const std::exception& exn) {
            std::cout << "m=" << m << ": skipped (" << exn.what() << ")\n";
        }
    }
    const auto rows = ex::family_gap_report(m_list, p, q_list, d, restarts, seed, budget);
    write_file(fs::path(out_dir) / "report.csv", ex::family_report_csv(rows));
    std::cout << ex::family_report_csv(rows);
    std::cout << "note: desk-scale empirical evidence, not a proof of uniform positivity\n";
    return 0;
}

int cmd_geom(const std::string& corpus_path, const std::string& out_dir, double tol) {
    json corpus;
    try {
        corpus = load_json(corpus_path);
    } catch (const std::exception& ex) {
        std::cerr << "parse error: " << ex.what() << "\n";
        return 2;
    }
    const auto res = grouplab::geometry::run_geometry_corpus(corpus, tol);
    write_file(fs::path(out_dir) / "geom-report.json", res.report.dump(2) + "\n");
    std::cout << res.total - res.failing_ids.size() << "/" << res.total << " cases match\n";
    for (const auto& id : res.failing_ids) std::cout << "mismatch: " << id << "\n";
    return res.all_match() ? 0 : 1;
}

int cmd_realizer(const std::string& corpus_path, const std::string& out_dir,
                 std::uint64_t seed) {
    json corpus;
    try {
        corpus = load_json(corpus_path);
    } catch (const std::exception& ex) {
        std::cerr << "parse error: " << ex.what() << "\n";
        return 2;
    }
    const auto res = grouplab::realizer::run_realizer_corpus(corpus, seed);
    write_file(fs::path(out_dir) / "realizer-report.json", res.report.dump(2) + "\n");
    std::cout << res.total - res.failing_ids.size() << "/" << res.total << " cases match\n";
    for (const auto& id : res.failing_ids) std::cout << "mismatch: " << id << "\n";
    return res.all_match() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"grouplab: subgroup games, expander graphs, and fixed-point geometry"};
    app.require_subcommand(1);

    std::string out_dir = "out";
    std::uint64_t seed = 0;
    std::uint64_t cap = grouplab::groups::kDefaultClosureCap;
    app.add_option("--out", out_dir, "output directory")->capture_default_str();
    app.add_option("--seed", seed, "seed for every stochastic computation")
        ->capture_default_str();
    app.add_option("--cap", cap, "closure / enumeration cap")->capture_default_str();

    auto* game = app.add_subcommand("game", "replay a strategy script against a scenario");
    std::string scenario_path, strategy_path;
    game->add_option("--scenario", scenario_path, "scenario JSON file")->required();
    game->add_option("--strategy", strategy_path, "strategy JSON file")->required();

    auto* expander = app.add_subcommand("expander", "build Cayley graphs and Poincare reports");
    std::vector<std::uint32_t> m_list{1};
    std::uint32_t p = 2, d = 3, restarts = 20;
    std::vector<double> q_list{2.0};
    bool graph_only = false;
    expander->add_option("--m", m_list, "block sizes m (group SL(4m, F_p))")
        ->capture_default_str();
    expander->add_option("--p", p, "prime p")->capture_default_str();
    expander->add_option("--q", q_list, "l_q exponents to estimate")->capture_default_str();
    expander->add_option("--d", d, "target dimension for vector-valued maps")
        ->capture_default_str();
    expander->add_option("--restarts", restarts, "optimizer restarts")->capture_default_str();
    expander->add_flag("--graph-only", graph_only, "export graphs, skip lambda estimates");

    auto* geom = app.add_subcommand("geom", "run a geometry predicate corpus");
    std::string geom_corpus;
    double tol = 1e-9;
    geom->add_option("--corpus", geom_corpus, "corpus JSON file")->required();
    geom->add_option("--tol", tol, "default tolerance for cases without one")
        ->capture_default_str();

    auto* realizer = app.add_subcommand("realizer", "run a realizer check corpus");
    std::string realizer_corpus;
    realizer->add_option("--corpus", realizer_corpus, "corpus JSON file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (game->parsed()) return cmd_game(scenario_path, strategy_path, out_dir, cap);
        if (expander->parsed())
            return cmd_expander(m_list, p, q_list, d, restarts, seed, cap, graph_only, out_dir);
        if (geom->parsed()) return cmd_geom(geom_corpus, out_dir, tol);
        if (realizer->parsed()) return cmd_realizer(realizer_corpus, out_dir, seed);
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 4;
    }
    return 0;
}
