// Command-line driver.  Exit codes: 0 ok, 1 usage, 2 parse or validation
// error, 3 timeout, 4 internal error.

#include "gtgd/benchmark.hpp"
#include "gtgd/chase.hpp"
#include "gtgd/generators.hpp"
#include "gtgd/parser.hpp"
#include "gtgd/saturation.hpp"
#include "gtgd/writer.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace gtgd;

namespace {

enum Exit { kOk = 0, kUsage = 1, kInput = 2, kTimeout = 3, kInternal = 4 };

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw InputError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_output(const std::string& path, const std::string& text)
{
    if (path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text))
        throw InputError("cannot write " + path);
}

void print_stats(std::ostream& os, const SaturationStats& s)
{
    os << "input_size=" << s.input_size << " output_size=" << s.output_size << " derived=" << s.derived
       << " fwd_subsumed=" << s.fwd_subsumed << " bwd_subsumed=" << s.bwd_subsumed
       << " tautologies=" << s.tautologies << " lookahead_dropped=" << s.lookahead_dropped
       << " iterations=" << s.iterations << " time_ms=" << s.time_ms << "\n";
}

struct RewriteArgs {
    std::string algorithm = "exbdr";
    std::string input, output, stats;
    double timeout = 3600;
    bool no_subsumption = false, no_lookahead = false;
    std::size_t clusters = 0;
};

int run_rewrite(const RewriteArgs& a)
{
    auto alg = parse_algorithm(a.algorithm);
    if (!alg) {
        std::cerr << "unknown algorithm '" << a.algorithm << "'\n";
        return kUsage;
    }
    if (a.timeout <= 0) {
        std::cerr << "--timeout must be positive\n";
        return kUsage;
    }
    SourceProgram src = parse_program(read_file(a.input));
    SaturationOptions opts;
    opts.algorithm = *alg;
    opts.subsumption = !a.no_subsumption;
    opts.lookahead = !a.no_lookahead;
    opts.timeout = std::chrono::milliseconds(static_cast<long long>(a.timeout * 1000));
    opts.clusters = a.clusters;
    try {
        SaturationResult r = saturate(src.tgds, opts);
        write_output(a.output, write_program(r.program));
        if (!a.stats.empty())
            append_csv(a.stats, make_row(a.input, *alg, r.stats, "ok"));
        print_stats(std::cerr, r.stats);
        return kOk;
    } catch (const SaturationTimeout& t) {
        std::cerr << "timeout after " << a.timeout << " s; partial statistics:\n";
        print_stats(std::cerr, t.stats);
        if (!a.stats.empty())
            append_csv(a.stats, make_row(a.input, *alg, t.stats, "timeout"));
        return kTimeout;
    }
}

int run_materialize(const std::string& program, const std::string& data, const std::string& output)
{
    ParseOptions po;
    po.require_guarded = false;
    DatalogProgram p = to_program(parse_program(read_file(program), po).tgds);
    Instance facts = parse_instance(read_file(data));
    write_output(output, write_instance(datalog_fixpoint(p, facts)));
    return kOk;
}

int run_chase(const std::string& input, const std::string& data, const std::string& fact_text, std::size_t depth,
              const std::string& graph)
{
    ChaseContext ctx = ChaseContext::make(parse_program(read_file(input)).tgds);
    Instance facts = parse_instance(read_file(data));
    Atom fact = parse_fact(fact_text);
    SearchBounds bounds;
    bounds.max_depth = depth;
    auto proof = find_one_pass_proof(facts, ctx, fact, bounds);
    if (!proof) {
        std::cout << "INCONCLUSIVE\n";
        return kOk;
    }
    std::cout << format_proof(*proof, ctx);
    if (!graph.empty())
        write_output(graph, to_dot(replay(*proof, ctx).back()));
    return kOk;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Datalog rewriting of guarded TGDs"};
    app.require_subcommand(1);

    RewriteArgs rw;
    auto* rewrite = app.add_subcommand("rewrite", "Saturate a set of GTGDs into a Datalog program");
    rewrite->add_option("--algorithm", rw.algorithm, "exbdr, skdr, hypdr or fulldr")->required();
    rewrite->add_option("--input", rw.input, "GTGD file")->required();
    rewrite->add_option("--output", rw.output, "Datalog output file, - for stdout")->required();
    rewrite->add_option("--timeout", rw.timeout, "Seconds");
    rewrite->add_flag("--no-subsumption", rw.no_subsumption);
    rewrite->add_flag("--no-lookahead", rw.no_lookahead);
    rewrite->add_option("--clusters", rw.clusters, "Clusters per polarity in the subsumption index");
    rewrite->add_option("--stats", rw.stats, "Append a row to this CSV file");

    std::string program, data, output;
    auto* materialize = app.add_subcommand("materialize", "Apply a Datalog program to facts");
    materialize->add_option("--program", program)->required();
    materialize->add_option("--data", data)->required();
    materialize->add_option("--output", output)->required();

    std::string chase_input, chase_data, fact, graph;
    std::size_t depth = SearchBounds{}.max_depth;
    auto* chase = app.add_subcommand("chase", "Search for a one-pass chase proof of a base fact");
    chase->add_option("--input", chase_input)->required();
    chase->add_option("--data", chase_data)->required();
    chase->add_option("--fact", fact)->required();
    chase->add_option("--max-depth", depth);
    chase->add_option("--graph", graph, "Write the final chase tree in Graphviz format");

    auto* gen = app.add_subcommand("gen", "Generate inputs");
    gen->require_subcommand(1);
    std::string blow_input, blow_output = "-";
    std::size_t factor = 2;
    std::uint64_t seed = 1;
    std::optional<std::size_t> max_extra;
    auto* blowup = gen->add_subcommand("blowup", "Arity blowup of a GTGD file");
    blowup->add_option("--input", blow_input)->required();
    blowup->add_option("--factor", factor)->required()->check(CLI::PositiveNumber);
    blowup->add_option("--seed", seed);
    blowup->add_option("--max-extra", max_extra, "Extra atoms per TGD are drawn from [0, max-extra]");
    blowup->add_option("--output", blow_output);

    std::string kind, fam_output = "-";
    std::size_t n = 2;
    auto* family = gen->add_subcommand("family", "Separating family");
    family->add_option("--kind", kind, "expVsSk, skVsExb or skVsHyp")->required();
    family->add_option("--n", n)->required()->check(CLI::PositiveNumber);
    family->add_option("--output", fam_output);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (*rewrite)
            return run_rewrite(rw);
        if (*materialize)
            return run_materialize(program, data, output);
        if (*chase)
            return run_chase(chase_input, chase_data, fact, depth, graph);
        if (*blowup) {
            auto sigma = parse_program(read_file(blow_input)).tgds;
            write_output(blow_output, write_tgds(gen_blowup(sigma, factor, seed, max_extra)));
            return kOk;
        }
        if (*family) {
            auto f = parse_family(kind);
            if (!f) {
                std::cerr << "unknown family '" << kind << "'\n";
                return kUsage;
            }
            write_output(fam_output, write_tgds(gen_family(*f, n)));
            return kOk;
        }
    } catch (const ParseFailure& e) {
        std::cerr << e.what() << "\n";
        return kInput;
    } catch (const SaturationError& e) {
        std::cerr << e.what() << "\n";
        return kInput;
    } catch (const InputError& e) {
        std::cerr << e.what() << "\n";
        return kInput;
    } catch (const InvariantViolation& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kInternal;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kInternal;
    }
    return kUsage;
}
