// fanlab: experiments, converters and validators with JSON reports.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "fanlab/cli.hpp"

namespace {

using fanlab::cli::CmdResult;

bool read_file(const std::string& path, std::string& out)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        return false;
    std::ostringstream ss;
    ss << in.rdbuf();
    out = ss.str();
    return true;
}

int emit(const CmdResult& r, const std::string& out_path, const std::string& emit_path)
{
    const std::string json = r.report.dump(2) + "\n";
    if (!emit_path.empty()) {
        std::ofstream f(emit_path, std::ios::binary);
        f << r.output;
    }
    if (out_path.empty()) {
        std::cout << json;
    } else {
        std::ofstream f(out_path, std::ios::binary);
        if (!f) {
            std::cerr << "cannot write " << out_path << "\n";
            return fanlab::cli::parse_error;
        }
        f << json;
        std::cout << r.summary << "\n";
    }
    if (r.exit != fanlab::cli::ok)
        std::cerr << r.summary << "\n";
    return r.exit;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"fanlab: bars, fans, Kleene's alternative and coverings of [0,1]"};
    app.require_subcommand(1);

    fanlab::cli::RunConfig cfg;
    std::string in_path, out_path, emit_path;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--budget-enum", cfg.budget_enum, "enumeration budget");
        sub->add_option("--budget-steps", cfg.budget_steps, "machine step budget");
        sub->add_option("--depth", cfg.depth, "depth budget");
        sub->add_option("--precision", cfg.precision, "precision exponent n (2^-n)");
        sub->add_option("--seed", cfg.seed, "seed for all sampling");
        sub->add_option("--out", out_path, "write the JSON report here");
    };

    auto* kleene = app.add_subcommand("kleene", "run the Kleene bar experiment");
    add_common(kleene);

    std::string kind;
    auto* convert = app.add_subcommand("convert", "convert a bar or special covering");
    convert->add_option("kind", kind, "enum2dec | bounded | firsthit | dini | bar2cover | cover2bar")->required();
    convert->add_option("--in", in_path, "input file (bar codes or special covering)")->required();
    convert->add_option("--emit", emit_path, "write the converted object in its file format");
    add_common(convert);

    std::string expr;
    auto* real = app.add_subcommand("real", "evaluate a real expression to an enclosing interval");
    real->add_option("expr", expr, "expression over rationals with + - * sup inf")->required();
    add_common(real);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : fanlab::cli::parse_error;
    }

    if (kleene->parsed())
        return emit(fanlab::cli::cmd_kleene(cfg), out_path, emit_path);
    if (convert->parsed()) {
        std::string text;
        if (!read_file(in_path, text)) {
            std::cerr << "cannot read " << in_path << "\n";
            return fanlab::cli::parse_error;
        }
        return emit(fanlab::cli::cmd_convert(kind, text, cfg), out_path, emit_path);
    }
    return emit(fanlab::cli::cmd_real(expr, cfg), out_path, emit_path);
}
