// Command-line front end. Four subcommands over JSON input:
//
//   solve        construct tau_hat with tau_hat' F tau_hat = G, invertible
//                over Z^P, and emit the full certificate
//   verify       re-run the exact checks on an emitted certificate
//   constants    dump the avoidance constants for (F, sigma, Sigma, P)
//   genus-check  decide equivalence over R and over Z_p per place
//
// Exit codes: 0 success, 1 usage or parse error, 2 certified local
// obstruction (the prime is named on stderr), 3 rational stage failed or
// inconclusive (the cutoff is reported), 4 verification failure, 70
// internal error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "geneq/geneq.hpp"

namespace {

using geneq::Json;
using geneq::Prime;
using geneq::PrimeSet;
using geneq::QuadraticForm;
using geneq::Rational;
using geneq::RatMatrix;

struct Args {
    std::string input = "-";
    std::string primes_csv;
    std::string max_height = "50";
    bool masser = false;
    long precision = 0;
    bool trace = false;
    std::string output;
};

void add_common_options(CLI::App* cmd, Args& a) {
    cmd->add_option("--input", a.input, "JSON input file, - for standard input");
    cmd->add_option("--primes", a.primes_csv,
                    "comma-separated primes, overrides the input file's list");
    cmd->add_option("--max-height", a.max_height,
                    "height cutoff for the rational representation search");
    cmd->add_flag("--masser", a.masser,
                  "search up to the certified bound instead of the practical cutoff");
    cmd->add_option("--precision", a.precision, "minimum starting p-adic working precision");
    cmd->add_flag("--trace", a.trace, "dump intermediate data to standard error");
    cmd->add_option("--output", a.output, "write the JSON result here instead of stdout");
}

std::string slurp(const std::string& path) {
    std::ostringstream ss;
    if (path == "-") {
        ss << std::cin.rdbuf();
    } else {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw std::invalid_argument("cannot open " + path);
        ss << in.rdbuf();
    }
    return ss.str();
}

std::vector<Prime> parse_primes_csv(const std::string& csv) {
    std::vector<Prime> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) throw std::invalid_argument("--primes: empty entry");
        std::size_t used = 0;
        unsigned long p = std::stoul(tok, &used);
        if (used != tok.size()) throw std::invalid_argument("--primes: bad entry '" + tok + "'");
        out.push_back(p);
    }
    return out;
}

PrimeSet resolve_primes(const Args& a, const std::vector<Prime>& from_input) {
    std::vector<Prime> ps = a.primes_csv.empty() ? from_input : parse_primes_csv(a.primes_csv);
    if (ps.empty())
        throw std::invalid_argument("no primes given (use --primes or a \"primes\" input key)");
    return PrimeSet(ps);
}

void emit(const Json& j, const std::string& output) {
    std::string text = j.dump(2);
    text += '\n';
    if (output.empty()) {
        std::cout << text << std::flush;
    } else {
        std::ofstream out(output, std::ios::binary);
        if (!out) throw std::invalid_argument("cannot write " + output);
        out << text;
    }
}

std::string cutoff_description(const Args& a) {
    return a.masser ? std::string("the certified bound")
                    : "height " + geneq::format_rational(geneq::parse_rational(a.max_height));
}

int cmd_solve(const Args& a) {
    geneq::ProblemInput in = geneq::problem_from_json(Json::parse(slurp(a.input)));
    PrimeSet primes = resolve_primes(a, in.primes);
    QuadraticForm f(in.f), g(in.g);

    geneq::SolveOptions opt;
    opt.sigma = in.sigma;
    opt.diagonalizer = in.diagonalizer;
    opt.max_height = geneq::parse_rational(a.max_height);
    opt.use_masser = a.masser;
    opt.min_precision = a.precision;
    if (a.trace) opt.trace = &std::cerr;

    try {
        geneq::EquivalenceCertificate cert = geneq::solve(f, g, primes, opt);
        emit(geneq::certificate_to_json(cert), a.output);
        return 0;
    } catch (const geneq::NotRationallyEquivalentError& e) {
        std::cerr << "genus-equiv: " << e.what() << " (searched up to " << cutoff_description(a)
                  << ")\n";
        return 3;
    }
}

int cmd_verify(const Args& a) {
    geneq::CertificateInput in = geneq::certificate_from_json(Json::parse(slurp(a.input)));
    PrimeSet primes = resolve_primes(a, in.primes);
    geneq::VerificationReport report =
        geneq::verify(QuadraticForm(in.f), QuadraticForm(in.g), primes, in.tau_hat);
    emit(geneq::report_to_json(report), a.output);
    if (report.all_ok()) return 0;
    std::cerr << "genus-equiv: certificate rejected\n";
    return 4;
}

int cmd_constants(const Args& a) {
    Json j = Json::parse(slurp(a.input));
    if (!j.is_object() || !j.contains("F"))
        throw std::invalid_argument("constants: input needs 'F'");
    QuadraticForm f(geneq::matrix_from_json(j.at("F"), "F"));
    std::vector<Prime> input_primes;
    if (j.contains("primes")) input_primes = geneq::primes_from_json(j.at("primes"));
    PrimeSet primes = resolve_primes(a, input_primes);

    RatMatrix sigma;
    if (j.contains("sigma")) {
        sigma = geneq::matrix_from_json(j.at("sigma"), "sigma");
    } else if (j.contains("G")) {
        QuadraticForm g(geneq::matrix_from_json(j.at("G"), "G"));
        geneq::EquivSearchOptions search{geneq::parse_rational(a.max_height), a.masser};
        geneq::EquivSearchResult found = geneq::rational_equiv_search(f, g, search);
        if (found.status != geneq::SearchStatus::Found)
            throw geneq::NotRationallyEquivalentError(
                found.status == geneq::SearchStatus::CertifiedNone,
                "constants needs sigma and none was found");
        sigma = found.sigma;
    } else {
        sigma = RatMatrix::identity(f.dim());
    }
    RatMatrix big_sigma = j.contains("Sigma") ? geneq::matrix_from_json(j.at("Sigma"), "Sigma")
                                              : geneq::orthogonal_diagonalize(f);

    try {
        emit(geneq::constants_to_json(geneq::compute_constants(f, sigma, big_sigma, primes)),
             a.output);
        return 0;
    } catch (const geneq::NotRationallyEquivalentError& e) {
        std::cerr << "genus-equiv: " << e.what() << " (searched up to " << cutoff_description(a)
                  << ")\n";
        return 3;
    }
}

int cmd_genus_check(const Args& a) {
    geneq::ProblemInput in = geneq::problem_from_json(Json::parse(slurp(a.input)));
    std::vector<Prime> extra = in.primes;
    if (!a.primes_csv.empty()) extra = parse_primes_csv(a.primes_csv);
    geneq::GenusReport report = geneq::same_genus(QuadraticForm(in.f), QuadraticForm(in.g),
                                                  PrimeSet(extra));
    emit(geneq::genus_report_to_json(report), a.output);
    if (report.same) return 0;
    for (const geneq::PlaceReport& place : report.places)
        if (!place.ok) {
            std::cerr << "genus-equiv: forms differ at " << place.name() << "\n";
            break;
        }
    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact equivalence of rational quadratic forms over Z^P"};
    app.require_subcommand(1);

    Args args;
    CLI::App* c_solve =
        app.add_subcommand("solve", "construct tau_hat with tau_hat' F tau_hat = G");
    CLI::App* c_verify = app.add_subcommand("verify", "re-check an emitted certificate exactly");
    CLI::App* c_constants = app.add_subcommand("constants", "dump the avoidance constants");
    CLI::App* c_genus = app.add_subcommand("genus-check", "per-place equivalence report");
    for (CLI::App* cmd : {c_solve, c_verify, c_constants, c_genus}) add_common_options(cmd, args);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (c_solve->parsed()) return cmd_solve(args);
        if (c_verify->parsed()) return cmd_verify(args);
        if (c_constants->parsed()) return cmd_constants(args);
        return cmd_genus_check(args);
    } catch (const geneq::NotLocallyEquivalentError& e) {
        std::cerr << "genus-equiv: " << e.what() << "\n";
        return 2;
    } catch (const Json::exception& e) {
        std::cerr << "genus-equiv: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "genus-equiv: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "genus-equiv: internal error: " << e.what() << "\n";
        return 70;
    }
}
