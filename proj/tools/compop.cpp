// compop — batch front-end for composition-operator experiments on Hardy
// spaces of Dirichlet series. Subcommands map one-to-one onto the library
// operations; outputs are JSON or CSV with a metadata block, and every
// numeric table carries a provenance tag (exact | mc(sigma) | surrogate).

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "compop/errors.hpp"
#include "compop/json_io.hpp"
#include "compop/kernels.hpp"
#include "compop/littlewood_paley.hpp"
#include "compop/spectral.hpp"
#include "compop/truncated_operator.hpp"
#include "compop/verify.hpp"
#include "compop/zeta.hpp"

using namespace compop;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";

int thread_count() {
    if (const char* env = std::getenv("COMPOP_THREADS")) {
        int n = std::atoi(env);
        if (n >= 1) return n;
    }
    return 1;
}

// Symbol grammar: shift:A | affine:a,c,q | custom:<json> | @file.json
Symbol parse_symbol(const std::string& spec) {
    if (!spec.empty() && spec[0] == '@') {
        std::ifstream in(spec.substr(1));
        if (!in) throw std::invalid_argument("symbol file not found: " + spec.substr(1));
        json j;
        in >> j;
        return symbol_from_json(j);
    }
    auto colon = spec.find(':');
    std::string kind = spec.substr(0, colon);
    std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);
    if (kind == "shift") return make_shift(std::stod(rest));
    if (kind == "affine") {
        std::istringstream is(rest);
        double a, c;
        std::uint64_t q;
        char comma;
        if (!(is >> a >> comma >> c >> comma >> q))
            throw std::invalid_argument("affine symbol wants a,c,q");
        return make_affine(a, c, q);
    }
    if (kind == "custom") return symbol_from_json(json::parse(rest));
    throw std::invalid_argument("unknown symbol spec: " + spec);
}

// Disc map grammar: identity | scalar:a | lens:theta | moebius:a,b,c,d | @file
DiscMap parse_discmap(const std::string& spec) {
    if (!spec.empty() && spec[0] == '@') {
        std::ifstream in(spec.substr(1));
        if (!in) throw std::invalid_argument("disc map file not found: " + spec.substr(1));
        json j;
        in >> j;
        return discmap_from_json(j);
    }
    auto colon = spec.find(':');
    std::string kind = spec.substr(0, colon);
    std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);
    if (kind == "identity") return DiscMap::identity();
    if (kind == "scalar") return DiscMap::scalar(std::stod(rest));
    if (kind == "lens") return DiscMap::lens(std::stod(rest));
    if (kind == "moebius") {
        std::istringstream is(rest);
        double a, b, c, d;
        char comma;
        if (!(is >> a >> comma >> b >> comma >> c >> comma >> d))
            throw std::invalid_argument("moebius map wants a,b,c,d");
        return DiscMap::moebius(a, b, c, d);
    }
    throw std::invalid_argument("unknown disc map spec: " + spec);
}

DirichletPolynomial load_polynomial(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("polynomial file not found: " + path);
    json j;
    in >> j;
    return polynomial_from_json(j);
}

json meta_block(std::uint64_t seed, const std::string& command, double ms) {
    return {{"tool", "compop"},
            {"version", kVersion},
            {"command", command},
            {"seed", seed},
            {"threads", thread_count()},
            {"timing_ms", ms},
            {"timestamp", std::chrono::duration_cast<std::chrono::milliseconds>(
                              std::chrono::system_clock::now().time_since_epoch())
                              .count()}};
}

void write_output(const std::string& out_path, const std::string& text) {
    if (out_path.empty() || out_path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream os(out_path, std::ios::binary);
    if (!os) throw std::invalid_argument("cannot open output: " + out_path);
    os << text;
}

std::string spectrum_csv(const std::vector<double>& values, const std::string& prov,
                         const json& meta) {
    std::ostringstream os;
    os << "# " << meta.dump() << "\n";
    os << "n,value,prov\n";
    for (std::size_t i = 0; i < values.size(); ++i)
        os << (i + 1) << "," << format_double(values[i]) << "," << prov << "\n";
    return os.str();
}

std::vector<double> read_spectrum_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("spectrum file not found: " + path);
    std::vector<double> v;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || line[0] == 'n') continue;
        auto c1 = line.find(',');
        if (c1 == std::string::npos) continue;
        auto c2 = line.find(',', c1 + 1);
        v.push_back(std::stod(line.substr(c1 + 1, c2 - c1 - 1)));
    }
    return v;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"compop: composition operators on Hardy spaces of Dirichlet series"};
    app.require_subcommand(1);

    std::string symbol_spec, discmap_spec, points_path, poly_path, out_path, format = "json";
    std::string targets_path, variant, inputs_path, transfer_spec = "teps:0.1";
    std::string kernel = "zeta", suite = "all", in_path, precision = "double";
    int trunc = 64, K = 11, fit_lo = 1, fit_hi = 0, order = 0;
    std::uint64_t rows = 0, seed = 1, samples = 10000, cap = 1024;
    double p = 2.0, budget = 600.0, s_re = 1.0, s_im = 0.0, theta = 1.0, delta = 0.09;
    bool force = false, refine = true;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--seed", seed, "RNG seed (recorded in output)");
        cmd->add_option("--out", out_path, "output file (default stdout)");
        cmd->add_option("--format", format, "json|csv");
    };

    auto* c_compose = app.add_subcommand("compose", "coefficients of C_phi(n^{-s})");
    c_compose->add_option("--symbol", symbol_spec)->required();
    c_compose->add_option("--n", trunc, "basis frequency n")->required();
    c_compose->add_option("--rows", rows, "frequency cap M");
    add_common(c_compose);

    auto* c_assemble = app.add_subcommand("assemble", "truncated operator matrix");
    c_assemble->add_option("--symbol", symbol_spec)->required();
    c_assemble->add_option("--trunc", trunc, "columns N")->required();
    c_assemble->add_option("--rows", rows, "frequency cap M");
    c_assemble->add_flag("--force", force, "override the resource guard");
    add_common(c_assemble);

    auto* c_approx = app.add_subcommand("approx", "singular values (p = 2)");
    c_approx->add_option("--symbol", symbol_spec);
    c_approx->add_option("--disc-map", discmap_spec);
    c_approx->add_option("--trunc", trunc, "columns N")->required();
    c_approx->add_option("--rows", rows, "frequency cap M / disc row order");
    c_approx->add_option("--precision", precision, "double|quad (dyadic symbols)");
    add_common(c_approx);

    auto* c_eig = app.add_subcommand("eig", "eigenvalues of the square section");
    c_eig->add_option("--symbol", symbol_spec)->required();
    c_eig->add_option("--trunc", trunc)->required();
    c_eig->add_option("--rows", rows);
    c_eig->add_flag("--refine,!--no-refine", refine, "multiprecision eigenpair refinement");
    add_common(c_eig);

    auto* c_fit = app.add_subcommand("fit", "decay-model fit of a spectrum");
    c_fit->add_option("--in", in_path, "CSV with n,value rows")->required();
    c_fit->add_option("--from", fit_lo);
    c_fit->add_option("--to", fit_hi);
    add_common(c_fit);

    auto* c_gram = app.add_subcommand("gram", "Gram system of a point sequence");
    c_gram->add_option("--points", points_path)->required();
    c_gram->add_option("--kernel", kernel, "zeta|classical|disc");
    add_common(c_gram);

    auto* c_carleson = app.add_subcommand("carleson", "Carleson constant (p = 2)");
    c_carleson->add_option("--points", points_path)->required();
    c_carleson->add_option("--kernel", kernel);
    add_common(c_carleson);

    auto* c_interp = app.add_subcommand("interp", "interpolation constant (p = 2)");
    c_interp->add_option("--points", points_path)->required();
    c_interp->add_option("--kernel", kernel);
    add_common(c_interp);

    auto* c_square = app.add_subcommand("squaretrick", "H^1 interpolation by squaring");
    c_square->add_option("--points", points_path)->required();
    c_square->add_option("--targets", targets_path, "JSON array of [re, im]")->required();
    c_square->add_option("--cap", cap, "frequency cap for the interpolant");
    c_square->add_option("--samples", samples);
    add_common(c_square);

    auto* c_lp = app.add_subcommand("lp", "Littlewood-Paley functional");
    c_lp->add_option("--poly", poly_path)->required();
    c_lp->add_option("--p", p);
    c_lp->add_option("--samples", samples);
    add_common(c_lp);

    auto* c_transfer = app.add_subcommand("transfer", "transference symbol T o omega o I");
    c_transfer->add_option("--disc-map", discmap_spec)->required();
    c_transfer->add_option("--T", transfer_spec, "t0 | teps:eps");
    c_transfer->add_option("--K", K, "dyadic order");
    add_common(c_transfer);

    auto* c_nev = app.add_subcommand("nevanlinna", "Nevanlinna counting function");
    c_nev->add_option("--symbol", symbol_spec)->required();
    c_nev->add_option("--re", s_re)->required();
    c_nev->add_option("--im", s_im);
    add_common(c_nev);

    auto* c_compact = app.add_subcommand("compactness", "compactness criterion report");
    c_compact->add_option("--symbol", symbol_spec)->required();
    add_common(c_compact);

    auto* c_lower = app.add_subcommand("lowerbound", "general lower bounds (6.1/6.2/9.2)");
    c_lower->add_option("--variant", variant, "6.1|6.2|9.2")->required();
    c_lower->add_option("--in", inputs_path, "JSON inputs")->required();
    add_common(c_lower);

    auto* c_saksman = app.add_subcommand("saksman", "Saksman trapezoid multiplier");
    c_saksman->add_option("--poly", poly_path);
    c_saksman->add_option("--N", trunc)->required();
    add_common(c_saksman);

    auto* c_partial = app.add_subcommand("partialsum", "partial sum S_N f");
    c_partial->add_option("--poly", poly_path)->required();
    c_partial->add_option("--N", trunc)->required();
    add_common(c_partial);

    auto* c_verify = app.add_subcommand("verify", "acceptance verification suites");
    c_verify->add_option("--suite", suite, "core|spectral|kernels|lp|all");
    c_verify->add_option("--budget", budget, "time budget in seconds");
    add_common(c_verify);

    CLI11_PARSE(app, argc, argv);

    (void)theta;
    (void)delta;
    (void)order;

    auto t0 = std::chrono::steady_clock::now();
    auto elapsed_ms = [&] {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
            .count();
    };
    auto domain_of = [&](const std::string& k) {
        if (k == "zeta") return KernelDomain::zeta_halfplane;
        if (k == "classical") return KernelDomain::classical_halfplane;
        if (k == "disc") return KernelDomain::disc;
        throw std::invalid_argument("unknown kernel: " + k);
    };

    try {
        if (c_compose->parsed()) {
            Symbol sym = parse_symbol(symbol_spec);
            std::uint64_t M = rows ? rows : default_row_cap(sym, trunc);
            ComposeResult r = compose_basis_element(sym, std::uint64_t(trunc), M);
            json j = {{"meta", meta_block(seed, "compose", elapsed_ms())},
                      {"data", {{"poly", to_json(r.poly)}, {"tail", r.tail}, {"prov", "exact"}}}};
            write_output(out_path, j.dump(2) + "\n");
        } else if (c_assemble->parsed()) {
            Symbol sym = parse_symbol(symbol_spec);
            std::uint64_t M = rows ? rows : default_row_cap(sym, trunc);
            AssembleOptions opts;
            if (force) opts.guard_entries = UINT64_MAX;
            TruncatedOperator op = assemble(sym, trunc, M, opts);
            if (format == "csv") {
                std::ostringstream os;
                os << "# " << meta_block(seed, "assemble", elapsed_ms()).dump() << "\n"
                   << operator_to_csv(op);
                write_output(out_path, os.str());
            } else {
                json j = {{"meta", meta_block(seed, "assemble", elapsed_ms())},
                          {"data", operator_to_json(op)}};
                write_output(out_path, j.dump() + "\n");
            }
        } else if (c_approx->parsed()) {
            SingularSpectrum s;
            if (!discmap_spec.empty()) {
                DiscMap m = parse_discmap(discmap_spec);
                s = approx_numbers_h2(assemble_disc(m, trunc, rows ? int(rows) : -1));
            } else if (precision == "quad") {
                Symbol sym = parse_symbol(symbol_spec);
                s = dyadic_singular_values(sym, trunc, rows ? int(rows) : 64,
                                           Precision::quad_prec);
            } else {
                Symbol sym = parse_symbol(symbol_spec);
                std::uint64_t M = rows ? rows : default_row_cap(sym, trunc);
                s = approx_numbers_h2(assemble(sym, trunc, M));
            }
            json meta = meta_block(seed, "approx", elapsed_ms());
            if (format == "csv") {
                write_output(out_path, spectrum_csv(s.values, "exact", meta));
            } else {
                json j = {{"meta", meta}, {"data", to_json(s, "exact")}};
                write_output(out_path, j.dump(2) + "\n");
            }
        } else if (c_eig->parsed()) {
            Symbol sym = parse_symbol(symbol_spec);
            std::uint64_t M = rows ? rows : default_row_cap(sym, trunc);
            EigenSpectrum e = eigenvalues_extended(sym, trunc, M, refine);
            json meta = meta_block(seed, "eig", elapsed_ms());
            if (format == "csv") {
                std::ostringstream os;
                os << "# " << meta.dump() << "\n";
                os << "n,re,im,modulus,prov\n";
                for (std::size_t i = 0; i < e.values.size(); ++i)
                    os << (i + 1) << "," << format_double(e.values[i].real()) << ","
                       << format_double(e.values[i].imag()) << ","
                       << format_double(std::abs(e.values[i])) << ",exact\n";
                write_output(out_path, os.str());
            } else {
                json j = {{"meta", meta}, {"data", to_json(e, "exact")}};
                write_output(out_path, j.dump(2) + "\n");
            }
        } else if (c_fit->parsed()) {
            std::vector<double> v = read_spectrum_csv(in_path);
            if (fit_hi == 0) fit_hi = int(v.size());
            DecayFitReport rep = fit_decay(v, fit_lo, fit_hi);
            json j = {{"meta", meta_block(seed, "fit", elapsed_ms())}, {"data", to_json(rep)}};
            write_output(out_path, j.dump(2) + "\n");
        } else if (c_gram->parsed() || c_carleson->parsed() || c_interp->parsed()) {
            std::ifstream in(points_path);
            if (!in) throw std::invalid_argument("points file not found: " + points_path);
            json pj;
            in >> pj;
            PointSequence S = points_from_json(pj, domain_of(kernel));
            GramSystem g = gram(S);
            json data = {{"lambda_min", g.lambda_min},
                         {"lambda_max", g.lambda_max},
                         {"carleson_h2", {{"value", g.lambda_max}, {"prov", "exact"}}},
                         {"conditioning_warning", g.conditioning_warning}};
            if (g.lambda_min > 1e-13 * g.lambda_max)
                data["interp_h2"] = {{"value", 1.0 / std::sqrt(g.lambda_min)}, {"prov", "exact"}};
            json j = {{"meta", meta_block(seed, "gram", elapsed_ms())}, {"data", data}};
            write_output(out_path, j.dump(2) + "\n");
        } else if (c_square->parsed()) {
            std::ifstream in(points_path);
            if (!in) throw std::invalid_argument("points file not found: " + points_path);
            json pj;
            in >> pj;
            PointSequence S = points_from_json(pj, KernelDomain::zeta_halfplane);
            std::ifstream tin(targets_path);
            if (!tin) throw std::invalid_argument("targets file not found: " + targets_path);
            json tj;
            tin >> tj;
            std::vector<Complex> targets;
            for (const auto& t : tj)
                targets.emplace_back(t.at(0).get<double>(), t.at(1).get<double>());
            McOptions mc;
            mc.samples = samples;
            mc.seed = seed;
            mc.workers = thread_count();
            H1SquaringResult r = h1_interp_by_squaring(S, targets, cap, mc);
            json j = {{"meta", meta_block(seed, "squaretrick", elapsed_ms())},
                      {"data",
                       {{"h1_norm", {{"value", r.h1_norm_mc}, {"prov", "mc"}, {"sigma", r.h1_se}}},
                        {"h1_exact_l2sq", {{"value", r.h1_exact}, {"prov", "exact"}}},
                        {"bound", {{"value", r.bound}, {"prov", "exact"}}},
                        {"max_node_residual", r.max_node_residual},
                        {"g_terms", r.g.size()}}}};
            write_output(out_path, j.dump(2) + "\n");
        } else if (c_lp->parsed()) {
            DirichletPolynomial f = load_polynomial(poly_path);
            LpSpec spec;
            spec.p = p;
            spec.samples = samples;
            spec.seed = seed;
            spec.workers = thread_count();
            LpResult r = lp_functional(f, spec);
            json j = {{"meta", meta_block(seed, "lp", elapsed_ms())},
                      {"data",
                       {{"value", {{"value", r.value}, {"prov", "mc"}, {"sigma", r.std_error}}},
                        {"tail_bound", r.tail_bound},
                        {"sigma_max", r.sigma_max_used}}}};
            write_output(out_path, j.dump(2) + "\n");
        } else if (c_transfer->parsed()) {
            DiscMap m = parse_discmap(discmap_spec);
            TransferMap T = TransferMap::T0();
            if (transfer_spec != "t0") {
                auto colon = transfer_spec.find(':');
                if (transfer_spec.substr(0, colon) != "teps")
                    throw std::invalid_argument("transfer map must be t0 or teps:eps");
                T = TransferMap::Teps(std::stod(transfer_spec.substr(colon + 1)));
            }
            TransferResult r = transfer_symbol(m, T, K);
            json j = {{"meta", meta_block(seed, "transfer", elapsed_ms())},
                      {"data",
                       {{"symbol", to_json(r.symbol)},
                        {"tail_bound", r.tail_bound},
                        {"tail_radius", r.tail_radius},
                        {"prov", "exact"}}}};
            write_output(out_path, j.dump(2) + "\n");
        } else if (c_nev->parsed()) {
            Symbol sym = parse_symbol(symbol_spec);
            NevanlinnaResult r = nevanlinna_counting(sym, Complex(s_re, s_im));
            json j = {{"meta", meta_block(seed, "nevanlinna", elapsed_ms())},
                      {"data",
                       {{"value", {{"value", r.value}, {"prov", "exact"}}},
                        {"in_image", r.in_image}}}};
            write_output(out_path, j.dump(2) + "\n");
        } else if (c_compact->parsed()) {
            Symbol sym = parse_symbol(symbol_spec);
            CompactnessReport r = compactness_criterion(sym);
            json j = {{"meta", meta_block(seed, "compactness", elapsed_ms())},
                      {"data",
                       {{"im_bound", {{"value", r.im_bound}, {"prov", "exact"}}},
                        {"sigmas", r.sigmas},
                        {"ratio_trace", r.ratio_trace},
                        {"satisfied_heuristic", r.satisfied}}}};
            write_output(out_path, j.dump(2) + "\n");
        } else if (c_lower->parsed()) {
            std::ifstream in(inputs_path);
            if (!in) throw std::invalid_argument("inputs file not found: " + inputs_path);
            json ij;
            in >> ij;
            LowerBoundInputs li;
            li.p = ij.value("p", 2.0);
            li.interpolation = {ij.at("interpolation").at("value").get<double>(),
                                ij.at("interpolation").value("prov", "computed")};
            li.carleson = {ij.at("carleson").at("value").get<double>(),
                           ij.at("carleson").value("prov", "computed")};
            if (ij.contains("constant"))
                li.constant = {ij.at("constant").at("value").get<double>(),
                               ij.at("constant").value("prov", "default-constant")};
            auto read_pts = [](const json& arr) {
                std::vector<Complex> v;
                for (const auto& e : arr) v.emplace_back(e.at(0).get<double>(), e.at(1).get<double>());
                return v;
            };
            LowerBoundVariant var;
            if (variant == "6.1") var = LowerBoundVariant::thm61;
            else if (variant == "6.2") var = LowerBoundVariant::thm62;
            else if (variant == "9.2") var = LowerBoundVariant::thm92;
            else throw std::invalid_argument("variant must be 6.1, 6.2 or 9.2");
            if (var == LowerBoundVariant::thm92) {
                li.Z = read_pts(ij.at("Z"));
                li.omegaZ = read_pts(ij.at("omegaZ"));
            } else {
                li.S = read_pts(ij.at("S"));
                li.S_pre = read_pts(ij.at("S_pre"));
            }
            Symbol sym;
            bool has_sym = ij.contains("symbol");
            if (has_sym) {
                sym = symbol_from_json(ij.at("symbol"));
                li.symbol = &sym;
            }
            LowerBoundResult r = lower_bound_general(var, li);
            json j = {{"meta", meta_block(seed, "lowerbound", elapsed_ms())},
                      {"data",
                       {{"value", {{"value", r.value}, {"prov", "surrogate-dependent"}}},
                        {"inf_ratio", r.inf_ratio},
                        {"n_factor", r.n_factor},
                        {"provenance", r.provenance}}}};
            write_output(out_path, j.dump(2) + "\n");
        } else if (c_saksman->parsed()) {
            json data;
            KernelL1 k = saksman_kernel_l1(std::uint64_t(trunc));
            data["kernel_l1"] = {{"value", k.value}, {"prov", "exact"}, {"sigma", k.error}};
            if (!poly_path.empty()) {
                DirichletPolynomial f = load_polynomial(poly_path);
                SaksmanResult r = saksman_multiplier(f, std::uint64_t(trunc));
                data["poly"] = to_json(r.poly);
            }
            json j = {{"meta", meta_block(seed, "saksman", elapsed_ms())}, {"data", data}};
            write_output(out_path, j.dump(2) + "\n");
        } else if (c_partial->parsed()) {
            DirichletPolynomial f = load_polynomial(poly_path);
            json j = {{"meta", meta_block(seed, "partialsum", elapsed_ms())},
                      {"data", {{"poly", to_json(partial_sum(f, std::uint64_t(trunc)))},
                                {"prov", "exact"}}}};
            write_output(out_path, j.dump(2) + "\n");
        } else if (c_verify->parsed()) {
            VerifyReport rep = run_acceptance(suite, budget, std::cout, thread_count());
            if (rep.budget_exceeded) return 4;
            return rep.all_pass ? 0 : 1;
        }
    } catch (const ResourceLimitError& e) {
        std::cerr << "resource guard: " << e.what() << "\n";
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
