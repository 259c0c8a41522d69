// sumsplit: decompose a sampled function of two variables as g(x) + h(y).
//
// Exit codes: 0 success, 1 domain negative result (array found, no usable
// level), 2 input error, 3 refinement did not converge.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sumsplit/sumsplit.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDomain = 1;
constexpr int kExitInput = 2;
constexpr int kExitNoConvergence = 3;

struct DeltaFlags {
    std::optional<double> delta;
    std::optional<double> lipschitz;
    bool auto_delta = false;
};

void add_delta_flags(CLI::App* cmd, DeltaFlags& flags) {
    cmd->add_option("--delta", flags.delta, "modulus-of-continuity radius");
    cmd->add_option("--lipschitz", flags.lipschitz,
                    "Lipschitz constant; delta becomes epsilon / L");
    cmd->add_flag("--auto-delta", flags.auto_delta,
                  "estimate delta from the sample (largest radius whose pairs stay "
                  "within epsilon)");
}

double resolve_delta(const DeltaFlags& flags, const sumsplit::SampledCompactum& sample,
                     double epsilon) {
    if (flags.delta) return *flags.delta;
    if (flags.lipschitz) return sumsplit::delta_from_lipschitz(*flags.lipschitz, epsilon);
    return sumsplit::estimate_delta(sample, epsilon);
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw sumsplit::ParseError("cannot open output file: " + path);
    out << content;
}

void print_level_obstruction(const sumsplit::LevelNotFound& e,
                             const sumsplit::SampledCompactum& sample, double delta) {
    std::cerr << "error: " << e.what() << "\n";
    const auto V = sumsplit::build_representatives(sample, e.best_gap_level);
    if (const auto path = sumsplit::shortest_bridging_almost_array(V, delta)) {
        std::cerr << "bridge obstruction at n=" << e.best_gap_level.n << " (length "
                  << path->length() << " < required " << e.required_gap << "):\n";
        for (const auto& p : path->points)
            std::cerr << "  (" << sumsplit::format_double(p.x) << ", "
                      << sumsplit::format_double(p.y) << ")\n";
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"constructive decomposition of f(x,y) as g(x)+h(y) on array-free plane samples"};
    app.require_subcommand(1);

    // check-arrays
    auto* check = app.add_subcommand("check-arrays", "search the sample for an axis-aligned array");
    std::string check_input;
    std::size_t max_len = 2;
    double tol = 0.0;
    check->add_option("input", check_input, "sample CSV file")->required();
    check->add_option("--max-len", max_len, "array length to search for (default 2)");
    check->add_option("--tol", tol, "coordinate equality tolerance (default 0)");

    // decompose
    auto* dec = app.add_subcommand("decompose", "single approximation pass with certified bounds");
    std::string dec_input, dec_out;
    double epsilon = 0.0;
    DeltaFlags dec_delta;
    std::optional<int> dec_level;
    bool auto_level = false;
    int n_max = 32;
    dec->add_option("input", dec_input, "sample CSV file")->required();
    dec->add_option("--epsilon", epsilon, "approximation constant")->required();
    add_delta_flags(dec, dec_delta);
    dec->add_option("--level", dec_level, "fixed grid level n");
    dec->add_flag("--auto-level", auto_level, "search for the smallest usable level");
    dec->add_option("--n-max", n_max, "level search cap (default 32)");
    dec->add_option("--out", dec_out, "write the decomposition file here");

    // refine
    auto* ref = app.add_subcommand("refine", "iterate passes until the residual is below tol");
    std::string ref_input, ref_out;
    double ref_tol = 1e-3;
    int max_iter = 64;
    int ref_n_max = 32;
    ref->add_option("input", ref_input, "sample CSV file")->required();
    ref->add_option("--tol", ref_tol, "target sup residual")->required();
    ref->add_option("--max-iter", max_iter, "iteration cap (default 64)");
    ref->add_option("--n-max", ref_n_max, "per-pass level search cap (default 32)");
    ref->add_option("--out", ref_out, "write the decomposition file here");

    // eval
    auto* ev = app.add_subcommand("eval", "evaluate a stored decomposition at a point");
    std::string ev_file;
    double ev_x = 0.0, ev_y = 0.0;
    ev->add_option("decomposition", ev_file, "decomposition file")->required();
    ev->add_option("x", ev_x, "x coordinate")->required();
    ev->add_option("y", ev_y, "y coordinate")->required();

    // plotdata
    auto* plot = app.add_subcommand("plotdata", "emit columnar plot data for g, h and residuals");
    std::string plot_file, plot_input, plot_out;
    plot->add_option("decomposition", plot_file, "decomposition file")->required();
    plot->add_option("input", plot_input, "sample CSV file")->required();
    plot->add_option("--out", plot_out, "write the columns here instead of stdout");

    // gen
    auto* gen = app.add_subcommand("gen", "generate a test sample in the CSV format");
    std::string gen_kind, gen_out, gen_function = "zero";
    std::size_t gen_count = 200;
    std::uint64_t gen_seed = 1;
    std::vector<double> gen_params;
    gen->add_option("kind", gen_kind, "monotone_curve | disjoint_cross_free | with_array")
        ->required();
    gen->add_option("--count", gen_count, "point count (monotone_curve)");
    gen->add_option("--seed", gen_seed, "generator seed");
    gen->add_option("--function", gen_function, "zero | constant | coordinate_sum | sin_poly");
    gen->add_option("--params", gen_params, "function parameters");
    gen->add_option("--out", gen_out, "write the sample here instead of stdout");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*check) {
            const auto sample = sumsplit::read_sample_csv_file(check_input);
            const auto cert = sumsplit::find_array(sample.points, max_len, tol);
            if (!cert) {
                std::cout << "none\n";
                return kExitOk;
            }
            std::cout << sumsplit::certificate_to_json(*cert).dump(2) << "\n";
            return kExitDomain;
        }

        if (*dec) {
            const int delta_sources = (dec_delta.delta ? 1 : 0) + (dec_delta.lipschitz ? 1 : 0) +
                                      (dec_delta.auto_delta ? 1 : 0);
            if (delta_sources != 1) {
                std::cerr << "error: decompose needs exactly one of --delta, --lipschitz, "
                             "--auto-delta\n";
                return kExitInput;
            }
            if ((dec_level ? 1 : 0) + (auto_level ? 1 : 0) != 1) {
                std::cerr << "error: decompose needs exactly one of --level, --auto-level\n";
                return kExitInput;
            }
            const auto sample = sumsplit::read_sample_csv_file(dec_input);
            sample.validate();
            sumsplit::DecomposeOptions opts;
            opts.epsilon = epsilon;
            opts.n_max = sumsplit::Level{n_max};
            const double delta = resolve_delta(dec_delta, sample, epsilon);
            opts.delta = delta;
            if (dec_level) opts.level = sumsplit::Level{*dec_level};
            try {
                const auto d = sumsplit::approximate_decompose(sample, opts);
                if (!dec_out.empty()) sumsplit::write_decomposition_file(dec_out, d);
                sumsplit::print_report(std::cout, sumsplit::residual_report(sample, d));
                return kExitOk;
            } catch (const sumsplit::LevelNotFound& e) {
                print_level_obstruction(e, sample, delta);
                return kExitDomain;
            }
        }

        if (*ref) {
            const auto sample = sumsplit::read_sample_csv_file(ref_input);
            sample.validate();
            auto finish = [&](const sumsplit::Decomposition& d) {
                if (!ref_out.empty()) sumsplit::write_decomposition_file(ref_out, d);
                std::cout << "iterations " << d.meta.iterations << "\n";
                for (std::size_t i = 0; i < d.residual_history.size(); ++i)
                    std::cout << "residual[" << i + 1
                              << "] " << sumsplit::format_double(d.residual_history[i]) << "\n";
                sumsplit::print_report(std::cout, sumsplit::residual_report(sample, d));
            };
            try {
                const auto d = sumsplit::refine(sample, ref_tol, max_iter, sumsplit::Level{ref_n_max});
                finish(d);
                return kExitOk;
            } catch (const sumsplit::NoConvergence& e) {
                std::cerr << "error: " << e.what() << "\n";
                finish(e.achieved);
                return kExitNoConvergence;
            } catch (const sumsplit::LevelNotFound& e) {
                std::cerr << "error: " << e.what() << "\n";
                return kExitDomain;
            }
        }

        if (*ev) {
            const auto d = sumsplit::read_decomposition_file(ev_file);
            const double gx = d.g.eval(ev_x);
            const double hy = d.h.eval(ev_y);
            std::cout << "g(x) " << sumsplit::format_double(gx) << "\n";
            std::cout << "h(y) " << sumsplit::format_double(hy) << "\n";
            std::cout << "g(x)+h(y) " << sumsplit::format_double(gx + hy) << "\n";
            return kExitOk;
        }

        if (*plot) {
            const auto d = sumsplit::read_decomposition_file(plot_file);
            const auto sample = sumsplit::read_sample_csv_file(plot_input);
            if (plot_out.empty()) {
                sumsplit::write_plotdata(std::cout, sample, d);
            } else {
                std::ostringstream buf;
                sumsplit::write_plotdata(buf, sample, d);
                write_text_file(plot_out, buf.str());
            }
            return kExitOk;
        }

        if (*gen) {
            sumsplit::GeneratorSpec spec;
            spec.count = gen_count;
            spec.seed = gen_seed;
            if (gen_kind == "monotone_curve")
                spec.kind = sumsplit::GeneratorKind::MonotoneCurve;
            else if (gen_kind == "disjoint_cross_free")
                spec.kind = sumsplit::GeneratorKind::DisjointCrossFree;
            else if (gen_kind == "with_array")
                spec.kind = sumsplit::GeneratorKind::WithArray;
            else
                throw sumsplit::ParseError("unknown generator kind: " + gen_kind);
            auto sample =
                sumsplit::attach_function(sumsplit::generate(spec), gen_function, gen_params);
            if (gen_out.empty()) {
                sumsplit::write_sample_csv(std::cout, sample);
            } else {
                std::ostringstream buf;
                sumsplit::write_sample_csv(buf, sample);
                write_text_file(gen_out, buf.str());
            }
            return kExitOk;
        }
    } catch (const sumsplit::NoConvergence& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNoConvergence;
    } catch (const sumsplit::LevelNotFound& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDomain;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitInput;
}
